#ifndef SCFA_PARTITION_HPP
#define SCFA_PARTITION_HPP

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace scfa {

// Community sizes (p_1, ..., p_K). Every p_k must exceed 1; singleton
// communities are rejected at construction.
class PartitionVector {
 public:
  explicit PartitionVector(std::vector<int> sizes);

  int num_blocks() const noexcept { return static_cast<int>(sizes_.size()); }
  int total() const noexcept { return offsets_.back(); }
  int size(int k) const { return sizes_[static_cast<std::size_t>(k)]; }
  // offset(k) is the first variable index of community k; offset(K) == p.
  int offset(int k) const { return offsets_[static_cast<std::size_t>(k)]; }

  std::span<const int> sizes() const noexcept { return sizes_; }
  std::span<const int> offsets() const noexcept { return offsets_; }

  // Diagonal of P = diag(p_1, ..., p_K) as doubles.
  Eigen::VectorXd size_vector() const;
  // Block index of every variable, length p.
  std::vector<int> labels() const;

  // Throws CommunityTooSmall when some p_k <= 2 (needed for estimation).
  void require_estimable() const;

  bool operator==(const PartitionVector& other) const = default;

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
};

}  // namespace scfa

#endif  // SCFA_PARTITION_HPP
