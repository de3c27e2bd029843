#ifndef SCFA_MEMBERSHIP_HPP
#define SCFA_MEMBERSHIP_HPP

#include "scfa/partition.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace scfa {

// Community membership of p variables. Labels are compacted to 0..K-1 in
// order of first appearance. Every community needs at least 3 variables.
//
// order()[r] is the input index of the variable placed at position r once the
// variables are listed contiguously by community (stable within a community);
// position_of()[j] inverts it.
class Membership {
 public:
  explicit Membership(std::vector<int> labels);
  Membership(std::vector<std::string> variable_names,
             const std::vector<std::string>& community_labels);

  // Contiguous membership for an already-ordered partition.
  static Membership contiguous(const PartitionVector& partition);

  int num_variables() const noexcept { return static_cast<int>(labels_.size()); }
  int num_communities() const noexcept { return partition_.num_blocks(); }
  std::span<const int> labels() const noexcept { return labels_; }
  const PartitionVector& partition() const noexcept { return partition_; }
  const std::vector<std::string>& variable_names() const noexcept { return names_; }
  const std::vector<std::string>& community_names() const noexcept {
    return community_names_;
  }
  std::span<const int> order() const noexcept { return order_; }
  std::span<const int> position_of() const noexcept { return position_; }

  // Columns rearranged so communities are contiguous, and back.
  Eigen::MatrixXd reorder_columns(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd restore_columns(const Eigen::MatrixXd& x) const;

 private:
  void build();

  std::vector<int> labels_;
  std::vector<std::string> names_;
  std::vector<std::string> community_names_;
  PartitionVector partition_{{2}};
  std::vector<int> order_;
  std::vector<int> position_;
};

}  // namespace scfa

#endif  // SCFA_MEMBERSHIP_HPP
