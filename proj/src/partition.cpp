#include "scfa/partition.hpp"

#include "scfa/errors.hpp"

#include <string>

namespace scfa {

PartitionVector::PartitionVector(std::vector<int> sizes)
    : sizes_(std::move(sizes)) {
  if (sizes_.empty()) {
    throw Error(ErrorKind::InvalidPartition, "partition has no communities");
  }
  offsets_.reserve(sizes_.size() + 1);
  offsets_.push_back(0);
  for (std::size_t k = 0; k < sizes_.size(); ++k) {
    if (sizes_[k] < 2) {
      throw Error(ErrorKind::InvalidPartition,
                  "community " + std::to_string(k + 1) + " has size " +
                      std::to_string(sizes_[k]) + "; sizes must exceed 1");
    }
    offsets_.push_back(offsets_.back() + sizes_[k]);
  }
}

Eigen::VectorXd PartitionVector::size_vector() const {
  Eigen::VectorXd out(num_blocks());
  for (int k = 0; k < num_blocks(); ++k) out(k) = size(k);
  return out;
}

std::vector<int> PartitionVector::labels() const {
  std::vector<int> out(static_cast<std::size_t>(total()));
  for (int k = 0; k < num_blocks(); ++k) {
    for (int j = offset(k); j < offset(k + 1); ++j) {
      out[static_cast<std::size_t>(j)] = k;
    }
  }
  return out;
}

void PartitionVector::require_estimable() const {
  for (int k = 0; k < num_blocks(); ++k) {
    if (size(k) <= 2) {
      throw Error(ErrorKind::CommunityTooSmall,
                  "community " + std::to_string(k + 1) + " has " +
                      std::to_string(size(k)) +
                      " variables; estimation needs more than 2");
    }
  }
}

}  // namespace scfa
