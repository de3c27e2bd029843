#include "scfa/membership.hpp"

#include "scfa/errors.hpp"

#include <map>

namespace scfa {

namespace {

template <typename Label>
std::vector<int> compact(const std::vector<Label>& raw,
                         std::vector<Label>& first_seen) {
  std::map<Label, int> index;
  std::vector<int> out;
  out.reserve(raw.size());
  for (const Label& l : raw) {
    auto [it, inserted] = index.emplace(l, static_cast<int>(first_seen.size()));
    if (inserted) first_seen.push_back(l);
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

Membership::Membership(std::vector<int> labels) {
  std::vector<int> seen;
  labels_ = compact(labels, seen);
  for (int l : seen) community_names_.push_back(std::to_string(l));
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    names_.push_back("v" + std::to_string(j + 1));
  }
  build();
}

Membership::Membership(std::vector<std::string> variable_names,
                       const std::vector<std::string>& community_labels)
    : names_(std::move(variable_names)) {
  if (names_.size() != community_labels.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "one community label per variable");
  }
  labels_ = compact(community_labels, community_names_);
  build();
}

Membership Membership::contiguous(const PartitionVector& partition) {
  return Membership(partition.labels());
}

void Membership::build() {
  if (labels_.empty()) {
    throw Error(ErrorKind::InvalidPartition, "membership is empty");
  }
  const int k = static_cast<int>(community_names_.size());
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int l : labels_) ++sizes[static_cast<std::size_t>(l)];
  for (int c = 0; c < k; ++c) {
    if (sizes[static_cast<std::size_t>(c)] <= 2) {
      throw Error(ErrorKind::CommunityTooSmall,
                  "community '" + community_names_[static_cast<std::size_t>(c)] +
                      "' has " + std::to_string(sizes[static_cast<std::size_t>(c)]) +
                      " variables; at least 3 are required");
    }
  }
  partition_ = PartitionVector(sizes);

  std::vector<int> cursor(partition_.offsets().begin(),
                          partition_.offsets().end() - 1);
  order_.assign(labels_.size(), 0);
  position_.assign(labels_.size(), 0);
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    const int pos = cursor[static_cast<std::size_t>(labels_[j])]++;
    order_[static_cast<std::size_t>(pos)] = static_cast<int>(j);
    position_[j] = pos;
  }
}

Eigen::MatrixXd Membership::reorder_columns(const Eigen::MatrixXd& x) const {
  if (x.cols() != num_variables()) {
    throw Error(ErrorKind::DimensionMismatch, "column count mismatch");
  }
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (std::size_t r = 0; r < order_.size(); ++r) {
    out.col(static_cast<Eigen::Index>(r)) = x.col(order_[r]);
  }
  return out;
}

Eigen::MatrixXd Membership::restore_columns(const Eigen::MatrixXd& x) const {
  if (x.cols() != num_variables()) {
    throw Error(ErrorKind::DimensionMismatch, "column count mismatch");
  }
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (std::size_t r = 0; r < order_.size(); ++r) {
    out.col(order_[r]) = x.col(static_cast<Eigen::Index>(r));
  }
  return out;
}

}  // namespace scfa
