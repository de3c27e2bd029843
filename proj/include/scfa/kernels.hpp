#ifndef SCFA_KERNELS_HPP
#define SCFA_KERNELS_HPP

// Data-parallel kernels behind estimation and scoring. Each kernel has an
// OpenMP version in scfa:: and a plain reference in scfa::serial. The parallel
// versions split work so that every output element is produced by the same
// sequence of floating-point operations regardless of thread count.

#include "scfa/ub_matrix.hpp"

#include <Eigen/Dense>

#include <span>

namespace scfa {

// R(i, k) = Σ_{j : label[j] == k} weight[k] · X(i, j). Empty weights mean 1.
Eigen::MatrixXd community_row_sums(const Eigen::MatrixXd& x,
                                   std::span<const int> labels, int blocks,
                                   std::span<const double> weights = {});

// Σ_i X(i, j)^2 for every column j.
Eigen::VectorXd column_sum_squares(const Eigen::MatrixXd& x);

// X with column means removed.
Eigen::MatrixXd center_columns(const Eigen::MatrixXd& x);

// Block traces/sums of S = X^T X / divisor without forming S: O(np + nK²).
BlockSummaries data_block_summaries(const Eigen::MatrixXd& x,
                                    std::span<const int> labels, int blocks,
                                    double divisor);

// Dense S = X^T X / divisor; S(i, j) accumulated over rows in order.
Eigen::MatrixXd cross_product(const Eigen::MatrixXd& x, double divisor);

namespace serial {

Eigen::MatrixXd community_row_sums(const Eigen::MatrixXd& x,
                                   std::span<const int> labels, int blocks,
                                   std::span<const double> weights = {});
Eigen::MatrixXd cross_product(const Eigen::MatrixXd& x, double divisor);
// Forms S densely, then sums its blocks.
BlockSummaries data_block_summaries(const Eigen::MatrixXd& x,
                                    std::span<const int> labels, int blocks,
                                    double divisor);

}  // namespace serial
}  // namespace scfa

#endif  // SCFA_KERNELS_HPP
