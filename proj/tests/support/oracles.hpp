#ifndef SCFA_TEST_ORACLES_HPP
#define SCFA_TEST_ORACLES_HPP

#include "scfa/partition.hpp"
#include "scfa/ub_matrix.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace scfa::oracle {

// Dense reference computations used to check the K×K shortcuts.
Eigen::MatrixXd dense_ub(const Eigen::VectorXd& a, const Eigen::MatrixXd& b,
                         const PartitionVector& partition);
Eigen::VectorXd dense_eigenvalues(const Eigen::MatrixXd& m);
double dense_log_abs_det(const Eigen::MatrixXd& m);
double dense_cholesky_log_det(const Eigen::MatrixXd& m);
Eigen::MatrixXd dense_inverse(const Eigen::MatrixXd& m);

// Brute-force block average estimators straight from the definition of S.
Eigen::VectorXd brute_a_hat(const Eigen::MatrixXd& s, const PartitionVector& partition);
Eigen::MatrixXd brute_b_hat(const Eigen::MatrixXd& s, const PartitionVector& partition);

// Dense Gaussian log-likelihood -(n/2)(log det Σ + tr(S Σ^{-1})).
double dense_log_likelihood(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& s, int n);

// Loading matrix Bdiag(τ_k 1_{p_k}) and the dense L Σ_f Lᵀ + Σ_u.
Eigen::MatrixXd dense_loadings(const Eigen::VectorXd& tau, const PartitionVector& partition);
Eigen::MatrixXd dense_factor_covariance(const Eigen::MatrixXd& loadings,
                                        const Eigen::MatrixXd& sigma_f,
                                        const Eigen::VectorXd& sigma_u_diagonal);

// Dense GLS scores (LᵀWL)^{-1} LᵀW X_i with W = diag(w).
Eigen::MatrixXd dense_gls_scores(const Eigen::MatrixXd& x, const Eigen::MatrixXd& loadings,
                                 const Eigen::VectorXd& weights);

// Random instances.
PartitionVector random_partition(std::mt19937_64& rng, int max_blocks, int max_total,
                                 int min_size = 2);
Eigen::MatrixXd random_spd(std::mt19937_64& rng, int k, double ridge = 0.5);
Eigen::VectorXd random_positive(std::mt19937_64& rng, int k, double lo = 0.2, double hi = 2.0);
// Random UB matrix that is positive definite.
UniformBlockMatrix random_pd_ub(std::mt19937_64& rng, const PartitionVector& partition);
// Random symmetric UB matrix with a of either sign, kept away from singular.
UniformBlockMatrix random_symmetric_ub(std::mt19937_64& rng, const PartitionVector& partition);

}  // namespace scfa::oracle

#endif  // SCFA_TEST_ORACLES_HPP
