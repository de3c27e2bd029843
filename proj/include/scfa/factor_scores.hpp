#ifndef SCFA_FACTOR_SCORES_HPP
#define SCFA_FACTOR_SCORES_HPP

#include "scfa/estimation.hpp"

#include <Eigen/Dense>

namespace scfa {

// n×K least-squares factor scores and their exact K×K covariance.
struct FactorScoreMatrix {
  Eigen::MatrixXd scores;
  PartitionVector partition;
  // Empty until filled from a fit via score_covariance().
  Eigen::MatrixXd score_covariance;
};

// f̂_i = (LᵀL)^{-1} Lᵀ X_i with L = Bdiag(1_{p_k}): community means of row i.
FactorScoreMatrix score_ols(const DataMatrix& data, const Membership& membership);

// f̂_i = (Lᵀ Σ_u^{-1} L)^{-1} Lᵀ Σ_u^{-1} X_i for Σ_u = Bdiag(σ_k I_{p_k}).
// Debug builds check the result against score_ols to 1e-12.
FactorScoreMatrix score_gls(const DataMatrix& data, const Membership& membership,
                            const Eigen::VectorXd& sigma_u);

// GLS with Σ_u replaced by the fitted Bdiag(â_k I).
FactorScoreMatrix score_fgls(const DataMatrix& data, const Membership& membership,
                             const ScfaFit& fit);

// diag(a_k / p_k) + B.
Eigen::MatrixXd score_covariance(const Eigen::VectorXd& a, const Eigen::MatrixXd& b,
                                 const PartitionVector& partition);

}  // namespace scfa

#endif  // SCFA_FACTOR_SCORES_HPP
