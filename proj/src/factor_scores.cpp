#include "scfa/factor_scores.hpp"

#include "scfa/errors.hpp"
#include "scfa/kernels.hpp"

#include <string>

namespace scfa {

namespace {

constexpr double kEquivalenceTol = 1e-12;

void check_dims(const DataMatrix& data, const Membership& membership) {
  if (membership.num_variables() != data.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "membership covers " + std::to_string(membership.num_variables()) +
                    " variables but data has " + std::to_string(data.cols()));
  }
}

}  // namespace

FactorScoreMatrix score_ols(const DataMatrix& data, const Membership& membership) {
  check_dims(data, membership);
  const int k = membership.num_communities();
  Eigen::MatrixXd sums = community_row_sums(data.values(), membership.labels(), k);
  const Eigen::VectorXd inv_sizes = membership.partition().size_vector().cwiseInverse();
  return {sums * inv_sizes.asDiagonal(), membership.partition(), {}};
}

FactorScoreMatrix score_gls(const DataMatrix& data, const Membership& membership,
                            const Eigen::VectorXd& sigma_u) {
  check_dims(data, membership);
  const int k = membership.num_communities();
  if (sigma_u.size() != k) {
    throw Error(ErrorKind::DimensionMismatch,
                "error variances are per community (length K = " + std::to_string(k) +
                    ")");
  }
  if (!(sigma_u.array() > 0.0).all()) {
    throw Error(ErrorKind::NonPositiveVariance, "error variances must be positive");
  }

  // Lᵀ Σ_u^{-1} X_i, then solve with Lᵀ Σ_u^{-1} L = diag(p_k / σ_k).
  const Eigen::VectorXd precision = sigma_u.cwiseInverse();
  const Eigen::MatrixXd weighted = community_row_sums(
      data.values(), membership.labels(), k,
      std::span<const double>(precision.data(), static_cast<std::size_t>(k)));
  const Eigen::VectorXd normal =
      membership.partition().size_vector().cwiseProduct(precision);
  FactorScoreMatrix out{weighted * normal.cwiseInverse().asDiagonal(),
                        membership.partition(), {}};

#ifndef NDEBUG
  const FactorScoreMatrix ols = score_ols(data, membership);
  const double scale = std::max(1.0, ols.scores.cwiseAbs().maxCoeff());
  if ((out.scores - ols.scores).cwiseAbs().maxCoeff() > kEquivalenceTol * scale) {
    throw Error(ErrorKind::InternalConsistency, "GLS scores differ from OLS scores");
  }
#endif
  return out;
}

FactorScoreMatrix score_fgls(const DataMatrix& data, const Membership& membership,
                             const ScfaFit& fit) {
  FactorScoreMatrix out = score_gls(data, membership, fit.a_hat);
  out.score_covariance = score_covariance(fit.a_hat, fit.b_hat, fit.partition);
  return out;
}

Eigen::MatrixXd score_covariance(const Eigen::VectorXd& a, const Eigen::MatrixXd& b,
                                 const PartitionVector& partition) {
  const int k = partition.num_blocks();
  if (a.size() != k || b.rows() != k || b.cols() != k) {
    throw Error(ErrorKind::DimensionMismatch, "coordinates do not match partition");
  }
  Eigen::MatrixXd out = b;
  out.diagonal() += a.cwiseQuotient(partition.size_vector());
  return out;
}

}  // namespace scfa
