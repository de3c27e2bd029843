#ifndef SCFA_ESTIMATION_HPP
#define SCFA_ESTIMATION_HPP

#include "scfa/membership.hpp"
#include "scfa/ub_matrix.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace scfa {

// n×p observations, rows are X_i. At least 2 rows and 2 columns, all finite.
class DataMatrix {
 public:
  explicit DataMatrix(Eigen::MatrixXd values,
                      std::vector<std::string> names = {});

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  int rows() const noexcept { return static_cast<int>(values_.rows()); }
  int cols() const noexcept { return static_cast<int>(values_.cols()); }

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> names_;
};

struct FitDiagnostics {
  std::vector<bool> a_positive;
  bool b_positive_definite = true;
  bool repaired = false;
  std::vector<std::string> warnings;
};

// Closed-form estimates â_kk and b̂_kk' plus the derived factor-model views. The loading
// scales τ only affect loadings() and sigma_f(); the implied covariance does
// not depend on them.
struct ScfaFit {
  Eigen::VectorXd a_hat;
  Eigen::MatrixXd b_hat;
  Eigen::VectorXd tau;
  PartitionVector partition;
  int n = 0;
  bool centered = false;
  double log_likelihood = 0.0;
  FitDiagnostics diagnostics;

  // p×K block-diagonal Bdiag(τ_k 1_{p_k}).
  Eigen::MatrixXd loadings() const;
  // (b̂_kk' / (τ_k τ_k')).
  Eigen::MatrixXd sigma_f() const;
  // Length-p diagonal of Σ̂_u; a_k repeated p_k times.
  Eigen::VectorXd sigma_u_diagonal() const;
};

struct EstimateOptions {
  bool center = false;
  std::optional<Eigen::VectorXd> tau;
  // Clip B̂ eigenvalues and â at 1e-8 when they come out non-positive.
  bool repair = false;
};

Eigen::MatrixXd sample_covariance(const DataMatrix& data, bool center = false);

// Data columns are in input order; membership supplies the community of each.
ScfaFit estimate(const DataMatrix& data, const Membership& membership,
                 const EstimateOptions& options = {});

// Same estimator from precomputed block summaries of S (contiguous partition).
ScfaFit estimate_from_summaries(const BlockSummaries& summaries,
                                const PartitionVector& partition, int n,
                                const EstimateOptions& options = {});

// -(n/2) log det Σ(a, b) - (n/2) tr(S Σ(a, b)^{-1}), evaluated on K×K
// coordinates only.
double log_likelihood(const Eigen::VectorXd& a, const Eigen::MatrixXd& b,
                      const BlockSummaries& summaries, int n,
                      const PartitionVector& partition);
double log_likelihood(const Eigen::VectorXd& a, const Eigen::MatrixXd& b,
                      const Eigen::MatrixXd& s, int n,
                      const PartitionVector& partition);

UniformBlockMatrix implied_covariance(const ScfaFit& fit);

}  // namespace scfa

#endif  // SCFA_ESTIMATION_HPP
