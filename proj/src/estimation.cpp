#include "scfa/estimation.hpp"

#include "scfa/errors.hpp"
#include "scfa/kernels.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace scfa {

namespace {

constexpr double kRepairFloor = 1e-8;

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

void diagnose(ScfaFit& fit) {
  const int k = fit.partition.num_blocks();
  fit.diagnostics.a_positive.assign(static_cast<std::size_t>(k), true);
  for (int c = 0; c < k; ++c) {
    if (!(fit.a_hat(c) > 0.0)) {
      fit.diagnostics.a_positive[static_cast<std::size_t>(c)] = false;
      fit.diagnostics.warnings.push_back("a_" + std::to_string(c + 1) + std::to_string(c + 1) +
                                         " estimate is not positive");
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(fit.b_hat);
  fit.diagnostics.b_positive_definite = llt.info() == Eigen::Success;
  if (!fit.diagnostics.b_positive_definite) {
    fit.diagnostics.warnings.emplace_back("B estimate is not positive definite");
  }
}

void repair(ScfaFit& fit) {
  bool changed = false;
  for (Eigen::Index c = 0; c < fit.a_hat.size(); ++c) {
    if (fit.a_hat(c) < kRepairFloor) {
      fit.a_hat(c) = kRepairFloor;
      changed = true;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fit.b_hat);
  if (eig.eigenvalues().minCoeff() < kRepairFloor) {
    const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(kRepairFloor);
    fit.b_hat = symmetrized(eig.eigenvectors() * clipped.asDiagonal() *
                            eig.eigenvectors().transpose());
    changed = true;
  }
  fit.diagnostics.repaired = changed;
}

}  // namespace

DataMatrix::DataMatrix(Eigen::MatrixXd values, std::vector<std::string> names)
    : values_(std::move(values)), names_(std::move(names)) {
  if (values_.rows() < 2) {
    throw Error(ErrorKind::DegenerateSample, "need at least 2 observations");
  }
  if (values_.cols() < 2) {
    throw Error(ErrorKind::DimensionMismatch, "need at least 2 variables");
  }
  if (!values_.allFinite()) {
    throw Error(ErrorKind::NonNumericCell, "data contains non-finite values");
  }
  if (names_.empty()) {
    for (Eigen::Index j = 0; j < values_.cols(); ++j) {
      names_.push_back("v" + std::to_string(j + 1));
    }
  } else if (static_cast<Eigen::Index>(names_.size()) != values_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "one name per column");
  }
}

Eigen::MatrixXd ScfaFit::loadings() const {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(partition.total(), partition.num_blocks());
  for (int k = 0; k < partition.num_blocks(); ++k) {
    l.block(partition.offset(k), k, partition.size(k), 1).setConstant(tau(k));
  }
  return l;
}

Eigen::MatrixXd ScfaFit::sigma_f() const {
  return b_hat.array() / (tau * tau.transpose()).array();
}

Eigen::VectorXd ScfaFit::sigma_u_diagonal() const {
  Eigen::VectorXd d(partition.total());
  for (int k = 0; k < partition.num_blocks(); ++k) {
    d.segment(partition.offset(k), partition.size(k)).setConstant(a_hat(k));
  }
  return d;
}

Eigen::MatrixXd sample_covariance(const DataMatrix& data, bool center) {
  const double n = data.rows();
  if (center) return cross_product(center_columns(data.values()), n - 1.0);
  return cross_product(data.values(), n);
}

ScfaFit estimate_from_summaries(const BlockSummaries& s,
                                const PartitionVector& partition, int n,
                                const EstimateOptions& options) {
  partition.require_estimable();
  const int k = partition.num_blocks();
  if (n <= k + k * (k + 1) / 2) {
    throw Error(ErrorKind::SampleTooSmall,
                "n = " + std::to_string(n) + " must exceed K + K(K+1)/2 = " +
                    std::to_string(k + k * (k + 1) / 2));
  }
  if (s.trace.size() != k || s.sum.rows() != k || s.sum.cols() != k) {
    throw Error(ErrorKind::DimensionMismatch, "summaries do not match partition");
  }

  ScfaFit fit{Eigen::VectorXd(k), Eigen::MatrixXd(k, k), Eigen::VectorXd::Ones(k),
              partition, n, options.center, 0.0, {}};
  for (int c = 0; c < k; ++c) {
    const double pc = partition.size(c);
    fit.a_hat(c) = (pc * s.trace(c) - s.sum(c, c)) / (pc * (pc - 1.0));
    fit.b_hat(c, c) = (s.sum(c, c) - s.trace(c)) / (pc * (pc - 1.0));
    for (int d = c + 1; d < k; ++d) {
      const double v = s.sum(c, d) / (pc * partition.size(d));
      fit.b_hat(c, d) = v;
      fit.b_hat(d, c) = v;
    }
  }
  if (options.tau) {
    if (options.tau->size() != k || (options.tau->array() == 0.0).any()) {
      throw Error(ErrorKind::InvalidSpec, "tau needs K nonzero entries");
    }
    fit.tau = *options.tau;
  }

  diagnose(fit);
  if (options.repair) repair(fit);

  try {
    fit.log_likelihood = log_likelihood(fit.a_hat, fit.b_hat, s, n, partition);
  } catch (const Error& e) {
    fit.log_likelihood = std::numeric_limits<double>::quiet_NaN();
    fit.diagnostics.warnings.push_back(std::string("log-likelihood undefined: ") +
                                       e.what());
  }
  return fit;
}

ScfaFit estimate(const DataMatrix& data, const Membership& membership,
                 const EstimateOptions& options) {
  if (membership.num_variables() != data.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "membership covers " + std::to_string(membership.num_variables()) +
                    " variables but data has " + std::to_string(data.cols()));
  }
  const double n = data.rows();
  const int k = membership.num_communities();
  const BlockSummaries s =
      options.center
          ? data_block_summaries(center_columns(data.values()), membership.labels(), k,
                                 n - 1.0)
          : data_block_summaries(data.values(), membership.labels(), k, n);
  return estimate_from_summaries(s, membership.partition(), data.rows(), options);
}

double log_likelihood(const Eigen::VectorXd& a, const Eigen::MatrixXd& b,
                      const BlockSummaries& s, int n,
                      const PartitionVector& partition) {
  const UniformBlockMatrix sigma(a, b, partition);
  if (!is_positive_definite(sigma)) {
    throw Error(ErrorKind::SingularMatrix, "Σ(a, b) is not positive definite");
  }
  const LogDeterminant ld = log_determinant(sigma);
  const UniformBlockMatrix inv = inverse(sigma);
  double trace = inv.a().dot(s.trace);
  trace += (inv.b().array() * s.sum.transpose().array()).sum();
  return -0.5 * n * ld.log_abs - 0.5 * n * trace;
}

double log_likelihood(const Eigen::VectorXd& a, const Eigen::MatrixXd& b,
                      const Eigen::MatrixXd& s, int n,
                      const PartitionVector& partition) {
  return log_likelihood(a, b, block_summaries(s, partition), n, partition);
}

UniformBlockMatrix implied_covariance(const ScfaFit& fit) {
  const Eigen::MatrixXd b =
      fit.tau.asDiagonal() * fit.sigma_f() * fit.tau.asDiagonal();
  return UniformBlockMatrix(fit.a_hat, symmetrized(b), fit.partition);
}

}  // namespace scfa
