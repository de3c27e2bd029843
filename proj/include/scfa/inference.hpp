#ifndef SCFA_INFERENCE_HPP
#define SCFA_INFERENCE_HPP

#include "scfa/estimation.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace scfa {

enum class ParameterKind { A, B };

struct ParameterInference {
  std::string name;  // "a11", "b12", ... (1-based)
  ParameterKind kind = ParameterKind::A;
  int row = 0;  // 0-based community indices
  int col = 0;
  double estimate = 0.0;
  double variance = 0.0;
  double standard_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

// Parameters ordered a11..aKK, then b in upper-triangular row order.
struct InferenceReport {
  std::vector<ParameterInference> parameters;
  double alpha = 0.05;
  int n = 0;
  std::vector<std::string> diagnostics;

  const ParameterInference& find(const std::string& name) const;
};

// Exact finite-sample variances of the closed-form estimators.
double var_a(double a_kk, int n, int p_k);
// Diagonal (k == k') and off-diagonal forms; indices are 0-based.
double var_b(const Eigen::VectorXd& a, const Eigen::MatrixXd& b, int n,
             const PartitionVector& partition, int k, int k_prime);

// Two-sided z quantile for level alpha, i.e. z_{1-alpha/2}.
double normal_critical_value(double alpha);

InferenceReport wald_report(const ScfaFit& fit, int n, double alpha = 0.05);
InferenceReport wald_report(const ScfaFit& fit, double alpha = 0.05);

enum class EdgeSign { Positive, Negative };

struct EdgeLabel {
  int from = 0;  // 0-based factor indices, from <= to; from == to is a self-loop
  int to = 0;
  double estimate = 0.0;
  EdgeSign sign = EdgeSign::Positive;
  bool significant = false;
};

std::vector<EdgeLabel> edge_labels(const InferenceReport& report);

}  // namespace scfa

#endif  // SCFA_INFERENCE_HPP
