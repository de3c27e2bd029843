#include "scfa/inference.hpp"

#include "scfa/errors.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace scfa {

namespace {

constexpr double kClampTol = 1e-12;

std::string param_name(char prefix, int r, int c) {
  return std::string(1, prefix) + std::to_string(r + 1) + std::to_string(c + 1);
}

void fill_interval(ParameterInference& p, double critical) {
  const boost::math::normal standard;
  p.standard_error = p.variance >= 0.0 ? std::sqrt(p.variance)
                                       : std::numeric_limits<double>::quiet_NaN();
  p.ci_low = p.estimate - critical * p.standard_error;
  p.ci_high = p.estimate + critical * p.standard_error;
  if (p.standard_error > 0.0) {
    p.z = p.estimate / p.standard_error;
    p.p_value = 2.0 * boost::math::cdf(boost::math::complement(standard, std::abs(p.z)));
  } else if (p.standard_error == 0.0) {
    p.z = p.estimate == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(),
                                                  p.estimate);
    p.p_value = p.estimate == 0.0 ? 1.0 : 0.0;
  } else {
    p.z = std::numeric_limits<double>::quiet_NaN();
    p.p_value = std::numeric_limits<double>::quiet_NaN();
  }
  p.significant = p.ci_low > 0.0 || p.ci_high < 0.0;
}

}  // namespace

const ParameterInference& InferenceReport::find(const std::string& name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return p;
  }
  throw Error(ErrorKind::InvalidSpec, "no parameter named " + name);
}

double var_a(double a_kk, int n, int p_k) {
  return 2.0 * a_kk * a_kk / ((n - 1.0) * (p_k - 1.0));
}

double var_b(const Eigen::VectorXd& a, const Eigen::MatrixXd& b, int n,
             const PartitionVector& partition, int k, int kp) {
  const double pk = partition.size(k);
  if (k == kp) {
    const double akk = a(k);
    const double bkk = b(k, k);
    return 2.0 / ((n - 1.0) * pk * (pk - 1.0)) *
           ((akk + pk * bkk) * (akk + pk * bkk) - (2.0 * akk + pk * bkk) * bkk);
  }
  const double pkp = partition.size(kp);
  // b_kk'^2 + b_k'k^2 is kept as written; it equals 2 b_kk'^2 for symmetric B.
  return 1.0 / (2.0 * (n - 1.0) * pk * pkp) *
         (pk * pkp * (b(k, kp) * b(k, kp) + b(kp, k) * b(kp, k)) +
          2.0 * (a(k) + pk * b(k, k)) * (a(kp) + pkp * b(kp, kp)));
}

double normal_critical_value(double alpha) {
  const boost::math::normal standard;
  return boost::math::quantile(standard, 1.0 - alpha / 2.0);
}

InferenceReport wald_report(const ScfaFit& fit, int n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidSpec, "alpha must lie in (0, 1)");
  }
  const PartitionVector& part = fit.partition;
  const int k = part.num_blocks();
  const double critical = normal_critical_value(alpha);

  InferenceReport report;
  report.alpha = alpha;
  report.n = n;

  for (int c = 0; c < k; ++c) {
    ParameterInference p;
    p.name = param_name('a', c, c);
    p.kind = ParameterKind::A;
    p.row = p.col = c;
    p.estimate = fit.a_hat(c);
    p.variance = var_a(fit.a_hat(c), n, part.size(c));
    fill_interval(p, critical);
    report.parameters.push_back(std::move(p));
  }
  for (int r = 0; r < k; ++r) {
    for (int c = r; c < k; ++c) {
      ParameterInference p;
      p.name = param_name('b', r, c);
      p.kind = ParameterKind::B;
      p.row = r;
      p.col = c;
      p.estimate = fit.b_hat(r, c);
      p.variance = var_b(fit.a_hat, fit.b_hat, n, part, r, c);
      if (p.variance < 0.0) {
        if (p.variance > -kClampTol) {
          report.diagnostics.push_back(p.name + ": tiny negative variance clamped to 0");
          p.variance = 0.0;
        } else {
          report.diagnostics.push_back(p.name +
                                       ": negative plug-in variance; standard error undefined");
        }
      }
      fill_interval(p, critical);
      report.parameters.push_back(std::move(p));
    }
  }
  return report;
}

InferenceReport wald_report(const ScfaFit& fit, double alpha) {
  return wald_report(fit, fit.n, alpha);
}

std::vector<EdgeLabel> edge_labels(const InferenceReport& report) {
  std::vector<EdgeLabel> out;
  for (const auto& p : report.parameters) {
    if (p.kind != ParameterKind::B) continue;
    EdgeLabel e;
    e.from = p.row;
    e.to = p.col;
    e.estimate = p.estimate;
    e.sign = p.estimate < 0.0 ? EdgeSign::Negative : EdgeSign::Positive;
    e.significant = p.significant;
    out.push_back(e);
  }
  return out;
}

}  // namespace scfa
