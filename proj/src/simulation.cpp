#include "scfa/simulation.hpp"

#include "scfa/errors.hpp"
#include "scfa/factor_scores.hpp"
#include "scfa/inference.hpp"

#include <chrono>
#include <limits>
#include <cmath>
#include <numeric>

namespace scfa {

namespace {

struct ReplicateOutcome {
  bool ok = false;
  bool warned = false;
  std::vector<double> estimate;
  std::vector<double> standard_error;
  std::vector<bool> covered;
  double loss = 0.0;
  double relative = 0.0;
};

std::vector<double> truth_vector(const GeneratorSpec& spec) {
  std::vector<double> out;
  const int k = spec.partition().num_blocks();
  for (int c = 0; c < k; ++c) out.push_back(spec.a()(c));
  for (int r = 0; r < k; ++r) {
    for (int c = r; c < k; ++c) out.push_back(spec.b()(r, c));
  }
  return out;
}

ReplicateOutcome run_replicate(const GeneratorSpec& spec, const Membership& membership,
                               const std::vector<double>& truth, double alpha,
                               std::uint64_t index) {
  ReplicateOutcome out;
  try {
    Rng rng = replicate_rng(spec.seed(), index);
    const GeneratedData gen = generate(spec, rng);
    const ScfaFit fit = estimate(gen.data, membership);
    const InferenceReport report = wald_report(fit, alpha);
    const FactorScoreMatrix scores = score_ols(gen.data, membership);

    out.warned = !fit.diagnostics.warnings.empty();
    for (std::size_t q = 0; q < report.parameters.size(); ++q) {
      const ParameterInference& p = report.parameters[q];
      out.estimate.push_back(p.estimate);
      out.standard_error.push_back(p.standard_error);
      out.covered.push_back(p.ci_low <= truth[q] && truth[q] <= p.ci_high);
    }
    out.loss = euclidean_loss(scores.scores, gen.true_scores);
    out.relative = relative_loss(scores.scores, gen.true_scores);
    out.ok = true;
  } catch (const Error&) {
    out.ok = false;
  }
  return out;
}

}  // namespace

Rng replicate_rng(std::uint64_t master, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master & 0xffffffffu),
                    static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index & 0xffffffffu),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

GeneratorSpec::GeneratorSpec(int n, PartitionVector partition, Eigen::VectorXd a,
                             Eigen::MatrixXd b, std::uint64_t seed,
                             std::optional<NoiseSpec> noise,
                             std::optional<Eigen::VectorXd> tau)
    : n_(n),
      partition_(std::move(partition)),
      a_(std::move(a)),
      b_(std::move(b)),
      tau_(tau ? *tau : Eigen::VectorXd::Ones(partition_.num_blocks())),
      seed_(seed),
      noise_(noise) {
  const int k = partition_.num_blocks();
  if (n_ < 2) throw Error(ErrorKind::InvalidSpec, "n must be at least 2");
  if (a_.size() != k || b_.rows() != k || b_.cols() != k || tau_.size() != k) {
    throw Error(ErrorKind::InvalidSpec, "a, b and tau must match the partition");
  }
  if (!(a_.array() > 0.0).all()) {
    throw Error(ErrorKind::InvalidSpec, "error variances a_kk must be positive");
  }
  if ((tau_.array() == 0.0).any()) {
    throw Error(ErrorKind::InvalidSpec, "loading scales must be nonzero");
  }
  if (b_ != b_.transpose()) throw Error(ErrorKind::InvalidSpec, "B must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(b_);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidSpec, "B must be positive definite");
  }
  if (!is_positive_definite(UniformBlockMatrix(a_, b_, partition_))) {
    throw Error(ErrorKind::InvalidSpec, "implied covariance is not positive definite");
  }
  if (noise_ && !(noise_->kappa > 0.0)) {
    throw Error(ErrorKind::InvalidSpec, "noise kappa must be positive");
  }
}

GeneratorSpec GeneratorSpec::with_seed(std::uint64_t seed) const {
  GeneratorSpec copy = *this;
  copy.seed_ = seed;
  return copy;
}

Eigen::VectorXd reference_a() { return Eigen::Vector3d(0.1, 0.2, 0.5); }

Eigen::MatrixXd reference_b() {
  Eigen::Matrix3d b;
  b << 2.02, 0.73, 1.15,
       0.73, 3.13, 1.63,
       1.15, 1.63, 3.69;
  return b;
}

PartitionVector reference_partition(int multiplier) {
  return PartitionVector({3 * multiplier, 3 * multiplier, 4 * multiplier});
}

GeneratedData generate(const GeneratorSpec& spec, Rng& rng) {
  const PartitionVector& part = spec.partition();
  const int n = spec.n();
  const int p = part.total();
  const int k = part.num_blocks();
  std::normal_distribution<double> normal(0.0, 1.0);

  const Eigen::MatrixXd sigma_f =
      spec.b().array() / (spec.tau() * spec.tau().transpose()).array();
  const Eigen::MatrixXd chol_f = Eigen::LLT<Eigen::MatrixXd>(sigma_f).matrixL();
  const Eigen::VectorXd sd_u = spec.a().cwiseSqrt();

  Eigen::MatrixXd noise_factor;
  if (spec.noise()) {
    noise_factor = std::sqrt(spec.noise()->kappa) * wishart_bartlett_factor(p, p, rng);
  }

  Eigen::MatrixXd x(n, p);
  Eigen::MatrixXd f(n, k);
  Eigen::VectorXd z(k);
  Eigen::VectorXd w(p);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) z(c) = normal(rng);
    f.row(i) = (chol_f * z).transpose();
    for (int c = 0; c < k; ++c) {
      const double shared = spec.tau()(c) * f(i, c);
      for (int j = part.offset(c); j < part.offset(c + 1); ++j) {
        x(i, j) = shared + sd_u(c) * normal(rng);
      }
    }
    if (spec.noise()) {
      for (int j = 0; j < p; ++j) w(j) = normal(rng);
      x.row(i) += (noise_factor.triangularView<Eigen::Lower>() * w).transpose();
    }
  }
  return {DataMatrix(std::move(x)), std::move(f)};
}

GeneratedData generate(const GeneratorSpec& spec) {
  Rng rng = replicate_rng(spec.seed(), 0);
  return generate(spec, rng);
}

Eigen::MatrixXd wishart_bartlett_factor(int df, int p, Rng& rng) {
  if (df < p) {
    throw Error(ErrorKind::InvalidSpec, "Bartlett factor needs df >= p");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    std::chi_squared_distribution<double> chi(static_cast<double>(df - i));
    t(i, i) = std::sqrt(chi(rng));
    for (int j = 0; j < i; ++j) t(i, j) = normal(rng);
  }
  return t;
}

Eigen::MatrixXd sample_wishart(int df, double kappa, int p, Rng& rng) {
  if (df < 1 || p < 1) throw Error(ErrorKind::InvalidSpec, "df and p must be positive");
  if (kappa < 0.0) throw Error(ErrorKind::InvalidSpec, "kappa must be non-negative");
  if (kappa == 0.0) return Eigen::MatrixXd::Zero(p, p);
  if (df >= p) {
    const Eigen::MatrixXd t = wishart_bartlett_factor(df, p, rng);
    return kappa * t * t.transpose();
  }
  // Rank-deficient case: sum of df outer products.
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(p, df);
  for (int c = 0; c < df; ++c) {
    for (int r = 0; r < p; ++r) z(r, c) = normal(rng);
  }
  return kappa * z * z.transpose();
}

double euclidean_loss(const Eigen::MatrixXd& estimated, const Eigen::MatrixXd& truth) {
  if (estimated.rows() != truth.rows() || estimated.cols() != truth.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "score matrices differ in shape");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < truth.rows(); ++i) {
    total += (estimated.row(i) - truth.row(i)).norm();
  }
  return total;
}

double relative_loss(const Eigen::MatrixXd& estimated, const Eigen::MatrixXd& truth) {
  const double loss = euclidean_loss(estimated, truth);
  double scale = 0.0;
  for (Eigen::Index i = 0; i < truth.rows(); ++i) scale += truth.row(i).norm();
  return loss / scale;
}

const ParameterSummary& SimulationReport::find(const std::string& name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return p;
  }
  throw Error(ErrorKind::InvalidSpec, "no parameter named " + name);
}

SimulationReport run_study(const GeneratorSpec& spec, int replicates, double alpha) {
  if (replicates < 2) throw Error(ErrorKind::InvalidSpec, "need at least 2 replicates");
  const auto start = std::chrono::steady_clock::now();

  const Membership membership = Membership::contiguous(spec.partition());
  const std::vector<double> truth = truth_vector(spec);
  std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(replicates));

#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < replicates; ++r) {
    outcomes[static_cast<std::size_t>(r)] =
        run_replicate(spec, membership, truth, alpha, static_cast<std::uint64_t>(r));
  }

  SimulationReport report;
  report.replicates = replicates;
  report.alpha = alpha;
  report.master_seed = spec.seed();
  report.noise_policy = spec.noise() ? "one Wishart draw per replicate" : "none";

  const std::size_t q = truth.size();
  std::vector<double> sum(q, 0.0), sum_sq(q, 0.0), se_sum(q, 0.0);
  std::vector<int> se_count(q, 0), covered(q, 0);
  int ok = 0;
  for (const ReplicateOutcome& o : outcomes) {
    if (!o.ok) {
      ++report.failures;
      continue;
    }
    ++ok;
    if (o.warned) ++report.warnings;
    report.losses.push_back(o.loss);
    report.relative_losses.push_back(o.relative);
    for (std::size_t t = 0; t < q; ++t) {
      sum[t] += o.estimate[t];
      if (std::isfinite(o.standard_error[t])) {
        se_sum[t] += o.standard_error[t];
        ++se_count[t];
      }
      if (o.covered[t]) ++covered[t];
    }
  }

  const int k = spec.partition().num_blocks();
  std::vector<std::string> names;
  for (int c = 0; c < k; ++c) names.push_back("a" + std::to_string(c + 1) + std::to_string(c + 1));
  for (int r = 0; r < k; ++r) {
    for (int c = r; c < k; ++c) names.push_back("b" + std::to_string(r + 1) + std::to_string(c + 1));
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t t = 0; t < q; ++t) {
    ParameterSummary s;
    s.name = names[t];
    s.truth = truth[t];
    if (ok > 0) {
      const double mean = sum[t] / ok;
      double ss = 0.0;
      for (const ReplicateOutcome& o : outcomes) {
        if (o.ok) ss += (o.estimate[t] - mean) * (o.estimate[t] - mean);
      }
      s.bias = mean - truth[t];
      s.mcsd = ok > 1 ? std::sqrt(ss / (ok - 1)) : nan;
      s.ase = se_count[t] > 0 ? se_sum[t] / se_count[t] : nan;
      s.coverage = static_cast<double>(covered[t]) / ok;
    } else {
      s.bias = s.mcsd = s.ase = s.coverage = nan;
    }
    report.parameters.push_back(std::move(s));
  }

  if (!report.losses.empty()) {
    const double m = static_cast<double>(report.losses.size());
    report.mean_loss = std::accumulate(report.losses.begin(), report.losses.end(), 0.0) / m;
    double ss = 0.0;
    for (double l : report.losses) ss += (l - report.mean_loss) * (l - report.mean_loss);
    report.sd_loss = m > 1 ? std::sqrt(ss / (m - 1)) : 0.0;
    report.mean_relative_loss =
        std::accumulate(report.relative_losses.begin(), report.relative_losses.end(), 0.0) / m;
  }

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace scfa
