#ifndef SCFA_SIMULATION_HPP
#define SCFA_SIMULATION_HPP

#include "scfa/estimation.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace scfa {

using Rng = std::mt19937_64;

// Independent stream for replicate `index` of a study seeded with `master`.
Rng replicate_rng(std::uint64_t master, std::uint64_t index);

// Wishart(p, kappa I_p) perturbation added to the structured covariance.
// The mean diagonal, p * kappa, is the "noise scale".
struct NoiseSpec {
  double kappa = 0.0;
};

class GeneratorSpec {
 public:
  // Throws InvalidSpec unless a > 0, b is symmetric positive definite and
  // the implied covariance is positive definite.
  GeneratorSpec(int n, PartitionVector partition, Eigen::VectorXd a,
                Eigen::MatrixXd b, std::uint64_t seed,
                std::optional<NoiseSpec> noise = std::nullopt,
                std::optional<Eigen::VectorXd> tau = std::nullopt);

  int n() const noexcept { return n_; }
  const PartitionVector& partition() const noexcept { return partition_; }
  const Eigen::VectorXd& a() const noexcept { return a_; }
  const Eigen::MatrixXd& b() const noexcept { return b_; }
  const Eigen::VectorXd& tau() const noexcept { return tau_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::optional<NoiseSpec>& noise() const noexcept { return noise_; }

  GeneratorSpec with_seed(std::uint64_t seed) const;

 private:
  int n_;
  PartitionVector partition_;
  Eigen::VectorXd a_;
  Eigen::MatrixXd b_;
  Eigen::VectorXd tau_;
  std::uint64_t seed_;
  std::optional<NoiseSpec> noise_;
};

// The truth used throughout the simulation tables: a = (0.1, 0.2, 0.5) and
// the 3×3 B below, with partition multiplier × (3, 3, 4).
Eigen::VectorXd reference_a();
Eigen::MatrixXd reference_b();
PartitionVector reference_partition(int multiplier);

struct GeneratedData {
  DataMatrix data;
  Eigen::MatrixXd true_scores;  // n×K latent f_i
};

// X_i = L f_i + u_i (+ e_i under noise). With noise, one E_kappa is drawn per
// call and e_i ~ N(0, E_kappa); the true scores stay the structural f_i.
GeneratedData generate(const GeneratorSpec& spec, Rng& rng);
GeneratedData generate(const GeneratorSpec& spec);

// Lower-triangular Bartlett factor T with kappa T Tᵀ ~ Wishart(df, kappa I_p).
// Needs df >= p.
Eigen::MatrixXd wishart_bartlett_factor(int df, int p, Rng& rng);
Eigen::MatrixXd sample_wishart(int df, double kappa, int p, Rng& rng);

double euclidean_loss(const Eigen::MatrixXd& estimated, const Eigen::MatrixXd& truth);
double relative_loss(const Eigen::MatrixXd& estimated, const Eigen::MatrixXd& truth);

struct ParameterSummary {
  std::string name;
  double truth = 0.0;
  double bias = 0.0;
  double mcsd = 0.0;
  double ase = 0.0;
  double coverage = 0.0;
};

struct SimulationReport {
  std::vector<ParameterSummary> parameters;
  std::vector<double> losses;
  std::vector<double> relative_losses;
  double mean_loss = 0.0;
  double sd_loss = 0.0;
  double mean_relative_loss = 0.0;
  int replicates = 0;
  int failures = 0;
  int warnings = 0;
  double alpha = 0.05;
  std::uint64_t master_seed = 0;
  std::string noise_policy;
  double runtime_seconds = 0.0;

  const ParameterSummary& find(const std::string& name) const;
};

// generate -> estimate -> wald_report -> metrics for every replicate, in
// parallel; replicate r uses replicate_rng(spec.seed(), r). Failed replicates
// are counted and excluded from the metrics.
SimulationReport run_study(const GeneratorSpec& spec, int replicates,
                           double alpha = 0.05);

}  // namespace scfa

#endif  // SCFA_SIMULATION_HPP
