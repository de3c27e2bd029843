#include "cli_app.hpp"

#include "scfa/errors.hpp"
#include "scfa/estimation.hpp"
#include "scfa/factor_scores.hpp"
#include "scfa/inference.hpp"
#include "scfa/io.hpp"
#include "scfa/parallel.hpp"
#include "scfa/simulation.hpp"
#include "scfa/ub_matrix.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <set>
#include <sstream>

namespace scfa::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kDefaultSeed = 7;
constexpr int kTableReplicates = 100;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

json read_json(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string data;
  std::string membership;
  bool center = false;
  bool no_header = false;
  double alpha = 0.05;
  std::string out;
  std::string dot;
  std::string scores;
};

int run_fit(const FitArgs& args, std::ostream& out) {
  const auto start = Clock::now();
  if (!(args.alpha > 0.0 && args.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");

  const std::string data_text = read_file(args.data);
  const std::string membership_text = read_file(args.membership);
  const DataMatrix data = parse_data(data_text, format_from_path(args.data), !args.no_header);
  const Membership membership =
      resolve_membership(parse_membership(membership_text), data.names());

  EstimateOptions options;
  options.center = args.center;
  const ScfaFit fit = estimate(data, membership, options);
  const InferenceReport report = wald_report(fit, args.alpha);

  FitDocument doc = make_fit_document(fit, report, membership);
  doc.data_path = args.data;
  doc.data_sha256 = sha256_hex(data_text);
  doc.membership_path = args.membership;
  doc.membership_sha256 = sha256_hex(membership_text);

  if (!args.scores.empty()) {
    if ((fit.a_hat.array() > 0.0).all()) {
      write_file_atomic(args.scores, scores_csv(score_fgls(data, membership, fit)));
    } else {
      doc.diagnostics.push_back("scores: non-positive a_hat, wrote OLS scores");
      write_file_atomic(args.scores, scores_csv(score_ols(data, membership)));
    }
  }
  if (!args.dot.empty()) {
    write_file_atomic(args.dot, export_dot(fit, report, membership));
  }
  doc.elapsed_seconds = seconds_since(start);
  write_file_atomic(args.out, to_json(doc).dump(2) + "\n");
  out << "fit: n=" << fit.n << " p=" << fit.partition.total()
      << " K=" << fit.partition.num_blocks() << " -> " << args.out << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  int reps = 0;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string csv;
};

Eigen::VectorXd json_vector(const json& j, const char* key) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidSpec, std::string(key) + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Eigen::MatrixXd json_matrix(const json& j, const char* key) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorKind::InvalidSpec, std::string(key) + " must be an array of rows");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw Error(ErrorKind::InvalidSpec, std::string(key) + " rows differ in length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

struct StudyConfig {
  GeneratorSpec spec;
  double alpha;
};

StudyConfig parse_study_config(const json& j, std::uint64_t seed) {
  static const std::set<std::string> known{"n", "sizes", "multiplier", "a",
                                           "b", "kappa", "tau", "alpha"};
  if (!j.is_object()) throw Error(ErrorKind::InvalidSpec, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw Error(ErrorKind::InvalidSpec, "unknown config key '" + key + "'");
  }
  try {
    if (!j.contains("n")) throw Error(ErrorKind::InvalidSpec, "config needs n");
    const int n = j.at("n").get<int>();
    if (j.contains("sizes") == j.contains("multiplier")) {
      throw Error(ErrorKind::InvalidSpec, "config needs exactly one of sizes or multiplier");
    }
    PartitionVector partition =
        j.contains("sizes") ? PartitionVector(j.at("sizes").get<std::vector<int>>())
                            : reference_partition(j.at("multiplier").get<int>());
    Eigen::VectorXd a = j.contains("a") ? json_vector(j.at("a"), "a") : reference_a();
    Eigen::MatrixXd b = j.contains("b") ? json_matrix(j.at("b"), "b") : reference_b();
    std::optional<NoiseSpec> noise;
    if (j.contains("kappa")) noise = NoiseSpec{j.at("kappa").get<double>()};
    std::optional<Eigen::VectorXd> tau;
    if (j.contains("tau")) tau = json_vector(j.at("tau"), "tau");
    const double alpha = j.value("alpha", 0.05);
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidSpec, "alpha must lie in (0, 1)");
    return {GeneratorSpec(n, std::move(partition), std::move(a), std::move(b), seed, noise, tau),
            alpha};
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidSpec, std::string("config: ") + e.what());
  }
}

int run_simulate(const SimulateArgs& args, std::ostream& out) {
  if (args.reps < 2) throw UsageError("--reps must be at least 2");
  const StudyConfig config = parse_study_config(read_json(args.config), args.seed);
  const SimulationReport report = run_study(config.spec, args.reps, config.alpha);
  if (!args.csv.empty()) write_file_atomic(args.csv, report_csv(report));
  write_file_atomic(args.out, to_json(report).dump(2) + "\n");
  out << "simulate: " << report.replicates << " replicates, " << report.failures
      << " failures, mean loss " << format_real(report.mean_loss) << " -> " << args.out << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------- reproduce

struct Cell {
  int n;
  int multiplier;
};

// Every (n, p) cell shared by the loss table and the parameter table.
const std::vector<Cell>& reference_cells() {
  static const std::vector<Cell> cells{{40, 2},  {40, 3},  {40, 4},   {80, 4},  {80, 8},
                                       {80, 12}, {120, 4}, {120, 12}, {120, 20}};
  return cells;
}

const std::vector<double>& reference_kappas() {
  static const std::vector<double> kappas{0.01, 0.03, 0.05};
  return kappas;
}

void log_timing(std::ostream& err, const std::string& what, double seconds) {
  err << "scfa: timing: " << what << " " << format_real(seconds) << "s\n";
}

std::vector<SimulationReport> run_reference_cells(std::uint64_t seed, std::ostream& err) {
  std::vector<SimulationReport> reports;
  for (const Cell& c : reference_cells()) {
    const GeneratorSpec spec(c.n, reference_partition(c.multiplier), reference_a(),
                             reference_b(), seed);
    const auto start = Clock::now();
    reports.push_back(run_study(spec, kTableReplicates));
    log_timing(err, "n=" + std::to_string(c.n) + " p=" + std::to_string(10 * c.multiplier),
               seconds_since(start));
  }
  return reports;
}

void append_parameter_rows(std::ostringstream& os, const std::string& prefix,
                           const SimulationReport& report) {
  for (const auto& p : report.parameters) {
    os << prefix << p.name << ',' << format_real(p.truth) << ',' << format_real(100.0 * p.bias)
       << ',' << format_real(100.0 * p.mcsd) << ',' << format_real(100.0 * p.ase) << ','
       << format_real(100.0 * p.coverage) << '\n';
  }
}

void reproduce_table1(std::uint64_t seed, const std::filesystem::path& dir, std::ostream& err) {
  const auto reports = run_reference_cells(seed, err);
  std::ostringstream os;
  os << "n,p,mean_loss,sd_loss,replicates,failures\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const Cell& c = reference_cells()[i];
    os << c.n << ',' << 10 * c.multiplier << ',' << format_real(reports[i].mean_loss) << ','
       << format_real(reports[i].sd_loss) << ',' << reports[i].replicates - reports[i].failures
       << ',' << reports[i].failures << '\n';
  }
  write_file_atomic(dir / "table1.csv", os.str());
}

void reproduce_table2(std::uint64_t seed, const std::filesystem::path& dir, std::ostream& err) {
  const auto reports = run_reference_cells(seed, err);
  std::ostringstream os;
  os << "n,p,parameter,truth,bias_x100,mcsd_x100,ase_x100,cp_x100\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const Cell& c = reference_cells()[i];
    append_parameter_rows(os, std::to_string(c.n) + ',' + std::to_string(10 * c.multiplier) + ',',
                          reports[i]);
  }
  write_file_atomic(dir / "table2.csv", os.str());
}

void reproduce_table3(std::uint64_t seed, const std::filesystem::path& dir, std::ostream& err) {
  const PartitionVector partition({60, 60, 80});
  std::ostringstream params;
  std::ostringstream losses;
  params << "noise_scale,kappa,parameter,truth,bias_x100,mcsd_x100,ase_x100,cp_x100\n";
  losses << "noise_scale,kappa,relative_loss_pct,mean_loss\n";
  for (double kappa : reference_kappas()) {
    const GeneratorSpec spec(120, partition, reference_a(), reference_b(), seed,
                             NoiseSpec{kappa});
    const auto start = Clock::now();
    const SimulationReport report = run_study(spec, kTableReplicates);
    const double scale = kappa * partition.total();
    log_timing(err, "kappa=" + format_real(kappa), seconds_since(start));
    const std::string prefix = format_real(scale) + ',' + format_real(kappa) + ',';
    append_parameter_rows(params, prefix, report);
    losses << prefix << format_real(100.0 * report.mean_relative_loss) << ','
           << format_real(report.mean_loss) << '\n';
  }
  write_file_atomic(dir / "table3.csv", params.str());
  write_file_atomic(dir / "table3_loss.csv", losses.str());
}

int run_reproduce(const std::string& table, std::uint64_t seed, const std::string& out_dir,
                  std::ostream& out, std::ostream& err) {
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::IoFailure, "cannot create output directory " + out_dir);
  }
  const auto start = Clock::now();
  if (table == "table1") {
    reproduce_table1(seed, dir, err);
  } else if (table == "table2") {
    reproduce_table2(seed, dir, err);
  } else {
    reproduce_table3(seed, dir, err);
  }
  log_timing(err, table, seconds_since(start));
  out << "reproduce: " << table << " (seed " << seed << ") -> " << out_dir << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------- ubmat

UniformBlockMatrix load_ub(const std::string& path) {
  const json j = read_json(path);
  if (j.is_object() && j.contains("dense")) {
    try {
      const PartitionVector partition(j.at("sizes").get<std::vector<int>>());
      return from_dense(json_matrix(j.at("dense"), "dense"), partition);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ParseError, std::string("UB matrix JSON: ") + e.what());
    }
  }
  return ub_from_json(j);
}

json real_json(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

int run_ubmat(const std::string& op, const std::string& in, std::ostream& out) {
  const UniformBlockMatrix m = load_ub(in);
  json result;
  if (op == "det") {
    const LogDeterminant ld = log_determinant(m);
    result = {{"sign", ld.sign}, {"log_abs_det", ld.log_abs}};
  } else if (op == "inv") {
    result = ub_to_json(inverse(m));
  } else if (op == "eig") {
    const Eigen::VectorXd all = eigenvalues(m);
    json distinct = json::array();
    for (int k = 0; k < m.num_blocks(); ++k) {
      distinct.push_back({{"value", m.a()(k)}, {"multiplicity", m.partition().size(k) - 1}});
    }
    const Eigen::VectorXd d = delta_eigenvalues(m);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      distinct.push_back({{"value", d(i)}, {"multiplicity", 1}});
    }
    json values = json::array();
    for (Eigen::Index i = 0; i < all.size(); ++i) values.push_back(all(i));
    result = {{"eigenvalues", values}, {"distinct", distinct}};
  } else {
    const bool pd = is_positive_definite(m);
    bool singular = false;
    try {
      (void)log_determinant(m);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularMatrix) throw;
      singular = true;
    }
    result = {{"dim", m.dim()},
              {"blocks", m.num_blocks()},
              {"symmetric", m.symmetric()},
              {"positive_definite", pd},
              {"singular", singular},
              {"min_eigenvalue", real_json(eigenvalues(m).minCoeff())}};
  }
  out << result.dump(2) << "\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto fail = [&err](ExitCode code, std::string_view kind, const std::string& message) {
    err << "scfa: error[" << kind << "]: " << one_line(message) << "\n";
    return static_cast<int>(code);
  };

  if (std::getenv("SCFA_THREADS") != nullptr) {
    const auto threads = thread_limit_from_env();
    if (!threads) return fail(kUsage, "usage", "SCFA_THREADS must be a positive integer");
    set_thread_limit(*threads);
  }

  CLI::App app{"Semi-confirmatory factor analysis", "scfa"};
  app.require_subcommand(1);
  app.set_help_flag("-h,--help", "Print help");

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Estimate, test and score one dataset");
  fit->add_option("--data", fit_args.data, "CSV/TSV data file (n rows, p columns)")->required();
  fit->add_option("--membership", fit_args.membership, "variable_name,community_label file")
      ->required();
  fit->add_flag("--center", fit_args.center, "Center columns before estimation");
  fit->add_flag("--no-header", fit_args.no_header, "Data file has no header row");
  fit->add_option("--alpha", fit_args.alpha, "Wald interval level");
  fit->add_option("--out", fit_args.out, "Fit document (JSON)")->required();
  fit->add_option("--dot", fit_args.dot, "Path diagram (DOT)");
  fit->add_option("--scores", fit_args.scores, "Factor scores (CSV)");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo study from a JSON config");
  simulate->add_option("--config", sim_args.config, "Study config (JSON)")->required();
  simulate->add_option("--reps", sim_args.reps, "Replicates")->required();
  simulate->add_option("--seed", sim_args.seed, "Master seed");
  simulate->add_option("--out", sim_args.out, "Report (JSON)")->required();
  simulate->add_option("--csv", sim_args.csv, "Per-parameter summary (CSV)");

  std::string table;
  std::uint64_t reproduce_seed = kDefaultSeed;
  std::string reproduce_out;
  auto* reproduce = app.add_subcommand("reproduce", "Regenerate the reference simulation tables");
  reproduce->add_option("table", table, "table1, table2 or table3")
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "table3"}));
  reproduce->add_option("--seed", reproduce_seed, "Master seed");
  reproduce->add_option("--out", reproduce_out, "Output directory")->required();

  std::string ub_op;
  std::string ub_in;
  auto* ubmat = app.add_subcommand("ubmat", "Uniform-block matrix utilities");
  ubmat->add_option("op", ub_op, "det, inv, eig or check")
      ->required()
      ->check(CLI::IsMember({"det", "inv", "eig", "check"}));
  ubmat->add_option("--in", ub_in, "UB matrix JSON {sizes, a, b}")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    return fail(kUsage, "usage", e.what());
  }

  try {
    if (fit->parsed()) return run_fit(fit_args, out);
    if (simulate->parsed()) return run_simulate(sim_args, out);
    if (reproduce->parsed()) return run_reproduce(table, reproduce_seed, reproduce_out, out, err);
    return run_ubmat(ub_op, ub_in, out);
  } catch (const UsageError& e) {
    return fail(kUsage, "usage", e.what());
  } catch (const Error& e) {
    return fail(is_numerical(e.kind()) ? kNumerical : kInput, to_string(e.kind()), e.what());
  } catch (const json::exception& e) {
    return fail(kInput, "ParseError", e.what());
  } catch (const std::exception& e) {
    return fail(kNumerical, "Internal", e.what());
  }
}

}  // namespace scfa::cli
