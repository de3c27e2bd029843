#ifndef SCFA_IO_HPP
#define SCFA_IO_HPP

#include "scfa/estimation.hpp"
#include "scfa/factor_scores.hpp"
#include "scfa/inference.hpp"
#include "scfa/simulation.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace scfa {

enum class TableFormat { Csv, Tsv };

// Csv unless the extension is .tsv or .tab.
TableFormat format_from_path(const std::filesystem::path& path);

// Rectangular numeric table; names come from the header row or are v1..vp.
DataMatrix load_data(const std::filesystem::path& path, TableFormat format,
                     bool header);
DataMatrix parse_data(const std::string& text, TableFormat format, bool header);

// Raw "variable_name,community_label" records in file order. A first line
// reading variable,community (or similar) is skipped.
struct MembershipTable {
  std::vector<std::string> variables;
  std::vector<std::string> communities;
};

MembershipTable parse_membership(const std::string& text);
MembershipTable load_membership_table(const std::filesystem::path& path);

// Resolves records against the data's column names: every column must be
// listed exactly once. Communities are numbered by first appearance in the
// data's column order.
Membership resolve_membership(const MembershipTable& table,
                              const std::vector<std::string>& variable_names);
Membership load_membership(const std::filesystem::path& path,
                           const std::vector<std::string>& variable_names);

nlohmann::json ub_to_json(const UniformBlockMatrix& n);
UniformBlockMatrix ub_from_json(const nlohmann::json& j);

struct FitDocument {
  static constexpr int kSchemaVersion = 1;

  int schema_version = kSchemaVersion;
  std::string data_path;
  std::string data_sha256;
  std::string membership_path;
  std::string membership_sha256;
  bool centered = false;
  std::vector<std::string> variables;          // input order
  std::vector<std::string> variable_community;  // community name per variable
  std::vector<std::string> community_names;    // factor k -> community name
  std::vector<int> sizes;
  int n = 0;
  Eigen::VectorXd a_hat;
  Eigen::MatrixXd b_hat;
  Eigen::VectorXd tau;
  double log_likelihood = 0.0;
  InferenceReport inference;
  std::vector<std::string> diagnostics;
  double elapsed_seconds = 0.0;
};

FitDocument make_fit_document(const ScfaFit& fit, const InferenceReport& report,
                              const Membership& membership);
nlohmann::json to_json(const FitDocument& doc);
FitDocument fit_document_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SimulationReport& report);
// One row per parameter: bias, MCSD, ASE and CP, all multiplied by 100.
std::string report_csv(const SimulationReport& report);

// n rows, header f1..fK.
std::string scores_csv(const FactorScoreMatrix& scores);

std::string export_dot(const ScfaFit& fit, const InferenceReport& report,
                       const Membership& membership);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

// Full-precision decimal (17 significant digits).
std::string format_real(double v);

}  // namespace scfa

#endif  // SCFA_IO_HPP
