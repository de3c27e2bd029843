#include "scfa/io.hpp"

#include "scfa/errors.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace scfa {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

// Lines with their 1-based line numbers; blank lines are dropped.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(const std::string& text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::string_view rest(text);
  std::size_t number = 0;
  while (!rest.empty()) {
    ++number;
    const std::size_t pos = rest.find('\n');
    std::string_view line = rest.substr(0, pos);
    rest = pos == std::string_view::npos ? std::string_view{} : rest.substr(pos + 1);
    if (!trim(line).empty()) out.emplace_back(number, line);
  }
  return out;
}

json real(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double real_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(real(v(i)));
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(real(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::VectorXd vector_from(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "expected a JSON array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = real_from(j[i]);
  return v;
}

Eigen::MatrixXd matrix_from(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "expected a JSON array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw Error(ErrorKind::RaggedRows, "matrix rows differ in length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = real_from(j[r][c]);
    }
  }
  return m;
}

std::string escape_dot(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

bool looks_like_header(const std::string& name, const std::string& community) {
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
  };
  const std::string n = lower(name);
  const std::string c = lower(community);
  const bool name_word = n == "variable" || n == "variable_name" || n == "name" || n == "gene";
  const bool comm_word =
      c == "community" || c == "community_label" || c == "label" || c == "factor";
  return name_word && comm_word;
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TableFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  return (ext == ".tsv" || ext == ".tab") ? TableFormat::Tsv : TableFormat::Csv;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorKind::IoFailure, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::IoFailure, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::IoFailure, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

DataMatrix parse_data(const std::string& text, TableFormat format, bool header) {
  const char delim = format == TableFormat::Tsv ? '\t' : ',';
  const auto lines = lines_of(text);
  std::vector<std::string> names;
  std::size_t first = 0;
  std::size_t width = 0;
  if (header) {
    if (lines.empty()) throw ParseError(ErrorKind::ParseError, 1, 0, "missing header row");
    for (auto cell : split(lines[0].second, delim)) names.push_back(unquote(cell));
    width = names.size();
    first = 1;
  }
  const std::size_t rows = lines.size() - first;
  if (rows == 0) throw ParseError(ErrorKind::ParseError, 1, 0, "no data rows");

  std::vector<double> values;
  for (std::size_t r = first; r < lines.size(); ++r) {
    const auto [number, line] = lines[r];
    const auto cells = split(line, delim);
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw ParseError(ErrorKind::RaggedRows, number, 0,
                       "expected " + std::to_string(width) + " fields, found " +
                           std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::string_view cell = trim(cells[c]);
      if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw ParseError(ErrorKind::NonNumericCell, number, c + 1,
                         "not a finite number: '" + std::string(cells[c]) + "'");
      }
      values.push_back(v);
    }
  }

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * width + c];
    }
  }
  return DataMatrix(std::move(m), std::move(names));
}

DataMatrix load_data(const std::filesystem::path& path, TableFormat format, bool header) {
  return parse_data(read_file(path), format, header);
}

MembershipTable parse_membership(const std::string& text) {
  MembershipTable table;
  const auto lines = lines_of(text);
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto [number, line] = lines[r];
    const char delim = line.find('\t') != std::string_view::npos &&
                               line.find(',') == std::string_view::npos
                           ? '\t'
                           : ',';
    const auto cells = split(line, delim);
    if (cells.size() != 2) {
      throw ParseError(ErrorKind::ParseError, number, 0,
                       "expected variable_name,community_label");
    }
    std::string name = unquote(cells[0]);
    std::string community = unquote(cells[1]);
    if (r == 0 && looks_like_header(name, community)) continue;
    if (name.empty() || community.empty()) {
      throw ParseError(ErrorKind::ParseError, number, 0, "empty field");
    }
    table.variables.push_back(std::move(name));
    table.communities.push_back(std::move(community));
  }
  return table;
}

MembershipTable load_membership_table(const std::filesystem::path& path) {
  return parse_membership(read_file(path));
}

Membership resolve_membership(const MembershipTable& table,
                              const std::vector<std::string>& variable_names) {
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t j = 0; j < variable_names.size(); ++j) column.emplace(variable_names[j], j);

  std::vector<std::string> community(variable_names.size());
  std::vector<bool> seen(variable_names.size(), false);
  for (std::size_t r = 0; r < table.variables.size(); ++r) {
    const auto it = column.find(table.variables[r]);
    if (it == column.end()) {
      throw Error(ErrorKind::UnknownVariable,
                  "membership lists unknown variable '" + table.variables[r] + "'");
    }
    if (seen[it->second]) {
      throw Error(ErrorKind::ParseError,
                  "variable '" + table.variables[r] + "' listed more than once");
    }
    seen[it->second] = true;
    community[it->second] = table.communities[r];
  }
  for (std::size_t j = 0; j < seen.size(); ++j) {
    if (!seen[j]) {
      throw Error(ErrorKind::MissingVariable,
                  "no community given for variable '" + variable_names[j] + "'");
    }
  }
  return Membership(variable_names, community);
}

Membership load_membership(const std::filesystem::path& path,
                           const std::vector<std::string>& variable_names) {
  return resolve_membership(load_membership_table(path), variable_names);
}

json ub_to_json(const UniformBlockMatrix& n) {
  json j;
  j["sizes"] = std::vector<int>(n.partition().sizes().begin(), n.partition().sizes().end());
  j["a"] = vector_json(n.a());
  j["b"] = matrix_json(n.b());
  return j;
}

UniformBlockMatrix ub_from_json(const json& j) {
  try {
    PartitionVector part(j.at("sizes").get<std::vector<int>>());
    return UniformBlockMatrix(vector_from(j.at("a")), matrix_from(j.at("b")), std::move(part));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("UB matrix JSON: ") + e.what());
  }
}

FitDocument make_fit_document(const ScfaFit& fit, const InferenceReport& report,
                              const Membership& membership) {
  FitDocument doc;
  doc.centered = fit.centered;
  doc.variables = membership.variable_names();
  for (int l : membership.labels()) {
    doc.variable_community.push_back(membership.community_names()[static_cast<std::size_t>(l)]);
  }
  doc.community_names = membership.community_names();
  doc.sizes.assign(fit.partition.sizes().begin(), fit.partition.sizes().end());
  doc.n = fit.n;
  doc.a_hat = fit.a_hat;
  doc.b_hat = fit.b_hat;
  doc.tau = fit.tau;
  doc.log_likelihood = fit.log_likelihood;
  doc.inference = report;
  doc.diagnostics = fit.diagnostics.warnings;
  doc.diagnostics.insert(doc.diagnostics.end(), report.diagnostics.begin(),
                         report.diagnostics.end());
  return doc;
}

json to_json(const FitDocument& doc) {
  json j;
  j["schema_version"] = doc.schema_version;
  j["input"] = {{"data_path", doc.data_path},
                {"data_sha256", doc.data_sha256},
                {"membership_path", doc.membership_path},
                {"membership_sha256", doc.membership_sha256},
                {"centered", doc.centered}};
  json vars = json::array();
  for (std::size_t i = 0; i < doc.variables.size(); ++i) {
    vars.push_back({{"name", doc.variables[i]}, {"community", doc.variable_community[i]}});
  }
  j["membership"] = {{"variables", vars}, {"communities", doc.community_names}};
  j["sizes"] = doc.sizes;
  j["n"] = doc.n;
  j["a_hat"] = vector_json(doc.a_hat);
  j["b_hat"] = matrix_json(doc.b_hat);
  j["tau"] = vector_json(doc.tau);
  j["log_likelihood"] = real(doc.log_likelihood);

  json params = json::array();
  for (const auto& p : doc.inference.parameters) {
    params.push_back({{"name", p.name},
                      {"estimate", real(p.estimate)},
                      {"variance", real(p.variance)},
                      {"standard_error", real(p.standard_error)},
                      {"ci_low", real(p.ci_low)},
                      {"ci_high", real(p.ci_high)},
                      {"z", real(p.z)},
                      {"p_value", real(p.p_value)},
                      {"significant", p.significant}});
  }
  j["inference"] = {{"alpha", doc.inference.alpha},
                    {"n", doc.inference.n},
                    {"parameters", params}};
  j["diagnostics"] = doc.diagnostics;
  j["elapsed_seconds"] = doc.elapsed_seconds;
  return j;
}

FitDocument fit_document_from_json(const json& j) {
  try {
    FitDocument doc;
    doc.schema_version = j.at("schema_version").get<int>();
    if (doc.schema_version != FitDocument::kSchemaVersion) {
      throw Error(ErrorKind::ParseError,
                  "unsupported schema_version " + std::to_string(doc.schema_version));
    }
    const json& in = j.at("input");
    doc.data_path = in.at("data_path").get<std::string>();
    doc.data_sha256 = in.at("data_sha256").get<std::string>();
    doc.membership_path = in.at("membership_path").get<std::string>();
    doc.membership_sha256 = in.at("membership_sha256").get<std::string>();
    doc.centered = in.at("centered").get<bool>();
    for (const auto& v : j.at("membership").at("variables")) {
      doc.variables.push_back(v.at("name").get<std::string>());
      doc.variable_community.push_back(v.at("community").get<std::string>());
    }
    doc.community_names = j.at("membership").at("communities").get<std::vector<std::string>>();
    doc.sizes = j.at("sizes").get<std::vector<int>>();
    doc.n = j.at("n").get<int>();
    doc.a_hat = vector_from(j.at("a_hat"));
    doc.b_hat = matrix_from(j.at("b_hat"));
    doc.tau = vector_from(j.at("tau"));
    doc.log_likelihood = real_from(j.at("log_likelihood"));
    const json& inf = j.at("inference");
    doc.inference.alpha = inf.at("alpha").get<double>();
    doc.inference.n = inf.at("n").get<int>();
    for (const auto& p : inf.at("parameters")) {
      ParameterInference q;
      q.name = p.at("name").get<std::string>();
      q.kind = q.name.front() == 'a' ? ParameterKind::A : ParameterKind::B;
      q.row = q.name[1] - '1';
      q.col = q.name[2] - '1';
      q.estimate = real_from(p.at("estimate"));
      q.variance = real_from(p.at("variance"));
      q.standard_error = real_from(p.at("standard_error"));
      q.ci_low = real_from(p.at("ci_low"));
      q.ci_high = real_from(p.at("ci_high"));
      q.z = real_from(p.at("z"));
      q.p_value = real_from(p.at("p_value"));
      q.significant = p.at("significant").get<bool>();
      doc.inference.parameters.push_back(std::move(q));
    }
    doc.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    doc.elapsed_seconds = j.at("elapsed_seconds").get<double>();
    return doc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("fit document: ") + e.what());
  }
}

json to_json(const SimulationReport& report) {
  json params = json::array();
  for (const auto& p : report.parameters) {
    params.push_back({{"name", p.name},
                      {"truth", real(p.truth)},
                      {"bias", real(p.bias)},
                      {"mcsd", real(p.mcsd)},
                      {"ase", real(p.ase)},
                      {"coverage", real(p.coverage)}});
  }
  json j;
  j["parameters"] = params;
  j["losses"] = report.losses;
  j["relative_losses"] = report.relative_losses;
  j["mean_loss"] = real(report.mean_loss);
  j["sd_loss"] = real(report.sd_loss);
  j["mean_relative_loss"] = real(report.mean_relative_loss);
  j["replicates"] = report.replicates;
  j["failures"] = report.failures;
  j["warnings"] = report.warnings;
  j["alpha"] = report.alpha;
  j["master_seed"] = report.master_seed;
  j["seed_scheme"] = "replicate r uses mt19937_64(seed_seq{seed_lo, seed_hi, r_lo, r_hi})";
  j["noise_policy"] = report.noise_policy;
  j["runtime_seconds"] = report.runtime_seconds;
  return j;
}

std::string report_csv(const SimulationReport& report) {
  std::ostringstream os;
  os << "parameter,truth,bias_x100,mcsd_x100,ase_x100,cp_x100\n";
  for (const auto& p : report.parameters) {
    os << p.name << ',' << format_real(p.truth) << ',' << format_real(100.0 * p.bias) << ','
       << format_real(100.0 * p.mcsd) << ',' << format_real(100.0 * p.ase) << ','
       << format_real(100.0 * p.coverage) << '\n';
  }
  return os.str();
}

std::string scores_csv(const FactorScoreMatrix& scores) {
  std::ostringstream os;
  for (Eigen::Index c = 0; c < scores.scores.cols(); ++c) {
    os << (c ? "," : "") << 'f' << c + 1;
  }
  os << '\n';
  for (Eigen::Index r = 0; r < scores.scores.rows(); ++r) {
    for (Eigen::Index c = 0; c < scores.scores.cols(); ++c) {
      os << (c ? "," : "") << format_real(scores.scores(r, c));
    }
    os << '\n';
  }
  return os.str();
}

std::string export_dot(const ScfaFit& fit, const InferenceReport& report,
                       const Membership& membership) {
  std::ostringstream os;
  os << "digraph scfa {\n";
  os << "  rankdir=LR;\n";
  const int k = fit.partition.num_blocks();
  for (int c = 0; c < k; ++c) {
    const std::string& name = membership.community_names()[static_cast<std::size_t>(c)];
    os << "  c" << c + 1 << " [shape=box, label=\"" << escape_dot(name)
       << "\\n(p=" << fit.partition.size(c) << ")\"];\n";
    os << "  f" << c + 1 << " [shape=ellipse, label=\"F" << c + 1 << "\"];\n";
    os << "  f" << c + 1 << " -> c" << c + 1 << ";\n";
  }
  for (const EdgeLabel& e : edge_labels(report)) {
    const char* color = !e.significant ? "gray"
                        : e.sign == EdgeSign::Positive ? "red"
                                                       : "blue";
    const char* style = e.significant ? "solid" : "dashed";
    os << "  f" << e.from + 1 << " -> f" << e.to + 1 << " [dir=both, color=" << color
       << ", style=" << style << ", label=\"" << short_real(e.estimate) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace scfa
