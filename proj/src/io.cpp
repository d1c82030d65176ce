#include "subvarx/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace subvarx {

namespace {

/// 17 significant digits: enough to reproduce any double bit for bit.
std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

double parse_double(std::string_view token, const std::filesystem::path &path, long line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw IoError(path.string() + ":" + std::to_string(line) + ": malformed number '" + std::string(token) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> data_lines(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  for (auto &line : lines)
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
  while (!lines.empty() && lines.back().empty())
    lines.pop_back();
  return lines;
}

std::string spring_label(const std::optional<int> &spring) {
  return spring ? "k" + std::to_string(*spring) : std::string();
}

nlohmann::json spring_to_json(const std::optional<int> &spring) {
  if (!spring)
    return nullptr;
  return spring_label(spring);
}

std::optional<int> spring_from_json(const nlohmann::json &value) {
  if (value.is_null())
    return std::nullopt;
  const std::string label = value.get<std::string>();
  if (label.size() < 2 || label[0] != 'k')
    throw ConfigError("malformed spring label '" + label + "', expected e.g. k4");
  return std::stoi(label.substr(1));
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd &matrix) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < matrix.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < matrix.cols(); ++c)
      row.push_back(matrix(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json &doc, const std::string &name) {
  if (!doc.is_array() || doc.empty() || !doc[0].is_array())
    throw ConfigError("field '" + name + "' must be an array of arrays");
  const long rows = static_cast<long>(doc.size());
  const long cols = static_cast<long>(doc[0].size());
  Eigen::MatrixXd out(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (static_cast<long>(doc[r].size()) != cols)
      throw ConfigError("field '" + name + "' row " + std::to_string(r + 1) + " has " +
                        std::to_string(doc[r].size()) + " entries, expected " + std::to_string(cols));
    for (long c = 0; c < cols; ++c)
      out(r, c) = doc[r][c].get<double>();
  }
  return out;
}

Eigen::VectorXd vector_from_json(const nlohmann::json &doc, const std::string &name) {
  if (!doc.is_array())
    throw ConfigError("field '" + name + "' must be an array");
  Eigen::VectorXd out(doc.size());
  for (long i = 0; i < out.size(); ++i)
    out[i] = doc[i].get<double>();
  return out;
}

const nlohmann::json &field(const nlohmann::json &doc, const char *name) {
  const auto it = doc.find(name);
  if (it == doc.end())
    throw ConfigError(std::string("missing field '") + name + "'");
  return *it;
}

} // namespace

std::string displacement_csv(const DisplacementRecord &record) {
  std::string out = "t";
  for (int label : record.dof_labels)
    out += ",z" + std::to_string(label);
  out += "\n";
  out.reserve(out.size() + static_cast<std::size_t>(record.sample_count()) *
                               (static_cast<std::size_t>(record.channel_count()) + 1) * 25);
  for (long i = 0; i < record.sample_count(); ++i) {
    out += format_double(static_cast<double>(i) * record.dt);
    for (int j = 0; j < record.channel_count(); ++j) {
      out += ',';
      out += format_double(record.data(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_displacement_csv(const std::filesystem::path &path, const DisplacementRecord &record) {
  write_text(path, displacement_csv(record));
}

DisplacementRecord read_displacement_csv(const std::filesystem::path &path) {
  const std::string text = read_text(path);
  const std::vector<std::string_view> lines = data_lines(text);
  if (lines.size() < 4)
    throw TooFewSamples(path.string() + ": a displacement record needs at least 3 samples");
  const std::vector<std::string_view> header = split(lines[0], ',');
  if (header.size() < 2 || header[0] != "t")
    throw IoError(path.string() + ": expected header 't,z<dof>,...'");

  DisplacementRecord record;
  for (std::size_t j = 1; j < header.size(); ++j) {
    const std::string_view name = header[j];
    if (name.size() < 2 || name[0] != 'z')
      throw IoError(path.string() + ": malformed channel name '" + std::string(name) + "'");
    record.dof_labels.push_back(static_cast<int>(parse_double(name.substr(1), path, 1)));
  }

  const long rows = static_cast<long>(lines.size()) - 1;
  const int channels = static_cast<int>(record.dof_labels.size());
  record.data.resize(rows, channels);
  double second_t = 0.0;
  for (long i = 0; i < rows; ++i) {
    const std::vector<std::string_view> tokens = split(lines[i + 1], ',');
    if (static_cast<int>(tokens.size()) != channels + 1)
      throw IoError(path.string() + ":" + std::to_string(i + 2) + ": expected " + std::to_string(channels + 1) +
                    " columns, got " + std::to_string(tokens.size()));
    const double t = parse_double(tokens[0], path, i + 2);
    if (i == 1)
      second_t = t;
    for (int j = 0; j < channels; ++j)
      record.data(i, j) = parse_double(tokens[j + 1], path, i + 2);
  }
  record.dt = second_t;
  return record;
}

std::string force_csv(const ForceRecord &record) {
  std::string out = "t,f\n";
  out.reserve(out.size() + static_cast<std::size_t>(record.samples.size()) * 50);
  for (long i = 0; i < record.samples.size(); ++i) {
    out += format_double(static_cast<double>(i) * record.dt);
    out += ',';
    out += format_double(record.samples[i]);
    out += '\n';
  }
  return out;
}

void write_force_csv(const std::filesystem::path &path, const ForceRecord &record) {
  write_text(path, force_csv(record));
}

ForceRecord read_force_csv(const std::filesystem::path &path) {
  const std::string text = read_text(path);
  const std::vector<std::string_view> lines = data_lines(text);
  if (lines.size() < 3)
    throw TooFewSamples(path.string() + ": a force record needs at least 2 samples");
  if (lines[0] != "t,f")
    throw IoError(path.string() + ": expected header 't,f'");

  ForceRecord record;
  const long rows = static_cast<long>(lines.size()) - 1;
  record.samples.resize(rows);
  double second_t = 0.0;
  for (long i = 0; i < rows; ++i) {
    const std::vector<std::string_view> tokens = split(lines[i + 1], ',');
    if (tokens.size() != 2)
      throw IoError(path.string() + ":" + std::to_string(i + 2) + ": expected 2 columns, got " +
                    std::to_string(tokens.size()));
    const double t = parse_double(tokens[0], path, i + 2);
    if (i == 1)
      second_t = t;
    record.samples[i] = parse_double(tokens[1], path, i + 2);
  }
  record.dt = second_t;
  return record;
}

nlohmann::json chain_to_json(const ChainModel &model) {
  nlohmann::json doc;
  doc["masses"] = std::vector<double>(model.masses.begin(), model.masses.end());
  doc["stiffnesses"] = std::vector<double>(model.stiffnesses.begin(), model.stiffnesses.end());
  return doc;
}

ChainModel chain_from_json(const nlohmann::json &doc) {
  return build_chain(vector_from_json(field(doc, "masses"), "masses"),
                     vector_from_json(field(doc, "stiffnesses"), "stiffnesses"));
}

nlohmann::json varx_to_json(const VarxModel &model) {
  nlohmann::json doc;
  doc["ts"] = model.ts;
  doc["a1"] = matrix_to_json(model.a1);
  doc["a2"] = matrix_to_json(model.a2);
  doc["b1"] = matrix_to_json(model.b1);
  doc["endogenous_labels"] = model.endogenous_labels;
  doc["exogenous_labels"] = model.exogenous_labels;
  return doc;
}

VarxModel varx_from_json(const nlohmann::json &doc) {
  VarxModel model;
  model.ts = field(doc, "ts").get<double>();
  model.a1 = matrix_from_json(field(doc, "a1"), "a1");
  model.a2 = matrix_from_json(field(doc, "a2"), "a2");
  model.b1 = matrix_from_json(field(doc, "b1"), "b1");
  model.endogenous_labels = field(doc, "endogenous_labels").get<std::vector<int>>();
  model.exogenous_labels = field(doc, "exogenous_labels").get<std::vector<int>>();

  const long q = model.a1.rows();
  if (model.a1.cols() != q || model.a2.rows() != q || model.a2.cols() != q)
    throw InvalidModel("a1 and a2 must be square matrices of equal size");
  if (model.b1.rows() != q || model.b1.cols() != 2)
    throw InvalidModel("b1 must have " + std::to_string(q) + " rows and 2 columns");
  if (static_cast<long>(model.endogenous_labels.size()) != q || model.exogenous_labels.size() != 2)
    throw InvalidModel("label counts must match the coefficient dimensions");
  if (!(model.ts > 0.0))
    throw InvalidModel("ts must be strictly positive");
  return model;
}

nlohmann::json diagnostics_to_json(const EstimationDiagnostics &diagnostics) {
  nlohmann::json doc;
  doc["residual_rms"] = std::vector<double>(diagnostics.residual_rms.begin(), diagnostics.residual_rms.end());
  doc["condition_indicator"] = diagnostics.condition_indicator;
  doc["samples_used"] = diagnostics.samples_used;
  return doc;
}

EstimationDiagnostics diagnostics_from_json(const nlohmann::json &doc) {
  EstimationDiagnostics diagnostics;
  diagnostics.residual_rms = vector_from_json(field(doc, "residual_rms"), "residual_rms");
  diagnostics.condition_indicator = field(doc, "condition_indicator").get<double>();
  diagnostics.samples_used = field(doc, "samples_used").get<long>();
  return diagnostics;
}

nlohmann::json report_to_json(const DamageReport &report) {
  nlohmann::json doc;
  doc["verdict"] = to_string(report.verdict);
  doc["spring"] = spring_to_json(report.localized_spring);
  doc["severity"] = report.severity_estimate ? nlohmann::json(*report.severity_estimate) : nlohmann::json(nullptr);
  doc["threshold"] = report.threshold;
  doc["baseline_id"] = report.indicators.baseline_id;
  doc["endogenous_labels"] = report.indicators.endogenous_labels;
  nlohmann::json indicators;
  for (const auto &[element, di] : report.indicators.values)
    indicators[element_name(element)] = di;
  doc["indicators"] = indicators;
  return doc;
}

DamageReport report_from_json(const nlohmann::json &doc) {
  DamageReport report;
  report.verdict = verdict_from_string(field(doc, "verdict").get<std::string>());
  report.localized_spring = spring_from_json(field(doc, "spring"));
  const nlohmann::json &severity = field(doc, "severity");
  if (!severity.is_null())
    report.severity_estimate = severity.get<double>();
  report.threshold = field(doc, "threshold").get<double>();
  report.indicators.baseline_id = field(doc, "baseline_id").get<std::string>();
  report.indicators.endogenous_labels = field(doc, "endogenous_labels").get<std::vector<int>>();
  for (const auto &[name, di] : field(doc, "indicators").items())
    report.indicators.values[parse_element_name(name)] = di.get<double>();
  return report;
}

nlohmann::json suite_result_to_json(const SuiteResult &result) {
  nlohmann::json doc;
  doc["baseline_seed"] = result.baseline_seed;
  doc["calibration_seeds"] = result.calibration_seeds;
  doc["threshold"] = result.threshold;
  doc["config_digest"] = result.config_digest;
  nlohmann::json rows = nlohmann::json::array();
  for (const ScenarioRow &row : result.rows) {
    nlohmann::json entry;
    entry["scenario"] = row.scenario;
    entry["seed"] = row.seed;
    entry["injected_spring"] = spring_to_json(row.injected_spring);
    entry["injected_severity"] = row.injected_severity;
    entry["expected_verdict"] = to_string(row.expected_verdict);
    entry["expected_spring"] = spring_to_json(row.expected_spring);
    entry["pass"] = row.pass;
    entry["report"] = report_to_json(row.report);
    entry["diagnostics"] = diagnostics_to_json(row.diagnostics);
    rows.push_back(std::move(entry));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

SuiteResult suite_result_from_json(const nlohmann::json &doc) {
  SuiteResult result;
  result.baseline_seed = field(doc, "baseline_seed").get<std::uint64_t>();
  result.calibration_seeds = field(doc, "calibration_seeds").get<std::vector<std::uint64_t>>();
  result.threshold = field(doc, "threshold").get<double>();
  result.config_digest = field(doc, "config_digest").get<std::string>();
  for (const nlohmann::json &entry : field(doc, "rows")) {
    ScenarioRow row;
    row.scenario = field(entry, "scenario").get<std::string>();
    row.seed = field(entry, "seed").get<std::uint64_t>();
    row.injected_spring = spring_from_json(field(entry, "injected_spring"));
    row.injected_severity = field(entry, "injected_severity").get<double>();
    row.expected_verdict = verdict_from_string(field(entry, "expected_verdict").get<std::string>());
    row.expected_spring = spring_from_json(field(entry, "expected_spring"));
    row.pass = field(entry, "pass").get<bool>();
    row.report = report_from_json(field(entry, "report"));
    row.diagnostics = diagnostics_from_json(field(entry, "diagnostics"));
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string read_text(const std::filesystem::path &path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream)
    throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return std::move(buffer).str();
}

void write_text(const std::filesystem::path &path, const std::string &content) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream)
    throw IoError("cannot write '" + path.string() + "'");
  stream << content;
  if (!stream)
    throw IoError("failed while writing '" + path.string() + "'");
}

nlohmann::json load_json(const std::filesystem::path &path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception &error) {
    throw ConfigError(path.string() + ": " + error.what());
  }
}

} // namespace subvarx
