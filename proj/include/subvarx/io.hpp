#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "subvarx/chain_model.hpp"
#include "subvarx/damage.hpp"
#include "subvarx/estimate.hpp"
#include "subvarx/harness.hpp"
#include "subvarx/simulate.hpp"
#include "subvarx/varx_model.hpp"

namespace subvarx {

/// All floating-point values are written with 17 significant digits so a
/// write/read cycle reproduces every double bit for bit.

// --- CSV time series ---

/// Header `t,z1,...,zN` (labels taken from the record), one row per sample.
std::string displacement_csv(const DisplacementRecord &record);
void write_displacement_csv(const std::filesystem::path &path, const DisplacementRecord &record);
DisplacementRecord read_displacement_csv(const std::filesystem::path &path);

/// Header `t,f`.
std::string force_csv(const ForceRecord &record);
void write_force_csv(const std::filesystem::path &path, const ForceRecord &record);
ForceRecord read_force_csv(const std::filesystem::path &path);

// --- JSON documents ---

nlohmann::json chain_to_json(const ChainModel &model);
ChainModel chain_from_json(const nlohmann::json &doc);

nlohmann::json varx_to_json(const VarxModel &model);
VarxModel varx_from_json(const nlohmann::json &doc);

nlohmann::json diagnostics_to_json(const EstimationDiagnostics &diagnostics);
EstimationDiagnostics diagnostics_from_json(const nlohmann::json &doc);

nlohmann::json report_to_json(const DamageReport &report);
DamageReport report_from_json(const nlohmann::json &doc);

nlohmann::json suite_result_to_json(const SuiteResult &result);
SuiteResult suite_result_from_json(const nlohmann::json &doc);

// --- files ---

std::string read_text(const std::filesystem::path &path);
void write_text(const std::filesystem::path &path, const std::string &content);
nlohmann::json load_json(const std::filesystem::path &path);

} // namespace subvarx
