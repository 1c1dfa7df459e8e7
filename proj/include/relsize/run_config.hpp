#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "relsize/dataset.hpp"
#include "relsize/evaluator.hpp"
#include "relsize/report.hpp"

namespace relsize {

/// Everything a run needs besides paths: the sweep plus evaluation/report options.
struct RunSettings {
  SweepConfig sweep;
  EvaluationOptions evaluation;
  Aggregation aggregation = Aggregation::macro;
  ReportModes modes;
  ReportFormats formats;
};

/// Defaults as JSON; the config-file schema is this object with any subset of keys.
nlohmann::json default_run_json();

/// Defaults merged with the file at `path` (if any). Unknown keys raise ConfigError.
nlohmann::json load_run_json(const std::optional<std::filesystem::path>& path);

/// Applies "dotted.key=value". The value is parsed as JSON, falling back to a plain string.
/// Throws UsageError for a malformed assignment or a key the schema does not know.
void apply_override(nlohmann::json& config, std::string_view assignment);

RunSettings run_settings_from_json(const nlohmann::json& config);

BalanceMode parse_balance_mode(std::string_view text);
AlignMode parse_align_mode(std::string_view text);
Aggregation parse_aggregation(std::string_view text);
/// "plain" | "balanced" | "both"
ReportModes parse_report_modes(std::string_view text);
/// Comma-separated subset of csv, json, svg.
ReportFormats parse_report_formats(std::string_view text);

}  // namespace relsize
