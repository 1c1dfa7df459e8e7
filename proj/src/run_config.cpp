#include "relsize/run_config.hpp"

#include <fstream>

#include <fmt/format.h>

#include "relsize/error.hpp"

namespace relsize {

using nlohmann::json;

namespace {

const json& evaluation_defaults() {
  static const json j = {{"balance", "resample"},          {"mode", "both"},
                         {"alignment", "scale-shift"},     {"clamp_eps", 1e-6},
                         {"resample_predictions", false},  {"aggregation", "macro"},
                         {"formats", "csv,json,svg"}};
  return j;
}

void merge_into(json& base, const json& patch, const std::string& where) {
  if (!patch.is_object()) throw ConfigError(fmt::format("{} must be a JSON object", where.empty() ? "config" : where));
  for (const auto& [key, value] : patch.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!base.contains(key)) throw ConfigError(fmt::format("unknown config key '{}'", path));
    json& slot = base[key];
    // Objects merge key by key, except a grid given as an explicit list replaces the range.
    if (slot.is_object() && value.is_object())
      merge_into(slot, value, path);
    else
      slot = value;
  }
}

}  // namespace

json default_run_json() {
  json j = to_json(SweepConfig{});
  j["evaluation"] = evaluation_defaults();
  return j;
}

json load_run_json(const std::optional<std::filesystem::path>& path) {
  json config = default_run_json();
  if (!path) return config;
  std::ifstream in(*path);
  if (!in) throw MissingFileError(path->string());
  json file;
  try {
    in >> file;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: invalid JSON ({})", path->string(), e.what()));
  }
  merge_into(config, file, "");
  return config;
}

void apply_override(json& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) throw UsageError(fmt::format("override '{}' is not key=value", assignment));
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));

  json* slot = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!slot->is_object() || !slot->contains(part)) throw UsageError(fmt::format("unknown config key '{}'", key));
    slot = &(*slot)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  *slot = std::move(value);
}

BalanceMode parse_balance_mode(std::string_view text) {
  if (text == "resample") return BalanceMode::resample;
  if (text == "weight") return BalanceMode::weight;
  throw ConfigError(fmt::format("unknown balance mode '{}' (resample|weight)", text));
}

AlignMode parse_align_mode(std::string_view text) {
  if (text == "scale-shift") return AlignMode::scale_shift;
  if (text == "none") return AlignMode::none;
  throw ConfigError(fmt::format("unknown alignment '{}' (scale-shift|none)", text));
}

Aggregation parse_aggregation(std::string_view text) {
  if (text == "macro") return Aggregation::macro;
  if (text == "pooled") return Aggregation::pooled;
  throw ConfigError(fmt::format("unknown aggregation '{}' (macro|pooled)", text));
}

ReportModes parse_report_modes(std::string_view text) {
  if (text == "plain") return {true, false};
  if (text == "balanced") return {false, true};
  if (text == "both") return {true, true};
  throw ConfigError(fmt::format("unknown mode '{}' (plain|balanced|both)", text));
}

ReportFormats parse_report_formats(std::string_view text) {
  ReportFormats f{false, false, false};
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string_view item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (item == "csv")
      f.csv = true;
    else if (item == "json")
      f.json = true;
    else if (item == "svg")
      f.svg = true;
    else
      throw ConfigError(fmt::format("unknown report format '{}' (csv,json,svg)", item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return f;
}

RunSettings run_settings_from_json(const json& config) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  json sweep = config;
  sweep.erase("evaluation");
  RunSettings s;
  s.sweep = sweep_config_from_json(sweep);

  json eval = evaluation_defaults();
  if (config.contains("evaluation")) merge_into(eval, config.at("evaluation"), "evaluation");
  try {
    s.evaluation.balance = parse_balance_mode(eval.at("balance").get<std::string>());
    s.evaluation.alignment = parse_align_mode(eval.at("alignment").get<std::string>());
    s.evaluation.clamp_eps = eval.at("clamp_eps").get<double>();
    s.evaluation.resample_prediction = eval.at("resample_predictions").get<bool>();
    s.aggregation = parse_aggregation(eval.at("aggregation").get<std::string>());
    s.modes = parse_report_modes(eval.at("mode").get<std::string>());
    s.formats = parse_report_formats(eval.at("formats").get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("bad evaluation setting: {}", e.what()));
  }
  if (!(s.evaluation.clamp_eps > 0.0)) throw ConfigError("evaluation.clamp_eps must be positive");
  return s;
}

}  // namespace relsize
