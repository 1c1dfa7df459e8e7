// relsize: generate the relative-size dataset, evaluate depth predictions, render reports.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "relsize/dataset.hpp"
#include "relsize/depth_io.hpp"
#include "relsize/error.hpp"
#include "relsize/evaluator.hpp"
#include "relsize/parallel.hpp"
#include "relsize/report.hpp"
#include "relsize/run_config.hpp"
#include "relsize_oracles/oracles.hpp"

namespace fs = std::filesystem;
using namespace relsize;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Options {
  std::optional<std::string> config;
  std::vector<std::string> overrides;
  std::string out;
  std::string dataset;
  std::vector<std::string> preds;
  std::optional<std::string> records;
  std::optional<std::string> mode;
  std::optional<std::string> balance;
  std::optional<std::string> formats;
  std::optional<std::size_t> limit;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  int verbosity = 0;
};

void log(const Options& o, int level, const std::string& msg) {
  if (o.verbosity >= level) std::cerr << msg << '\n';
}

RunSettings settings_from(const Options& o) {
  nlohmann::json config = load_run_json(o.config ? std::optional<fs::path>(*o.config) : std::nullopt);
  for (const auto& assignment : o.overrides) apply_override(config, assignment);
  if (o.limit) config["limit"] = *o.limit;
  if (o.seed) config["seed"] = *o.seed;
  if (o.mode) config["evaluation"]["mode"] = *o.mode;
  if (o.balance) config["evaluation"]["balance"] = *o.balance;
  if (o.formats) config["evaluation"]["formats"] = *o.formats;
  return run_settings_from_json(config);
}

int run_generate(const Options& o) {
  const RunSettings s = settings_from(o);
  const auto start = std::chrono::steady_clock::now();
  const Manifest m = generate_dataset(s.sweep, o.out, o.jobs);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << fmt::format("generated {} scenes into {} ({}, {:.1f} s)\n", m.scenes.size(), o.out, m.dataset_id, secs);
  return kOk;
}

int run_evaluate(const Options& o) {
  const RunSettings s = settings_from(o);
  const fs::path dataset(o.dataset);
  const Manifest manifest = load_manifest(dataset / kManifestName);

  std::vector<EvaluationRecord> all;
  for (const auto& pred_path : o.preds) {
    const PredictionSidecar sidecar = load_sidecar(pred_path);
    const DatasetEvaluation ev = evaluate_dataset(dataset, manifest, sidecar, s.evaluation, o.jobs, s.sweep.limit.value_or(0));
    if (!ev.missing.empty())
      std::cerr << fmt::format("warning: {} has no prediction for {} scene(s), first: {}\n", sidecar.method,
                               ev.missing.size(), ev.missing.front());
    log(o, 1, fmt::format("{}: {} images evaluated", sidecar.method, ev.records.size()));
    all.insert(all.end(), ev.records.begin(), ev.records.end());
  }

  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) throw IoError("cannot create directory", o.out);
  const fs::path out = fs::path(o.out) / "records.jsonl";
  write_records(all, out);
  std::cout << fmt::format("wrote {} records to {}\n", all.size(), out.string());
  return kOk;
}

int run_report(const Options& o) {
  const RunSettings s = settings_from(o);
  const fs::path records_path = o.records ? fs::path(*o.records) : fs::path(o.out) / "records.jsonl";
  const auto records = load_records(records_path);
  const auto summaries = aggregate(records, s.aggregation);
  render_report(summaries, o.out, s.formats, s.modes);
  for (const auto& sm : summaries)
    std::cout << fmt::format("{:<28} images={:<6} plain d1={:.4f} balanced d1={:.4f} degenerate={}\n", sm.method,
                             sm.images, sm.plain.delta1, sm.balanced.delta1, sm.degenerate);
  return kOk;
}

int run_selftest(const Options&) {
  bool ok = true;
  for (const auto& r : oracle::run_all_suites()) {
    std::cout << fmt::format("[{}] {:<28} {} cases, {} failures, {:.2f} s  {}\n", r.passed ? "PASS" : "FAIL", r.name,
                             r.cases, r.failures, r.seconds, r.detail);
    ok = ok && r.passed;
  }
  return ok ? kOk : kInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative-size depth-cue benchmark: dataset generation and depth-prediction evaluation"};
  app.require_subcommand(1, 1);
  Options o;
  app.add_flag("-v,--verbose", o.verbosity, "Increase log verbosity");

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON config file (sweep + evaluation options)");
    sub->add_option("--set", o.overrides, "Override a config key: dotted.key=value (repeatable)");
    sub->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  };

  CLI::App* gen = app.add_subcommand("generate", "Render the synthetic dataset");
  add_common(gen);
  gen->add_option("--out", o.out, "Output directory")->required();
  gen->add_option("--limit", o.limit, "Maximum number of scenes");
  gen->add_option("--seed", o.seed, "Sweep seed");

  CLI::App* eval = app.add_subcommand("evaluate", "Evaluate prediction sidecars against a dataset");
  add_common(eval);
  eval->add_option("--dataset", o.dataset, "Dataset directory (with manifest.jsonl)")->required();
  eval->add_option("--pred", o.preds, "Prediction sidecar JSON, one per method (repeatable)")->required();
  eval->add_option("--out", o.out, "Directory for records.jsonl")->required();
  eval->add_option("--balance", o.balance, "Object balancing: resample|weight");
  eval->add_option("--mode", o.mode, "plain|balanced|both");
  eval->add_option("--limit", o.limit, "Evaluate only the first N manifest scenes");

  CLI::App* rep = app.add_subcommand("report", "Aggregate records and write CSV/JSON/SVG reports");
  add_common(rep);
  rep->add_option("--out", o.out, "Report directory (records.jsonl is read from here by default)")->required();
  rep->add_option("--records", o.records, "Records file to aggregate");
  rep->add_option("--mode", o.mode, "plain|balanced|both");
  rep->add_option("--formats", o.formats, "Comma-separated: csv,json,svg");

  CLI::App* self = app.add_subcommand("selftest", "Run the oracle suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return run_generate(o);
    if (eval->parsed()) return run_evaluate(o);
    if (rep->parsed()) return run_report(o);
    if (self->parsed()) return run_selftest(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
