#include "relsize/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "relsize/error.hpp"
#include "relsize/parallel.hpp"

namespace relsize {

using nlohmann::json;

Raster<double> to_double(const DepthMap& map) {
  Raster<double> out(map.width, map.height);
  std::copy(map.data.begin(), map.data.end(), out.data.begin());
  return out;
}

Raster<double> resize_nearest(const Raster<double>& src, int width, int height) {
  if (src.width <= 0 || src.height <= 0) throw ContractError("cannot resize an empty raster");
  Raster<double> out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(src.height - 1, static_cast<int>((y + 0.5) * src.height / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(src.width - 1, static_cast<int>((x + 0.5) * src.width / width));
      out(x, y) = src(sx, sy);
    }
  }
  return out;
}

namespace {

AlignedPrediction apply_without_fit(const Raster<double>& pred, const Raster<double>& gt, const LabelMap& mask,
                                    DepthSpace space, double clamp_eps) {
  AlignedPrediction out;
  out.depth = Raster<double>(gt.width, gt.height, 0.0);
  double sse = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask.data[i] <= 0) continue;
    const double target = space == DepthSpace::depth ? gt.data[i] : 1.0 / gt.data[i];
    sse += (pred.data[i] - target) * (pred.data[i] - target);
    ++n;
    double v = pred.data[i];
    if (v < clamp_eps) {
      v = clamp_eps;
      ++out.clamped_pixels;
    }
    out.depth.data[i] = space == DepthSpace::depth ? v : 1.0 / v;
  }
  out.fit = {1.0, 0.0, false, n ? sse / static_cast<double>(n) : 0.0};
  return out;
}

}  // namespace

EvaluationRecord evaluate_pair(const DepthMap& gt_map, const LabelMap& mask, const Raster<double>& prediction,
                               DepthSpace space, const EvaluationOptions& options, std::span<const int> object_ids) {
  if (!gt_map.same_shape(mask)) throw DataError("ground-truth depth and mask differ in size");
  for (double v : prediction.data)
    if (!std::isfinite(v)) throw DataError("prediction contains non-finite values");

  Raster<double> pred;
  if (prediction.same_shape(gt_map)) {
    pred = prediction;
  } else if (options.resample_prediction) {
    pred = resize_nearest(prediction, gt_map.width, gt_map.height);
  } else {
    throw DataError(fmt::format("prediction is {}x{} but ground truth is {}x{}", prediction.width, prediction.height,
                                gt_map.width, gt_map.height));
  }
  if (std::none_of(mask.data.begin(), mask.data.end(), [](int v) { return v > 0; }))
    throw DataError("object mask is empty");

  const Raster<double> gt = to_double(gt_map);
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask.data[i] > 0 && !(gt.data[i] > 0.0)) throw DataError("ground truth is not positive on a masked pixel");

  const AlignedPrediction aligned = options.alignment == AlignMode::scale_shift
                                        ? align_prediction(pred, gt, mask, space, options.clamp_eps)
                                        : apply_without_fit(pred, gt, mask, space, options.clamp_eps);

  EvaluationRecord rec;
  rec.alignment = aligned.fit;
  rec.degenerate = aligned.fit.degenerate;
  rec.clamped_pixels = aligned.clamped_pixels;
  rec.plain = compute_metrics(extract_samples(gt, aligned.depth, mask));
  rec.balanced = compute_metrics(balance_objects(gt, aligned.depth, mask, options.balance, object_ids));
  return rec;
}

DatasetEvaluation evaluate_dataset(const fs::path& dataset_dir, const Manifest& manifest,
                                   const PredictionSidecar& sidecar, const EvaluationOptions& options, int jobs,
                                   std::size_t limit) {
  std::map<std::string, const PredictionRecord*> by_scene;
  for (const auto& r : sidecar.records) by_scene.emplace(r.scene_id, &r);
  std::set<std::string> known;
  for (const auto& s : manifest.scenes) known.insert(s.scene.scene_id);
  for (const auto& [id, _] : by_scene)
    if (!known.contains(id)) throw DataError(fmt::format("prediction for unknown scene '{}' ({})", id, sidecar.method));

  const std::size_t n = limit ? std::min(limit, manifest.scenes.size()) : manifest.scenes.size();
  DatasetEvaluation out;
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < n; ++i) {
    if (by_scene.contains(manifest.scenes[i].scene.scene_id))
      todo.push_back(i);
    else
      out.missing.push_back(manifest.scenes[i].scene.scene_id);
  }

  out.records.resize(todo.size());
  parallel_for(todo.size(), jobs, [&](std::size_t k) {
    const SceneRecord& sr = manifest.scenes[todo[k]];
    const PredictionRecord& pr = *by_scene.at(sr.scene.scene_id);
    const DepthMap gt = read_pfm(dataset_dir / sr.depth);
    const LabelMap mask = read_mask_png(dataset_dir / sr.mask);
    const Prediction p = read_prediction(pr);
    std::vector<int> ids;
    for (const auto& c : sr.scene.objects) ids.push_back(c.object_id);
    try {
      EvaluationRecord rec = evaluate_pair(gt, mask, to_double(p.map), p.space, options, ids);
      rec.method = sidecar.method;
      rec.scene_id = sr.scene.scene_id;
      out.records[k] = std::move(rec);
    } catch (const DataError& e) {
      throw DataError(fmt::format("{} / {}: {}", sidecar.method, sr.scene.scene_id, e.what()));
    }
  });
  return out;
}

std::vector<MethodSummary> aggregate(std::span<const EvaluationRecord> records, Aggregation aggregation) {
  if (records.empty()) throw DataError("no evaluation records to aggregate");

  std::map<std::string, std::vector<const EvaluationRecord*>> groups;
  for (const auto& r : records) groups[r.method].push_back(&r);

  const auto combine = [&](const std::vector<const EvaluationRecord*>& recs, MetricSet EvaluationRecord::*mode) {
    // Sum in a fixed order so the result does not depend on record order.
    std::vector<const MetricSet*> sets;
    for (const auto* r : recs) sets.push_back(&(r->*mode));
    std::sort(sets.begin(), sets.end(), [](const MetricSet* a, const MetricSet* b) {
      return std::tie(a->delta1, a->delta2, a->delta3, a->abs_rel, a->sq_rel, a->rmse, a->rmse_log, a->n_eff) <
             std::tie(b->delta1, b->delta2, b->delta3, b->abs_rel, b->sq_rel, b->rmse, b->rmse_log, b->n_eff);
    });
    MetricSet acc;
    double total_w = 0.0;
    for (const MetricSet* m : sets) {
      const double w = aggregation == Aggregation::macro ? 1.0 : m->n_eff;
      acc.delta1 += w * m->delta1;
      acc.delta2 += w * m->delta2;
      acc.delta3 += w * m->delta3;
      acc.abs_rel += w * m->abs_rel;
      acc.sq_rel += w * m->sq_rel;
      if (aggregation == Aggregation::macro) {
        acc.rmse += m->rmse;
        acc.rmse_log += m->rmse_log;
      } else {
        acc.rmse += w * m->rmse * m->rmse;
        acc.rmse_log += w * m->rmse_log * m->rmse_log;
      }
      acc.n_eff += m->n_eff;
      total_w += w;
    }
    acc.delta1 /= total_w;
    acc.delta2 /= total_w;
    acc.delta3 /= total_w;
    acc.abs_rel /= total_w;
    acc.sq_rel /= total_w;
    acc.rmse /= total_w;
    acc.rmse_log /= total_w;
    if (aggregation == Aggregation::pooled) {
      acc.rmse = std::sqrt(acc.rmse);
      acc.rmse_log = std::sqrt(acc.rmse_log);
    }
    return acc;
  };

  std::vector<MethodSummary> out;
  for (const auto& [method, recs] : groups) {
    MethodSummary s;
    s.method = method;
    s.images = recs.size();
    s.degenerate = static_cast<std::size_t>(std::count_if(recs.begin(), recs.end(), [](auto* r) { return r->degenerate; }));
    s.plain = combine(recs, &EvaluationRecord::plain);
    s.balanced = combine(recs, &EvaluationRecord::balanced);
    out.push_back(std::move(s));
  }
  return out;
}

json to_json(const MetricSet& m) {
  return {{"delta1", m.delta1}, {"delta2", m.delta2},     {"delta3", m.delta3},     {"abs_rel", m.abs_rel},
          {"sq_rel", m.sq_rel}, {"rmse", m.rmse},         {"rmse_log", m.rmse_log}, {"n_eff", m.n_eff}};
}

MetricSet metric_set_from_json(const json& j) {
  MetricSet m;
  m.delta1 = j.at("delta1").get<double>();
  m.delta2 = j.at("delta2").get<double>();
  m.delta3 = j.at("delta3").get<double>();
  m.abs_rel = j.at("abs_rel").get<double>();
  m.sq_rel = j.at("sq_rel").get<double>();
  m.rmse = j.at("rmse").get<double>();
  m.rmse_log = j.at("rmse_log").get<double>();
  m.n_eff = j.at("n_eff").get<double>();
  return m;
}

json to_json(const EvaluationRecord& r) {
  return {{"method", r.method},
          {"scene_id", r.scene_id},
          {"alignment",
           {{"scale", r.alignment.scale},
            {"shift", r.alignment.shift},
            {"degenerate", r.alignment.degenerate},
            {"residual", r.alignment.residual}}},
          {"plain", to_json(r.plain)},
          {"balanced", to_json(r.balanced)},
          {"flags", {{"degenerate", r.degenerate}, {"clamped_pixels", r.clamped_pixels}}}};
}

EvaluationRecord evaluation_record_from_json(const json& j) {
  EvaluationRecord r;
  r.method = j.at("method").get<std::string>();
  r.scene_id = j.at("scene_id").get<std::string>();
  const json& a = j.at("alignment");
  r.alignment = {a.at("scale").get<double>(), a.at("shift").get<double>(), a.at("degenerate").get<bool>(),
                 a.at("residual").get<double>()};
  r.plain = metric_set_from_json(j.at("plain"));
  r.balanced = metric_set_from_json(j.at("balanced"));
  r.degenerate = j.at("flags").at("degenerate").get<bool>();
  r.clamped_pixels = j.at("flags").at("clamped_pixels").get<int>();
  return r;
}

void write_records(std::span<const EvaluationRecord> records, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path.string());
  for (const auto& r : records) out << to_json(r).dump() << '\n';
  if (!out) throw IoError("records write failed", path.string());
}

std::vector<EvaluationRecord> load_records(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError(path.string());
  std::vector<EvaluationRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(evaluation_record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw FormatError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  return out;
}

}  // namespace relsize
