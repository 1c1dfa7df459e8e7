#include "relsize/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "relsize/error.hpp"

namespace relsize {

MetricSet compute_metrics(std::span<const PixelSample> samples) {
  if (samples.empty()) throw ContractError("cannot compute metrics over an empty sample set");

  const double t1 = kDeltaBase, t2 = t1 * t1, t3 = t2 * t1;
  double w_sum = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0, abs_rel = 0.0, sq_rel = 0.0, sq = 0.0, sq_log = 0.0;
  for (const PixelSample& s : samples) {
    if (!(s.gt > 0.0) || !(s.pred > 0.0) || !std::isfinite(s.gt) || !std::isfinite(s.pred))
      throw ContractError(fmt::format("samples need finite positive depths (gt={}, pred={})", s.gt, s.pred));
    if (!(s.weight > 0.0) || !std::isfinite(s.weight)) throw ContractError("sample weights must be positive");

    const double ratio = std::max(s.pred / s.gt, s.gt / s.pred);
    const double diff = s.gt - s.pred;
    const double log_diff = std::log(s.gt) - std::log(s.pred);
    w_sum += s.weight;
    if (ratio < t1) d1 += s.weight;
    if (ratio < t2) d2 += s.weight;
    if (ratio < t3) d3 += s.weight;
    abs_rel += s.weight * std::abs(diff) / s.gt;
    sq_rel += s.weight * diff * diff / s.gt;
    sq += s.weight * diff * diff;
    sq_log += s.weight * log_diff * log_diff;
  }

  MetricSet m;
  m.n_eff = w_sum;
  m.delta1 = d1 / w_sum;
  m.delta2 = d2 / w_sum;
  m.delta3 = d3 / w_sum;
  m.abs_rel = abs_rel / w_sum;
  m.sq_rel = sq_rel / w_sum;
  m.rmse = std::sqrt(sq / w_sum);
  m.rmse_log = std::sqrt(sq_log / w_sum);
  return m;
}

std::vector<PixelSample> extract_samples(const Raster<double>& gt, const Raster<double>& pred, const LabelMap& mask) {
  if (!gt.same_shape(pred) || !gt.same_shape(mask)) throw ContractError("sample maps differ in size");
  std::vector<PixelSample> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask.data[i] > 0) out.push_back({gt.data[i], pred.data[i], mask.data[i], 1.0});
  return out;
}

std::vector<PixelSample> balance_by_weight(std::span<const PixelSample> samples) {
  std::map<int, std::size_t> counts;
  for (const auto& s : samples) ++counts[s.object_id];
  std::vector<PixelSample> out(samples.begin(), samples.end());
  for (auto& s : out) s.weight = 1.0 / static_cast<double>(counts[s.object_id]);
  return out;
}

namespace {

struct ObjectExtent {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive
  std::size_t count = 0;
};

std::map<int, ObjectExtent> object_extents(const LabelMap& mask) {
  std::map<int, ObjectExtent> ext;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      const int id = mask(x, y);
      if (id <= 0) continue;
      auto [it, fresh] = ext.try_emplace(id, ObjectExtent{x, y, x, y, 0});
      auto& e = it->second;
      e.x0 = std::min(e.x0, x);
      e.x1 = std::max(e.x1, x);
      e.y0 = std::min(e.y0, y);
      e.y1 = std::max(e.y1, y);
      ++e.count;
    }
  }
  return ext;
}

}  // namespace

std::vector<PixelSample> balance_by_resampling(const Raster<double>& gt, const Raster<double>& pred,
                                               const LabelMap& mask) {
  if (!gt.same_shape(pred) || !gt.same_shape(mask)) throw ContractError("sample maps differ in size");
  const auto extents = object_extents(mask);
  std::size_t n_max = 0;
  for (const auto& [id, e] : extents) n_max = std::max(n_max, e.count);

  std::vector<PixelSample> out;
  for (const auto& [id, e] : extents) {
    const double factor = std::sqrt(static_cast<double>(n_max) / static_cast<double>(e.count));
    const int src_w = e.x1 - e.x0 + 1;
    const int src_h = e.y1 - e.y0 + 1;
    const int dst_w = std::max(1, static_cast<int>(std::lround(src_w * factor)));
    const int dst_h = std::max(1, static_cast<int>(std::lround(src_h * factor)));
    // Nearest neighbour: destination pixel centers mapped back into the source crop.
    for (int y = 0; y < dst_h; ++y) {
      const int sy = e.y0 + std::min(src_h - 1, static_cast<int>((y + 0.5) * src_h / dst_h));
      for (int x = 0; x < dst_w; ++x) {
        const int sx = e.x0 + std::min(src_w - 1, static_cast<int>((x + 0.5) * src_w / dst_w));
        if (mask(sx, sy) == id) out.push_back({gt(sx, sy), pred(sx, sy), id, 1.0});
      }
    }
  }
  return out;
}

std::vector<PixelSample> balance_objects(const Raster<double>& gt, const Raster<double>& pred, const LabelMap& mask,
                                         BalanceMode mode, std::span<const int> expected_ids) {
  if (!expected_ids.empty()) {
    const auto extents = object_extents(mask);
    for (int id : expected_ids)
      if (!extents.contains(id)) throw DataError(fmt::format("object {} has an empty mask", id));
  }
  if (mode == BalanceMode::weight) return balance_by_weight(extract_samples(gt, pred, mask));
  return balance_by_resampling(gt, pred, mask);
}

}  // namespace relsize
