#pragma once

#include <span>
#include <vector>

#include "relsize/raster.hpp"

namespace relsize {

struct PixelSample {
  double gt = 0.0;
  double pred = 0.0;
  int object_id = 0;
  double weight = 1.0;
};

/// Eigen et al. accuracy/error metrics over a (weighted) pixel set.
struct MetricSet {
  double delta1 = 0.0, delta2 = 0.0, delta3 = 0.0;
  double abs_rel = 0.0, sq_rel = 0.0, rmse = 0.0, rmse_log = 0.0;
  double n_eff = 0.0;  ///< total weight

  bool operator==(const MetricSet&) const = default;
};

/// δ-accuracy base; δk counts samples with max(pred/gt, gt/pred) < 1.25^k (strict).
inline constexpr double kDeltaBase = 1.25;

/// Throws ContractError for an empty set or any non-positive gt, pred or weight.
MetricSet compute_metrics(std::span<const PixelSample> samples);

/// One unit-weight sample per pixel with mask > 0, in row-major order.
std::vector<PixelSample> extract_samples(const Raster<double>& gt, const Raster<double>& pred, const LabelMap& mask);

enum class BalanceMode { resample, weight };

/// Every sample of object i gets weight 1 / n_i, so each object contributes a total weight of 1.
std::vector<PixelSample> balance_by_weight(std::span<const PixelSample> samples);

/// Upsamples every object's bounding-box crop (mask, gt, pred) with nearest-neighbour by
/// sqrt(n_max / n_i) and re-extracts its pixels, so all objects end up with about n_max pixels.
std::vector<PixelSample> balance_by_resampling(const Raster<double>& gt, const Raster<double>& pred,
                                               const LabelMap& mask);

/// Balanced samples for a frame. When expected_ids is non-empty, an id absent from the mask is
/// an error naming that object.
std::vector<PixelSample> balance_objects(const Raster<double>& gt, const Raster<double>& pred, const LabelMap& mask,
                                         BalanceMode mode, std::span<const int> expected_ids = {});

}  // namespace relsize
