#include "relsize/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "relsize/error.hpp"

namespace relsize {

AlignmentResult fit_scale_shift(std::span<const double> pred, std::span<const double> gt) {
  if (pred.size() != gt.size()) throw ContractError("prediction and ground truth differ in length");
  const std::size_t n = pred.size();
  if (n < 2) throw ContractError("alignment needs at least two samples");

  double sum_p = 0.0, sum_g = 0.0, sum_pp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(gt[i] > 0.0) || !std::isfinite(gt[i])) throw ContractError("ground truth must be finite and positive");
    if (!std::isfinite(pred[i])) throw ContractError("prediction must be finite");
    sum_p += pred[i];
    sum_g += gt[i];
    sum_pp += pred[i] * pred[i];
  }
  const double nd = static_cast<double>(n);
  const double mean_p = sum_p / nd;
  const double mean_g = sum_g / nd;

  // Centered moments: n * Spp equals the normal-equation determinant n*Σp² − (Σp)².
  double spp = 0.0, spg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dp = pred[i] - mean_p;
    spp += dp * dp;
    spg += dp * (gt[i] - mean_g);
  }

  AlignmentResult r;
  if (std::abs(nd * spp) <= kDegeneracyEps * nd * std::max(sum_pp, 1.0)) {
    r.degenerate = true;
    r.scale = 0.0;
    r.shift = mean_g;
  } else {
    r.scale = spg / spp;
    r.shift = mean_g - r.scale * mean_p;
  }

  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = r.scale * pred[i] + r.shift - gt[i];
    sse += e * e;
  }
  r.residual = sse / nd;
  return r;
}

AlignedPrediction align_prediction(const Raster<double>& pred, const Raster<double>& gt, const LabelMap& mask,
                                   DepthSpace space, double clamp_eps) {
  if (!pred.same_shape(gt) || !mask.same_shape(gt)) throw ContractError("prediction, ground truth and mask differ in size");
  if (!(clamp_eps > 0.0)) throw ContractError("clamp_eps must be positive");

  std::vector<double> p, g;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask.data[i] <= 0) continue;
    p.push_back(pred.data[i]);
    g.push_back(space == DepthSpace::depth ? gt.data[i] : 1.0 / gt.data[i]);
  }
  if (p.empty()) throw ContractError("alignment mask is empty");

  AlignedPrediction out;
  if (p.size() == 1) {
    // A single pixel fixes only the shift; treat like a constant prediction.
    out.fit = {0.0, g.front(), true, 0.0};
  } else {
    out.fit = fit_scale_shift(p, g);
  }

  out.depth = Raster<double>(gt.width, gt.height, 0.0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask.data[i] <= 0) continue;
    double v = out.fit.scale * pred.data[i] + out.fit.shift;
    if (v < clamp_eps || !std::isfinite(v)) {
      v = clamp_eps;
      ++out.clamped_pixels;
    }
    out.depth.data[i] = space == DepthSpace::depth ? v : 1.0 / v;
  }
  return out;
}

}  // namespace relsize
