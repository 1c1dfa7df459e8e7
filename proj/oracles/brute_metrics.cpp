#include <cmath>

#include "relsize_oracles/oracles.hpp"

namespace relsize::oracle {

MetricSet brute_force_metrics(std::span<const PixelSample> samples) {
  long double w = 0, d[3] = {0, 0, 0}, abs_rel = 0, sq_rel = 0, sq = 0, sq_log = 0;
  const long double thresholds[3] = {1.25L, 1.25L * 1.25L, 1.25L * 1.25L * 1.25L};
  for (const PixelSample& s : samples) {
    const long double g = s.gt, p = s.pred, wt = s.weight;
    w += wt;
    for (int k = 0; k < 3; ++k)
      if (p / g < thresholds[k] && g / p < thresholds[k]) d[k] += wt;
  }
  for (const PixelSample& s : samples) {
    const long double g = s.gt, p = s.pred, wt = s.weight;
    abs_rel += wt * std::fabs(g - p) / g;
    sq_rel += wt * (g - p) * (g - p) / g;
    sq += wt * (g - p) * (g - p);
    const long double lr = std::log(g / p);
    sq_log += wt * lr * lr;
  }
  MetricSet m;
  m.n_eff = static_cast<double>(w);
  m.delta1 = static_cast<double>(d[0] / w);
  m.delta2 = static_cast<double>(d[1] / w);
  m.delta3 = static_cast<double>(d[2] / w);
  m.abs_rel = static_cast<double>(abs_rel / w);
  m.sq_rel = static_cast<double>(sq_rel / w);
  m.rmse = static_cast<double>(std::sqrt(sq / w));
  m.rmse_log = static_cast<double>(std::sqrt(sq_log / w));
  return m;
}

}  // namespace relsize::oracle
