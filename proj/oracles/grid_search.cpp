#include <algorithm>
#include <cmath>
#include <numeric>

#include "relsize_oracles/oracles.hpp"

namespace relsize::oracle {

double alignment_residual(std::span<const double> pred, std::span<const double> gt, double scale, double shift) {
  long double sse = 0.0L;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const long double e = static_cast<long double>(scale) * pred[i] + shift - gt[i];
    sse += e * e;
  }
  return static_cast<double>(sse / pred.size());
}

GridFit grid_search_fit(std::span<const double> pred, std::span<const double> gt) {
  const double n = static_cast<double>(pred.size());
  const auto mean = [n](std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / n; };
  const auto spread = [n](std::span<const double> v, double m) {
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / n);
  };
  const double mp = mean(pred), mg = mean(gt);
  const double sp = spread(pred, mp), sg = spread(gt, mg);

  // Bracket: |scale| <= sg/sp by Cauchy-Schwarz; the shift follows from the means.
  double s_half = 2.0 * sg / std::max(sp, 1e-12) + 1.0;
  double t_half = std::abs(mg) + s_half * std::abs(mp) + 1.0;
  double s_mid = 0.0, t_mid = 0.0;
  auto cost = [&](double s, double t) { return alignment_residual(pred, gt, s, t); };

  constexpr int kGrid = 41;
  double best = cost(s_mid, t_mid);
  for (int level = 0; level < 12; ++level) {
    double bs = s_mid, bt = t_mid;
    for (int i = 0; i < kGrid; ++i) {
      const double s = s_mid + s_half * (2.0 * i / (kGrid - 1) - 1.0);
      for (int j = 0; j < kGrid; ++j) {
        const double t = t_mid + t_half * (2.0 * j / (kGrid - 1) - 1.0);
        const double c = cost(s, t);
        if (c < best) {
          best = c;
          bs = s;
          bt = t;
        }
      }
    }
    s_mid = bs;
    t_mid = bt;
    s_half *= 0.25;
    t_half *= 0.25;
  }

  // Pattern search with axis and diagonal moves; halves the step when no move improves.
  double ds = s_half, dt = t_half;
  const double dirs[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  for (long iter = 0; iter < 2000000 && (ds > 1e-13 || dt > 1e-13); ++iter) {
    bool moved = false;
    for (const auto& d : dirs) {
      const double c = cost(s_mid + d[0] * ds, t_mid + d[1] * dt);
      if (c < best) {
        best = c;
        s_mid += d[0] * ds;
        t_mid += d[1] * dt;
        moved = true;
        break;
      }
    }
    if (!moved) {
      ds *= 0.5;
      dt *= 0.5;
    }
  }
  return {s_mid, t_mid, best};
}

}  // namespace relsize::oracle
