#include <chrono>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "relsize/alignment.hpp"
#include "relsize/renderer.hpp"
#include "relsize_oracles/oracles.hpp"

namespace relsize::oracle {

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double relative_gap(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return a == b ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

SuiteResult ray_cast_suite(std::uint64_t seed, std::size_t count) {
  constexpr double kTolerance = 1e-4;
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto uni = [&](double a, double b) { return a + (b - a) * U(rng); };

  SuiteResult res{"ray-cast vs ray-march"};
  for (std::size_t i = 0; i < count; ++i) {
    Cylinder cyl;
    cyl.radius = uni(0.2, 1.0);
    cyl.height = uni(0.5, 3.0);
    cyl.center = Vec3(uni(-3.0, 3.0), uni(-1.0, 1.0), uni(1.5 + cyl.radius, 15.0));
    cyl.object_id = 1;

    // Mostly camera rays; some from an off-center origin in front of the cylinder.
    const Vec3 origin = i % 5 == 4 ? Vec3(uni(-1.0, 1.0), uni(-1.0, 1.0), uni(-1.0, 1.0)) : Vec3::Zero();
    const bool aim_to_miss = i % 10 == 9;
    Vec3 target;
    if (aim_to_miss) {
      // Sideways of the axis by 1.5 r, perpendicular to the line of sight in xz: cannot touch.
      Vec3 sight = cyl.center - origin;
      Vec3 side(-sight.z(), 0.0, sight.x());
      side.normalize();
      target = cyl.center + (U(rng) < 0.5 ? 1.5 : -1.5) * cyl.radius * side + Vec3(0, uni(-0.4, 0.4) * cyl.height, 0);
    } else {
      const double rho = 0.9 * cyl.radius * std::sqrt(U(rng));
      const double phi = uni(0.0, 2.0 * M_PI);
      target = cyl.center + Vec3(rho * std::cos(phi), uni(-0.45, 0.45) * cyl.height, rho * std::sin(phi));
    }
    const Vec3 dir = (target - origin).normalized();
    const double t_max = (cyl.center - origin).norm() + cyl.radius + cyl.height;

    const auto analytic = intersect_cylinder(origin, dir, cyl);
    const auto marched = ray_march(origin, dir, cyl, 1e-4, t_max);
    ++res.cases;
    if (analytic.has_value() != marched.has_value()) {
      ++res.failures;
      if (res.detail.empty()) res.detail = fmt::format("case {}: hit/miss disagreement", i);
      continue;
    }
    if (!analytic) continue;
    const double err = std::abs(analytic->t - *marched);
    res.worst = std::max(res.worst, err);
    if (err > kTolerance) {
      ++res.failures;
      if (res.detail.empty()) res.detail = fmt::format("case {}: |t - t_march| = {:.3e}", i, err);
    }
  }
  res.seconds = clock.seconds();
  res.passed = res.failures == 0;
  if (res.detail.empty()) res.detail = fmt::format("max |dt| = {:.3e} m", res.worst);
  return res;
}

SuiteResult alignment_suite(std::uint64_t seed, std::size_t count, std::size_t n) {
  constexpr double kTolerance = 1e-3;
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N(0.0, 1.0);
  const auto uni = [&](double a, double b) { return a + (b - a) * U(rng); };

  SuiteResult res{"alignment vs grid search"};
  std::vector<double> pred(n), gt(n);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = uni(0.05, 3.0) * (i % 4 == 3 ? -1.0 : 1.0);
    const double b = uni(-5.0, 5.0);
    const double noise = uni(0.0, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
      gt[k] = uni(1.0, 12.0);
      pred[k] = i % 7 == 6 ? uni(-2.0, 2.0) : a * gt[k] + b + noise * N(rng);
    }
    const AlignmentResult fit = fit_scale_shift(pred, gt);
    const GridFit ref = grid_search_fit(pred, gt);
    const double closed_residual = alignment_residual(pred, gt, fit.scale, fit.shift);
    const double err = std::max(std::abs(fit.scale - ref.scale), std::abs(fit.shift - ref.shift));
    res.worst = std::max(res.worst, err);
    ++res.cases;
    if (err > kTolerance || closed_residual > ref.residual) {
      ++res.failures;
      if (res.detail.empty())
        res.detail = fmt::format("case {}: (s,t)=({}, {}) oracle ({}, {}), residual {} vs {}", i, fit.scale, fit.shift,
                                 ref.scale, ref.shift, closed_residual, ref.residual);
    }
  }

  // Exact affine data: gt = s * pred + t.
  for (int i = 0; i < 10; ++i) {
    const double s = uni(0.1, 4.0), t = uni(-0.04, 3.0);
    for (std::size_t k = 0; k < n; ++k) {
      pred[k] = uni(0.5, 5.0);
      gt[k] = s * pred[k] + t;
    }
    const AlignmentResult fit = fit_scale_shift(pred, gt);
    ++res.cases;
    if (std::abs(fit.scale - s) > 1e-9 || std::abs(fit.shift - t) > 1e-9) {
      ++res.failures;
      if (res.detail.empty()) res.detail = fmt::format("affine case {}: ({}, {}) expected ({}, {})", i, fit.scale, fit.shift, s, t);
    }
  }
  res.seconds = clock.seconds();
  res.passed = res.failures == 0;
  if (res.detail.empty()) res.detail = fmt::format("max |d(s,t)| = {:.3e}", res.worst);
  return res;
}

SuiteResult metric_suite(std::uint64_t seed, std::size_t count) {
  constexpr double kTolerance = 1e-9;
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N(0.0, 1.0);

  SuiteResult res{"metrics vs brute force"};
  for (std::size_t i = 0; i < count; ++i) {
    const auto n = static_cast<std::size_t>(50 + U(rng) * 5000);
    const double sigma = 0.05 + 0.5 * U(rng);
    const bool weighted = i % 2 == 1;
    std::vector<PixelSample> samples(n);
    for (auto& s : samples) {
      s.gt = 0.5 + 19.5 * U(rng);
      s.pred = s.gt * std::exp(sigma * N(rng));
      s.object_id = 1 + static_cast<int>(U(rng) * 3);
      s.weight = weighted ? 0.01 + U(rng) : 1.0;
    }
    const MetricSet got = compute_metrics(samples);
    const MetricSet ref = brute_force_metrics(samples);
    const double err = std::max({relative_gap(got.delta1, ref.delta1), relative_gap(got.delta2, ref.delta2),
                                 relative_gap(got.delta3, ref.delta3), relative_gap(got.abs_rel, ref.abs_rel),
                                 relative_gap(got.sq_rel, ref.sq_rel), relative_gap(got.rmse, ref.rmse),
                                 relative_gap(got.rmse_log, ref.rmse_log), relative_gap(got.n_eff, ref.n_eff)});
    res.worst = std::max(res.worst, err);
    ++res.cases;
    if (err > kTolerance) {
      ++res.failures;
      if (res.detail.empty()) res.detail = fmt::format("frame {}: relative gap {:.3e}", i, err);
    }
  }
  res.seconds = clock.seconds();
  res.passed = res.failures == 0;
  if (res.detail.empty()) res.detail = fmt::format("max relative gap = {:.3e}", res.worst);
  return res;
}

std::vector<SuiteResult> run_all_suites() { return {ray_cast_suite(), alignment_suite(), metric_suite()}; }

}  // namespace relsize::oracle
