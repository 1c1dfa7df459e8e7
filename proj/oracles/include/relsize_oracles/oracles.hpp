#pragma once

// Reference implementations that share no code path with the library routines they check.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relsize/metrics.hpp"
#include "relsize/scene.hpp"

namespace relsize::oracle {

/// First t at which origin + t*dir enters the solid cylinder: fixed-step march, then bisection.
std::optional<double> ray_march(const Vec3& origin, const Vec3& dir, const Cylinder& cyl, double step = 1e-4,
                                double t_max = 100.0);

struct GridFit {
  double scale = 0.0;
  double shift = 0.0;
  double residual = 0.0;  ///< mean squared error
};

/// Mean squared error of scale * pred + shift against gt, summed directly.
double alignment_residual(std::span<const double> pred, std::span<const double> gt, double scale, double shift);

/// Zooming grid search over (scale, shift) followed by pattern-search refinement.
GridFit grid_search_fit(std::span<const double> pred, std::span<const double> gt);

/// Per-pixel accumulation of the depth metrics in extended precision.
MetricSet brute_force_metrics(std::span<const PixelSample> samples);

/// Projected area of an upright cylinder centered on the optical axis at distance z: the
/// 2fr/z by fh/z front rectangle plus the two half-ellipse bulges of the cap rims.
double silhouette_area_estimate(double focal, double radius, double height, double z);

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;  ///< worst observed discrepancy
  double seconds = 0.0;
  std::string detail;
};

/// Analytic intersection vs ray_march on `count` random (ray, cylinder) pairs; tolerance 1e-4 m.
SuiteResult ray_cast_suite(std::uint64_t seed = 1, std::size_t count = 1000);

/// fit_scale_shift vs grid_search_fit on `count` random instances of size n; tolerance 1e-3,
/// closed-form residual never above the oracle's; exact affine data recovered to 1e-9.
SuiteResult alignment_suite(std::uint64_t seed = 2, std::size_t count = 50, std::size_t n = 100);

/// compute_metrics vs brute_force_metrics on `count` random frames; tolerance 1e-9 relative.
SuiteResult metric_suite(std::uint64_t seed = 3, std::size_t count = 100);

std::vector<SuiteResult> run_all_suites();

}  // namespace relsize::oracle
