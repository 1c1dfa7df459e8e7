#pragma once

#include <span>

#include "relsize/depth_io.hpp"
#include "relsize/raster.hpp"

namespace relsize {

/// Least-squares fit gt ≈ scale * pred + shift.
struct AlignmentResult {
  double scale = 1.0;
  double shift = 0.0;
  bool degenerate = false;  ///< prediction (numerically) constant; scale = 0, shift = mean(gt)
  double residual = 0.0;    ///< mean squared error after alignment
};

/// Relative threshold on the normal-equation determinant below which a fit is degenerate.
inline constexpr double kDegeneracyEps = 1e-12;

/// Closed-form scale/shift from the 2x2 normal equations.
/// Throws ContractError if sizes differ, n < 2, or any gt is not finite and positive.
AlignmentResult fit_scale_shift(std::span<const double> pred, std::span<const double> gt);

struct AlignedPrediction {
  AlignmentResult fit;
  Raster<double> depth;    ///< aligned depth on masked pixels, 0 elsewhere
  int clamped_pixels = 0;  ///< masked pixels whose aligned value fell below clamp_eps
};

/// Fits one scale/shift per image over all pixels with mask > 0 and applies it.
///
/// depth space: aligned = max(s * pred + t, clamp_eps).
/// inverse_depth space: the fit targets 1 / gt and aligned = 1 / max(s * pred + t, clamp_eps).
/// Throws ContractError on shape mismatch or an empty mask.
AlignedPrediction align_prediction(const Raster<double>& pred, const Raster<double>& gt, const LabelMap& mask,
                                   DepthSpace space, double clamp_eps = 1e-6);

}  // namespace relsize
