#pragma once

#include <Eigen/Core>

namespace relsize {

using Vec3 = Eigen::Vector3d;

/// Pinhole camera. Camera frame: x right, y down, z forward.
struct Camera {
  int width = 256;
  int height = 256;
  double focal = 180.0;
  double cx = 128.0;
  double cy = 128.0;

  /// Throws ContractError when the intrinsics are unusable.
  void validate() const;

  bool operator==(const Camera&) const = default;
};

/// Unit ray through continuous image coordinates (x, y); pixel centers sit at (u + 0.5, v + 0.5).
Vec3 ray_through(const Camera& camera, double x, double y);

/// Unit ray through the center of pixel (u, v).
Vec3 pixel_ray(const Camera& camera, int u, int v);

}  // namespace relsize
