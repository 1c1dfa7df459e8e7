#pragma once

#include <optional>

#include "relsize/raster.hpp"
#include "relsize/scene.hpp"

namespace relsize {

enum class SurfacePart { lateral, top_cap, bottom_cap };

struct Hit {
  double t = 0.0;        ///< distance along the unit ray
  double z_depth = 0.0;  ///< camera-frame z of the hit point
  SurfacePart part = SurfacePart::lateral;
  int object_id = 0;
};

/// Nearest intersection of the ray origin + t*dir (t > 0) with the solid cylinder, if any.
std::optional<Hit> intersect_cylinder(const Vec3& origin, const Vec3& dir, const Cylinder& cyl);

/// Rendered scene. depth is z-depth in meters (0 = background); mask holds object ids (0 = background).
struct FrameBundle {
  RgbImage rgb;
  DepthMap depth;
  LabelMap mask;
};

/// Ray-casts the scene from the camera origin.
///
/// Depth and mask are decided by the pixel-center ray only. With supersample > 1 the RGB image is
/// anti-aliased from a supersample x supersample grid of sub-pixel rays. Throws ContractError if the
/// scene fails validate_scene or supersample < 1.
FrameBundle render_scene(const Scene& scene, int supersample = 1);

}  // namespace relsize
