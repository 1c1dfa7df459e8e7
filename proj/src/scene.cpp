#include "relsize/scene.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "relsize/error.hpp"

namespace relsize {

PixelBox silhouette_bbox(const Camera& camera, const Cylinder& cyl) {
  const double x = cyl.center.x();
  const double z = cyl.center.z();
  const double r = cyl.radius;

  // Horizontal: tangent lines from the eye to the cross-section circle in the xz-plane.
  const double dist = std::hypot(x, z);
  const double bearing = std::atan2(x, z);
  const double half_angle = std::asin(r / dist);
  const double tan_lo = std::tan(bearing - half_angle);
  const double tan_hi = std::tan(bearing + half_angle);

  // Vertical: a rim is steepest where the disk is nearest (or farthest, if on the other side).
  const double top = cyl.center.y() - 0.5 * cyl.height;
  const double bottom = cyl.center.y() + 0.5 * cyl.height;
  const double z_near = z - r;
  const double z_far = z + r;
  const double slope_lo = top < 0.0 ? top / z_near : top / z_far;
  const double slope_hi = bottom > 0.0 ? bottom / z_near : bottom / z_far;

  const double f = camera.focal;
  return {camera.cx + f * tan_lo - kSilhouetteMargin, camera.cx + f * tan_hi + kSilhouetteMargin,
          camera.cy + f * slope_lo - kSilhouetteMargin, camera.cy + f * slope_hi + kSilhouetteMargin};
}

void validate_scene(const Scene& scene) {
  scene.camera.validate();
  const auto fail = [&](const std::string& why) {
    throw ContractError(fmt::format("scene '{}': {}", scene.scene_id, why));
  };
  if (scene.objects.empty()) fail("no objects");

  const Cylinder& first = scene.objects.front();
  std::set<int> ids;
  std::vector<PixelBox> boxes;
  for (const Cylinder& c : scene.objects) {
    if (c.object_id < 1) fail(fmt::format("object id {} must be >= 1", c.object_id));
    if (!ids.insert(c.object_id).second) fail(fmt::format("duplicate object id {}", c.object_id));
    if (!(c.radius > 0.0) || !(c.height > 0.0)) fail(fmt::format("object {} has non-positive size", c.object_id));
    if (!c.center.allFinite()) fail(fmt::format("object {} has a non-finite center", c.object_id));
    if (!(c.center.z() - c.radius > 0.0)) fail(fmt::format("object {} is not in front of the camera", c.object_id));
    if (c.radius != first.radius || c.height != first.height)
      fail(fmt::format("object {} differs in physical size from object {}", c.object_id, first.object_id));
    if (std::abs(c.center.y()) > kHorizonTolerance)
      fail(fmt::format("object {} is not centered on the horizon row", c.object_id));

    const PixelBox box = silhouette_bbox(scene.camera, c);
    if (box.u_min < 0.0 || box.v_min < 0.0 || box.u_max > scene.camera.width || box.v_max > scene.camera.height)
      fail(fmt::format("object {} is not fully inside the frame", c.object_id));
    boxes.push_back(box);
  }
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j)
      if (boxes[i].intersects(boxes[j]))
        fail(fmt::format("silhouettes of objects {} and {} are not separated", scene.objects[i].object_id,
                         scene.objects[j].object_id));
}

}  // namespace relsize
