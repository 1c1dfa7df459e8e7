#include "relsize/camera.hpp"

#include <cmath>
#include <string>

#include "relsize/error.hpp"

namespace relsize {

void Camera::validate() const {
  if (width < 16 || height < 16) throw ContractError("camera must be at least 16x16 pixels");
  if (!(focal > 0.0) || !std::isfinite(focal)) throw ContractError("camera focal must be positive");
  if (!(cx > 0.0 && cx < width) || !(cy > 0.0 && cy < height))
    throw ContractError("principal point must lie strictly inside the image");
}

Vec3 ray_through(const Camera& camera, double x, double y) {
  return Vec3((x - camera.cx) / camera.focal, (y - camera.cy) / camera.focal, 1.0).normalized();
}

Vec3 pixel_ray(const Camera& camera, int u, int v) {
  if (u < 0 || u >= camera.width || v < 0 || v >= camera.height)
    throw ContractError("pixel (" + std::to_string(u) + ", " + std::to_string(v) + ") outside the image");
  return ray_through(camera, u + 0.5, v + 0.5);
}

}  // namespace relsize
