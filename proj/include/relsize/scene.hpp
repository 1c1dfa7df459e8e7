#pragma once

#include <string>
#include <vector>

#include "relsize/camera.hpp"

namespace relsize {

/// Upright cylinder (axis parallel to camera y) in camera coordinates, meters.
struct Cylinder {
  Vec3 center = Vec3::Zero();
  double radius = 0.5;
  double height = 2.0;
  int object_id = 1;

  bool operator==(const Cylinder&) const = default;
};

/// Black cylinders on a white, geometry-free background.
struct Scene {
  std::string scene_id;
  Camera camera;
  std::vector<Cylinder> objects;
};

/// Axis-aligned box in continuous image coordinates (pixel (u, v) covers [u, u+1) x [v, v+1)).
struct PixelBox {
  double u_min = 0, u_max = 0, v_min = 0, v_max = 0;

  bool contains(double u, double v) const { return u >= u_min && u <= u_max && v >= v_min && v <= v_max; }
  bool intersects(const PixelBox& o) const {
    return u_min <= o.u_max && o.u_min <= u_max && v_min <= o.v_max && o.v_min <= v_max;
  }
  double area() const { return (u_max - u_min) * (v_max - v_min); }
};

/// Dilation applied to the exact silhouette extent by silhouette_bbox.
inline constexpr double kSilhouetteMargin = 2.0;

/// Exact image-plane extent of the cylinder's silhouette dilated by kSilhouetteMargin pixels.
PixelBox silhouette_bbox(const Camera& camera, const Cylinder& cyl);

/// Tolerance on each object's center lying on the horizon row.
inline constexpr double kHorizonTolerance = 1e-9;

/// Checks every cue-isolation rule; throws ContractError describing the first violation.
///
/// Rules: a valid camera, at least one object, unique ids, every cylinder in front of the camera,
/// identical radius/height across objects, centers on the horizon (y = 0, i.e. image row cy),
/// pairwise disjoint silhouette boxes, and every box inside the frame.
void validate_scene(const Scene& scene);

}  // namespace relsize
