#include "relsize/renderer.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "relsize/error.hpp"

namespace relsize {

namespace {

constexpr double kMinT = 1e-12;

void keep_nearest(std::optional<Hit>& best, double t, SurfacePart part) {
  if (t > kMinT && (!best || t < best->t)) best = Hit{t, 0.0, part, 0};
}

}  // namespace

std::optional<Hit> intersect_cylinder(const Vec3& origin, const Vec3& dir, const Cylinder& cyl) {
  const double y_top = cyl.center.y() - 0.5 * cyl.height;
  const double y_bottom = cyl.center.y() + 0.5 * cyl.height;
  const double r2 = cyl.radius * cyl.radius;
  const double ox = origin.x() - cyl.center.x();
  const double oz = origin.z() - cyl.center.z();

  std::optional<Hit> best;

  // Lateral surface: |(o + t d)_xz - c_xz|^2 = r^2.
  const double a = dir.x() * dir.x() + dir.z() * dir.z();
  if (a > 0.0) {
    const double half_b = ox * dir.x() + oz * dir.z();
    const double c = ox * ox + oz * oz - r2;
    const double disc = half_b * half_b - a * c;
    if (disc >= 0.0) {
      // Numerically stable root pair.
      const double q = -(half_b + std::copysign(std::sqrt(disc), half_b));
      double roots[2] = {q / a, q != 0.0 ? c / q : q / a};
      for (double t : roots) {
        const double y = origin.y() + t * dir.y();
        if (y >= y_top && y <= y_bottom) keep_nearest(best, t, SurfacePart::lateral);
      }
    }
  }

  // Caps.
  if (dir.y() != 0.0) {
    for (const auto& [plane, part] : {std::pair{y_top, SurfacePart::top_cap}, std::pair{y_bottom, SurfacePart::bottom_cap}}) {
      const double t = (plane - origin.y()) / dir.y();
      const double px = ox + t * dir.x();
      const double pz = oz + t * dir.z();
      if (px * px + pz * pz <= r2) keep_nearest(best, t, part);
    }
  }

  if (best) {
    best->z_depth = origin.z() + best->t * dir.z();
    best->object_id = cyl.object_id;
  }
  return best;
}

FrameBundle render_scene(const Scene& scene, int supersample) {
  if (supersample < 1) throw ContractError("supersample must be >= 1");
  validate_scene(scene);

  const Camera& cam = scene.camera;
  std::vector<PixelBox> boxes;
  boxes.reserve(scene.objects.size());
  for (const Cylinder& c : scene.objects) boxes.push_back(silhouette_bbox(cam, c));

  const Vec3 origin = Vec3::Zero();
  const auto nearest = [&](double x, double y) {
    std::optional<Hit> best;
    Vec3 dir;
    bool have_dir = false;
    for (std::size_t k = 0; k < scene.objects.size(); ++k) {
      if (!boxes[k].contains(x, y)) continue;
      if (!have_dir) {
        dir = ray_through(cam, x, y);
        have_dir = true;
      }
      auto hit = intersect_cylinder(origin, dir, scene.objects[k]);
      if (hit && (!best || hit->t < best->t)) best = hit;
    }
    return best;
  };

  FrameBundle out{RgbImage(cam.width, cam.height, Rgb{255, 255, 255}), DepthMap(cam.width, cam.height, 0.0f),
                  LabelMap(cam.width, cam.height, 0)};

  // Corner hits: silhouettes are convex, so a pixel whose four corners land on the same object
  // is fully covered and needs no sub-samples.
  LabelMap corners;
  if (supersample > 1) {
    corners = LabelMap(cam.width + 1, cam.height + 1, 0);
    for (int y = 0; y <= cam.height; ++y)
      for (int x = 0; x <= cam.width; ++x)
        if (auto hit = nearest(x, y)) corners(x, y) = hit->object_id;
  }

  const int samples = supersample * supersample;
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      if (auto hit = nearest(u + 0.5, v + 0.5)) {
        out.depth(u, v) = static_cast<float>(hit->z_depth);
        out.mask(u, v) = hit->object_id;
      }
      int covered = 0;
      if (supersample == 1) {
        covered = out.mask(u, v) > 0 ? 1 : 0;
      } else if (const int id = corners(u, v);
                 id > 0 && corners(u + 1, v) == id && corners(u, v + 1) == id && corners(u + 1, v + 1) == id) {
        covered = samples;
      } else {
        for (int j = 0; j < supersample; ++j)
          for (int i = 0; i < supersample; ++i)
            if (nearest(u + (i + 0.5) / supersample, v + (j + 0.5) / supersample)) ++covered;
      }
      // Objects are black, background white; partial coverage blends linearly.
      const auto level = static_cast<std::uint8_t>(std::lround(255.0 * (samples - covered) / samples));
      out.rgb(u, v) = Rgb{level, level, level};
    }
  }
  return out;
}

}  // namespace relsize
