#include <cmath>

#include "relsize_oracles/oracles.hpp"

namespace relsize::oracle {

namespace {

bool inside(const Vec3& p, const Cylinder& c) {
  const double dx = p.x() - c.center.x();
  const double dz = p.z() - c.center.z();
  return dx * dx + dz * dz <= c.radius * c.radius && std::abs(p.y() - c.center.y()) <= 0.5 * c.height;
}

}  // namespace

std::optional<double> ray_march(const Vec3& origin, const Vec3& dir, const Cylinder& cyl, double step, double t_max) {
  const auto steps = static_cast<long>(std::ceil(t_max / step));
  for (long k = 1; k <= steps; ++k) {
    const double t = k * step;
    if (!inside(origin + t * dir, cyl)) continue;
    double lo = t - step, hi = t;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (inside(origin + mid * dir, cyl) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }
  return std::nullopt;
}

double silhouette_area_estimate(double focal, double radius, double height, double z) {
  const double half_width = focal * radius / z;
  const double rect = 2.0 * half_width * focal * height / z;
  // Cap rims project to ellipses whose near half pokes out by focal*(h/2)*r/z² at the front.
  const double bulge = focal * 0.5 * height * radius / (z * z);
  return rect + M_PI * half_width * bulge;
}

}  // namespace relsize::oracle
