#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "relsize/error.hpp"
#include "relsize/renderer.hpp"
#include "relsize_oracles/oracles.hpp"
#include "test_util.hpp"

using namespace relsize;
using relsize::testing::two_object_scene;

namespace {

std::map<int, int> pixel_counts(const LabelMap& mask) {
  std::map<int, int> counts;
  for (int v : mask.data)
    if (v > 0) ++counts[v];
  return counts;
}

}  // namespace

TEST(IntersectCylinder, AxialRayHitsFrontSurface) {
  const Cylinder cyl{Vec3(0, 0, 5), 0.5, 2.0, 3};
  const auto hit = intersect_cylinder(Vec3::Zero(), Vec3(0, 0, 1), cyl);
  ASSERT_TRUE(hit);
  EXPECT_DOUBLE_EQ(hit->t, 4.5);
  EXPECT_DOUBLE_EQ(hit->z_depth, 4.5);
  EXPECT_EQ(hit->part, SurfacePart::lateral);
  EXPECT_EQ(hit->object_id, 3);
}

TEST(IntersectCylinder, LateralOffsetMisses) {
  const Cylinder cyl{Vec3(2, 0, 5), 0.5, 2.0, 1};
  EXPECT_FALSE(intersect_cylinder(Vec3::Zero(), Vec3(0, 0, 1), cyl));
}

TEST(IntersectCylinder, CapsAndHeightLimits) {
  const Cylinder cyl{Vec3(0, 0, 5), 0.5, 2.0, 1};
  // Looking straight down (+y) from above hits the top cap at y = -1.
  const auto top = intersect_cylinder(Vec3(0, -5, 5), Vec3(0, 1, 0), cyl);
  ASSERT_TRUE(top);
  EXPECT_DOUBLE_EQ(top->t, 4.0);
  EXPECT_EQ(top->part, SurfacePart::top_cap);
  EXPECT_DOUBLE_EQ(top->z_depth, 5.0);

  const auto bottom = intersect_cylinder(Vec3(0.1, 4, 5), Vec3(0, -1, 0), cyl);
  ASSERT_TRUE(bottom);
  EXPECT_EQ(bottom->part, SurfacePart::bottom_cap);
  EXPECT_DOUBLE_EQ(bottom->t, 3.0);

  // Passing above the top rim.
  EXPECT_FALSE(intersect_cylinder(Vec3::Zero(), Vec3(0, -0.3, 1).normalized(), cyl));
  // Behind the origin does not count.
  EXPECT_FALSE(intersect_cylinder(Vec3(0, 0, 10), Vec3(0, 0, 1), cyl));
}

TEST(IntersectCylinder, ZDepthIsOpticalAxisCoordinate) {
  const Cylinder cyl{Vec3(1.0, 0.0, 6.0), 0.5, 2.0, 1};
  const Vec3 dir = Vec3(1.0, 0.1, 6.0).normalized();
  const auto hit = intersect_cylinder(Vec3::Zero(), dir, cyl);
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->z_depth, hit->t * dir.z(), 1e-12);
  EXPECT_LT(hit->z_depth, hit->t);
}

TEST(IntersectCylinder, AgreesWithRayMarchOracle) {
  const auto res = oracle::ray_cast_suite(/*seed=*/97, 1000);
  EXPECT_TRUE(res.passed) << res.detail;
  EXPECT_EQ(res.cases, 1000u);
  EXPECT_LE(res.worst, 1e-4);
}

TEST(RenderScene, SingleObjectAreaMatchesAnalyticEstimate) {
  const Camera cam;  // 256x256, focal 180
  for (double z : {4.0, 6.0, 10.0}) {
    Scene s{"area", cam, {Cylinder{Vec3(0, 0, z), 0.5, 2.0, 1}}};
    const FrameBundle f = render_scene(s);
    const double expected = oracle::silhouette_area_estimate(cam.focal, 0.5, 2.0, z);
    const double got = pixel_counts(f.mask)[1];
    EXPECT_NEAR(got / expected, 1.0, 0.05) << "z = " << z << ": " << got << " vs " << expected;
  }
}

TEST(RenderScene, NearObjectCoversMorePixels) {
  const FrameBundle f = render_scene(two_object_scene(3.0, 9.0));
  const auto counts = pixel_counts(f.mask);
  EXPECT_GT(counts.at(1), counts.at(2));
}

TEST(RenderScene, BundleInvariants) {
  const Scene s = two_object_scene(2.0, 15.9);
  const FrameBundle f = render_scene(s, 3);
  std::set<int> ids;
  for (std::size_t i = 0; i < f.mask.size(); ++i) {
    ASSERT_EQ(f.depth.data[i] > 0.0f, f.mask.data[i] > 0);
    if (f.mask.data[i] > 0) {
      ASSERT_TRUE(std::isfinite(f.depth.data[i]));
      ids.insert(f.mask.data[i]);
    }
  }
  EXPECT_EQ(ids, (std::set<int>{1, 2}));

  // Depth of each object lies between its near face and its center.
  for (std::size_t i = 0; i < f.mask.size(); ++i) {
    if (f.mask.data[i] == 0) continue;
    const Cylinder& c = s.objects[f.mask.data[i] - 1];
    ASSERT_GE(f.depth.data[i], static_cast<float>(c.center.z() - c.radius) - 1e-5f);
    ASSERT_LE(f.depth.data[i], static_cast<float>(c.center.z() + c.radius) + 1e-5f);
  }
}

TEST(RenderScene, CenterPixelDepthOfOnAxisCylinder) {
  const Camera cam;
  const FrameBundle f = render_scene(Scene{"axis", cam, {Cylinder{Vec3(0, 0, 7), 0.5, 2.0, 1}}});
  // Pixel (128,128) has its center half a pixel off-axis, which recedes the surface by ~3e-4 m.
  EXPECT_NEAR(f.depth(128, 128), 6.5, 1e-3);
  EXPECT_GT(f.depth(128, 128), 6.5f);
  EXPECT_EQ(f.rgb(128, 128), (Rgb{0, 0, 0}));
  EXPECT_EQ(f.rgb(2, 2), (Rgb{255, 255, 255}));
}

TEST(RenderScene, ObjectOrderDoesNotMatter) {
  Scene s = two_object_scene(4.0, 7.5);
  const FrameBundle a = render_scene(s, 2);
  std::reverse(s.objects.begin(), s.objects.end());
  const FrameBundle b = render_scene(s, 2);
  EXPECT_EQ(a.mask, b.mask);
  EXPECT_EQ(a.depth, b.depth);
  EXPECT_EQ(a.rgb, b.rgb);
}

TEST(RenderScene, Deterministic) {
  const Scene s = two_object_scene(2.5, 11.0);
  const FrameBundle a = render_scene(s, 4);
  const FrameBundle b = render_scene(s, 4);
  EXPECT_EQ(a.rgb, b.rgb);
  EXPECT_EQ(a.depth, b.depth);
  EXPECT_EQ(a.mask, b.mask);
}

TEST(RenderScene, SupersamplingOnlyTouchesRgb) {
  const Scene s = two_object_scene(3.3, 6.1);
  const FrameBundle plain = render_scene(s, 1);
  const FrameBundle aa = render_scene(s, 4);
  EXPECT_EQ(plain.depth, aa.depth);
  EXPECT_EQ(plain.mask, aa.mask);

  int gray = 0;
  for (const Rgb& p : aa.rgb.data) {
    EXPECT_TRUE(p.r == p.g && p.g == p.b);
    if (p.r != 0 && p.r != 255) ++gray;
  }
  EXPECT_GT(gray, 0);
  for (const Rgb& p : plain.rgb.data) EXPECT_TRUE(p.r == 0 || p.r == 255);
}

// The corner shortcut must agree with brute-force sub-sampling of every pixel.
TEST(RenderScene, AntiAliasingMatchesFullSubsampling) {
  const Scene s = two_object_scene(2.2, 5.0);
  const FrameBundle f = render_scene(s, 3);
  const Camera& cam = s.camera;
  for (int v = 0; v < cam.height; v += 3) {
    for (int u = 0; u < cam.width; u += 3) {
      int covered = 0;
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
          const Vec3 d = ray_through(cam, u + (i + 0.5) / 3, v + (j + 0.5) / 3);
          for (const auto& c : s.objects)
            if (intersect_cylinder(Vec3::Zero(), d, c)) {
              ++covered;
              break;
            }
        }
      ASSERT_EQ(f.rgb(u, v).r, static_cast<std::uint8_t>(std::lround(255.0 * (9 - covered) / 9))) << u << "," << v;
    }
  }
}

TEST(RenderScene, RejectsInvalidInput) {
  Scene bad{"bad", Camera{}, {Cylinder{Vec3(0, 0, 5), 0.5, 2.0, 1}, Cylinder{Vec3(0.2, 0, 8), 0.5, 2.0, 2}}};
  EXPECT_THROW(render_scene(bad), ContractError);
  EXPECT_THROW(render_scene(two_object_scene(3.0, 9.0), 0), ContractError);
}
