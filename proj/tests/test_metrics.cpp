#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "relsize/error.hpp"
#include "relsize/metrics.hpp"
#include "relsize_oracles/oracles.hpp"

using namespace relsize;

namespace {

struct Frame {
  Raster<double> gt, pred;
  LabelMap mask;
};

/// A 10x10 object 1 at depth 2 and a 5x5 object 2 at depth 8 on a 30x20 canvas.
Frame two_squares(double near_factor, double far_factor) {
  Frame f{Raster<double>(30, 20, 0.0), Raster<double>(30, 20, 0.0), LabelMap(30, 20, 0)};
  for (int y = 5; y < 15; ++y)
    for (int x = 2; x < 12; ++x) {
      f.mask(x, y) = 1;
      f.gt(x, y) = 2.0;
      f.pred(x, y) = 2.0 * near_factor;
    }
  for (int y = 8; y < 13; ++y)
    for (int x = 20; x < 25; ++x) {
      f.mask(x, y) = 2;
      f.gt(x, y) = 8.0;
      f.pred(x, y) = 8.0 * far_factor;
    }
  return f;
}

std::size_t count_id(const std::vector<PixelSample>& s, int id) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](const PixelSample& p) { return p.object_id == id; }));
}

}  // namespace

TEST(ComputeMetrics, IdentityIsPerfect) {
  std::vector<PixelSample> s{{1.0, 1.0}, {2.5, 2.5}, {9.0, 9.0}};
  const MetricSet m = compute_metrics(s);
  EXPECT_EQ(m.delta1, 1.0);
  EXPECT_EQ(m.delta2, 1.0);
  EXPECT_EQ(m.delta3, 1.0);
  EXPECT_EQ(m.abs_rel, 0.0);
  EXPECT_EQ(m.sq_rel, 0.0);
  EXPECT_EQ(m.rmse, 0.0);
  EXPECT_EQ(m.rmse_log, 0.0);
  EXPECT_EQ(m.n_eff, 3.0);
}

TEST(ComputeMetrics, HandWorkedPair) {
  std::vector<PixelSample> s{{1.0, 1.2}, {2.0, 3.0}};
  const MetricSet m = compute_metrics(s);
  EXPECT_DOUBLE_EQ(m.delta1, 0.5);
  EXPECT_DOUBLE_EQ(m.delta2, 1.0);
  EXPECT_DOUBLE_EQ(m.delta3, 1.0);
  EXPECT_NEAR(m.abs_rel, 0.35, 1e-12);
  EXPECT_NEAR(m.sq_rel, 0.27, 1e-12);
  EXPECT_NEAR(m.rmse, 0.72111, 1e-5);
  const double l1 = std::log(1.2), l2 = std::log(1.5);
  EXPECT_NEAR(m.rmse_log, std::sqrt((l1 * l1 + l2 * l2) / 2.0), 1e-12);
}

TEST(ComputeMetrics, ThresholdIsStrictAndSymmetric) {
  std::vector<PixelSample> at{{1.0, 1.25}}, over{{1.25, 1.0}}, under{{1.0, 1.2499999}};
  EXPECT_EQ(compute_metrics(at).delta1, 0.0);
  EXPECT_EQ(compute_metrics(over).delta1, 0.0);
  EXPECT_EQ(compute_metrics(at).delta2, 1.0);
  EXPECT_EQ(compute_metrics(under).delta1, 1.0);
  std::vector<PixelSample> big{{1.0, 2.0}}, small{{2.0, 1.0}};
  EXPECT_EQ(compute_metrics(big).delta3, 0.0);  // 2 > 1.953125
  EXPECT_EQ(compute_metrics(big).delta1, compute_metrics(small).delta1);
}

TEST(ComputeMetrics, RejectsInvalidSamples) {
  EXPECT_THROW(compute_metrics(std::vector<PixelSample>{}), ContractError);
  EXPECT_THROW(compute_metrics(std::vector<PixelSample>{{0.0, 1.0}}), ContractError);
  EXPECT_THROW(compute_metrics(std::vector<PixelSample>{{1.0, -1.0}}), ContractError);
  EXPECT_THROW(compute_metrics(std::vector<PixelSample>{{1.0, 1.0, 1, 0.0}}), ContractError);
}

TEST(ComputeMetrics, MatchesBruteForceOracle) {
  const auto r = oracle::metric_suite(31, 60);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(ComputeMetrics, UniformWeightsDoNotMatter) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.5, 20.0);
  std::vector<PixelSample> s(200);
  for (auto& p : s) p = {U(rng), U(rng), 1, 1.0};
  auto scaled = s;
  for (auto& p : scaled) p.weight = 0.37;
  const MetricSet a = compute_metrics(s), b = compute_metrics(scaled);
  EXPECT_NEAR(a.delta1, b.delta1, 1e-12);
  EXPECT_NEAR(a.abs_rel, b.abs_rel, 1e-12);
  EXPECT_NEAR(a.rmse, b.rmse, 1e-12);
  EXPECT_NEAR(a.rmse_log, b.rmse_log, 1e-12);
  EXPECT_NEAR(b.n_eff, 200 * 0.37, 1e-9);
}

TEST(ComputeMetrics, OrderInvariant) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.5, 20.0);
  std::vector<PixelSample> s(500);
  for (auto& p : s) p = {U(rng), U(rng), 1, U(rng)};
  const MetricSet a = compute_metrics(s);
  std::shuffle(s.begin(), s.end(), rng);
  const MetricSet b = compute_metrics(s);
  EXPECT_NEAR(a.delta1, b.delta1, 1e-12);
  EXPECT_NEAR(a.sq_rel, b.sq_rel, 1e-12);
  EXPECT_NEAR(a.rmse, b.rmse, 1e-12);
  EXPECT_NEAR(a.rmse_log, b.rmse_log, 1e-12);
}

TEST(ComputeMetrics, BoundsHold) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> U(0.1, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PixelSample> s(20);
    for (auto& p : s) p = {U(rng), U(rng)};
    const MetricSet m = compute_metrics(s);
    EXPECT_LE(m.delta1, m.delta2);
    EXPECT_LE(m.delta2, m.delta3);
    EXPECT_GE(m.delta1, 0.0);
    EXPECT_LE(m.delta3, 1.0);
    EXPECT_GE(m.abs_rel, 0.0);
    EXPECT_GE(m.rmse_log, 0.0);
  }
}

TEST(ExtractSamples, RowMajorMaskedPixels) {
  const Frame f = two_squares(1.0, 1.0);
  const auto s = extract_samples(f.gt, f.pred, f.mask);
  ASSERT_EQ(s.size(), 125u);
  EXPECT_EQ(s.front().object_id, 1);
  EXPECT_EQ(count_id(s, 1), 100u);
  EXPECT_EQ(count_id(s, 2), 25u);
}

TEST(Balance, WeightsEqualizeObjects) {
  const Frame f = two_squares(1.0, 1.0);
  const auto s = balance_by_weight(extract_samples(f.gt, f.pred, f.mask));
  double w1 = 0.0, w2 = 0.0;
  for (const auto& p : s) (p.object_id == 1 ? w1 : w2) += p.weight;
  EXPECT_NEAR(w1, 1.0, 1e-12);
  EXPECT_NEAR(w2, 1.0, 1e-12);
  for (const auto& p : s) EXPECT_EQ(p.weight, p.object_id == 1 ? 1.0 / 100.0 : 1.0 / 25.0);
}

TEST(Balance, ResamplingUpsamplesSmallObjects) {
  const Frame f = two_squares(1.0, 1.0);
  const auto s = balance_by_resampling(f.gt, f.pred, f.mask);
  EXPECT_EQ(count_id(s, 1), 100u);
  const std::size_t n2 = count_id(s, 2);
  EXPECT_GE(n2, 95u);
  EXPECT_LE(n2, 105u);
  for (const auto& p : s)
    if (p.object_id == 2) EXPECT_EQ(p.gt, 8.0);
}

TEST(Balance, ResampledCropsKeepOnlyTheirOwnObject) {
  // Object 2 is a diagonal line whose box also holds object 1 pixels.
  Raster<double> gt(12, 12, 0.0), pred(12, 12, 0.0);
  LabelMap mask(12, 12, 0);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 12; ++x) {
      const int id = x == y ? 2 : (x > y ? 1 : 0);
      mask(x, y) = id;
      gt(x, y) = pred(x, y) = id == 0 ? 0.0 : 3.0 * id;
    }
  const auto s = balance_by_resampling(gt, pred, mask);
  for (const auto& p : s) EXPECT_EQ(p.gt, 3.0 * p.object_id);
  EXPECT_GT(count_id(s, 2), 12u);
}

TEST(Balance, NeutralForEqualSizedObjects) {
  Frame f = two_squares(1.0, 1.0);
  // Make both objects 10x10 and give them different errors.
  for (int y = 5; y < 15; ++y)
    for (int x = 16; x < 26; ++x) {
      f.mask(x, y) = 2;
      f.gt(x, y) = 8.0;
    }
  for (std::size_t i = 0; i < f.pred.size(); ++i)
    if (f.mask.data[i] > 0) f.pred.data[i] = f.gt.data[i] * (f.mask.data[i] == 1 ? 1.1 : 1.4) * (1.0 + 0.01 * (i % 7));
  const MetricSet plain = compute_metrics(extract_samples(f.gt, f.pred, f.mask));
  const MetricSet weighted = compute_metrics(balance_objects(f.gt, f.pred, f.mask, BalanceMode::weight));
  const MetricSet resampled = compute_metrics(balance_objects(f.gt, f.pred, f.mask, BalanceMode::resample));
  EXPECT_NEAR(weighted.delta1, plain.delta1, 1e-9);
  EXPECT_NEAR(weighted.abs_rel, plain.abs_rel, 1e-9);
  EXPECT_NEAR(weighted.rmse, plain.rmse, 1e-9);
  EXPECT_NEAR(resampled.delta1, plain.delta1, 0.01);
  EXPECT_NEAR(resampled.abs_rel, plain.abs_rel, 0.01);
}

TEST(Balance, PenalizesErrorsOnTheSmallObject) {
  const Frame f = two_squares(1.0, 2.0);
  const MetricSet plain = compute_metrics(extract_samples(f.gt, f.pred, f.mask));
  const MetricSet weighted = compute_metrics(balance_objects(f.gt, f.pred, f.mask, BalanceMode::weight));
  const MetricSet resampled = compute_metrics(balance_objects(f.gt, f.pred, f.mask, BalanceMode::resample));
  EXPECT_DOUBLE_EQ(plain.delta1, 0.8);
  EXPECT_DOUBLE_EQ(weighted.delta1, 0.5);
  EXPECT_LT(resampled.delta1, plain.delta1);
  EXPECT_GT(weighted.abs_rel, plain.abs_rel);
}

TEST(Balance, MissingExpectedObjectIsAnError) {
  const Frame f = two_squares(1.0, 1.0);
  const std::vector<int> ids{1, 2, 3};
  try {
    balance_objects(f.gt, f.pred, f.mask, BalanceMode::weight, ids);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("object 3"), std::string::npos);
  }
}
