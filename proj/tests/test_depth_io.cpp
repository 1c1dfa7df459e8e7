#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "relsize/depth_io.hpp"
#include "relsize/error.hpp"
#include "test_util.hpp"

using namespace relsize;
using namespace relsize::testing;

TEST(Pfm, SinglePixelRoundTrip) {
  const auto dir = scratch_dir("pfm_single");
  DepthMap m(1, 1, 3.5f);
  write_pfm(m, dir / "a.pfm");
  const DepthMap back = read_pfm(dir / "a.pfm");
  ASSERT_EQ(back.width, 1);
  ASSERT_EQ(back.height, 1);
  EXPECT_EQ(back(0, 0), 3.5f);
}

TEST(Pfm, LayoutIsLittleEndianBottomUp) {
  const auto dir = scratch_dir("pfm_layout");
  DepthMap m(2, 2);
  m(0, 0) = 1.0f;  // top-left
  m(1, 0) = 2.0f;
  m(0, 1) = 3.0f;  // bottom-left
  m(1, 1) = 4.0f;
  write_pfm(m, dir / "m.pfm");
  const std::string bytes = read_bytes(dir / "m.pfm");
  const std::string header = "Pf\n2 2\n-1.0\n";
  ASSERT_EQ(bytes.size(), header.size() + 16);
  EXPECT_EQ(bytes.substr(0, header.size()), header);
  // First stored float is the bottom-left pixel, 3.0f = 0x40400000 little-endian.
  EXPECT_EQ(bytes.substr(header.size(), 4), std::string("\x00\x00\x40\x40", 4));
  // Last stored float is the top-right pixel, 2.0f = 0x40000000.
  EXPECT_EQ(bytes.substr(header.size() + 12, 4), std::string("\x00\x00\x00\x40", 4));
}

TEST(Pfm, RejectsNonFiniteAndNegativeValues) {
  const auto dir = scratch_dir("pfm_reject");
  DepthMap m(2, 1, 1.0f);
  m(1, 0) = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(write_pfm(m, dir / "nan.pfm"), ContractError);
  m(1, 0) = std::numeric_limits<float>::infinity();
  EXPECT_THROW(write_pfm(m, dir / "inf.pfm"), ContractError);
  m(1, 0) = -0.5f;
  EXPECT_THROW(write_pfm(m, dir / "neg.pfm"), ContractError);
  EXPECT_FALSE(fs::exists(dir / "nan.pfm"));
}

TEST(Pfm, ReadErrorsAreDistinct) {
  const auto dir = scratch_dir("pfm_errors");
  const std::string payload(8, '\0');
  EXPECT_THROW(read_pfm(dir / "none.pfm"), MissingFileError);

  write_bytes(dir / "magic.pfm", "P5\n2 1\n-1.0\n" + payload);
  EXPECT_THROW(read_pfm(dir / "magic.pfm"), PfmHeaderError);
  write_bytes(dir / "color.pfm", "PF\n2 1\n-1.0\n" + payload);
  EXPECT_THROW(read_pfm(dir / "color.pfm"), PfmHeaderError);
  write_bytes(dir / "dims.pfm", "Pf\n2 x\n-1.0\n" + payload);
  EXPECT_THROW(read_pfm(dir / "dims.pfm"), PfmHeaderError);
  write_bytes(dir / "zero.pfm", "Pf\n0 1\n-1.0\n");
  EXPECT_THROW(read_pfm(dir / "zero.pfm"), PfmHeaderError);
  write_bytes(dir / "short_header.pfm", "Pf\n2 1\n");
  EXPECT_THROW(read_pfm(dir / "short_header.pfm"), PfmHeaderError);

  write_bytes(dir / "big.pfm", "Pf\n2 1\n1.0\n" + payload);
  EXPECT_THROW(read_pfm(dir / "big.pfm"), PfmByteOrderError);

  write_bytes(dir / "trunc.pfm", "Pf\n2 1\n-1.0\n" + payload.substr(0, 7));
  EXPECT_THROW(read_pfm(dir / "trunc.pfm"), PfmPayloadError);
  write_bytes(dir / "long.pfm", "Pf\n2 1\n-1.0\n" + payload + "x");
  EXPECT_THROW(read_pfm(dir / "long.pfm"), PfmPayloadError);

  // Any scale magnitude is accepted as long as it is negative.
  write_bytes(dir / "scale.pfm", "Pf\n2 1\n-3.25\n" + payload);
  EXPECT_NO_THROW(read_pfm(dir / "scale.pfm"));
}

TEST(Pfm, RandomRoundTripsAreBitExact) {
  const auto dir = scratch_dir("pfm_random");
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 97);
  std::uniform_int_distribution<std::uint32_t> bits(0, 0x7f7fffffu);  // non-negative finite floats
  for (int trial = 0; trial < 25; ++trial) {
    DepthMap m(dim(rng), dim(rng));
    for (float& v : m.data) v = std::bit_cast<float>(bits(rng));
    m.data.front() = 0.0f;
    m.data.back() = std::numeric_limits<float>::denorm_min();
    write_pfm(m, dir / "r.pfm");
    const DepthMap back = read_pfm(dir / "r.pfm");
    ASSERT_EQ(back.width, m.width);
    ASSERT_EQ(back.height, m.height);
    for (std::size_t i = 0; i < m.size(); ++i)
      ASSERT_EQ(std::bit_cast<std::uint32_t>(back.data[i]), std::bit_cast<std::uint32_t>(m.data[i]));
  }
}

TEST(MaskPng, ZerosAndSmallIdsRoundTrip) {
  const auto dir = scratch_dir("mask_small");
  LabelMap zeros(17, 9, 0);
  write_mask_png(zeros, dir / "z.png");
  EXPECT_EQ(read_mask_png(dir / "z.png"), zeros);

  LabelMap ids(5, 3, 0);
  ids(1, 1) = 1;
  ids(4, 2) = 2;
  write_mask_png(ids, dir / "ids.png");
  const LabelMap back = read_mask_png(dir / "ids.png");
  EXPECT_EQ(back, ids);
  EXPECT_EQ(std::set<int>(back.data.begin(), back.data.end()), (std::set<int>{0, 1, 2}));
}

TEST(MaskPng, RejectsIdsBeyondEightBits) {
  const auto dir = scratch_dir("mask_wide");
  LabelMap m(300, 1);
  for (int i = 0; i < 300; ++i) m(i, 0) = i;
  EXPECT_THROW(write_mask_png(m, dir / "m.png"), ContractError);
}

TEST(MaskPng, RandomRoundTripsAreExact) {
  const auto dir = scratch_dir("mask_random");
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> dim(1, 120), label(0, 255);
  for (int trial = 0; trial < 20; ++trial) {
    LabelMap m(dim(rng), dim(rng));
    for (auto& v : m.data) v = label(rng);
    write_mask_png(m, dir / "m.png");
    ASSERT_EQ(read_mask_png(dir / "m.png"), m);
  }
}

TEST(MaskPng, RefusesToCoerceOtherLayouts) {
  const auto dir = scratch_dir("mask_coerce");
  RgbImage rgb(4, 4, Rgb{1, 2, 3});
  write_rgb_png(rgb, dir / "rgb.png");
  EXPECT_THROW(read_mask_png(dir / "rgb.png"), PngFormatError);
  LabelMap m(4, 4, 7);
  write_mask_png(m, dir / "gray.png");
  EXPECT_THROW(read_rgb_png(dir / "gray.png"), PngFormatError);
  write_bytes(dir / "junk.png", "not a png");
  EXPECT_THROW(read_mask_png(dir / "junk.png"), PngFormatError);
  EXPECT_THROW(read_mask_png(dir / "absent.png"), MissingFileError);
}

TEST(RgbPng, RoundTrip) {
  const auto dir = scratch_dir("rgb_png");
  std::mt19937_64 rng(7);
  RgbImage img(33, 21);
  for (auto& p : img.data) p = Rgb{static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
                                   static_cast<std::uint8_t>(rng())};
  write_rgb_png(img, dir / "c.png");
  EXPECT_EQ(read_rgb_png(dir / "c.png"), img);
}

TEST(Prediction, ReadsRecordVerbatim) {
  const auto dir = scratch_dir("prediction");
  DepthMap m(3, 2, 0.25f);
  m(2, 1) = 7.0f;
  write_pfm(m, dir / "p.pfm");
  const Prediction d = read_prediction({"m", "s000000", DepthSpace::depth, dir / "p.pfm"});
  EXPECT_EQ(d.map, m);
  EXPECT_EQ(d.space, DepthSpace::depth);
  const Prediction inv = read_prediction({"m", "s000000", DepthSpace::inverse_depth, dir / "p.pfm"});
  EXPECT_EQ(inv.space, DepthSpace::inverse_depth);
  EXPECT_THROW(read_prediction({"m", "s1", DepthSpace::depth, dir / "missing.pfm"}), MissingFileError);
}

TEST(Sidecar, RoundTripAndRelativePaths) {
  const auto dir = scratch_dir("sidecar");
  PredictionSidecar sc{"midas-small", DepthSpace::inverse_depth,
                       {{"midas-small", "s000000", DepthSpace::inverse_depth, "pred/s000000.pfm"},
                        {"midas-small", "s000001", DepthSpace::inverse_depth, "/abs/s000001.pfm"}}};
  write_sidecar(sc, dir / "run.json");
  const PredictionSidecar back = load_sidecar(dir / "run.json");
  EXPECT_EQ(back.method, "midas-small");
  EXPECT_EQ(back.space, DepthSpace::inverse_depth);
  ASSERT_EQ(back.records.size(), 2u);
  EXPECT_EQ(back.records[0].scene_id, "s000000");
  EXPECT_EQ(back.records[0].file, dir / "pred/s000000.pfm");
  EXPECT_EQ(back.records[1].file, fs::path("/abs/s000001.pfm"));
  EXPECT_EQ(back.records[1].space, DepthSpace::inverse_depth);
}

TEST(Sidecar, SpaceMustBeDeclared) {
  const auto dir = scratch_dir("sidecar_bad");
  write_bytes(dir / "nospace.json", R"({"method": "x", "files": {}})");
  EXPECT_THROW(load_sidecar(dir / "nospace.json"), FormatError);
  write_bytes(dir / "badspace.json", R"({"method": "x", "space": "disparity", "files": {}})");
  EXPECT_THROW(load_sidecar(dir / "badspace.json"), DataError);
  write_bytes(dir / "broken.json", "{");
  EXPECT_THROW(load_sidecar(dir / "broken.json"), FormatError);
  EXPECT_THROW(load_sidecar(dir / "absent.json"), MissingFileError);
}

TEST(Digest, Sha256OfKnownContent) {
  const auto dir = scratch_dir("digest");
  write_bytes(dir / "abc", "abc");
  EXPECT_EQ(file_digest(dir / "abc"), "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
