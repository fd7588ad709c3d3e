#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "grainkit/error.hpp"
#include "grainkit/json_report.hpp"
#include "grainkit/metrics.hpp"

namespace grainkit {
namespace {

using testing::make_format;

TEST(Psnr, IdenticalIsInfinite) {
  std::mt19937_64 rng(1);
  const Frame f = testing::random_frame(make_format(32, 32), rng);
  for (double v : psnr(f, f)) EXPECT_TRUE(std::isinf(v));
}

TEST(Psnr, OffByOne) {
  const auto fmt = make_format(32, 32);
  const auto p = psnr(testing::flat_frame(fmt, 100), testing::flat_frame(fmt, 101));
  for (double v : p) EXPECT_NEAR(v, 48.1308, 1e-3);
}

TEST(Psnr, Symmetric) {
  std::mt19937_64 rng(2);
  const auto fmt = make_format(32, 16, 10);
  for (int i = 0; i < 20; ++i) {
    const Frame a = testing::random_frame(fmt, rng);
    const Frame b = testing::random_frame(fmt, rng);
    EXPECT_EQ(psnr(a, b), psnr(b, a));
  }
}

TEST(Psnr, SingleSampleChangeIsDetected) {
  std::mt19937_64 rng(3);
  const Frame a = testing::random_frame(make_format(64, 64), rng);
  Frame b = a;
  b.at(0, 17, 33) ^= 1;
  EXPECT_TRUE(std::isfinite(psnr(a, b)[0]));
  EXPECT_THROW(psnr(a, testing::flat_frame(make_format(32, 32), 0)), FormatError);
}

TEST(GrainSigma, ConstantIsZero) {
  const auto s = grain_sigma(testing::flat_frame(make_format(64, 64), 90), 0);
  ASSERT_TRUE(s);
  EXPECT_EQ(*s, 0.0);
}

TEST(GrainSigma, GaussianFiveAndMonotone) {
  std::mt19937_64 rng(4);
  double prev = 0.0;
  for (double sigma : {2.0, 5.0, 10.0}) {
    Frame f = testing::flat_frame(make_format(256, 256), 128);
    testing::add_gaussian(f, 0, sigma, rng);
    const auto s = grain_sigma(f, 0);
    ASSERT_TRUE(s);
    if (sigma == 5.0) {
      EXPECT_GE(*s, 4.0);
      EXPECT_LE(*s, 6.0);
    }
    EXPECT_GT(*s, prev);
    prev = *s;
  }
}

TEST(GrainSigma, NoFlatBlocksIsAbsent) {
  Frame f(make_format(64, 64), 0, 128);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) f.at(0, x, y) = static_cast<std::uint16_t>((x * 16 + y * 8) % 256);
  }
  EXPECT_FALSE(grain_sigma(f, 0).has_value());
}

TEST(Metrics, PsnrDropsWithScalingFactor) {
  const Frame clean = testing::flat_frame(make_format(256, 256), 128);
  double prev = std::numeric_limits<double>::infinity();
  for (int sf : {8, 16, 32, 64, 128, 255}) {
    const Frame g = blend_frame(clean, testing::luma_params(sf, 8, 8, 5), testing::shared_db(), {}, 0);
    const double p = psnr(clean, g)[0];
    EXPECT_LT(p, prev) << sf;
    prev = p;
  }
}

TEST(Metrics, CompareSequencesAndJson) {
  const auto fmt = make_format(64, 64);
  std::vector<Frame> ref, test;
  for (int i = 0; i < 3; ++i) {
    ref.push_back(testing::flat_frame(fmt, 100));
    test.push_back(testing::flat_frame(fmt, i == 1 ? 100 : 102));
  }
  testing::MemorySource a(ref), b(test);
  const MetricReport r = compare_sequences(a, b);
  ASSERT_EQ(r.frames.size(), 3u);
  EXPECT_TRUE(std::isinf(r.frames[1].psnr[0]));
  EXPECT_NEAR(r.psnr[0], 10 * std::log10(255.0 * 255.0 / (8.0 / 3.0)), 1e-9);
  const auto j = to_json(r);
  EXPECT_EQ(j["frames"][1]["psnr_y"], "inf");
  EXPECT_TRUE(j["frames"][0]["psnr_y"].is_number());
}

}  // namespace
}  // namespace grainkit
