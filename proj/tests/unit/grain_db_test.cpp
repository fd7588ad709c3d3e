#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "grainkit/dct.hpp"
#include "grainkit/error.hpp"
#include "grainkit/synthesis.hpp"

namespace grainkit {
namespace {

using testing::shared_db;

TEST(CutoffIndex, PrintedFormula) {
  const int expected[] = {11, 15, 19, 23, 27, 31, 35, 39, 43, 47, 51, 55, 59};
  for (int v = kMinCutoff; v <= kMaxCutoff; ++v) {
    EXPECT_EQ(cutoff_index(v), expected[v - kMinCutoff]);
    EXPECT_LE(cutoff_index(v), kPatternSize - 1);
  }
  EXPECT_THROW(cutoff_index(1), std::out_of_range);
  EXPECT_THROW(cutoff_index(15), std::out_of_range);
}

std::vector<double> float_coeffs(const GrainPatternDb& db, int h, int v) {
  static const dct::FloatDct t(kPatternSize);
  const auto p = db.pattern(h, v);
  std::vector<double> in(p.begin(), p.end());
  std::vector<double> out(kPatternArea);
  t.forward(in, out);
  return out;
}

// Stopband coefficients of every pattern. Exact zeros
// are out of reach once the inverse transform is rounded to integers: the
// rounding noise (variance 1/12 per sample) spreads evenly over all 4096
// coefficients. The bound below is that noise floor with 3x headroom.
TEST(GrainDb, StopbandAtRoundingNoiseFloor) {
  const auto& db = shared_db();
  for (int h = kMinCutoff; h <= kMaxCutoff; ++h) {
    for (int v = kMinCutoff; v <= kMaxCutoff; ++v) {
      const auto c = float_coeffs(db, h, v);
      const int hc = cutoff_index(h);
      const int vc = cutoff_index(v);
      double stop = 0.0, stop_count = 0.0, worst = 0.0;
      for (int y = 0; y < kPatternSize; ++y) {
        for (int x = 0; x < kPatternSize; ++x) {
          const double e = c[y * kPatternSize + x] * c[y * kPatternSize + x];
          if (x > hc || y > vc) {
            stop += e;
            stop_count += 1.0;
            worst = std::max(worst, std::abs(c[y * kPatternSize + x]));
          }
        }
      }
      // Rounding noise: mean square 1/12 per coefficient.
      EXPECT_LT(stop / stop_count, 3.0 / 12.0) << h << "," << v;
      EXPECT_LT(worst, 2.0) << h << "," << v;
    }
  }
}

TEST(GrainDb, DeterministicPerSeed) {
  const auto a = GrainPatternDb::build(99);
  const auto b = GrainPatternDb::build(99);
  const auto c = GrainPatternDb::build(100);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
}

TEST(GrainDb, PatternsAreZeroMeanWithCalibratedSigma) {
  const auto& db = shared_db();
  EXPECT_DOUBLE_EQ(db.sigma_db(), db.pattern_sigma(8, 8));
  EXPECT_GT(db.sigma_db(), 10.0);
  for (int h = kMinCutoff; h <= kMaxCutoff; ++h) {
    const auto p = db.pattern(h, h);
    double s = 0.0;
    for (auto v : p) s += v;
    EXPECT_LT(std::abs(s / kPatternArea), 0.5) << h;
  }
}

double horizontal_centroid(const GrainPatternDb& db, int h, int v) {
  const auto c = float_coeffs(db, h, v);
  double num = 0.0, den = 0.0;
  for (int y = 0; y < kPatternSize; ++y) {
    for (int x = 0; x < kPatternSize; ++x) {
      const double e = c[y * kPatternSize + x] * c[y * kPatternSize + x];
      num += x * e;
      den += e;
    }
  }
  return num / den;
}

TEST(GrainDb, CentroidGrowsWithHorizontalCutoff) {
  const auto& db = shared_db();
  for (int v : {2, 8, 14}) {
    double prev = -1.0;
    for (int h = kMinCutoff; h <= kMaxCutoff; ++h) {
      const double c = horizontal_centroid(db, h, v);
      EXPECT_GT(c, prev) << h << "," << v;
      prev = c;
    }
  }
}

TEST(GrainDb, CacheRoundTripAndValidation) {
  const auto dir = testing::temp_dir("db");
  const auto& db = shared_db();
  db.save(dir + "/db.bin");
  EXPECT_EQ(std::filesystem::file_size(dir + "/db.bin"), 4u + 4 + 8 + 8 + 169u * 4096 * 2);
  EXPECT_TRUE(GrainPatternDb::load(dir + "/db.bin") == db);
  EXPECT_TRUE(GrainPatternDb::load_or_build(dir + "/db.bin", db.seed()) == db);

  {
    std::fstream f(dir + "/db.bin", std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  EXPECT_ANY_THROW(GrainPatternDb::load(dir + "/db.bin"));
  const auto rebuilt = GrainPatternDb::load_or_build(dir + "/other.bin", 5);
  EXPECT_EQ(rebuilt.seed(), 5u);
  EXPECT_TRUE(std::filesystem::exists(dir + "/other.bin"));
}

TEST(GrainBlock, OffsetsCoverRangeUniformly) {
  // 57 x 57 cells, 10^6 draws, chi-square against uniform.
  constexpr int kCells = (kMaxBlockOffset + 1) * (kMaxBlockOffset + 1);
  std::vector<int> hist(kCells, 0);
  GrainRng rng(12345);
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i) {
    const int ox = static_cast<int>(rng.next_below(kMaxBlockOffset + 1));
    const int oy = static_cast<int>(rng.next_below(kMaxBlockOffset + 1));
    ASSERT_LE(ox, kMaxBlockOffset);
    ASSERT_LE(oy, kMaxBlockOffset);
    ++hist[oy * (kMaxBlockOffset + 1) + ox];
  }
  const double expect = static_cast<double>(kDraws) / kCells;
  double chi2 = 0.0;
  for (int n : hist) chi2 += (n - expect) * (n - expect) / expect;
  // 3248 degrees of freedom; the 1% upper critical value is about 3437.
  const double dof = kCells - 1;
  const double critical = dof + 2.326 * std::sqrt(2.0 * dof);
  EXPECT_LT(chi2, critical);
  for (int n : hist) EXPECT_GT(n, 0);
}

TEST(GrainBlock, ClonedStateRepeatsAndOriginWindow) {
  const auto& db = shared_db();
  const Interval iv{0, 255, 40, 6, 10};
  GrainRng a(777);
  GrainRng b = a;
  EXPECT_EQ(grain_block(db, iv, a), grain_block(db, iv, b));
  const auto w = grain_window(db, iv, 0, 0);
  const auto p = db.pattern(6, 10);
  for (int j = 0; j < 8; ++j) {
    for (int i = 0; i < 8; ++i) EXPECT_EQ(w[j * 8 + i], p[j * kPatternSize + i]);
  }
}

TEST(ScaleAndShift, Examples) {
  EXPECT_EQ(scale_and_shift(128, 64, 5), 4);
  EXPECT_EQ(scale_and_shift(-128, 64, 5), -4);
  EXPECT_EQ(scale_and_shift(-1, 1, 2), -1);  // floor, not truncation
  EXPECT_EQ(scale_and_shift(32767, 255, 2), (32767 * 255) >> 8);
  GrainBlock b;
  b.fill(-3000);
  scale_and_shift(b, 0, 5);
  for (auto v : b) EXPECT_EQ(v, 0);
}

}  // namespace
}  // namespace grainkit
