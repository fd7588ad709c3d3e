#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "grainkit/analysis.hpp"
#include "grainkit/error.hpp"

namespace grainkit {
namespace {

using testing::make_format;

TEST(Mask, ConstantFrameKeepsEverything) {
  const BlockMask m = mask_flat_regions(testing::flat_frame(make_format(64, 48), 77), 0, {});
  EXPECT_EQ(m.cols, 8);
  EXPECT_EQ(m.rows, 6);
  EXPECT_EQ(m.kept_count(), 48);
  EXPECT_DOUBLE_EQ(m.coverage(), 1.0);
}

TEST(Mask, VerticalSplitDropsStraddlingColumns) {
  const Frame f = testing::banded_frame(make_format(64, 32), std::vector<int>{0, 255});
  const BlockMask m = mask_flat_regions(f, 0, {});
  for (int by = 0; by < m.rows; ++by) {
    for (int bx = 0; bx < m.cols; ++bx) {
      EXPECT_EQ(m.kept(bx, by), bx != 3 && bx != 4) << bx << "," << by;
    }
  }
}

TEST(Mask, PixelCheckerboardDropsEverything) {
  Frame f(make_format(64, 64), 0, 128);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) f.at(0, x, y) = (x + y) % 2 ? 255 : 0;
  }
  EXPECT_EQ(mask_flat_regions(f, 0, {}).kept_count(), 0);
}

TEST(Mask, StepInsideBlockAlwaysDropped) {
  std::mt19937 rng(7);
  AnalysisConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    Frame f = testing::flat_frame(make_format(64, 64), 100);
    const int bx = static_cast<int>(rng() % 8);
    const int by = static_cast<int>(rng() % 8);
    const int sx = bx * 8 + 1 + static_cast<int>(rng() % 7);
    const int mag = static_cast<int>(cfg.edge_threshold) + 1 + static_cast<int>(rng() % 100);
    for (int y = by * 8; y < by * 8 + 8; ++y) {
      for (int x = sx; x < 64; ++x) f.at(0, x, y) = static_cast<std::uint16_t>(100 + mag);
    }
    EXPECT_FALSE(mask_flat_regions(f, 0, cfg).kept(bx, by));
  }
}

TEST(Mask, FlatBlocksFarFromEdgesKept) {
  // A single bright block in the corner leaves distant blocks alone.
  Frame f = testing::flat_frame(make_format(64, 64), 60);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) f.at(0, x, y) = 220;
  }
  const BlockMask m = mask_flat_regions(f, 0, {});
  EXPECT_FALSE(m.kept(0, 0));
  EXPECT_FALSE(m.kept(1, 0));
  for (int by = 2; by < 8; ++by) {
    for (int bx = 2; bx < 8; ++bx) EXPECT_TRUE(m.kept(bx, by));
  }
}

TEST(Mask, TenBitThresholdScales) {
  // A step of 30 (8-bit units) stays below the default threshold at both depths.
  const Frame f8 = testing::banded_frame(make_format(64, 16, 8), std::vector<int>{100, 130});
  const Frame f10 = testing::banded_frame(make_format(64, 16, 10), std::vector<int>{100, 130});
  EXPECT_EQ(mask_flat_regions(f8, 0, {}).kept_count(), 16);
  EXPECT_EQ(mask_flat_regions(f10, 0, {}).kept_count(), 16);
}

TEST(Mask, ChromaPlaneResolution) {
  const BlockMask m = mask_flat_regions(testing::flat_frame(make_format(64, 48), 77), 1, {});
  EXPECT_EQ(m.cols, 4);
  EXPECT_EQ(m.rows, 3);
}

TEST(AnalysisConfig, Validation) {
  AnalysisConfig c;
  c.max_intervals = 11;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.poly_order = 6;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.block_size = 16;
  EXPECT_THROW(c.validate(), ValidationError);
}

}  // namespace
}  // namespace grainkit
