#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "grainkit/analysis.hpp"
#include "grainkit/sei_codec.hpp"

namespace grainkit {
namespace {

using testing::make_format;
using testing::shared_db;

std::vector<Frame> grained_clip(int n, const VideoFormat& fmt, const FgcParams& p, std::uint64_t seed = 0) {
  const int levels[] = {60, 100, 130, 160, 200};
  const Frame clean = testing::banded_frame(fmt, levels);
  SynthesisConfig cfg;
  cfg.master_seed = seed;
  std::vector<Frame> out;
  for (int i = 0; i < n; ++i) out.push_back(blend_frame(clean, p, shared_db(), cfg, static_cast<std::uint32_t>(i)));
  return out;
}

double recovered_sf(const FgcParams& rec, int lsf_injected, int intensity) {
  if (!rec.components[0]) return 0.0;
  const Interval* iv = select_interval(*rec.components[0], intensity);
  if (iv == nullptr) return 0.0;
  return iv->scaling_factor * std::ldexp(1.0, lsf_injected - rec.log2_scale_factor);
}

TEST(Calibration, EveryEntryIsItsOwnNearest) {
  const auto& cal = CutoffCalibration::get(shared_db());
  for (int h = kMinCutoff; h <= kMaxCutoff; ++h) {
    for (int v = kMinCutoff; v <= kMaxCutoff; ++v) {
      const auto& e = cal.entry(h, v);
      EXPECT_EQ(cal.nearest(e.h_centroid, e.v_centroid), std::make_pair(h, v));
      EXPECT_GT(e.gain, 0.7);
      EXPECT_LT(e.gain, 1.1);
    }
  }
}

TEST(Analyzer, HundredFramesStrideThirtyTwo) {
  std::vector<Frame> frames;
  for (int i = 0; i < 100; ++i) frames.push_back(testing::flat_frame(make_format(64, 64), 100));
  testing::MemorySource src(frames);
  std::vector<EpochDiagnostics> diag;
  const auto out = analyze_sequence(src, shared_db(), {}, {}, &diag);
  ASSERT_EQ(out.size(), 100u);
  for (std::uint32_t i = 0; i < 100; ++i) EXPECT_EQ(out[i].frame_index, i);
  ASSERT_EQ(diag.size(), 4u);
  std::set<std::uint32_t> epochs;
  for (const auto& d : diag) epochs.insert(d.frame_index);
  EXPECT_EQ(epochs, (std::set<std::uint32_t>{0, 32, 64, 96}));
}

TEST(Analyzer, CleanVideoHasNoGrain) {
  const int levels[] = {40, 120, 210};
  std::vector<Frame> frames(6, testing::banded_frame(make_format(128, 96), levels));
  testing::MemorySource src(frames);
  for (const auto& fp : analyze_sequence(src, shared_db(), {}, {})) {
    for (const auto& m : fp.params.components) {
      if (!m) continue;
      for (const auto& iv : m->intervals) EXPECT_EQ(iv.scaling_factor, 0);
    }
  }
}

TEST(Analyzer, SingleFrameDegeneratesToNoGrain) {
  std::mt19937_64 rng(1);
  Frame f = testing::flat_frame(make_format(64, 64), 128);
  testing::add_gaussian(f, 0, 6.0, rng);
  testing::MemorySource src({f});
  std::vector<EpochDiagnostics> diag;
  const auto out = analyze_sequence(src, shared_db(), {}, {}, &diag);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(diag[0].denoise_passthrough);
  EXPECT_FALSE(out[0].params.any_component_present());
}

TEST(Analyzer, ClosedLoopRecoversScalingFactorAndCutoffs) {
  const auto fmt = make_format(480, 256);
  const auto frames = grained_clip(5, fmt, testing::luma_params(40, 8, 8, 5));
  const auto diag = analyze_window(frames, 2, 2, shared_db(), {}, {});
  const auto& p = diag.params;
  EXPECT_TRUE(validate(p).empty());
  for (int level : {60, 100, 130, 160, 200}) {
    EXPECT_NEAR(recovered_sf(p, 5, level), 40.0, 10.0) << describe(p);
  }
  ASSERT_TRUE(p.components[0]);
  for (const auto& iv : p.components[0]->intervals) {
    EXPECT_NEAR(iv.h_cutoff, 8, 2);
    EXPECT_NEAR(iv.v_cutoff, 8, 2);
  }
  EXPECT_FALSE(p.components[1]);
  EXPECT_FALSE(p.components[2]);
}

TEST(Analyzer, CoarseGrainGivesLowCutoffs) {
  const auto frames = grained_clip(5, make_format(480, 256), testing::luma_params(60, 4, 12, 4));
  const auto p = analyze_window(frames, 2, 2, shared_db(), {}, {}).params;
  ASSERT_TRUE(p.components[0]);
  EXPECT_NEAR(p.components[0]->intervals[0].h_cutoff, 4, 2) << describe(p);
  EXPECT_NEAR(p.components[0]->intervals[0].v_cutoff, 12, 2) << describe(p);
}

TEST(Analyzer, MonotoneInInjectedScalingFactor) {
  // lsf 2: at lsf 5 sf 10 and 20 both fall on the floor-shift plateau.
  double prev = 0.0;
  for (int sf : {10, 20, 40, 80}) {
    const auto frames = grained_clip(5, make_format(320, 192), testing::luma_params(sf, 8, 8, 2), 7);
    const auto p = analyze_window(frames, 2, 2, shared_db(), {}, {}).params;
    const double r = recovered_sf(p, 2, 130);
    EXPECT_GT(r, prev) << sf << ": " << describe(p);
    prev = r;
  }
}

TEST(Analyzer, DeterministicAndStreamingMatchesBatch) {
  const auto frames = grained_clip(40, make_format(128, 96), testing::luma_params(50, 6, 6, 5));
  AnalysisConfig acfg;
  acfg.analysis_stride_frames = 16;
  testing::MemorySource a(frames);
  testing::MemorySource b(frames);
  const auto ra = analyze_sequence(a, shared_db(), {}, acfg);
  const auto rb = analyze_sequence(b, shared_db(), {}, acfg);
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_EQ(ra[i].params, rb[i].params);

  GrainAnalyzer an(shared_db(), {}, acfg);
  std::vector<FrameParams> streamed;
  for (const auto& f : frames) {
    for (auto& fp : an.push(f)) streamed.push_back(fp);
  }
  for (auto& fp : an.finish()) streamed.push_back(fp);
  ASSERT_EQ(streamed.size(), ra.size());
  for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_EQ(streamed[i].params, ra[i].params);
}

}  // namespace
}  // namespace grainkit
