#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grainkit/fgc_params.hpp"
#include "grainkit/frame.hpp"
#include "grainkit/prng.hpp"
#include "grainkit/sidecar.hpp"

namespace grainkit {

class FrameSource;
class FrameSink;

inline constexpr int kPatternSize = 64;
inline constexpr int kPatternArea = kPatternSize * kPatternSize;
inline constexpr int kGrainBlock = 8;
inline constexpr int kNumCutoffValues = kMaxCutoff - kMinCutoff + 1;  // 13
inline constexpr int kMaxBlockOffset = kPatternSize - kGrainBlock;    // 56
// Extra downscaling of the pre-scaled patterns applied with the signalled shift.
inline constexpr int kPatternScaleBits = 6;
inline constexpr std::uint64_t kDefaultDatabaseSeed = 0x5EED0F11A7u;

// Signalled cutoff value in [2, 14] -> highest retained DCT index of the
// 64x64 pattern: h = value - 2, h_c = ((h + 3) << 2) - 1. Throws
// std::out_of_range outside [2, 14].
int cutoff_index(int comp_model_value);

// 13 x 13 low-pass filtered 64x64 grain patterns, immutable after build.
class GrainPatternDb {
 public:
  // Generates one 64x64 block of unit Gaussian DCT coefficients (pre-scaled by
  // 2^6, DC forced to zero), then for each cutoff pair zeroes every coefficient
  // with column > h_c or row > v_c and applies the inverse integer DCT.
  static GrainPatternDb build(std::uint64_t seed = kDefaultDatabaseSeed);

  // Cache file: "FGDB" magic, u32 version, u64 seed, f64 sigma_db, then
  // 169 x 64 x 64 int16 little-endian patterns ordered by (h, v).
  void save(const std::filesystem::path& path) const;
  static GrainPatternDb load(const std::filesystem::path& path);
  // Loads `cache` when it exists with the same seed, otherwise builds and
  // (best effort) writes it.
  static GrainPatternDb load_or_build(const std::filesystem::path& cache, std::uint64_t seed);

  std::span<const std::int16_t, kPatternArea> pattern(int h_cutoff, int v_cutoff) const;

  // Standard deviation of the (8, 8) pattern, the calibration constant of the
  // gain law sigma_out = sf * sigma_db / 2^(log2_scale_factor + 6).
  double sigma_db() const { return sigma_db_; }
  double pattern_sigma(int h_cutoff, int v_cutoff) const;
  std::uint64_t seed() const { return seed_; }

  bool operator==(const GrainPatternDb&) const = default;

  static constexpr std::uint32_t kCacheVersion = 1;

 private:
  static std::size_t index(int h_cutoff, int v_cutoff);
  void compute_sigmas();

  std::uint64_t seed_ = 0;
  double sigma_db_ = 0.0;
  std::vector<std::int16_t> patterns_;
  std::vector<double> sigmas_;
};

struct SynthesisConfig {
  std::uint64_t master_seed = 0;
  bool deblock = true;
  // Also smooth horizontal 8x8 seams (off by default).
  bool deblock_horizontal = false;
  // OpenMP thread count; 0 uses the runtime default.
  int threads = 0;
};

struct ComponentReport {
  bool present = false;
  int blocks_grained = 0;
  int blocks_skipped_no_interval = 0;
  std::uint64_t clip_count = 0;

  bool operator==(const ComponentReport&) const = default;
};

struct BlendReport {
  std::uint32_t frame_index = 0;
  std::array<ComponentReport, 3> components{};
  // XOR of mix64(block seed) over all grained blocks.
  std::uint64_t seed_digest = 0;
  bool sei_applied = false;
  std::string error;

  bool operator==(const BlendReport&) const = default;
};

using GrainBlock = std::array<std::int32_t, kGrainBlock * kGrainBlock>;

// The 8x8 window at (offset_x, offset_y) of the pattern for the interval's cutoffs.
GrainBlock grain_window(const GrainPatternDb& db, const Interval& interval, int offset_x, int offset_y);

// Draws offset_x then offset_y uniformly from [0, 56] and returns the window.
GrainBlock grain_block(const GrainPatternDb& db, const Interval& interval, GrainRng& rng);

// (sample * sf) >> (log2_scale_factor + 6), arithmetic (floor) shift.
// Width analysis: |pattern sample| <= 2^15 - 1 (int16 storage) and sf <= 255,
// so |sample * sf| < 2^23 and 32-bit arithmetic cannot overflow.
inline std::int32_t scale_and_shift(std::int32_t sample, int scaling_factor, int log2_scale_factor) {
  return (sample * scaling_factor) >> (log2_scale_factor + kPatternScaleBits);
}
void scale_and_shift(GrainBlock& block, int scaling_factor, int log2_scale_factor);

// [1 2 1]/4 across every vertical 8-sample seam on the two adjacent columns
// (and optionally across horizontal seams), computed from unfiltered values.
void deblock_grain(PlaneView<std::int32_t> grain, bool vertical_seams = true, bool horizontal_seams = false);

// Additive blending of grain onto a decoded frame. Data-parallel over 8x8
// block rows; output is independent of the thread count.
Frame blend_frame(const Frame& decoded, const FgcParams& params, const GrainPatternDb& db,
                  const SynthesisConfig& cfg, std::uint32_t frame_index, BlendReport* report = nullptr);

// Straightforward serial implementation of the same process, kept as the
// reference the parallel kernel is tested against.
Frame blend_frame_reference(const Frame& decoded, const FgcParams& params, const GrainPatternDb& db,
                            const SynthesisConfig& cfg, std::uint32_t frame_index, BlendReport* report = nullptr);

// Sidecar records keyed by frame index.
using SeiStream = std::map<std::uint32_t, std::vector<std::uint8_t>>;
SeiStream index_records(const std::vector<SeiRecord>& records);

// Applies each frame's own SEI (persistence 0). Frames without a record, or
// whose record fails to decode, pass through unchanged; the failure is noted
// in that frame's report.
Frame synthesize_frame(const Frame& decoded, std::uint32_t frame_index, const SeiStream& sei,
                       const GrainPatternDb& db, const SynthesisConfig& cfg, BlendReport& report);

std::size_t synthesize_sequence(FrameSource& source, const SeiStream& sei, const GrainPatternDb& db,
                                const SynthesisConfig& cfg, FrameSink& sink,
                                const std::function<void(const BlendReport&)>& on_report = {});

}  // namespace grainkit
