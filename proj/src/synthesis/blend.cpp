#include <omp.h>

#include <algorithm>
#include <array>
#include <vector>

#include "grainkit/error.hpp"
#include "grainkit/synthesis.hpp"

namespace grainkit {

namespace {

// Intensity -> interval index, -1 for gaps.
std::array<std::int8_t, kMaxIntensity + 1> interval_lut(const IntervalModel& model) {
  std::array<std::int8_t, kMaxIntensity + 1> lut;
  lut.fill(-1);
  for (std::size_t i = 0; i < model.intervals.size(); ++i) {
    const Interval& iv = model.intervals[i];
    for (int v = iv.lower_bound; v <= iv.upper_bound; ++v) {
      if (lut[v] < 0) {
        lut[v] = static_cast<std::int8_t>(i);
      }
    }
  }
  return lut;
}

struct RowCounters {
  long grained = 0;
  long skipped = 0;
  unsigned long long clipped = 0;
  std::uint64_t digest = 0;
};

// Fills rows [y0, y0 + bh) of the grain buffer for one block row and applies
// the vertical-seam filter, which only touches samples of the same rows.
void grain_block_row(const Frame& decoded, int c, int by, const IntervalModel& model,
                     const std::array<std::int8_t, kMaxIntensity + 1>& lut, const FgcParams& params,
                     const GrainPatternDb& db, const SynthesisConfig& cfg, std::uint32_t frame_index,
                     std::int32_t* grain, std::ptrdiff_t stride, std::vector<long>& sums, RowCounters& rc) {
  const VideoFormat& fmt = decoded.format();
  const int w = fmt.plane_width(c);
  const int h = fmt.plane_height(c);
  const int y0 = by * kGrainBlock;
  const int bh = std::min(kGrainBlock, h - y0);
  const int nbx = (w + kGrainBlock - 1) / kGrainBlock;
  const int depth_shift = fmt.bit_depth - kIntensityBits;
  const auto src = decoded.view(c);

  std::fill(sums.begin(), sums.begin() + nbx, 0L);
  for (int j = 0; j < bh; ++j) {
    const std::uint16_t* row = src.row(y0 + j);
    for (int x = 0; x < w; ++x) {
      sums[x >> 3] += row[x];
    }
  }

  for (int bx = 0; bx < nbx; ++bx) {
    const int x0 = bx * kGrainBlock;
    const int bw = std::min(kGrainBlock, w - x0);
    const int n = bw * bh;
    const int avg = static_cast<int>((sums[bx] + n / 2) / n) >> depth_shift;
    const int idx = lut[avg];
    if (idx < 0) {
      for (int j = 0; j < bh; ++j) {
        std::fill_n(grain + j * stride + x0, bw, 0);
      }
      ++rc.skipped;
      continue;
    }
    const Interval& iv = model.intervals[idx];
    const std::uint64_t seed = block_seed(cfg.master_seed, frame_index, c, by, bx);
    GrainRng rng(seed);
    const int ox = static_cast<int>(rng.next_below(kMaxBlockOffset + 1));
    const int oy = static_cast<int>(rng.next_below(kMaxBlockOffset + 1));
    const std::int16_t* pat = db.pattern(iv.h_cutoff, iv.v_cutoff).data() + oy * kPatternSize + ox;
    const int sf = iv.scaling_factor;
    const int shift = params.log2_scale_factor + kPatternScaleBits;
    for (int j = 0; j < bh; ++j) {
      std::int32_t* g = grain + j * stride + x0;
      const std::int16_t* p = pat + j * kPatternSize;
      for (int i = 0; i < bw; ++i) {
        g[i] = (p[i] * sf) >> shift;
      }
    }
    ++rc.grained;
    rc.digest ^= mix64(seed);
  }

  if (cfg.deblock && w > kGrainBlock) {
    for (int j = 0; j < bh; ++j) {
      std::int32_t* g = grain + j * stride;
      for (int x = kGrainBlock; x < w; x += kGrainBlock) {
        const std::int32_t a = g[x - 2];
        const std::int32_t b = g[x - 1];
        const std::int32_t c0 = g[x];
        const std::int32_t d = g[std::min(x + 1, w - 1)];
        g[x - 1] = (a + 2 * b + c0 + 2) >> 2;
        g[x] = (b + 2 * c0 + d + 2) >> 2;
      }
    }
  }
}

// Grain is held at 8-bit scale until here so deblocking rounds the same way
// at every bit depth.
unsigned long long add_clip(const std::uint16_t* in, const std::int32_t* grain, std::uint16_t* out, int n,
                            int max_value, int depth_shift) {
  unsigned long long clipped = 0;
  for (int i = 0; i < n; ++i) {
    const int v = in[i] + grain[i] * (1 << depth_shift);
    clipped += static_cast<unsigned>(v < 0) + static_cast<unsigned>(v > max_value);
    out[i] = static_cast<std::uint16_t>(std::clamp(v, 0, max_value));
  }
  return clipped;
}

}  // namespace

Frame blend_frame(const Frame& decoded, const FgcParams& params, const GrainPatternDb& db,
                  const SynthesisConfig& cfg, std::uint32_t frame_index, BlendReport* report) {
  require_valid(params);
  const VideoFormat& fmt = decoded.format();
  const int max_value = fmt.max_value();
  const int depth_shift = fmt.bit_depth - kIntensityBits;
  Frame out = decoded;
  BlendReport rep;
  rep.frame_index = frame_index;
  rep.sei_applied = true;
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
  const bool fused = !(cfg.deblock && cfg.deblock_horizontal);

  for (int c = 0; c < kNumComponents; ++c) {
    if (!params.components[c]) {
      continue;
    }
    const IntervalModel& model = *params.components[c];
    const auto lut = interval_lut(model);
    const int w = fmt.plane_width(c);
    const int h = fmt.plane_height(c);
    const int nby = (h + kGrainBlock - 1) / kGrainBlock;
    const int nbx = (w + kGrainBlock - 1) / kGrainBlock;
    const auto in = decoded.view(c);
    auto dst = out.view(c);

    // Unfused path keeps the whole grain plane for the horizontal-seam pass.
    std::vector<std::int32_t> plane_grain(fused ? 0 : static_cast<std::size_t>(w) * h);

    long grained = 0;
    long skipped = 0;
    unsigned long long clipped = 0;
    std::uint64_t digest = 0;

#pragma omp parallel num_threads(threads) reduction(+ : grained, skipped, clipped) reduction(^ : digest)
    {
      std::vector<std::int32_t> local(fused ? static_cast<std::size_t>(w) * kGrainBlock : 0);
      std::vector<long> sums(static_cast<std::size_t>(nbx));
      RowCounters rc;
#pragma omp for schedule(static)
      for (int by = 0; by < nby; ++by) {
        const int y0 = by * kGrainBlock;
        const int bh = std::min(kGrainBlock, h - y0);
        std::int32_t* g = fused ? local.data() : plane_grain.data() + static_cast<std::size_t>(y0) * w;
        grain_block_row(decoded, c, by, model, lut, params, db, cfg, frame_index, g, w, sums, rc);
        if (fused) {
          for (int j = 0; j < bh; ++j) {
            rc.clipped += add_clip(in.row(y0 + j), g + j * w, dst.row(y0 + j), w, max_value, depth_shift);
          }
        }
      }
      grained += rc.grained;
      skipped += rc.skipped;
      clipped += rc.clipped;
      digest ^= rc.digest;
    }

    if (!fused) {
      deblock_grain(PlaneView<std::int32_t>{plane_grain.data(), w, h, w}, false, true);
#pragma omp parallel for num_threads(threads) reduction(+ : clipped) schedule(static)
      for (int y = 0; y < h; ++y) {
        clipped += add_clip(in.row(y), plane_grain.data() + static_cast<std::size_t>(y) * w, dst.row(y), w,
                            max_value, depth_shift);
      }
    }

    ComponentReport& cr = rep.components[c];
    cr.present = true;
    cr.blocks_grained = static_cast<int>(grained);
    cr.blocks_skipped_no_interval = static_cast<int>(skipped);
    cr.clip_count = clipped;
    rep.seed_digest ^= digest;
  }
  if (report != nullptr) {
    *report = rep;
  }
  return out;
}

}  // namespace grainkit
