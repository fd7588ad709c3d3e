#include <algorithm>
#include <vector>

#include "grainkit/error.hpp"
#include "grainkit/synthesis.hpp"

namespace grainkit {

GrainBlock grain_window(const GrainPatternDb& db, const Interval& interval, int offset_x, int offset_y) {
  const auto pattern = db.pattern(interval.h_cutoff, interval.v_cutoff);
  GrainBlock block{};
  for (int j = 0; j < kGrainBlock; ++j) {
    for (int i = 0; i < kGrainBlock; ++i) {
      block[j * kGrainBlock + i] = pattern[(offset_y + j) * kPatternSize + offset_x + i];
    }
  }
  return block;
}

GrainBlock grain_block(const GrainPatternDb& db, const Interval& interval, GrainRng& rng) {
  const int ox = static_cast<int>(rng.next_below(kMaxBlockOffset + 1));
  const int oy = static_cast<int>(rng.next_below(kMaxBlockOffset + 1));
  return grain_window(db, interval, ox, oy);
}

void scale_and_shift(GrainBlock& block, int scaling_factor, int log2_scale_factor) {
  for (auto& s : block) {
    s = scale_and_shift(s, scaling_factor, log2_scale_factor);
  }
}

void deblock_grain(PlaneView<std::int32_t> grain, bool vertical_seams, bool horizontal_seams) {
  const int w = grain.width;
  const int h = grain.height;
  if (vertical_seams && w > kGrainBlock) {
    std::vector<std::int32_t> src(static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
      std::int32_t* row = grain.row(y);
      std::copy(row, row + w, src.begin());
      for (int x = kGrainBlock; x < w; x += kGrainBlock) {
        const int xr = std::min(x + 1, w - 1);
        row[x - 1] = (src[x - 2] + 2 * src[x - 1] + src[x] + 2) >> 2;
        row[x] = (src[x - 1] + 2 * src[x] + src[xr] + 2) >> 2;
      }
    }
  }
  if (horizontal_seams && h > kGrainBlock) {
    std::vector<std::int32_t> above(static_cast<std::size_t>(w));
    std::vector<std::int32_t> top(static_cast<std::size_t>(w));
    for (int y = kGrainBlock; y < h; y += kGrainBlock) {
      const std::int32_t* r2 = grain.row(y - 2);
      std::int32_t* r1 = grain.row(y - 1);
      std::int32_t* r0 = grain.row(y);
      const std::int32_t* rn = grain.row(std::min(y + 1, h - 1));
      std::copy(r1, r1 + w, above.begin());
      std::copy(r0, r0 + w, top.begin());
      for (int x = 0; x < w; ++x) {
        r1[x] = (r2[x] + 2 * above[x] + top[x] + 2) >> 2;
        r0[x] = (above[x] + 2 * top[x] + rn[x] + 2) >> 2;
      }
    }
  }
}

Frame blend_frame_reference(const Frame& decoded, const FgcParams& params, const GrainPatternDb& db,
                            const SynthesisConfig& cfg, std::uint32_t frame_index, BlendReport* report) {
  require_valid(params);
  const VideoFormat& fmt = decoded.format();
  const int depth_shift = fmt.bit_depth - kIntensityBits;
  const int max_value = fmt.max_value();
  Frame out = decoded;
  BlendReport rep;
  rep.frame_index = frame_index;
  rep.sei_applied = true;

  for (int c = 0; c < kNumComponents; ++c) {
    if (!params.components[c]) {
      continue;
    }
    const IntervalModel& model = *params.components[c];
    ComponentReport& cr = rep.components[c];
    cr.present = true;
    const int w = fmt.plane_width(c);
    const int h = fmt.plane_height(c);
    std::vector<std::int32_t> grain(static_cast<std::size_t>(w) * h, 0);
    PlaneView<std::int32_t> gv{grain.data(), w, h, w};

    for (int by = 0; by * kGrainBlock < h; ++by) {
      for (int bx = 0; bx * kGrainBlock < w; ++bx) {
        const int x0 = bx * kGrainBlock;
        const int y0 = by * kGrainBlock;
        const int bw = std::min(kGrainBlock, w - x0);
        const int bh = std::min(kGrainBlock, h - y0);
        long sum = 0;
        for (int y = y0; y < y0 + bh; ++y) {
          for (int x = x0; x < x0 + bw; ++x) {
            sum += decoded.at(c, x, y);
          }
        }
        const int n = bw * bh;
        const int avg = static_cast<int>((sum + n / 2) / n) >> depth_shift;
        const Interval* interval = select_interval(model, avg);
        if (interval == nullptr) {
          ++cr.blocks_skipped_no_interval;
          continue;
        }
        const std::uint64_t seed = block_seed(cfg.master_seed, frame_index, c, by, bx);
        GrainRng rng(seed);
        GrainBlock block = grain_block(db, *interval, rng);
        scale_and_shift(block, interval->scaling_factor, params.log2_scale_factor);
        for (int j = 0; j < bh; ++j) {
          for (int i = 0; i < bw; ++i) {
            gv.at(x0 + i, y0 + j) = block[j * kGrainBlock + i];
          }
        }
        ++cr.blocks_grained;
        rep.seed_digest ^= mix64(seed);
      }
    }

    if (cfg.deblock) {
      deblock_grain(gv, true, cfg.deblock_horizontal);
    }

    auto plane = out.plane(c);
    for (std::size_t i = 0; i < plane.size(); ++i) {
      const int v = plane[i] + grain[i] * (1 << depth_shift);
      if (v < 0 || v > max_value) {
        ++cr.clip_count;
      }
      plane[i] = static_cast<std::uint16_t>(std::clamp(v, 0, max_value));
    }
  }
  if (report != nullptr) {
    *report = rep;
  }
  return out;
}

}  // namespace grainkit
