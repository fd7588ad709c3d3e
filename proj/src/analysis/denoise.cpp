#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "grainkit/analysis.hpp"
#include "grainkit/error.hpp"

namespace grainkit {

void DenoiseConfig::validate() const {
  if (temporal_radius < 1) {
    throw ValidationError("temporal_radius must be >= 1 (got " + std::to_string(temporal_radius) + ")");
  }
  if (match_block < 4 || match_block % 4 != 0) {
    throw ValidationError("match_block must be a positive multiple of 4 (got " + std::to_string(match_block) + ")");
  }
  if (search_range < 0) {
    throw ValidationError("search_range must be >= 0 (got " + std::to_string(search_range) + ")");
  }
  if (!(blend_strength > 0.0 && blend_strength <= 1.0)) {
    throw ValidationError("blend_strength must lie in (0, 1]");
  }
}

double DenoiseResult::gain_at(int c, int x, int y) const {
  if (residual_gain.empty()) {
    return 1.0;
  }
  if (c != 0) {
    x *= 2;
    y *= 2;
  }
  const int bx = std::min(x / gain_block, gain_cols - 1);
  const int by = std::min(y / gain_block, gain_rows - 1);
  return residual_gain[static_cast<std::size_t>(by) * gain_cols + bx];
}

ResidualPlanes extract_residual(const Frame& original, const Frame& denoised) {
  if (!(original.format() == denoised.format())) {
    throw FormatError("extract_residual: frame formats differ");
  }
  ResidualPlanes r;
  r.format = original.format();
  for (int c = 0; c < kNumComponents; ++c) {
    const auto a = original.plane(c);
    const auto b = denoised.plane(c);
    auto& out = r.planes[c];
    out.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[i] = static_cast<std::int32_t>(a[i]) - static_cast<std::int32_t>(b[i]);
    }
  }
  return r;
}

namespace {

struct Plane32 {
  int w = 0;
  int h = 0;
  std::vector<std::int32_t> v;
  std::int32_t at(int x, int y) const { return v[static_cast<std::size_t>(y) * w + x]; }
};

// 2x2 box sums.
Plane32 downsample2(PlaneView<const std::uint16_t> p) {
  Plane32 out{p.width / 2, p.height / 2, {}};
  out.v.resize(static_cast<std::size_t>(out.w) * out.h);
  for (int y = 0; y < out.h; ++y) {
    const std::uint16_t* r0 = p.row(2 * y);
    const std::uint16_t* r1 = p.row(2 * y + 1);
    for (int x = 0; x < out.w; ++x) {
      out.v[static_cast<std::size_t>(y) * out.w + x] = r0[2 * x] + r0[2 * x + 1] + r1[2 * x] + r1[2 * x + 1];
    }
  }
  return out;
}

// 3x3 box sums with edge replication; suppresses noise during refinement.
Plane32 smooth3(PlaneView<const std::uint16_t> p) {
  const int w = p.width;
  const int h = p.height;
  Plane32 tmp{w, h, std::vector<std::int32_t>(static_cast<std::size_t>(w) * h)};
  for (int y = 0; y < h; ++y) {
    const std::uint16_t* r = p.row(y);
    for (int x = 0; x < w; ++x) {
      tmp.v[static_cast<std::size_t>(y) * w + x] = r[std::max(x - 1, 0)] + r[x] + r[std::min(x + 1, w - 1)];
    }
  }
  Plane32 out{w, h, std::vector<std::int32_t>(static_cast<std::size_t>(w) * h)};
  for (int y = 0; y < h; ++y) {
    const std::int32_t* a = tmp.v.data() + static_cast<std::size_t>(std::max(y - 1, 0)) * w;
    const std::int32_t* b = tmp.v.data() + static_cast<std::size_t>(y) * w;
    const std::int32_t* c = tmp.v.data() + static_cast<std::size_t>(std::min(y + 1, h - 1)) * w;
    std::int32_t* o = out.v.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      o[x] = a[x] + b[x] + c[x];
    }
  }
  return out;
}

std::int64_t sad(const Plane32& a, int ax, int ay, const Plane32& b, int bx, int by, int w, int h) {
  std::int64_t s = 0;
  for (int j = 0; j < h; ++j) {
    const std::int32_t* ra = a.v.data() + static_cast<std::size_t>(ay + j) * a.w + ax;
    const std::int32_t* rb = b.v.data() + static_cast<std::size_t>(by + j) * b.w + bx;
    for (int i = 0; i < w; ++i) {
      s += std::abs(ra[i] - rb[i]);
    }
  }
  return s;
}

struct Window {
  int x0, y0, w, h;
};

// Window of size (w, h) centred on the block, clipped into the plane.
Window centred_window(int cx, int cy, int w, int h, int pw, int ph) {
  w = std::min(w, pw);
  h = std::min(h, ph);
  return {std::clamp(cx - w / 2, 0, pw - w), std::clamp(cy - h / 2, 0, ph - h), w, h};
}

struct Motion {
  int dx = 0;
  int dy = 0;
};

// A displacement must beat the predictor by this factor. Without it the
// search fits the noise itself on flat content, which correlates the aligned
// neighbours with the centre and hides low-frequency grain from the residual.
constexpr double kAcceptRatio = 0.7;

// Exhaustive search of displacements around (cx, cy) within +-range keeping
// the displaced window inside the reference.
Motion full_search(const Plane32& cur, const Plane32& ref, Window win, int cx, int cy, int range) {
  Motion best{cx, cy};
  const std::int64_t pred_cost = sad(cur, win.x0, win.y0, ref, win.x0 + cx, win.y0 + cy, win.w, win.h);
  std::int64_t best_cost = pred_cost;
  for (int dy = cy - range; dy <= cy + range; ++dy) {
    if (win.y0 + dy < 0 || win.y0 + dy + win.h > ref.h) {
      continue;
    }
    for (int dx = cx - range; dx <= cx + range; ++dx) {
      if (win.x0 + dx < 0 || win.x0 + dx + win.w > ref.w || (dx == cx && dy == cy)) {
        continue;
      }
      const std::int64_t cost = sad(cur, win.x0, win.y0, ref, win.x0 + dx, win.y0 + dy, win.w, win.h);
      if (cost < best_cost) {
        best_cost = cost;
        best = {dx, dy};
      }
    }
  }
  if (static_cast<double>(best_cost) > kAcceptRatio * static_cast<double>(pred_cost)) {
    return {cx, cy};
  }
  return best;
}

}  // namespace

DenoiseResult temporal_denoise(std::span<const Frame> window, std::size_t center, const DenoiseConfig& cfg) {
  cfg.validate();
  if (center >= window.size()) {
    throw ValidationError("temporal_denoise: centre index outside the window");
  }
  const Frame& cur = window[center];
  const VideoFormat& fmt = cur.format();
  for (const Frame& f : window) {
    if (!(f.format() == fmt)) {
      throw FormatError("temporal_denoise: frames in the window differ in format");
    }
  }

  DenoiseResult res;
  res.gain_block = cfg.match_block;
  res.gain_cols = (fmt.width + cfg.match_block - 1) / cfg.match_block;
  res.gain_rows = (fmt.height + cfg.match_block - 1) / cfg.match_block;
  if (window.size() < 3) {
    res.frame = cur;
    res.passthrough = true;
    res.residual_gain.assign(static_cast<std::size_t>(res.gain_cols) * res.gain_rows, 1.0f);
    return res;
  }
  res.residual_gain.assign(static_cast<std::size_t>(res.gain_cols) * res.gain_rows, 0.0f);

  std::vector<std::size_t> neighbours;
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (i != center) {
      neighbours.push_back(i);
    }
  }
  const std::size_t nn = neighbours.size();

  const Plane32 cur_lo = downsample2(cur.view(0));
  const Plane32 cur_sm = smooth3(cur.view(0));
  std::vector<Plane32> ref_lo(nn);
  std::vector<Plane32> ref_sm(nn);
  for (std::size_t n = 0; n < nn; ++n) {
    ref_lo[n] = downsample2(window[neighbours[n]].view(0));
    ref_sm[n] = smooth3(window[neighbours[n]].view(0));
  }

  Frame out(fmt);
  const int B = cfg.match_block;
  const int max_value = fmt.max_value();

#pragma omp parallel for schedule(dynamic, 1)
  for (int by = 0; by < res.gain_rows; ++by) {
    std::vector<Motion> mv(nn);
    std::vector<double> weight(nn);
    std::vector<double> dist(nn);
    for (int bx = 0; bx < res.gain_cols; ++bx) {
      const int x0 = bx * B;
      const int y0 = by * B;
      const int bw = std::min(B, fmt.width - x0);
      const int bh = std::min(B, fmt.height - y0);

      const Window lo_win = centred_window((x0 + bw / 2) / 2, (y0 + bh / 2) / 2, B, B, cur_lo.w, cur_lo.h);
      const Window fine_win = centred_window(x0 + bw / 2, y0 + bh / 2, B + 4, B + 4, fmt.width, fmt.height);
      const Window blk{x0, y0, bw, bh};
      for (std::size_t n = 0; n < nn; ++n) {
        const Motion coarse = full_search(cur_lo, ref_lo[n], lo_win, 0, 0, cfg.search_range / 2);
        mv[n] = full_search(cur_sm, ref_sm[n], fine_win, 2 * coarse.dx, 2 * coarse.dy, 1);
        // Match quality on the unsmoothed block, per sample, with clamped access.
        const auto refp = window[neighbours[n]].view(0);
        const auto curp = cur.view(0);
        std::int64_t s = 0;
        for (int j = 0; j < blk.h; ++j) {
          const int ry = std::clamp(blk.y0 + j + mv[n].dy, 0, fmt.height - 1);
          for (int i = 0; i < blk.w; ++i) {
            const int rx = std::clamp(blk.x0 + i + mv[n].dx, 0, fmt.width - 1);
            s += std::abs(static_cast<int>(curp.at(blk.x0 + i, blk.y0 + j)) - static_cast<int>(refp.at(rx, ry)));
          }
        }
        dist[n] = static_cast<double>(s) / (blk.w * blk.h);
      }
      const double dmin = *std::min_element(dist.begin(), dist.end());
      double wsum = 1.0;
      for (std::size_t n = 0; n < nn; ++n) {
        const double r = std::min(1.0, (1.25 * dmin + 1.0) / (dist[n] + 1e-9));
        weight[n] = cfg.blend_strength * r * r;
        wsum += weight[n];
      }
      double gain = (1.0 - 1.0 / wsum) * (1.0 - 1.0 / wsum);
      for (std::size_t n = 0; n < nn; ++n) {
        gain += (weight[n] / wsum) * (weight[n] / wsum);
      }
      res.residual_gain[static_cast<std::size_t>(by) * res.gain_cols + bx] = static_cast<float>(gain);

      for (int c = 0; c < kNumComponents; ++c) {
        const int sub = c == 0 ? 0 : 1;
        const int pw = fmt.plane_width(c);
        const int ph = fmt.plane_height(c);
        const int cx0 = x0 >> sub;
        const int cy0 = y0 >> sub;
        const int cw = std::min(B >> sub, pw - cx0);
        const int ch = std::min(B >> sub, ph - cy0);
        const auto cp = cur.view(c);
        auto op = out.view(c);
        for (int j = 0; j < ch; ++j) {
          for (int i = 0; i < cw; ++i) {
            double acc = cp.at(cx0 + i, cy0 + j);
            for (std::size_t n = 0; n < nn; ++n) {
              const int rx = std::clamp(cx0 + i + (mv[n].dx >> sub), 0, pw - 1);
              const int ry = std::clamp(cy0 + j + (mv[n].dy >> sub), 0, ph - 1);
              acc += weight[n] * window[neighbours[n]].at(c, rx, ry);
            }
            const long v = std::lround(acc / wsum);
            op.at(cx0 + i, cy0 + j) = static_cast<std::uint16_t>(std::clamp<long>(v, 0, max_value));
          }
        }
      }
    }
  }
  res.frame = std::move(out);
  return res;
}

}  // namespace grainkit
