#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "grainkit/analysis.hpp"
#include "grainkit/error.hpp"

namespace grainkit {

void AnalysisConfig::validate() const {
  auto fail = [](const std::string& m) { throw ValidationError("analysis config: " + m); };
  if (block_size != 8) fail("block_size must be 8 (got " + std::to_string(block_size) + ")");
  if (!(edge_threshold > 0.0)) fail("edge_threshold must be > 0");
  if (dilation_radius < 0) fail("dilation_radius must be >= 0");
  if (poly_order < 1 || poly_order > 5) fail("poly_order must lie in [1, 5] (got " + std::to_string(poly_order) + ")");
  if (max_intervals < 1 || max_intervals > kMaxIntensityIntervals) {
    fail("max_intervals must lie in [1, 10] (got " + std::to_string(max_intervals) + ")");
  }
  if (analysis_stride_frames < 1) fail("analysis_stride_frames must be >= 1");
  if (num_bins < 1 || num_bins > 256) fail("num_bins must lie in [1, 256]");
  if (min_bin_count < 1) fail("min_bin_count must be >= 1");
  if (min_level_gap < 0.0) fail("min_level_gap must be >= 0");
  if (lloyd_max_iterations < 1) fail("lloyd_max_iterations must be >= 1");
  if (chroma_sigma_floor < 0.0) fail("chroma_sigma_floor must be >= 0");
}

int BlockMask::kept_count() const {
  return static_cast<int>(std::count(keep.begin(), keep.end(), std::uint8_t{1}));
}

double BlockMask::coverage() const { return keep.empty() ? 0.0 : static_cast<double>(kept_count()) / keep.size(); }

BlockMask mask_flat_regions(const Frame& frame, int component, const AnalysisConfig& cfg) {
  cfg.validate();
  const auto p = frame.view(component);
  const int w = p.width;
  const int h = p.height;
  const int B = cfg.block_size;
  const int threshold =
      static_cast<int>(std::floor(cfg.edge_threshold * (1 << (frame.format().bit_depth - kIntensityBits))));

  // Separable 3x3 max and min, edge-replicated.
  std::vector<std::uint16_t> rmax(static_cast<std::size_t>(w) * h);
  std::vector<std::uint16_t> rmin(rmax.size());
  for (int y = 0; y < h; ++y) {
    const std::uint16_t* r = p.row(y);
    for (int x = 0; x < w; ++x) {
      const std::uint16_t a = r[std::max(x - 1, 0)], b = r[x], c = r[std::min(x + 1, w - 1)];
      rmax[static_cast<std::size_t>(y) * w + x] = std::max({a, b, c});
      rmin[static_cast<std::size_t>(y) * w + x] = std::min({a, b, c});
    }
  }
  // Integral image of the edge map; a block is dropped when its window grown
  // by the dilation radius holds any edge sample.
  std::vector<int> integral(static_cast<std::size_t>(w + 1) * (h + 1), 0);
  for (int y = 0; y < h; ++y) {
    const std::size_t up = static_cast<std::size_t>(std::max(y - 1, 0)) * w;
    const std::size_t mid = static_cast<std::size_t>(y) * w;
    const std::size_t dn = static_cast<std::size_t>(std::min(y + 1, h - 1)) * w;
    int run = 0;
    for (int x = 0; x < w; ++x) {
      const int mx = std::max({rmax[up + x], rmax[mid + x], rmax[dn + x]});
      const int mn = std::min({rmin[up + x], rmin[mid + x], rmin[dn + x]});
      run += (mx - mn) > threshold ? 1 : 0;
      integral[static_cast<std::size_t>(y + 1) * (w + 1) + x + 1] = integral[static_cast<std::size_t>(y) * (w + 1) + x + 1] + run;
    }
  }
  auto count = [&](int x0, int y0, int x1, int y1) {  // half-open
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, w);
    y1 = std::min(y1, h);
    const auto at = [&](int x, int y) { return integral[static_cast<std::size_t>(y) * (w + 1) + x]; };
    return at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
  };

  BlockMask mask;
  mask.block_size = B;
  mask.cols = (w + B - 1) / B;
  mask.rows = (h + B - 1) / B;
  mask.keep.assign(static_cast<std::size_t>(mask.cols) * mask.rows, 0);
  const int r = cfg.dilation_radius;
  for (int by = 0; by < mask.rows; ++by) {
    for (int bx = 0; bx < mask.cols; ++bx) {
      const int x0 = bx * B;
      const int y0 = by * B;
      if (x0 + B > w || y0 + B > h) {
        continue;
      }
      mask.keep[static_cast<std::size_t>(by) * mask.cols + bx] = count(x0 - r, y0 - r, x0 + B + r, y0 + B + r) == 0;
    }
  }
  return mask;
}

}  // namespace grainkit
