#include <algorithm>
#include <cmath>

#include "block_dct.hpp"
#include "grainkit/analysis.hpp"
#include "grainkit/error.hpp"

namespace grainkit {

double ComponentMeasurement::h_centroid() const { return detail::marginal_centroid(h_energy); }
double ComponentMeasurement::v_centroid() const { return detail::marginal_centroid(v_energy); }

ComponentMeasurement measure_blocks(const ResidualPlanes& residual, int component, const BlockMask& mask,
                                    const Frame& denoised, const DenoiseResult& gains, const AnalysisConfig& cfg) {
  if (cfg.block_size != 8 || mask.block_size != 8) {
    throw ValidationError("measure_blocks: only 8x8 blocks are supported");
  }
  if (!(residual.format == denoised.format())) {
    throw FormatError("measure_blocks: residual and denoised frame formats differ");
  }
  const int depth_shift = denoised.format().bit_depth - kIntensityBits;
  const double scale = 1.0 / (1 << depth_shift);
  const auto res = residual.view(component);
  const auto den = denoised.view(component);

  ComponentMeasurement m;
  m.blocks_total = mask.cols * mask.rows;
  std::array<double, 64> block;
  for (int by = 0; by < mask.rows; ++by) {
    for (int bx = 0; bx < mask.cols; ++bx) {
      if (!mask.kept(bx, by)) {
        continue;
      }
      const int x0 = bx * 8;
      const int y0 = by * 8;
      double mean = 0.0;
      for (int j = 0; j < 8; ++j) {
        for (int i = 0; i < 8; ++i) {
          block[j * 8 + i] = res.at(x0 + i, y0 + j) * scale;
          mean += den.at(x0 + i, y0 + j);
        }
      }
      const double gain = gains.gain_at(component, x0 + 4, y0 + 4);
      if (!(gain > 0.0)) {
        continue;
      }
      std::array<double, 8> h{};
      std::array<double, 8> v{};
      const double ac = detail::block_ac_energy(block, h, v);
      for (int k = 0; k < 8; ++k) {
        m.h_energy[k] += h[k] / gain;
        m.v_energy[k] += v[k] / gain;
      }
      m.blocks.push_back({mean / 64.0 * scale, ac / 63.0 / gain});
    }
  }
  return m;
}

VariancePoints aggregate_bins(std::span<const BlockSample> blocks, const AnalysisConfig& cfg) {
  const int bins = cfg.num_bins;
  std::vector<double> sum_i(bins, 0.0);
  std::vector<double> sum_v(bins, 0.0);
  std::vector<int> count(bins, 0);
  for (const auto& b : blocks) {
    const double key = std::clamp(b.intensity, 0.0, static_cast<double>(kMaxIntensity));
    const int bin = std::min(bins - 1, static_cast<int>(key * bins / (kMaxIntensity + 1)));
    sum_i[bin] += key;
    sum_v[bin] += b.variance;
    ++count[bin];
  }
  VariancePoints points;
  for (int k = 0; k < bins; ++k) {
    if (count[k] >= cfg.min_bin_count) {
      points.push_back({sum_i[k] / count[k], sum_v[k] / count[k], static_cast<double>(count[k])});
    }
  }
  return points;
}

VariancePoints measure_variance(const ResidualPlanes& residual, int component, const BlockMask& mask,
                                const Frame& denoised, const DenoiseResult& gains, const AnalysisConfig& cfg) {
  const ComponentMeasurement m = measure_blocks(residual, component, mask, denoised, gains, cfg);
  return aggregate_bins(m.blocks, cfg);
}

}  // namespace grainkit
