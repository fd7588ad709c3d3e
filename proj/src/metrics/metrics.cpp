#include "grainkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grainkit/error.hpp"
#include "grainkit/video_io.hpp"

namespace grainkit {

double psnr_from_mse(double mse, int max_value) {
  if (mse <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(static_cast<double>(max_value) * max_value / mse);
}

std::array<double, 3> squared_error(const Frame& ref, const Frame& test) {
  if (!(ref.format() == test.format())) {
    throw FormatError("frames differ in format");
  }
  std::array<double, 3> out{};
  for (int c = 0; c < kNumComponents; ++c) {
    const auto a = ref.plane(c);
    const auto b = test.plane(c);
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::int64_t d = static_cast<std::int64_t>(a[i]) - b[i];
      s += static_cast<std::uint64_t>(d * d);
    }
    out[c] = static_cast<double>(s);
  }
  return out;
}

std::array<double, 3> psnr(const Frame& ref, const Frame& test) {
  const auto se = squared_error(ref, test);
  std::array<double, 3> out{};
  for (int c = 0; c < kNumComponents; ++c) {
    out[c] = psnr_from_mse(se[c] / static_cast<double>(ref.format().plane_samples(c)), ref.format().max_value());
  }
  return out;
}

std::optional<double> grain_sigma(const Frame& frame, int component, const GrainSigmaConfig& cfg) {
  const auto p = frame.view(component);
  const int w = p.width;
  const int h = p.height;
  const int B = cfg.block_size;
  if (w < 3 || h < 3) {
    return std::nullopt;
  }
  const double scale = 1.0 / (1 << (frame.format().bit_depth - 8));
  auto px = [&](int x, int y) {
    return static_cast<double>(p.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)));
  };
  // 5x5 box smoothing removes most of the noise before the flatness test.
  std::vector<double> sm(static_cast<std::size_t>(w) * h);
  {
    std::vector<double> tmp(sm.size());
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double s = 0.0;
        for (int i = -2; i <= 2; ++i) s += px(x + i, y);
        tmp[static_cast<std::size_t>(y) * w + x] = s;
      }
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double s = 0.0;
        for (int j = -2; j <= 2; ++j) s += tmp[static_cast<std::size_t>(std::clamp(y + j, 0, h - 1)) * w + x];
        sm[static_cast<std::size_t>(y) * w + x] = s / 25.0 * scale;
      }
    }
  }
  std::vector<double> residuals;
  for (int by = 0; by + B <= h; by += B) {
    for (int bx = 0; bx + B <= w; bx += B) {
      double mn = std::numeric_limits<double>::infinity();
      double mx = -mn;
      for (int y = std::max(by - 1, 0); y < std::min(by + B + 1, h); ++y) {
        for (int x = std::max(bx - 1, 0); x < std::min(bx + B + 1, w); ++x) {
          const double v = sm[static_cast<std::size_t>(y) * w + x];
          mn = std::min(mn, v);
          mx = std::max(mx, v);
        }
      }
      if (mx - mn > cfg.flat_threshold) {
        continue;
      }
      for (int y = std::max(by, 1); y < std::min(by + B, h - 1); ++y) {
        for (int x = std::max(bx, 1); x < std::min(bx + B, w - 1); ++x) {
          const double r = px(x - 1, y - 1) - 2 * px(x, y - 1) + px(x + 1, y - 1) - 2 * px(x - 1, y) +
                           4 * px(x, y) - 2 * px(x + 1, y) + px(x - 1, y + 1) - 2 * px(x, y + 1) +
                           px(x + 1, y + 1);
          residuals.push_back(std::abs(r) * scale);
        }
      }
    }
  }
  if (residuals.empty()) {
    return std::nullopt;
  }
  const auto mid = residuals.begin() + static_cast<std::ptrdiff_t>(residuals.size() / 2);
  std::nth_element(residuals.begin(), mid, residuals.end());
  return 1.4826 * *mid / 6.0;
}

MetricReport compare_sequences(FrameSource& ref, FrameSource& test, bool with_sigma) {
  if (!(ref.format() == test.format())) {
    throw FormatError("sequences differ in format");
  }
  MetricReport report;
  std::array<double, 3> se{};
  std::array<double, 3> sig_ref{};
  std::array<double, 3> sig_test{};
  std::array<int, 3> n_ref{};
  std::array<int, 3> n_test{};
  std::uint32_t index = 0;
  for (;;) {
    auto a = ref.next();
    auto b = test.next();
    if (!a || !b) {
      break;
    }
    FrameMetrics fm;
    fm.frame_index = index++;
    const auto e = squared_error(*a, *b);
    for (int c = 0; c < kNumComponents; ++c) {
      se[c] += e[c];
      fm.psnr[c] = psnr_from_mse(e[c] / static_cast<double>(a->format().plane_samples(c)), a->format().max_value());
      if (with_sigma) {
        fm.sigma_ref[c] = grain_sigma(*a, c);
        fm.sigma_test[c] = grain_sigma(*b, c);
        if (fm.sigma_ref[c]) {
          sig_ref[c] += *fm.sigma_ref[c];
          ++n_ref[c];
        }
        if (fm.sigma_test[c]) {
          sig_test[c] += *fm.sigma_test[c];
          ++n_test[c];
        }
      }
    }
    report.frames.push_back(fm);
  }
  const auto& fmt = ref.format();
  for (int c = 0; c < kNumComponents; ++c) {
    const double samples = static_cast<double>(fmt.plane_samples(c)) * std::max<std::size_t>(report.frames.size(), 1);
    report.psnr[c] = psnr_from_mse(se[c] / samples, fmt.max_value());
    if (n_ref[c] > 0) report.mean_sigma_ref[c] = sig_ref[c] / n_ref[c];
    if (n_test[c] > 0) report.mean_sigma_test[c] = sig_test[c] / n_test[c];
  }
  return report;
}

}  // namespace grainkit
