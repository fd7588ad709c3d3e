#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>

#include <unistd.h>

namespace grainkit::testing {

VideoFormat make_format(int width, int height, int bit_depth) {
  VideoFormat f;
  f.width = width;
  f.height = height;
  f.bit_depth = bit_depth;
  return f;
}

Frame flat_frame(const VideoFormat& fmt, int value) {
  return Frame(fmt, static_cast<std::uint16_t>(value), static_cast<std::uint16_t>(value));
}

Frame banded_frame(const VideoFormat& fmt, std::span<const int> levels) {
  const int shift = fmt.bit_depth - 8;
  Frame f(fmt, 0, static_cast<std::uint16_t>(128 << shift));
  const int n = static_cast<int>(levels.size());
  for (int y = 0; y < fmt.height; ++y) {
    for (int x = 0; x < fmt.width; ++x) {
      const int band = std::min(n - 1, x * n / fmt.width);
      f.at(0, x, y) = static_cast<std::uint16_t>(levels[band] << shift);
    }
  }
  return f;
}

Frame random_frame(const VideoFormat& fmt, std::mt19937_64& rng) {
  Frame f(fmt);
  std::uniform_int_distribution<int> d(0, fmt.max_value());
  for (int c = 0; c < kNumComponents; ++c) {
    for (auto& s : f.plane(c)) {
      s = static_cast<std::uint16_t>(d(rng));
    }
  }
  return f;
}

void add_gaussian(Frame& f, int component, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, sigma);
  const int mx = f.format().max_value();
  for (auto& s : f.plane(component)) {
    s = static_cast<std::uint16_t>(std::clamp(static_cast<int>(std::lround(s + n(rng))), 0, mx));
  }
}

FgcParams luma_params(int sf, int h_cutoff, int v_cutoff, int lsf) {
  FgcParams p;
  p.log2_scale_factor = lsf;
  p.components[0] = IntervalModel{{Interval{0, kMaxIntensity, sf, h_cutoff, v_cutoff}}, 3};
  return p;
}

FgcParams random_params(std::mt19937_64& rng) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  FgcParams p;
  p.log2_scale_factor = uni(kMinLog2ScaleFactor, kMaxLog2ScaleFactor);
  for (int c = 0; c < kNumComponents; ++c) {
    if (uni(0, 3) == 0) {
      continue;
    }
    IntervalModel m;
    m.num_model_values = uni(1, kMaxModelValues);
    const int count = uni(1, kMaxIntensityIntervals);
    // Distinct sorted cut points give non-overlapping intervals, with
    // occasional gaps.
    std::vector<int> points(256);
    for (int i = 0; i < 256; ++i) points[i] = i;
    std::shuffle(points.begin(), points.end(), rng);
    points.resize(static_cast<std::size_t>(2 * count));
    std::sort(points.begin(), points.end());
    for (int i = 0; i < count; ++i) {
      Interval iv;
      iv.lower_bound = points[2 * i];
      iv.upper_bound = points[2 * i + 1];
      iv.scaling_factor = uni(0, kMaxScalingFactor);
      iv.h_cutoff = m.num_model_values >= 2 ? uni(kMinCutoff, kMaxCutoff) : kDefaultCutoff;
      iv.v_cutoff = m.num_model_values == 3 ? uni(kMinCutoff, kMaxCutoff) : iv.h_cutoff;
      m.intervals.push_back(iv);
    }
    p.components[c] = m;
  }
  return p;
}

const GrainPatternDb& shared_db() {
  static const GrainPatternDb db = GrainPatternDb::build();
  return db;
}

Moments plane_moments(const Frame& f, int component) {
  const auto p = f.plane(component);
  double s = 0.0;
  double s2 = 0.0;
  for (auto v : p) {
    s += v;
    s2 += static_cast<double>(v) * v;
  }
  const double n = static_cast<double>(p.size());
  Moments m;
  m.mean = s / n;
  m.sigma = std::sqrt(std::max(0.0, s2 / n - m.mean * m.mean));
  return m;
}

std::uint64_t frame_hash(const Frame& f, std::uint64_t h) {
  std::vector<std::uint8_t> bytes;
  pack_frame(f, bytes);
  for (auto b : bytes) {
    h = (h ^ b) * 0x100000001b3ull;
  }
  return h;
}

MemorySource::MemorySource(std::vector<Frame> frames) : frames_(std::move(frames)) {
  if (!frames_.empty()) {
    format_ = frames_.front().format();
  }
}

std::optional<Frame> MemorySource::next() {
  if (pos_ >= frames_.size()) {
    return std::nullopt;
  }
  return std::move(frames_[pos_++]);
}

void MemorySink::write(const Frame& frame) {
  frames.push_back(frame);
  bytes_ += frame.format().frame_bytes();
}

std::string temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("grainkit_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace grainkit::testing
