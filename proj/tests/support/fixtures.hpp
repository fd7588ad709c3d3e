#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "grainkit/fgc_params.hpp"
#include "grainkit/frame.hpp"
#include "grainkit/synthesis.hpp"
#include "grainkit/video_io.hpp"

namespace grainkit::testing {

VideoFormat make_format(int width, int height, int bit_depth = 8);

// Every plane filled with one value.
Frame flat_frame(const VideoFormat& fmt, int value);

// Vertical bands of equal width at the given intensities (8-bit domain,
// shifted up for 10-bit), chroma mid-grey.
Frame banded_frame(const VideoFormat& fmt, std::span<const int> levels);

// Uniformly random samples over the full range.
Frame random_frame(const VideoFormat& fmt, std::mt19937_64& rng);

// Adds rounded Gaussian noise to every sample of the plane, clamped to range.
void add_gaussian(Frame& f, int component, double sigma, std::mt19937_64& rng);

// One interval [0,255] with the given model values on luma only.
FgcParams luma_params(int sf, int h_cutoff = kDefaultCutoff, int v_cutoff = kDefaultCutoff, int lsf = 5);

// Random params that pass validate().
FgcParams random_params(std::mt19937_64& rng);

// Shared pattern database, built once per process.
const GrainPatternDb& shared_db();

// Sample mean and standard deviation of a plane, as doubles.
struct Moments {
  double mean = 0.0;
  double sigma = 0.0;
};
Moments plane_moments(const Frame& f, int component);

// FNV-1a over the packed frame bytes.
std::uint64_t frame_hash(const Frame& f, std::uint64_t h = 0xcbf29ce484222325ull);

// A FrameSource over frames held in memory.
class MemorySource final : public FrameSource {
 public:
  explicit MemorySource(std::vector<Frame> frames);
  const VideoFormat& format() const override { return format_; }
  std::optional<Frame> next() override;
  std::size_t frames_read() const override { return pos_; }

 private:
  std::vector<Frame> frames_;
  VideoFormat format_{};
  std::size_t pos_ = 0;
};

class MemorySink final : public FrameSink {
 public:
  void write(const Frame& frame) override;
  std::uint64_t bytes_written() const override { return bytes_; }
  std::vector<Frame> frames;

 private:
  std::uint64_t bytes_ = 0;
};

// Fresh empty directory under the system temp dir.
std::string temp_dir(const std::string& tag);

}  // namespace grainkit::testing
