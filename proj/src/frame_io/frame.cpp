#include "grainkit/frame.hpp"

#include <algorithm>
#include <string>

#include "grainkit/error.hpp"

namespace grainkit {

void VideoFormat::validate() const {
  if (width <= 0 || height <= 0) {
    throw FormatError("frame dimensions must be positive, got " + std::to_string(width) + "x" +
                      std::to_string(height));
  }
  if (width % 2 != 0 || height % 2 != 0) {
    throw FormatError("4:2:0 requires even dimensions, got " + std::to_string(width) + "x" +
                      std::to_string(height));
  }
  if (bit_depth != 8 && bit_depth != 10) {
    throw FormatError("unsupported bit depth " + std::to_string(bit_depth) + " (8 or 10 expected)");
  }
  if (frame_rate.num == 0 || frame_rate.den == 0) {
    throw FormatError("frame rate must be a positive rational");
  }
}

Frame::Frame(const VideoFormat& format) : format_(format) {
  format_.validate();
  for (int c = 0; c < kNumComponents; ++c) {
    planes_[c].assign(format_.plane_samples(c), 0);
  }
}

Frame::Frame(const VideoFormat& format, std::uint16_t fill_luma, std::uint16_t fill_chroma) : Frame(format) {
  std::fill(planes_[0].begin(), planes_[0].end(), fill_luma);
  std::fill(planes_[1].begin(), planes_[1].end(), fill_chroma);
  std::fill(planes_[2].begin(), planes_[2].end(), fill_chroma);
}

bool Frame::in_range() const {
  const auto max = static_cast<std::uint16_t>(format_.max_value());
  return std::all_of(planes_.begin(), planes_.end(), [max](const auto& p) {
    return std::all_of(p.begin(), p.end(), [max](std::uint16_t s) { return s <= max; });
  });
}

}  // namespace grainkit
