#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace grainkit {

enum class Component : int { Y = 0, Cb = 1, Cr = 2 };
inline constexpr int kNumComponents = 3;

struct FrameRate {
  std::uint32_t num = 25;
  std::uint32_t den = 1;
  bool operator==(const FrameRate&) const = default;
};

// Planar 4:2:0 video format. Only 8- and 10-bit content is supported.
struct VideoFormat {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  FrameRate frame_rate{};

  bool operator==(const VideoFormat&) const = default;

  // Throws FormatError when the invariants (even dimensions, bit depth in {8,10}) do not hold.
  void validate() const;

  int plane_width(int c) const { return c == 0 ? width : width / 2; }
  int plane_height(int c) const { return c == 0 ? height : height / 2; }
  std::size_t plane_samples(int c) const {
    return static_cast<std::size_t>(plane_width(c)) * static_cast<std::size_t>(plane_height(c));
  }
  std::size_t frame_samples() const { return plane_samples(0) + 2 * plane_samples(1); }
  std::size_t bytes_per_sample() const { return bit_depth > 8 ? 2 : 1; }
  std::size_t frame_bytes() const { return frame_samples() * bytes_per_sample(); }
  int max_value() const { return (1 << bit_depth) - 1; }
};

// Non-owning 2-D view over one plane.
template <typename T>
struct PlaneView {
  T* data = nullptr;
  int width = 0;
  int height = 0;
  std::ptrdiff_t stride = 0;

  T* row(int y) const { return data + y * stride; }
  T& at(int x, int y) const { return data[y * stride + x]; }
};

// One decoded picture. Samples are stored in 16-bit words for both bit depths.
class Frame {
 public:
  Frame() = default;
  explicit Frame(const VideoFormat& format);
  Frame(const VideoFormat& format, std::uint16_t fill_luma, std::uint16_t fill_chroma);

  const VideoFormat& format() const { return format_; }

  std::span<std::uint16_t> plane(int c) { return planes_[c]; }
  std::span<const std::uint16_t> plane(int c) const { return planes_[c]; }

  PlaneView<std::uint16_t> view(int c) {
    return {planes_[c].data(), format_.plane_width(c), format_.plane_height(c), format_.plane_width(c)};
  }
  PlaneView<const std::uint16_t> view(int c) const {
    return {planes_[c].data(), format_.plane_width(c), format_.plane_height(c), format_.plane_width(c)};
  }

  std::uint16_t& at(int c, int x, int y) { return planes_[c][static_cast<std::size_t>(y) * format_.plane_width(c) + x]; }
  std::uint16_t at(int c, int x, int y) const {
    return planes_[c][static_cast<std::size_t>(y) * format_.plane_width(c) + x];
  }

  // True when every sample lies in [0, 2^bit_depth - 1].
  bool in_range() const;

  bool operator==(const Frame& other) const = default;

 private:
  VideoFormat format_{};
  std::array<std::vector<std::uint16_t>, kNumComponents> planes_{};
};

// Signed per-plane residual (original - denoised).
struct ResidualPlanes {
  VideoFormat format{};
  std::array<std::vector<std::int32_t>, kNumComponents> planes{};

  PlaneView<const std::int32_t> view(int c) const {
    return {planes[c].data(), format.plane_width(c), format.plane_height(c), format.plane_width(c)};
  }
};

}  // namespace grainkit
