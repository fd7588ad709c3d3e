#include <istream>
#include <ostream>
#include <string>

#include "grainkit/error.hpp"
#include "grainkit/video_io.hpp"

namespace grainkit {

void pack_frame(const Frame& frame, std::vector<std::uint8_t>& out) {
  const VideoFormat& fmt = frame.format();
  out.resize(fmt.frame_bytes());
  std::uint8_t* dst = out.data();
  const auto max = static_cast<std::uint16_t>(fmt.max_value());
  for (int c = 0; c < kNumComponents; ++c) {
    const auto plane = frame.plane(c);
    if (fmt.bit_depth == 8) {
      std::uint16_t over = 0;
      for (std::size_t i = 0; i < plane.size(); ++i) {
        over |= plane[i];
        dst[i] = static_cast<std::uint8_t>(plane[i]);
      }
      if (over > max) {
        throw FormatError("sample exceeds the 8-bit range in plane " + std::to_string(c));
      }
      dst += plane.size();
    } else {
      for (std::size_t i = 0; i < plane.size(); ++i) {
        if (plane[i] > max) {
          throw FormatError("10-bit sample " + std::to_string(plane[i]) + " has upper container bits set");
        }
        dst[2 * i] = static_cast<std::uint8_t>(plane[i] & 0xFF);
        dst[2 * i + 1] = static_cast<std::uint8_t>(plane[i] >> 8);
      }
      dst += 2 * plane.size();
    }
  }
}

Frame unpack_frame(const VideoFormat& format, std::span<const std::uint8_t> bytes, const ReadOptions& options,
                   std::size_t frame_index) {
  Frame frame(format);
  const std::uint8_t* src = bytes.data();
  for (int c = 0; c < kNumComponents; ++c) {
    auto plane = frame.plane(c);
    if (format.bit_depth == 8) {
      for (std::size_t i = 0; i < plane.size(); ++i) {
        plane[i] = src[i];
      }
      src += plane.size();
    } else {
      std::uint16_t over = 0;
      for (std::size_t i = 0; i < plane.size(); ++i) {
        const auto v = static_cast<std::uint16_t>(src[2 * i] | (src[2 * i + 1] << 8));
        over |= v;
        plane[i] = options.permissive ? static_cast<std::uint16_t>(v & 0x3FF) : v;
      }
      if (!options.permissive && over > 0x3FF) {
        throw IoError("10-bit sample above 1023 in frame " + std::to_string(frame_index) + " plane " +
                      std::to_string(c) + " (use permissive mode to mask)");
      }
      src += 2 * plane.size();
    }
  }
  return frame;
}

RawReader::RawReader(std::istream& in, const VideoFormat& format, ReadOptions options)
    : in_(in), options_(options), format_(format) {
  format_.validate();
}

std::optional<Frame> RawReader::next() {
  buffer_.resize(format_.frame_bytes());
  in_.read(reinterpret_cast<char*>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (got == 0) {
    return std::nullopt;
  }
  if (got != buffer_.size()) {
    throw IoError("trailing partial frame after frame " + std::to_string(frames_read_) + ": " +
                  std::to_string(got) + " remaining bytes (frame size " + std::to_string(buffer_.size()) + ")");
  }
  Frame frame = unpack_frame(format_, buffer_, options_, frames_read_);
  ++frames_read_;
  return frame;
}

RawWriter::RawWriter(std::ostream& out, const VideoFormat& format) : out_(out), format_(format) {
  format_.validate();
}

void RawWriter::write(const Frame& frame) {
  if (!(frame.format() == format_)) {
    throw FormatError("frame format does not match the raw stream format");
  }
  pack_frame(frame, buffer_);
  out_.write(reinterpret_cast<const char*>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
  if (!out_) {
    throw IoError("failed to write raw frame");
  }
  bytes_ += buffer_.size();
}

}  // namespace grainkit
