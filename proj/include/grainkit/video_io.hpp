#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grainkit/frame.hpp"

namespace grainkit {

// Sequential frame producer. Implementations are single-threaded; the frames
// they return are independent values.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual const VideoFormat& format() const = 0;
  // Next frame in stream order, or nullopt at a clean end of stream.
  virtual std::optional<Frame> next() = 0;
  virtual std::size_t frames_read() const = 0;
};

class FrameSink {
 public:
  virtual ~FrameSink() = default;
  virtual void write(const Frame& frame) = 0;
  virtual std::uint64_t bytes_written() const = 0;
};

struct ReadOptions {
  // Mask 10-bit container words to their low 10 bits instead of rejecting
  // values above 1023.
  bool permissive = false;
};

class Y4mReader final : public FrameSource {
 public:
  // Parses the stream header immediately; throws IoError / FormatError.
  explicit Y4mReader(std::istream& in, ReadOptions options = {});

  const VideoFormat& format() const override { return format_; }
  std::optional<Frame> next() override;
  std::size_t frames_read() const override { return frames_read_; }

 private:
  std::istream& in_;
  ReadOptions options_;
  VideoFormat format_{};
  std::size_t frames_read_ = 0;
  std::vector<std::uint8_t> buffer_;
};

class Y4mWriter final : public FrameSink {
 public:
  // The stream header is written on construction.
  Y4mWriter(std::ostream& out, const VideoFormat& format);

  void write(const Frame& frame) override;
  std::uint64_t bytes_written() const override { return bytes_; }

  static std::string header_line(const VideoFormat& format);

 private:
  std::ostream& out_;
  VideoFormat format_;
  std::uint64_t bytes_ = 0;
  std::vector<std::uint8_t> buffer_;
};

// Headerless planar I420 (8-bit) / I010 (10-bit little-endian) streams.
class RawReader final : public FrameSource {
 public:
  RawReader(std::istream& in, const VideoFormat& format, ReadOptions options = {});

  const VideoFormat& format() const override { return format_; }
  std::optional<Frame> next() override;
  std::size_t frames_read() const override { return frames_read_; }

 private:
  std::istream& in_;
  ReadOptions options_;
  VideoFormat format_;
  std::size_t frames_read_ = 0;
  std::vector<std::uint8_t> buffer_;
};

class RawWriter final : public FrameSink {
 public:
  RawWriter(std::ostream& out, const VideoFormat& format);

  void write(const Frame& frame) override;
  std::uint64_t bytes_written() const override { return bytes_; }

 private:
  std::ostream& out_;
  VideoFormat format_;
  std::uint64_t bytes_ = 0;
  std::vector<std::uint8_t> buffer_;
};

// Writes a whole sequence as Y4M and returns the byte count.
std::uint64_t write_y4m(const VideoFormat& format, std::span<const Frame> frames, std::ostream& out);

// Reads every remaining frame of a source into memory.
std::vector<Frame> read_all(FrameSource& source);

// Serialisation of one frame's samples in container layout (planes Y, Cb, Cr).
void pack_frame(const Frame& frame, std::vector<std::uint8_t>& out);
Frame unpack_frame(const VideoFormat& format, std::span<const std::uint8_t> bytes, const ReadOptions& options,
                   std::size_t frame_index);

// File-backed source/sink selection by extension: ".y4m" is Y4M, anything
// else is raw and needs `raw_format`.
struct OpenedSource {
  std::unique_ptr<std::istream> stream;
  std::unique_ptr<FrameSource> source;
};
OpenedSource open_video(const std::filesystem::path& path, const std::optional<VideoFormat>& raw_format,
                        ReadOptions options = {});

struct OpenedSink {
  std::unique_ptr<std::ostream> stream;
  std::unique_ptr<FrameSink> sink;
};
OpenedSink create_video(const std::filesystem::path& path, const VideoFormat& format);

}  // namespace grainkit
