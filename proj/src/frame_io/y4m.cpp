#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "grainkit/error.hpp"
#include "grainkit/video_io.hpp"

namespace grainkit {

namespace {

constexpr std::string_view kSignature = "YUV4MPEG2";
constexpr std::string_view kFrameMarker = "FRAME";
constexpr std::size_t kMaxHeaderLength = 4096;

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw IoError("malformed Y4M header: bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::string read_line(std::istream& in, std::string_view context) {
  std::string line;
  char ch = 0;
  while (in.get(ch)) {
    if (ch == '\n') {
      return line;
    }
    line.push_back(ch);
    if (line.size() > kMaxHeaderLength) {
      throw IoError("malformed Y4M " + std::string(context) + ": line too long");
    }
  }
  throw IoError("malformed Y4M " + std::string(context) + ": missing newline");
}

}  // namespace

Y4mReader::Y4mReader(std::istream& in, ReadOptions options) : in_(in), options_(options) {
  const std::string header = read_line(in_, "header");
  std::istringstream tokens(header);
  std::string token;
  tokens >> token;
  if (token != kSignature) {
    throw IoError("malformed Y4M header: missing YUV4MPEG2 signature");
  }
  bool have_w = false;
  bool have_h = false;
  format_.bit_depth = 8;
  while (tokens >> token) {
    const char tag = token[0];
    const std::string_view value = std::string_view(token).substr(1);
    switch (tag) {
      case 'W':
        format_.width = parse_int(value, "width");
        have_w = true;
        break;
      case 'H':
        format_.height = parse_int(value, "height");
        have_h = true;
        break;
      case 'F': {
        const auto colon = value.find(':');
        if (colon == std::string_view::npos) {
          throw IoError("malformed Y4M header: bad frame rate '" + std::string(value) + "'");
        }
        const int num = parse_int(value.substr(0, colon), "frame rate");
        const int den = parse_int(value.substr(colon + 1), "frame rate");
        if (num <= 0 || den <= 0) {
          throw IoError("malformed Y4M header: non-positive frame rate");
        }
        format_.frame_rate = {static_cast<std::uint32_t>(num), static_cast<std::uint32_t>(den)};
        break;
      }
      case 'C':
        if (value == "420" || value == "420jpeg" || value == "420paldv" || value == "420mpeg2") {
          format_.bit_depth = 8;
        } else if (value == "420p10") {
          format_.bit_depth = 10;
        } else {
          throw FormatError("unsupported Y4M chroma tag 'C" + std::string(value) + "' (only 4:2:0 8/10-bit)");
        }
        break;
      default:
        // I (interlacing), A (aspect), X (extensions) carry nothing we use.
        break;
    }
  }
  if (!have_w || !have_h) {
    throw IoError("malformed Y4M header: missing W or H tag");
  }
  format_.validate();
}

std::optional<Frame> Y4mReader::next() {
  if (in_.peek() == std::char_traits<char>::eof()) {
    return std::nullopt;
  }
  const std::string marker = read_line(in_, "frame header #" + std::to_string(frames_read_));
  if (std::string_view(marker).substr(0, kFrameMarker.size()) != kFrameMarker) {
    throw IoError("malformed Y4M frame header at frame " + std::to_string(frames_read_));
  }
  buffer_.resize(format_.frame_bytes());
  in_.read(reinterpret_cast<char*>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
  if (static_cast<std::size_t>(in_.gcount()) != buffer_.size()) {
    throw IoError("truncated Y4M frame payload at frame " + std::to_string(frames_read_) + " (" +
                  std::to_string(in_.gcount()) + " of " + std::to_string(buffer_.size()) + " bytes)");
  }
  Frame frame = unpack_frame(format_, buffer_, options_, frames_read_);
  ++frames_read_;
  return frame;
}

std::string Y4mWriter::header_line(const VideoFormat& format) {
  std::ostringstream os;
  os << kSignature << " W" << format.width << " H" << format.height << " F" << format.frame_rate.num << ':'
     << format.frame_rate.den << " Ip A1:1 " << (format.bit_depth > 8 ? "C420p10 XYSCSS=420P10" : "C420jpeg")
     << '\n';
  return os.str();
}

Y4mWriter::Y4mWriter(std::ostream& out, const VideoFormat& format) : out_(out), format_(format) {
  format_.validate();
  const std::string header = header_line(format_);
  out_.write(header.data(), static_cast<std::streamsize>(header.size()));
  if (!out_) {
    throw IoError("failed to write Y4M header");
  }
  bytes_ += header.size();
}

void Y4mWriter::write(const Frame& frame) {
  if (!(frame.format() == format_)) {
    throw FormatError("frame format does not match the Y4M stream format");
  }
  pack_frame(frame, buffer_);
  out_.write("FRAME\n", 6);
  out_.write(reinterpret_cast<const char*>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
  if (!out_) {
    throw IoError("failed to write Y4M frame");
  }
  bytes_ += 6 + buffer_.size();
}

std::uint64_t write_y4m(const VideoFormat& format, std::span<const Frame> frames, std::ostream& out) {
  Y4mWriter writer(out, format);
  for (const Frame& f : frames) {
    writer.write(f);
  }
  return writer.bytes_written();
}

std::vector<Frame> read_all(FrameSource& source) {
  std::vector<Frame> frames;
  while (auto f = source.next()) {
    frames.push_back(std::move(*f));
  }
  return frames;
}

OpenedSource open_video(const std::filesystem::path& path, const std::optional<VideoFormat>& raw_format,
                        ReadOptions options) {
  auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*file) {
    throw IoError("cannot open input '" + path.string() + "'");
  }
  OpenedSource opened;
  if (path.extension() == ".y4m") {
    opened.source = std::make_unique<Y4mReader>(*file, options);
  } else {
    if (!raw_format) {
      throw FormatError("raw input '" + path.string() + "' needs an explicit format (width/height/bit depth)");
    }
    opened.source = std::make_unique<RawReader>(*file, *raw_format, options);
  }
  opened.stream = std::move(file);
  return opened;
}

OpenedSink create_video(const std::filesystem::path& path, const VideoFormat& format) {
  auto file = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*file) {
    throw IoError("cannot create output '" + path.string() + "'");
  }
  OpenedSink opened;
  if (path.extension() == ".y4m") {
    opened.sink = std::make_unique<Y4mWriter>(*file, format);
  } else {
    opened.sink = std::make_unique<RawWriter>(*file, format);
  }
  opened.stream = std::move(file);
  return opened;
}

}  // namespace grainkit
