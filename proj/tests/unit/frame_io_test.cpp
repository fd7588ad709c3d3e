#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "grainkit/error.hpp"
#include "grainkit/video_io.hpp"

namespace grainkit {
namespace {

using testing::make_format;

TEST(VideoFormat, RejectsOddDimensionsAndBadDepth) {
  EXPECT_THROW(make_format(15, 16).validate(), FormatError);
  EXPECT_THROW(make_format(16, 16, 12).validate(), FormatError);
  EXPECT_NO_THROW(make_format(16, 16, 10).validate());
}

TEST(Y4m, ParsesHeaderFields) {
  std::istringstream in("YUV4MPEG2 W16 H16 F25:1 C420\n");
  Y4mReader r(in);
  EXPECT_EQ(r.format().width, 16);
  EXPECT_EQ(r.format().height, 16);
  EXPECT_EQ(r.format().bit_depth, 8);
  EXPECT_EQ(r.format().frame_rate.num, 25u);
  EXPECT_EQ(r.format().frame_rate.den, 1u);
  EXPECT_FALSE(r.next().has_value());
}

TEST(Y4m, TenBitChromaTag) {
  std::istringstream in("YUV4MPEG2 W8 H4 F30000:1001 Ip A1:1 C420p10 XYSCSS=420P10\n");
  Y4mReader r(in);
  EXPECT_EQ(r.format().bit_depth, 10);
  EXPECT_EQ(r.format().frame_rate.den, 1001u);
}

TEST(Y4m, RejectsUnsupportedChroma) {
  std::istringstream in("YUV4MPEG2 W16 H16 F25:1 C444\n");
  EXPECT_THROW(Y4mReader r(in), FormatError);
}

TEST(Y4m, RejectsMissingSignature) {
  std::istringstream in("YUV4MPEG W16 H16\n");
  EXPECT_THROW(Y4mReader r(in), IoError);
}

TEST(Y4m, ThreeFlatFramesFromKnownBytes) {
  std::string s = "YUV4MPEG2 W16 H16 F25:1 C420\n";
  for (int i = 0; i < 3; ++i) {
    s += "FRAME\n" + std::string(16 * 16 * 3 / 2, static_cast<char>(128));
  }
  std::istringstream in(s);
  Y4mReader r(in);
  const auto frames = read_all(r);
  ASSERT_EQ(frames.size(), 3u);
  for (const auto& f : frames) {
    for (auto v : f.plane(0)) ASSERT_EQ(v, 128);
  }
}

TEST(Y4m, TruncatedPayloadNamesFrame) {
  std::string s = "YUV4MPEG2 W16 H16 F25:1 C420\nFRAME\n" + std::string(384, 'a') + "FRAME\n" + std::string(100, 'a');
  std::istringstream in(s);
  Y4mReader r(in);
  ASSERT_TRUE(r.next().has_value());
  try {
    r.next();
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("frame 1"), std::string::npos) << e.what();
  }
}

TEST(Y4m, ByteCountOfOneFrame) {
  const auto fmt = make_format(16, 16);
  std::vector<Frame> frames{testing::flat_frame(fmt, 7)};
  std::ostringstream out;
  const auto n = write_y4m(fmt, frames, out);
  EXPECT_EQ(n, Y4mWriter::header_line(fmt).size() + 6 + 16 * 16 * 3 / 2);
  EXPECT_EQ(n, out.str().size());
}

TEST(Y4m, TenBitPayloadIsTwoBytesPerSample) {
  const auto fmt = make_format(16, 16, 10);
  std::vector<Frame> frames{testing::flat_frame(fmt, 1000)};
  std::ostringstream out;
  const auto n = write_y4m(fmt, frames, out);
  EXPECT_EQ(n - Y4mWriter::header_line(fmt).size() - 6, 2u * 16 * 16 * 3 / 2);
}

class RoundTrip : public ::testing::TestWithParam<int> {};

TEST_P(RoundTrip, Y4mAndRawAreIdentity) {
  std::mt19937_64 rng(GetParam());
  const auto fmt = make_format(24, 10, GetParam());
  std::vector<Frame> frames;
  for (int i = 0; i < 4; ++i) frames.push_back(testing::random_frame(fmt, rng));

  std::stringstream y4m;
  write_y4m(fmt, frames, y4m);
  Y4mReader yr(y4m);
  EXPECT_EQ(yr.format(), fmt);
  EXPECT_EQ(read_all(yr), frames);

  std::stringstream raw;
  RawWriter rw(raw, fmt);
  for (const auto& f : frames) rw.write(f);
  EXPECT_EQ(rw.bytes_written(), 4 * fmt.frame_bytes());
  RawReader rr(raw, fmt);
  EXPECT_EQ(read_all(rr), frames);
}

INSTANTIATE_TEST_SUITE_P(BitDepths, RoundTrip, ::testing::Values(8, 10));

TEST(Raw, EmptyStreamHasNoFrames) {
  std::istringstream in("");
  RawReader r(in, make_format(16, 16));
  EXPECT_FALSE(r.next().has_value());
}

TEST(Raw, PartialTrailingFrameIsAnError) {
  const auto fmt = make_format(16, 16);
  std::istringstream in(std::string(fmt.frame_bytes() * 5 / 2, '\x10'));
  RawReader r(in, fmt);
  EXPECT_TRUE(r.next().has_value());
  EXPECT_TRUE(r.next().has_value());
  try {
    r.next();
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("after frame 2"), std::string::npos) << e.what();
  }
}

TEST(Raw, TenBitOutOfRangeStrictAndPermissive) {
  const auto fmt = make_format(2, 2, 10);
  std::string bytes(fmt.frame_bytes(), '\0');
  bytes[0] = '\xff';
  bytes[1] = '\x07';  // 0x07ff = 2047
  {
    std::istringstream in(bytes);
    RawReader r(in, fmt);
    EXPECT_THROW(r.next(), IoError);
  }
  std::istringstream in(bytes);
  ReadOptions opt;
  opt.permissive = true;
  RawReader r(in, fmt, opt);
  const auto f = r.next();
  ASSERT_TRUE(f);
  EXPECT_EQ(f->at(0, 0, 0), 1023);
}

TEST(Writers, RejectFormatMismatch) {
  std::ostringstream out;
  Y4mWriter w(out, make_format(16, 16));
  EXPECT_THROW(w.write(testing::flat_frame(make_format(32, 16), 0)), FormatError);
}

TEST(Files, OpenVideoByExtension) {
  const auto dir = testing::temp_dir("frameio");
  const auto fmt = make_format(16, 8);
  std::mt19937_64 rng(3);
  const Frame f = testing::random_frame(fmt, rng);
  {
    auto out = create_video(dir + "/a.y4m", fmt);
    out.sink->write(f);
  }
  auto in = open_video(dir + "/a.y4m", std::nullopt);
  EXPECT_EQ(read_all(*in.source), std::vector<Frame>{f});
  {
    auto out = create_video(dir + "/a.yuv", fmt);
    out.sink->write(f);
  }
  EXPECT_THROW(open_video(dir + "/a.yuv", std::nullopt), FormatError);
  auto raw = open_video(dir + "/a.yuv", fmt);
  EXPECT_EQ(read_all(*raw.source), std::vector<Frame>{f});
  EXPECT_THROW(open_video(dir + "/missing.y4m", std::nullopt), IoError);
}

}  // namespace
}  // namespace grainkit
