#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>

#include "fixtures.hpp"
#include "grainkit/sei_codec.hpp"
#include "grainkit/sidecar.hpp"
#include "grainkit/video_io.hpp"

namespace grainkit {
namespace {

using nlohmann::json;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const char* redirect = " 2>&1") {
  const std::string cmd = std::string(GRAINKIT_CLI) + " " + args + redirect;
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// stdout only, for JSON written to "-".
Run run_stdout(const std::string& args) {
  return run(args + " --log quiet", " 2>/dev/null");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::temp_dir("cli");
    const auto fmt = testing::make_format(160, 96);
    const int levels[] = {70, 130, 190};
    clean_ = std::vector<Frame>(6, testing::banded_frame(fmt, levels));
    write(clean_, path("clean.y4m"));
  }

  std::string path(const std::string& name) const { return dir_ + "/" + name; }

  void write(const std::vector<Frame>& frames, const std::string& p) const {
    std::ofstream out(p, std::ios::binary);
    write_y4m(frames.front().format(), frames, out);
  }

  std::string grained(int sf) {
    std::vector<SeiRecord> recs;
    for (std::uint32_t i = 0; i < clean_.size(); ++i) recs.push_back({i, encode_sei(testing::luma_params(sf))});
    write_sidecar(path("inj.fgs"), recs);
    const auto r = run("synthesize -i " + path("clean.y4m") + " -s " + path("inj.fgs") + " -o " +
                       path("grained.y4m") + " --seed 3");
    EXPECT_EQ(r.code, 0) << r.out;
    return path("grained.y4m");
  }

  std::string dir_;
  std::vector<Frame> clean_;
};

TEST_F(Cli, HelpDocumentsSubcommandsAndDefaults) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  for (const char* s : {"analyze", "synthesize", "inspect-sei", "roundtrip", "metrics", "bench"}) {
    EXPECT_NE(r.out.find(s), std::string::npos) << s;
  }
  const auto rt = run("roundtrip --help");
  EXPECT_EQ(rt.code, 0);
  EXPECT_NE(rt.out.find("--h-cutoff"), std::string::npos);
  EXPECT_NE(rt.out.find("[8]"), std::string::npos) << rt.out;
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("analyze --bogus-flag").code, 2);
  EXPECT_EQ(run("synthesize -i a.y4m").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, MissingInputExitsThreeNamingPath) {
  const auto r = run("analyze -i " + path("nope.y4m") + " -o " + path("x.fgs"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("nope.y4m"), std::string::npos) << r.out;
}

TEST_F(Cli, BadConfigExitsFour) {
  std::ofstream(path("bad.cfg")) << "[analysis]\nnot_a_key = 1\n";
  const auto r = run("analyze -c " + path("bad.cfg") + " -i " + path("clean.y4m") + " -o " + path("x.fgs"));
  EXPECT_EQ(r.code, 4) << r.out;
}

TEST_F(Cli, AnalyzeCleanVideoHasNoGrain) {
  const auto r = run("analyze -i " + path("clean.y4m") + " -o " + path("clean.fgs") + " --diagnostics " +
                     path("diag.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto recs = read_sidecar(path("clean.fgs"));
  ASSERT_EQ(recs.size(), clean_.size());
  for (const auto& rec : recs) {
    const FgcParams p = decode_sei(rec.payload);
    for (const auto& m : p.components) {
      if (!m) continue;
      for (const auto& iv : m->intervals) EXPECT_EQ(iv.scaling_factor, 0);
    }
  }
  const auto diag = json::parse(slurp(path("diag.json")));
  ASSERT_TRUE(diag.is_array());
  EXPECT_TRUE(diag[0].contains("components"));
}

TEST_F(Cli, AnalyzeGrainedVideoFindsLumaGrain) {
  const auto g = grained(60);
  ASSERT_EQ(run("analyze -i " + g + " -o " + path("g.fgs")).code, 0);
  const auto recs = read_sidecar(path("g.fgs"));
  ASSERT_FALSE(recs.empty());
  const FgcParams p = decode_sei(recs[0].payload);
  ASSERT_TRUE(p.components[0]);
  EXPECT_GE(p.components[0]->intervals.size(), 1u);
}

TEST_F(Cli, SynthesizeEmptySidecarIsIdentity) {
  write_sidecar(path("empty.fgs"), {});
  ASSERT_EQ(run("synthesize -i " + path("clean.y4m") + " -s " + path("empty.fgs") + " -o " + path("out.y4m")).code,
            0);
  EXPECT_EQ(slurp(path("out.y4m")), slurp(path("clean.y4m")));
}

TEST_F(Cli, SynthesizeIsDeterministicPerSeed) {
  grained(50);
  const std::string base = "synthesize -i " + path("clean.y4m") + " -s " + path("inj.fgs");
  ASSERT_EQ(run(base + " -o " + path("a.y4m") + " --seed 1 -j 1").code, 0);
  ASSERT_EQ(run(base + " -o " + path("b.y4m") + " --seed 1 -j 4").code, 0);
  ASSERT_EQ(run(base + " -o " + path("c.y4m") + " --seed 2 --report " + path("rep.jsonl")).code, 0);
  EXPECT_EQ(slurp(path("a.y4m")), slurp(path("b.y4m")));
  EXPECT_NE(slurp(path("a.y4m")), slurp(path("c.y4m")));
  std::ifstream rep(path("rep.jsonl"));
  std::string line;
  int lines = 0;
  while (std::getline(rep, line)) {
    const auto j = json::parse(line);
    EXPECT_TRUE(j.contains("seed_digest"));
    ++lines;
  }
  EXPECT_EQ(lines, static_cast<int>(clean_.size()));
}

TEST_F(Cli, MetricsOnSynthesizedFixture) {
  const auto g = grained(80);
  const auto r = run_stdout("metrics -r " + path("clean.y4m") + " -t " + g);
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["aggregate"]["psnr_y"].is_number());
  EXPECT_TRUE(j["aggregate"]["psnr_cb"] == "inf");
  EXPECT_GT(j["aggregate"]["sigma_test_y"].get<double>(), 0.0);
  const auto csv = run_stdout("metrics -r " + path("clean.y4m") + " -t " + g + " --format csv");
  EXPECT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("frame,psnr_y", 0), 0u) << csv.out;
}

TEST_F(Cli, RoundtripReportSchema) {
  const auto r = run_stdout("roundtrip -i " + path("clean.y4m") + " --sf 40");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["schema"], "grainkit.roundtrip/1");
  for (const char* k : {"frames", "injected", "recovered", "comparison", "within_tolerance", "diagnostics"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  const auto& y = j["comparison"]["y"];
  ASSERT_TRUE(y["intervals"].is_array());
  const auto& iv = y["intervals"][0];
  for (const char* k : {"intensity", "injected_sf", "injected_cutoffs", "recovered_sf", "recovered_cutoffs",
                        "sf_relative_error", "within_tolerance"}) {
    EXPECT_TRUE(iv.contains(k)) << k;
  }
  EXPECT_TRUE(j["within_tolerance"].get<bool>()) << j.dump(2);
}

TEST_F(Cli, RoundtripZeroGrain) {
  const auto r = run_stdout("roundtrip -i " + path("clean.y4m") + " --sf 0");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_FALSE(j["recovered"]["components"][0]["present"].get<bool>()) << j["recovered"].dump();
  EXPECT_TRUE(j["within_tolerance"].get<bool>());
}

TEST_F(Cli, InspectSeiGoldenAndInvalid) {
  const auto golden = slurp(std::string(GRAINKIT_GOLDEN_DIR) + "/sei_reference.bin");
  write_sidecar(path("golden.fgs"), {{0, std::vector<std::uint8_t>(golden.begin(), golden.end())}});
  const auto ok = run_stdout("inspect-sei -s " + path("golden.fgs") + " --json -");
  ASSERT_EQ(ok.code, 0) << ok.out;
  const auto j = json::parse(ok.out);
  EXPECT_TRUE(j[0]["valid"].get<bool>());
  EXPECT_EQ(j[0]["params"]["log2_scale_factor"], 5);

  auto bad = std::vector<std::uint8_t>(golden.begin(), golden.end());
  bad[0] |= 0x20;  // model id 1
  write_sidecar(path("bad.fgs"), {{0, bad}});
  const auto r = run("inspect-sei -s " + path("bad.fgs"));
  EXPECT_EQ(r.code, 4) << r.out;
  EXPECT_EQ(run("inspect-sei --hex 01600a006302804020c9fe0200281840").code, 0);
}

TEST_F(Cli, BenchReportsTable) {
  const auto r = run_stdout("bench --synthetic 320x192 --frames 3 --repeat 1 --threads-list 1,2 --json -");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto pos = r.out.find('{');
  ASSERT_NE(pos, std::string::npos);
  const auto j = json::parse(r.out.substr(pos));
  EXPECT_FALSE(j["machine"].get<std::string>().empty());
  ASSERT_EQ(j["rows"].size(), 2u);
  for (const auto& row : j["rows"]) {
    EXPECT_GT(row["fps_passthrough"].get<double>(), 0.0);
    EXPECT_GT(row["fps_synthesis"].get<double>(), 0.0);
    EXPECT_EQ(row["frame_ms_synthesis"].size(), 3u);
  }
}

TEST_F(Cli, RawInputNeedsFormat) {
  std::ofstream(path("a.yuv"), std::ios::binary) << std::string(160 * 96 * 3 / 2, '\x40');
  EXPECT_EQ(run("metrics -r " + path("a.yuv") + " -t " + path("a.yuv")).code, 3);
  EXPECT_EQ(run_stdout("metrics -r " + path("a.yuv") + " -t " + path("a.yuv") + " --width 160 --height 96").code, 0);
}

}  // namespace
}  // namespace grainkit
