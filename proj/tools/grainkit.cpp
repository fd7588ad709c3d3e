// grainkit command line: analyze, synthesize, inspect-sei, roundtrip, metrics, bench.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "grainkit/analysis.hpp"
#include "grainkit/config_file.hpp"
#include "grainkit/error.hpp"
#include "grainkit/json_report.hpp"
#include "grainkit/metrics.hpp"
#include "grainkit/sei_codec.hpp"
#include "grainkit/sidecar.hpp"
#include "grainkit/synthesis.hpp"
#include "grainkit/throughput.hpp"
#include "grainkit/video_io.hpp"

namespace gk = grainkit;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kIo = 3, kValidation = 4, kInternal = 5 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int g_verbosity = 1;  // 0 quiet, 1 info, 2 debug

void log_info(const std::string& m) {
  if (g_verbosity >= 1) std::cerr << "grainkit: " << m << "\n";
}
void log_debug(const std::string& m) {
  if (g_verbosity >= 2) std::cerr << "grainkit[debug]: " << m << "\n";
}
void log_warn(const std::string& m) { std::cerr << "grainkit: warning: " << m << "\n"; }

struct RawFormatOptions {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::string fps = "25:1";

  std::optional<gk::VideoFormat> format() const {
    if (width == 0 && height == 0) {
      return std::nullopt;
    }
    gk::VideoFormat f;
    f.width = width;
    f.height = height;
    f.bit_depth = bit_depth;
    const auto colon = fps.find(':');
    try {
      f.frame_rate.num = static_cast<std::uint32_t>(std::stoul(fps.substr(0, colon)));
      f.frame_rate.den = colon == std::string::npos ? 1u : static_cast<std::uint32_t>(std::stoul(fps.substr(colon + 1)));
    } catch (const std::exception&) {
      throw UsageError("--fps expects N or N:D, got '" + fps + "'");
    }
    f.validate();
    return f;
  }
};

void add_raw_options(CLI::App* app, RawFormatOptions& raw) {
  app->add_option("--width", raw.width, "Frame width for raw (non-.y4m) input")->group("Raw input");
  app->add_option("--height", raw.height, "Frame height for raw input")->group("Raw input");
  app->add_option("--bit-depth", raw.bit_depth, "Bit depth for raw input (8 or 10)")
      ->check(CLI::IsMember({8, 10}))
      ->capture_default_str()
      ->group("Raw input");
  app->add_option("--fps", raw.fps, "Frame rate N[:D] for raw input")->capture_default_str()->group("Raw input");
}

gk::OpenedSource open_input(const std::string& path, const RawFormatOptions& raw, bool permissive) {
  gk::ReadOptions ro;
  ro.permissive = permissive;
  return gk::open_video(path, raw.format(), ro);
}

void write_json_file(const std::string& path, const json& j) {
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw gk::IoError("cannot create '" + path + "'");
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw gk::IoError("failed writing '" + path + "'");
  }
}

struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  bool threads_set = false;
  std::string db_cache;
  bool permissive = false;
};

gk::RunSettings load_settings(const Common& common) {
  gk::RunSettings s;
  if (!common.config_path.empty()) {
    gk::apply_config(gk::load_config(common.config_path), s);
  }
  if (common.seed_set) s.synthesis.master_seed = common.seed;
  if (common.threads_set) s.synthesis.threads = common.threads;
  return s;
}

gk::GrainPatternDb load_db(const Common& common) {
  if (!common.db_cache.empty()) {
    return gk::GrainPatternDb::load_or_build(common.db_cache, gk::kDefaultDatabaseSeed);
  }
  return gk::GrainPatternDb::build();
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeOpts {
  std::string input, output, diagnostics;
  RawFormatOptions raw;
};

int run_analyze(const AnalyzeOpts& o, const Common& common) {
  const gk::RunSettings s = load_settings(common);
  const gk::GrainPatternDb db = load_db(common);
  auto in = open_input(o.input, o.raw, common.permissive);
  log_info("analyzing " + o.input + " (" + std::to_string(in.source->format().width) + "x" +
           std::to_string(in.source->format().height) + ", " + std::to_string(in.source->format().bit_depth) + "-bit)");
  std::vector<gk::EpochDiagnostics> diag;
  const auto params = gk::analyze_sequence(*in.source, db, s.denoise, s.analysis, &diag);

  std::vector<gk::SeiRecord> records;
  records.reserve(params.size());
  for (const auto& fp : params) {
    records.push_back({fp.frame_index, gk::encode_sei(fp.params)});
  }
  gk::write_sidecar(o.output, records);
  for (const auto& d : diag) {
    if (d.denoise_passthrough) {
      log_warn("epoch at frame " + std::to_string(d.frame_index) + ": fewer than 3 frames, denoiser passed through");
    }
    log_debug("epoch " + std::to_string(d.frame_index) + ": " + gk::describe(d.params));
  }
  log_info("wrote " + std::to_string(records.size()) + " SEI records in " + std::to_string(diag.size()) +
           " analysis epochs to " + o.output);
  if (!o.diagnostics.empty()) {
    json j = json::array();
    for (const auto& d : diag) j.push_back(gk::to_json(d));
    write_json_file(o.diagnostics, j);
  }
  return kOk;
}

// ---- synthesize -----------------------------------------------------------

struct SynthOpts {
  std::string input, sidecar, output, report;
  bool no_deblock = false;
  bool deblock_horizontal = false;
  RawFormatOptions raw;
};

int run_synthesize(const SynthOpts& o, const Common& common) {
  gk::RunSettings s = load_settings(common);
  if (o.no_deblock) s.synthesis.deblock = false;
  if (o.deblock_horizontal) s.synthesis.deblock_horizontal = true;
  const gk::GrainPatternDb db = load_db(common);
  const gk::SeiStream sei = gk::index_records(gk::read_sidecar(o.sidecar));
  auto in = open_input(o.input, o.raw, common.permissive);
  auto out = gk::create_video(o.output, in.source->format());

  std::unique_ptr<std::ofstream> report;
  if (!o.report.empty()) {
    report = std::make_unique<std::ofstream>(o.report);
    if (!*report) throw gk::IoError("cannot create '" + o.report + "'");
  }
  std::size_t failures = 0;
  const std::size_t n = gk::synthesize_sequence(*in.source, sei, db, s.synthesis, *out.sink,
                                                [&](const gk::BlendReport& r) {
                                                  if (!r.error.empty()) {
                                                    ++failures;
                                                    log_warn("frame " + std::to_string(r.frame_index) +
                                                             ": SEI rejected, passed through: " + r.error);
                                                  }
                                                  if (report) *report << gk::to_json(r).dump() << "\n";
                                                });
  out.stream->flush();
  if (!*out.stream) throw gk::IoError("failed writing '" + o.output + "'");
  log_info("synthesized " + std::to_string(n) + " frames to " + o.output + " (" + std::to_string(failures) +
           " SEI failures)");
  return kOk;
}

// ---- inspect-sei ----------------------------------------------------------

struct InspectOpts {
  std::string sidecar, hex, json_out;
};

std::vector<std::uint8_t> parse_hex(const std::string& hex) {
  std::vector<std::uint8_t> out;
  std::string digits;
  for (char ch : hex) {
    if (std::isxdigit(static_cast<unsigned char>(ch))) digits.push_back(ch);
  }
  if (digits.size() % 2 != 0) throw UsageError("--hex needs an even number of hex digits");
  for (std::size_t i = 0; i < digits.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(std::stoul(digits.substr(i, 2), nullptr, 16)));
  }
  return out;
}

int run_inspect(const InspectOpts& o) {
  std::vector<gk::SeiRecord> records;
  if (!o.hex.empty()) {
    records.push_back({0, parse_hex(o.hex)});
  } else {
    records = gk::read_sidecar(o.sidecar);
  }
  json out = json::array();
  std::size_t bad = 0;
  for (const auto& r : records) {
    json j;
    j["frame_index"] = r.frame_index;
    j["payload_bytes"] = r.payload.size();
    try {
      const gk::FgcParams p = gk::decode_sei_unchecked(r.payload);
      j["params"] = gk::to_json(p);
      json v = json::array();
      for (const auto& viol : gk::validate(p)) v.push_back(viol.to_string());
      try {
        gk::decode_sei(r.payload);
      } catch (const gk::Error& e) {
        if (v.empty()) v.push_back(e.what());
      }
      j["violations"] = v;
      j["valid"] = v.empty();
      if (!v.empty()) ++bad;
    } catch (const gk::Error& e) {
      j["valid"] = false;
      j["error"] = e.what();
      ++bad;
    }
    out.push_back(j);
  }
  if (o.json_out.empty()) {
    for (const auto& j : out) {
      std::cout << "frame " << j["frame_index"].get<std::uint32_t>() << " (" << j["payload_bytes"].get<std::size_t>()
                << " bytes): ";
      if (j.contains("error")) {
        std::cout << "DECODE ERROR: " << j["error"].get<std::string>() << "\n";
        continue;
      }
      std::cout << (j["valid"].get<bool>() ? "valid" : "INVALID") << "\n";
      std::cout << "  " << gk::describe(gk::decode_sei_unchecked(records[&j - &out[0]].payload)) << "\n";
      for (const auto& v : j["violations"]) std::cout << "  violation: " << v.get<std::string>() << "\n";
    }
  } else {
    write_json_file(o.json_out, out);
  }
  log_info(std::to_string(records.size()) + " records, " + std::to_string(bad) + " invalid");
  return bad == 0 ? kOk : kValidation;
}

// ---- roundtrip ------------------------------------------------------------

struct RoundtripOpts {
  std::string input, injected_sidecar, report = "-";
  int sf = -1;
  int h_cutoff = gk::kDefaultCutoff;
  int v_cutoff = gk::kDefaultCutoff;
  int lsf = 2;
  double sf_tolerance = 0.25;
  int cutoff_tolerance = 2;
  RawFormatOptions raw;
};

// Interval of the recovered model at the intensity, normalised to the
// injected log2_scale_factor.
json compare_component(const gk::FgcParams& inj, const gk::FgcParams& rec, int c, double sf_tol, int cut_tol) {
  json j;
  j["injected_present"] = inj.components[c].has_value();
  j["recovered_present"] = rec.components[c].has_value();
  json intervals = json::array();
  bool ok = true;
  if (!inj.components[c]) {
    ok = !rec.components[c].has_value();
  } else {
    for (const auto& iv : inj.components[c]->intervals) {
      const int mid = (iv.lower_bound + iv.upper_bound) / 2;
      json ji;
      ji["intensity"] = mid;
      ji["injected_sf"] = iv.scaling_factor;
      ji["injected_cutoffs"] = {iv.h_cutoff, iv.v_cutoff};
      const gk::Interval* r = rec.components[c] ? gk::select_interval(*rec.components[c], mid) : nullptr;
      if (r == nullptr) {
        ji["recovered_sf"] = 0;
        ji["recovered_cutoffs"] = nullptr;
        ji["sf_relative_error"] = iv.scaling_factor == 0 ? 0.0 : -1.0;
        ji["within_tolerance"] = iv.scaling_factor == 0;
      } else {
        const double norm = r->scaling_factor * std::ldexp(1.0, inj.log2_scale_factor - rec.log2_scale_factor);
        const double rel = iv.scaling_factor > 0 ? (norm - iv.scaling_factor) / iv.scaling_factor : 0.0;
        ji["recovered_sf"] = r->scaling_factor;
        ji["recovered_sf_normalized"] = norm;
        ji["recovered_cutoffs"] = {r->h_cutoff, r->v_cutoff};
        ji["sf_relative_error"] = rel;
        const bool within = std::abs(rel) <= sf_tol && std::abs(r->h_cutoff - iv.h_cutoff) <= cut_tol &&
                            std::abs(r->v_cutoff - iv.v_cutoff) <= cut_tol;
        ji["within_tolerance"] = within;
      }
      ok = ok && ji["within_tolerance"].get<bool>();
      intervals.push_back(ji);
    }
  }
  j["intervals"] = intervals;
  j["within_tolerance"] = ok;
  return j;
}

int run_roundtrip(const RoundtripOpts& o, const Common& common) {
  const gk::RunSettings s = load_settings(common);
  const gk::GrainPatternDb db = load_db(common);
  auto in = open_input(o.input, o.raw, common.permissive);
  std::vector<gk::Frame> frames = gk::read_all(*in.source);
  if (frames.empty()) throw gk::IoError("'" + o.input + "' holds no frames");

  gk::FgcParams injected;
  if (!o.injected_sidecar.empty()) {
    const auto recs = gk::read_sidecar(o.injected_sidecar);
    if (recs.empty()) throw gk::ValidationError("'" + o.injected_sidecar + "' holds no SEI records");
    injected = gk::decode_sei(recs.front().payload);
  } else if (o.sf >= 0) {
    injected.log2_scale_factor = o.lsf;
    if (o.sf > 0) {
      injected.components[0] =
          gk::IntervalModel{{gk::Interval{0, gk::kMaxIntensity, o.sf, o.h_cutoff, o.v_cutoff}}, 3};
    }
    gk::require_valid(injected);
    gk::SeiStream sei;
    const auto payload = gk::encode_sei(injected);
    for (std::size_t i = 0; i < frames.size(); ++i) sei[static_cast<std::uint32_t>(i)] = payload;
    gk::BlendReport rep;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      frames[i] = gk::synthesize_frame(frames[i], static_cast<std::uint32_t>(i), sei, db, s.synthesis, rep);
    }
    log_info("injected " + gk::describe(injected));
  } else {
    throw UsageError("roundtrip needs either --injected-sidecar or --sf");
  }

  gk::VideoFormat fmt = frames.front().format();
  struct VectorSource final : gk::FrameSource {
    std::vector<gk::Frame>& f;
    gk::VideoFormat fmt;
    std::size_t i = 0;
    VectorSource(std::vector<gk::Frame>& frames, gk::VideoFormat format) : f(frames), fmt(format) {}
    const gk::VideoFormat& format() const override { return fmt; }
    std::optional<gk::Frame> next() override {
      if (i >= f.size()) return std::nullopt;
      return std::move(f[i++]);
    }
    std::size_t frames_read() const override { return i; }
  } src(frames, fmt);
  std::vector<gk::EpochDiagnostics> diag;
  const auto params = gk::analyze_sequence(src, db, s.denoise, s.analysis, &diag);
  const gk::FgcParams& recovered = params.front().params;

  json j;
  j["schema"] = "grainkit.roundtrip/1";
  j["frames"] = params.size();
  j["injected"] = gk::to_json(injected);
  j["recovered"] = gk::to_json(recovered);
  json comps = json::object();
  bool ok = true;
  const char* names[3] = {"y", "cb", "cr"};
  for (int c = 0; c < 3; ++c) {
    comps[names[c]] = compare_component(injected, recovered, c, o.sf_tolerance, o.cutoff_tolerance);
    ok = ok && comps[names[c]]["within_tolerance"].get<bool>();
  }
  j["comparison"] = comps;
  j["within_tolerance"] = ok;
  j["diagnostics"] = diag.empty() ? json() : gk::to_json(diag.front());
  write_json_file(o.report, j);
  return kOk;
}

// ---- metrics --------------------------------------------------------------

struct MetricsOpts {
  std::string ref, test, output = "-", format = "json";
  bool no_sigma = false;
  RawFormatOptions raw;
};

std::string fmt_num(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream o;
  o << std::fixed << std::setprecision(4) << v;
  return o.str();
}
std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_num(*v) : ""; }

int run_metrics(const MetricsOpts& o, const Common& common) {
  auto a = open_input(o.ref, o.raw, common.permissive);
  auto b = open_input(o.test, o.raw, common.permissive);
  const gk::MetricReport r = gk::compare_sequences(*a.source, *b.source, !o.no_sigma);
  if (o.format == "json") {
    write_json_file(o.output, gk::to_json(r));
    return kOk;
  }
  std::ostringstream csv;
  csv << "frame,psnr_y,psnr_cb,psnr_cr,sigma_ref_y,sigma_ref_cb,sigma_ref_cr,sigma_test_y,sigma_test_cb,sigma_test_cr\n";
  for (const auto& f : r.frames) {
    csv << f.frame_index;
    for (int c = 0; c < 3; ++c) csv << "," << fmt_num(f.psnr[c]);
    for (int c = 0; c < 3; ++c) csv << "," << fmt_opt(f.sigma_ref[c]);
    for (int c = 0; c < 3; ++c) csv << "," << fmt_opt(f.sigma_test[c]);
    csv << "\n";
  }
  csv << "all";
  for (int c = 0; c < 3; ++c) csv << "," << fmt_num(r.psnr[c]);
  for (int c = 0; c < 3; ++c) csv << "," << fmt_opt(r.mean_sigma_ref[c]);
  for (int c = 0; c < 3; ++c) csv << "," << fmt_opt(r.mean_sigma_test[c]);
  csv << "\n";
  if (o.output == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(o.output);
    if (!(out << csv.str())) throw gk::IoError("failed writing '" + o.output + "'");
  }
  return kOk;
}

// ---- bench ----------------------------------------------------------------

struct BenchOpts {
  std::string input, sidecar, json_out;
  std::vector<int> threads{1};
  std::string synthetic;
  int frames = 0;
  int repeat = 3;
  int sf = 40;
  RawFormatOptions raw;
};

std::vector<gk::Frame> synthetic_frames(const std::string& size, int count) {
  gk::VideoFormat fmt;
  if (std::sscanf(size.c_str(), "%dx%d", &fmt.width, &fmt.height) != 2) {
    throw UsageError("--synthetic expects WxH, got '" + size + "'");
  }
  fmt.validate();
  std::vector<gk::Frame> frames;
  for (int i = 0; i < count; ++i) {
    gk::Frame f(fmt, 0, 128);
    for (int y = 0; y < fmt.height; ++y) {
      for (int x = 0; x < fmt.width; ++x) {
        f.at(0, x, y) = static_cast<std::uint16_t>(16 + (x + 2 * y + 3 * i) % 220);
      }
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

int run_bench(const BenchOpts& o, const Common& common) {
  const gk::RunSettings s = load_settings(common);
  const gk::GrainPatternDb db = load_db(common);
  std::vector<gk::Frame> frames;
  if (!o.input.empty()) {
    auto in = open_input(o.input, o.raw, common.permissive);
    while (auto f = in.source->next()) {
      frames.push_back(std::move(*f));
      if (o.frames > 0 && static_cast<int>(frames.size()) >= o.frames) break;
    }
  } else {
    frames = synthetic_frames(o.synthetic.empty() ? "1920x1080" : o.synthetic, o.frames > 0 ? o.frames : 30);
  }
  if (frames.empty()) throw gk::IoError("no frames to benchmark");

  gk::SeiStream sei;
  if (!o.sidecar.empty()) {
    sei = gk::index_records(gk::read_sidecar(o.sidecar));
  } else {
    gk::FgcParams p;
    p.log2_scale_factor = 5;
    for (int c = 0; c < 3; ++c) {
      p.components[c] = gk::IntervalModel{{gk::Interval{0, gk::kMaxIntensity, o.sf, 8, 8}}, 1};
    }
    const auto payload = gk::encode_sei(p);
    for (std::size_t i = 0; i < frames.size(); ++i) sei[static_cast<std::uint32_t>(i)] = payload;
  }
  gk::ThroughputConfig tc;
  tc.threads = o.threads;
  tc.repeat = o.repeat;
  tc.synthesis = s.synthesis;
  const gk::ThroughputReport r = gk::measure_throughput(frames, sei, db, tc);

  std::cout << "machine: " << r.machine << "\n";
  std::cout << "input:   " << r.frames << " frames " << r.format.width << "x" << r.format.height << " "
            << r.format.bit_depth << "-bit\n\n";
  std::cout << std::left << std::setw(9) << "threads" << std::setw(16) << "fps grain off" << std::setw(16)
            << "fps grain on" << std::setw(12) << "overhead" << std::setw(14) << "ms/frame on" << "\n";
  for (const auto& row : r.rows) {
    double mean_ms = 0.0;
    for (double v : row.frame_ms_synthesis) mean_ms += v;
    mean_ms /= std::max<std::size_t>(row.frame_ms_synthesis.size(), 1);
    std::cout << std::left << std::setw(9) << row.threads << std::setw(16) << fmt_num(row.fps_passthrough)
              << std::setw(16) << fmt_num(row.fps_synthesis) << std::setw(12)
              << (fmt_num(row.overhead_percent) + "%") << std::setw(14) << fmt_num(mean_ms) << "\n";
  }
  if (!o.json_out.empty()) write_json_file(o.json_out, gk::to_json(r));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grainkit: film grain analysis, FGC SEI coding and frequency-filtering grain synthesis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "grainkit 1.0.0");

  Common common;
  std::string verbosity = "info";
  auto add_common = [&](CLI::App* sub, bool seed, bool threads) {
    sub->add_option("-c,--config", common.config_path,
                    "key = value config file ([denoise], [analysis], [synthesis] sections; see print-config)");
    sub->add_option("--db-cache", common.db_cache, "Grain pattern database cache file (built if missing)");
    sub->add_flag("--permissive", common.permissive, "Mask out-of-range 10-bit container words instead of failing");
    sub->add_option("--log", verbosity, "Log verbosity")
        ->check(CLI::IsMember({"quiet", "info", "debug"}))
        ->capture_default_str();
    if (seed) {
      sub->add_option("--seed", common.seed, "Master seed of the grain generator (default 0)")
          ->each([&](const std::string&) { common.seed_set = true; });
    }
    if (threads) {
      sub->add_option("-j,--threads", common.threads, "Worker threads for blending (0 = OpenMP default)")
          ->check(CLI::NonNegativeNumber)
          ->each([&](const std::string&) { common.threads_set = true; });
    }
  };

  AnalyzeOpts ao;
  auto* analyze = app.add_subcommand("analyze", "Estimate grain parameters and write an .fgs SEI sidecar");
  analyze->add_option("-i,--input", ao.input, "Input video (.y4m, or raw with --width/--height)")->required();
  analyze->add_option("-o,--output", ao.output, "Output .fgs sidecar")->required();
  analyze->add_option("--diagnostics", ao.diagnostics, "Write per-epoch JSON diagnostics ('-' for stdout)");
  add_raw_options(analyze, ao.raw);
  add_common(analyze, false, false);

  SynthOpts so;
  auto* synth = app.add_subcommand("synthesize", "Blend synthetic grain onto a video from an .fgs sidecar");
  synth->add_option("-i,--input", so.input, "Decoded input video")->required();
  synth->add_option("-s,--sidecar", so.sidecar, "FGC SEI sidecar (.fgs)")->required();
  synth->add_option("-o,--output", so.output, "Output video (.y4m or raw by extension)")->required();
  synth->add_option("--report", so.report, "Write one JSON BlendReport per line");
  synth->add_flag("--no-deblock", so.no_deblock, "Disable grain deblocking");
  synth->add_flag("--deblock-horizontal", so.deblock_horizontal, "Also smooth horizontal 8x8 seams");
  add_raw_options(synth, so.raw);
  add_common(synth, true, true);

  InspectOpts io;
  auto* inspect = app.add_subcommand("inspect-sei", "Decode and validate FGC SEI payloads");
  auto* sc_opt = inspect->add_option("-s,--sidecar", io.sidecar, "FGC SEI sidecar (.fgs)");
  auto* hex_opt = inspect->add_option("--hex", io.hex, "A single payload as hex digits");
  sc_opt->excludes(hex_opt);
  inspect->add_option("--json", io.json_out, "Write JSON instead of text ('-' for stdout)");
  inspect->add_option("--log", verbosity, "Log verbosity")->check(CLI::IsMember({"quiet", "info", "debug"}));

  RoundtripOpts ro;
  auto* roundtrip = app.add_subcommand(
      "roundtrip", "Analyze a grained video and compare the recovered parameters with the injected ones");
  roundtrip->add_option("-i,--input", ro.input, "Input video: already grained with --injected-sidecar, clean with --sf")
      ->required();
  auto* inj = roundtrip->add_option("--injected-sidecar", ro.injected_sidecar,
                                    "Sidecar the input was grained with (first record is the reference)");
  auto* sf = roundtrip->add_option("--sf", ro.sf, "Inject single-interval luma grain with this scaling factor")
                 ->check(CLI::Range(0, 255));
  inj->excludes(sf);
  roundtrip->add_option("--h-cutoff", ro.h_cutoff, "Injected horizontal cutoff")->check(CLI::Range(2, 14))
      ->capture_default_str();
  roundtrip->add_option("--v-cutoff", ro.v_cutoff, "Injected vertical cutoff")->check(CLI::Range(2, 14))
      ->capture_default_str();
  roundtrip->add_option("--lsf", ro.lsf, "Injected log2_scale_factor")->check(CLI::Range(2, 7))->capture_default_str();
  roundtrip->add_option("--sf-tolerance", ro.sf_tolerance, "Relative SF tolerance")->capture_default_str();
  roundtrip->add_option("--cutoff-tolerance", ro.cutoff_tolerance, "Cutoff tolerance")->capture_default_str();
  roundtrip->add_option("-o,--report", ro.report, "JSON report path ('-' for stdout)")->capture_default_str();
  add_raw_options(roundtrip, ro.raw);
  add_common(roundtrip, true, true);

  MetricsOpts mo;
  auto* metrics = app.add_subcommand("metrics", "PSNR and grain sigma between two videos");
  metrics->add_option("-r,--ref", mo.ref, "Reference video")->required();
  metrics->add_option("-t,--test", mo.test, "Test video")->required();
  metrics->add_option("-o,--output", mo.output, "Report path ('-' for stdout)")->capture_default_str();
  metrics->add_option("--format", mo.format, "Report format")->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  metrics->add_flag("--no-sigma", mo.no_sigma, "Skip the grain sigma estimate");
  add_raw_options(metrics, mo.raw);
  add_common(metrics, false, false);

  BenchOpts bo;
  auto* bench = app.add_subcommand("bench", "Throughput of the output pipeline with grain on and off");
  auto* bin = bench->add_option("-i,--input", bo.input, "Input video (default: synthetic frames)");
  bench->add_option("--synthetic", bo.synthetic, "Synthetic input size WxH (default 1920x1080)")->excludes(bin);
  bench->add_option("-s,--sidecar", bo.sidecar, "SEI sidecar (default: sf --sf on all components, cutoffs 8)");
  bench->add_option("--sf", bo.sf, "Scaling factor of the default SEI")->check(CLI::Range(1, 255))
      ->capture_default_str();
  bench->add_option("--threads-list", bo.threads, "Thread counts to measure")->delimiter(',')->capture_default_str();
  bench->add_option("--frames", bo.frames, "Frame limit (synthetic default 30)");
  bench->add_option("--repeat", bo.repeat, "Passes per measurement, fastest kept")->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--json", bo.json_out, "Write the report as JSON ('-' for stdout)");
  add_raw_options(bench, bo.raw);
  add_common(bench, true, false);

  auto* print_config = app.add_subcommand("print-config", "Print every config key with its default value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  g_verbosity = verbosity == "quiet" ? 0 : verbosity == "debug" ? 2 : 1;

  try {
    if (*analyze) return run_analyze(ao, common);
    if (*synth) return run_synthesize(so, common);
    if (*inspect) {
      if (io.sidecar.empty() && io.hex.empty()) throw UsageError("inspect-sei needs --sidecar or --hex");
      return run_inspect(io);
    }
    if (*roundtrip) return run_roundtrip(ro, common);
    if (*metrics) return run_metrics(mo, common);
    if (*bench) return run_bench(bo, common);
    if (*print_config) {
      std::cout << gk::render_config(gk::RunSettings{});
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "grainkit: " << e.what() << "\n";
    return kUsage;
  } catch (const gk::ValidationError& e) {
    std::cerr << "grainkit: validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const gk::IoError& e) {
    std::cerr << "grainkit: I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const gk::FormatError& e) {
    std::cerr << "grainkit: unsupported input: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "grainkit: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
