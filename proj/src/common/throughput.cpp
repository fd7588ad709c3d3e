#include "grainkit/throughput.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "grainkit/video_io.hpp"

namespace grainkit {

namespace {

using Clock = std::chrono::steady_clock;

struct Pass {
  double seconds = std::numeric_limits<double>::infinity();
  std::vector<double> frame_ms;
};

Pass time_pass(std::span<const Frame> frames, const SeiStream& sei, const GrainPatternDb& db,
               const SynthesisConfig& cfg, std::vector<std::uint8_t>& buffer) {
  Pass pass;
  pass.frame_ms.reserve(frames.size());
  BlendReport report;
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto f0 = Clock::now();
    const Frame out = synthesize_frame(frames[i], static_cast<std::uint32_t>(i), sei, db, cfg, report);
    pack_frame(out, buffer);
    pass.frame_ms.push_back(std::chrono::duration<double, std::milli>(Clock::now() - f0).count());
  }
  pass.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return pass;
}

}  // namespace

ThroughputReport measure_throughput(std::span<const Frame> frames, const SeiStream& sei, const GrainPatternDb& db,
                                    const ThroughputConfig& cfg) {
  ThroughputReport report;
  report.machine = machine_descriptor();
  report.frames = frames.size();
  if (!frames.empty()) {
    report.format = frames.front().format();
  }
  const SeiStream none;
  std::vector<std::uint8_t> buffer;
  for (int threads : cfg.threads) {
    SynthesisConfig scfg = cfg.synthesis;
    scfg.threads = threads;
    Pass best_pass;
    Pass best_syn;
    // Interleave the two variants so slow drift affects both alike.
    for (int r = 0; r < std::max(cfg.repeat, 1); ++r) {
      Pass p = time_pass(frames, none, db, scfg, buffer);
      if (p.seconds < best_pass.seconds) best_pass = std::move(p);
      Pass s = time_pass(frames, sei, db, scfg, buffer);
      if (s.seconds < best_syn.seconds) best_syn = std::move(s);
    }
    ThroughputRow row;
    row.threads = threads;
    const double n = static_cast<double>(frames.size());
    row.fps_passthrough = best_pass.seconds > 0.0 ? n / best_pass.seconds : 0.0;
    row.fps_synthesis = best_syn.seconds > 0.0 ? n / best_syn.seconds : 0.0;
    row.overhead_percent =
        row.fps_passthrough > 0.0 ? 100.0 * (row.fps_passthrough - row.fps_synthesis) / row.fps_passthrough : 0.0;
    row.frame_ms_synthesis = std::move(best_syn.frame_ms);
    row.frame_ms_passthrough = std::move(best_pass.frame_ms);
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string machine_descriptor() {
  std::string cpu = "unknown cpu";
  std::ifstream info("/proc/cpuinfo");
  std::string line;
  while (std::getline(info, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        cpu = line.substr(line.find_first_not_of(' ', colon + 1));
      }
      break;
    }
  }
  std::ostringstream o;
  o << cpu << "; " << std::thread::hardware_concurrency() << " logical cores; OpenMP max threads "
    << omp_get_max_threads() << "; ";
#if defined(__clang__)
  o << "clang " << __clang_major__ << "." << __clang_minor__;
#elif defined(__GNUC__)
  o << "gcc " << __GNUC__ << "." << __GNUC_MINOR__;
#else
  o << "unknown compiler";
#endif
  return o.str();
}

}  // namespace grainkit
