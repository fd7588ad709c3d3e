#pragma once

#include <span>
#include <string>
#include <vector>

#include "grainkit/synthesis.hpp"

namespace grainkit {

struct ThroughputConfig {
  std::vector<int> threads{1};
  // Passes over the frame set per measurement; the fastest pass is kept.
  int repeat = 3;
  SynthesisConfig synthesis;
};

struct ThroughputRow {
  int threads = 1;
  double fps_passthrough = 0.0;
  double fps_synthesis = 0.0;
  // (fps_passthrough - fps_synthesis) / fps_passthrough, in percent.
  double overhead_percent = 0.0;
  // Wall clock per frame of the fastest synthesis pass, milliseconds.
  std::vector<double> frame_ms_synthesis;
  std::vector<double> frame_ms_passthrough;
};

struct ThroughputReport {
  std::string machine;
  VideoFormat format;
  std::size_t frames = 0;
  std::vector<ThroughputRow> rows;
};

// Times the per-frame output pipeline (SEI decode, blend, container
// serialisation) over in-memory frames, once with the SEI stream and once
// with an empty stream (pass-through).
ThroughputReport measure_throughput(std::span<const Frame> frames, const SeiStream& sei, const GrainPatternDb& db,
                                    const ThroughputConfig& cfg);

// CPU model, logical core count, OpenMP thread limit and compiler.
std::string machine_descriptor();

}  // namespace grainkit
