#include <exception>

#include "grainkit/error.hpp"
#include "grainkit/sei_codec.hpp"
#include "grainkit/synthesis.hpp"
#include "grainkit/video_io.hpp"

namespace grainkit {

SeiStream index_records(const std::vector<SeiRecord>& records) {
  SeiStream stream;
  for (const auto& r : records) {
    // A later record for the same frame replaces the earlier one.
    stream[r.frame_index] = r.payload;
  }
  return stream;
}

Frame synthesize_frame(const Frame& decoded, std::uint32_t frame_index, const SeiStream& sei,
                       const GrainPatternDb& db, const SynthesisConfig& cfg, BlendReport& report) {
  report = BlendReport{};
  report.frame_index = frame_index;
  const auto it = sei.find(frame_index);
  if (it == sei.end()) {
    return decoded;
  }
  FgcParams params;
  try {
    params = decode_sei(it->second);
  } catch (const std::exception& e) {
    report.error = e.what();
    return decoded;
  }
  return blend_frame(decoded, params, db, cfg, frame_index, &report);
}

std::size_t synthesize_sequence(FrameSource& source, const SeiStream& sei, const GrainPatternDb& db,
                                const SynthesisConfig& cfg, FrameSink& sink,
                                const std::function<void(const BlendReport&)>& on_report) {
  std::uint32_t index = 0;
  BlendReport report;
  while (auto frame = source.next()) {
    sink.write(synthesize_frame(*frame, index, sei, db, cfg, report));
    if (on_report) {
      on_report(report);
    }
    ++index;
  }
  return index;
}

}  // namespace grainkit
