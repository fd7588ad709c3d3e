#include <algorithm>
#include <cmath>

#include "grainkit/analysis.hpp"
#include "grainkit/error.hpp"
#include "grainkit/synthesis.hpp"
#include "grainkit/video_io.hpp"

namespace grainkit {

EpochDiagnostics analyze_window(std::span<const Frame> window, std::size_t center, std::uint32_t frame_index,
                                const GrainPatternDb& db, const DenoiseConfig& dcfg, const AnalysisConfig& acfg) {
  dcfg.validate();
  acfg.validate();
  EpochDiagnostics diag;
  diag.frame_index = frame_index;
  diag.window_frames = window.size();

  const DenoiseResult dr = temporal_denoise(window, center, dcfg);
  diag.denoise_passthrough = dr.passthrough;
  const ResidualPlanes residual = extract_residual(window[center], dr.frame);
  const CutoffCalibration& cal = CutoffCalibration::get(db);

  struct Pending {
    std::optional<SigmaCurve> curve;
    double sigma_eff = 1.0;
  };
  std::array<Pending, 3> pending{};
  int lsf = kMaxLog2ScaleFactor;
  bool any = false;

  const int ncomp = acfg.analyze_chroma ? kNumComponents : 1;
  for (int c = 0; c < ncomp; ++c) {
    ComponentDiagnostics& cd = diag.components[c];
    cd.analyzed = true;
    const BlockMask mask = mask_flat_regions(dr.frame, c, acfg);
    cd.mask_coverage = mask.coverage();
    cd.blocks_kept = mask.kept_count();
    const ComponentMeasurement m = measure_blocks(residual, c, mask, dr.frame, dr, acfg);
    cd.points = aggregate_bins(m.blocks, acfg);
    cd.curve = fit_sigma_curve(cd.points, acfg);
    if (!cd.curve) {
      cd.note = "no measurable blocks";
      continue;
    }
    cd.h_centroid = m.h_centroid();
    cd.v_centroid = m.v_centroid();
    if (cd.h_centroid > 0.0 && cd.v_centroid > 0.0) {
      std::tie(cd.h_cutoff, cd.v_cutoff) = cal.nearest(cd.h_centroid, cd.v_centroid);
    }
    const double smax = cd.curve->max_sigma();
    if (c != 0 && smax < acfg.chroma_sigma_floor) {
      cd.note = "below chroma sigma floor";
      continue;
    }
    if (!(smax > 0.0)) {
      cd.note = "zero grain";
      continue;
    }
    pending[c].curve = cd.curve;
    pending[c].sigma_eff = effective_pattern_sigma(db, cd.h_cutoff, cd.v_cutoff);
    lsf = std::min(lsf, choose_log2_scale_factor(smax, pending[c].sigma_eff));
    any = true;
  }

  FgcParams params;
  if (any) {
    params.log2_scale_factor = lsf;
    for (int c = 0; c < ncomp; ++c) {
      if (!pending[c].curve) {
        continue;
      }
      const ComponentDiagnostics& cd = diag.components[c];
      const double sf_per_sigma = std::ldexp(1.0, lsf + 6) / pending[c].sigma_eff;
      params.components[c] = quantize_intervals(*pending[c].curve, sf_per_sigma, cd.h_cutoff, cd.v_cutoff, acfg);
      if (!params.components[c]) {
        diag.components[c].note = "all levels quantise to zero";
      }
    }
  }
  require_valid(params);
  diag.params = params;
  return diag;
}

GrainAnalyzer::GrainAnalyzer(const GrainPatternDb& db, DenoiseConfig dcfg, AnalysisConfig acfg)
    : db_(db), dcfg_(dcfg), acfg_(acfg) {
  dcfg_.validate();
  acfg_.validate();
}

std::vector<FrameParams> GrainAnalyzer::push(Frame frame) {
  if (!window_.empty() && !(window_.front().format() == frame.format())) {
    throw FormatError("analyzer: frame " + std::to_string(next_index_) + " changes the video format");
  }
  const std::uint32_t index = next_index_++;
  window_.push_back(std::move(frame));
  const std::size_t cap = static_cast<std::size_t>(2 * dcfg_.temporal_radius + 1);
  while (window_.size() > cap) {
    window_.pop_front();
  }
  if (index % static_cast<std::uint32_t>(acfg_.analysis_stride_frames) == 0) {
    pending_epochs_.push_back(index);
  }
  while (!pending_epochs_.empty() &&
         pending_epochs_.front() + static_cast<std::uint32_t>(dcfg_.temporal_radius) <= index) {
    run_epoch(pending_epochs_.front());
    pending_epochs_.pop_front();
  }
  return drain();
}

std::vector<FrameParams> GrainAnalyzer::finish() {
  while (!pending_epochs_.empty()) {
    run_epoch(pending_epochs_.front());
    pending_epochs_.pop_front();
  }
  return drain();
}

void GrainAnalyzer::run_epoch(std::uint32_t epoch) {
  const std::uint32_t front = next_index_ - static_cast<std::uint32_t>(window_.size());
  const std::uint32_t r = static_cast<std::uint32_t>(dcfg_.temporal_radius);
  // Frames within the temporal radius of the epoch frame.
  const std::uint32_t lo = std::max(front, epoch >= r ? epoch - r : 0u);
  const std::uint32_t hi = std::min(next_index_ - 1, epoch + r);
  std::vector<Frame> frames;
  for (std::uint32_t i = lo; i <= hi; ++i) {
    frames.push_back(window_[i - front]);
  }
  EpochDiagnostics d = analyze_window(frames, epoch - lo, epoch, db_, dcfg_, acfg_);
  epoch_params_[epoch] = d.params;
  diagnostics_.push_back(std::move(d));
}

std::vector<FrameParams> GrainAnalyzer::drain() {
  std::vector<FrameParams> out;
  const auto stride = static_cast<std::uint32_t>(acfg_.analysis_stride_frames);
  while (next_emit_ < next_index_) {
    const auto it = epoch_params_.find(next_emit_ / stride * stride);
    if (it == epoch_params_.end()) {
      break;
    }
    out.push_back({next_emit_, it->second});
    ++next_emit_;
  }
  // Older epochs are no longer needed.
  while (!epoch_params_.empty() && epoch_params_.begin()->first + stride <= next_emit_) {
    epoch_params_.erase(epoch_params_.begin());
  }
  return out;
}

std::vector<FrameParams> analyze_sequence(FrameSource& source, const GrainPatternDb& db, const DenoiseConfig& dcfg,
                                          const AnalysisConfig& acfg, std::vector<EpochDiagnostics>* diagnostics) {
  GrainAnalyzer analyzer(db, dcfg, acfg);
  std::vector<FrameParams> out;
  while (auto frame = source.next()) {
    auto ready = analyzer.push(std::move(*frame));
    out.insert(out.end(), std::make_move_iterator(ready.begin()), std::make_move_iterator(ready.end()));
  }
  auto rest = analyzer.finish();
  out.insert(out.end(), std::make_move_iterator(rest.begin()), std::make_move_iterator(rest.end()));
  if (diagnostics != nullptr) {
    *diagnostics = analyzer.diagnostics();
  }
  return out;
}

}  // namespace grainkit
