#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grainkit/fgc_params.hpp"
#include "grainkit/frame.hpp"

namespace grainkit {

class FrameSource;
class GrainPatternDb;

struct DenoiseConfig {
  int temporal_radius = 2;  // frames each side
  int match_block = 8;      // luma samples, even
  int search_range = 8;     // luma samples, +-
  // Scales neighbour weights; the centre frame always has weight 1.
  double blend_strength = 1.0;

  void validate() const;
};

struct AnalysisConfig {
  int block_size = 8;
  // 3x3 max-min gradient above which a sample counts as structure, 8-bit units.
  double edge_threshold = 40.0;
  int dilation_radius = 2;
  int poly_order = 3;
  int max_intervals = kMaxIntensityIntervals;
  int analysis_stride_frames = 32;
  int num_bins = 32;
  int min_bin_count = 10;
  // Lloyd-Max levels closer than this (grain sigma, 8-bit units) are merged.
  double min_level_gap = 0.5;
  int lloyd_max_iterations = 100;
  // Chroma components whose strongest fitted sigma is below this are not signalled.
  double chroma_sigma_floor = 1.0;
  bool analyze_chroma = true;

  void validate() const;
};

// ---- temporal denoising ---------------------------------------------------

struct DenoiseResult {
  Frame frame;
  // Fewer than three frames in the window; `frame` is the centre unchanged.
  bool passthrough = false;
  // Noise power left in (centre - output) relative to the centre's own noise,
  // (1 - a_c)^2 + sum a_i^2 with normalised weights a, per luma match block.
  int gain_block = 8;
  int gain_cols = 0;
  int gain_rows = 0;
  std::vector<float> residual_gain;

  // Gain for a sample of component c (chroma coordinates are mapped onto the luma grid).
  double gain_at(int c, int x, int y) const;
};

// Block-matching motion-compensated temporal average of window[center] with
// every other frame of the window. Motion is searched on the luma plane,
// coarse on a 2x downsampled image then refined +-1 at full resolution, and
// reused (halved) for chroma.
DenoiseResult temporal_denoise(std::span<const Frame> window, std::size_t center, const DenoiseConfig& cfg);

// original - denoised, per plane.
ResidualPlanes extract_residual(const Frame& original, const Frame& denoised);

// ---- masking --------------------------------------------------------------

struct BlockMask {
  int block_size = 8;
  int cols = 0;
  int rows = 0;
  std::vector<std::uint8_t> keep;  // row-major, 1 = measurable

  bool kept(int bx, int by) const { return keep[static_cast<std::size_t>(by) * cols + bx] != 0; }
  int kept_count() const;
  double coverage() const;
};

// Drops every block that contains, or lies within dilation_radius of, a sample
// whose 3x3 max-min gradient exceeds edge_threshold (scaled to the bit depth).
// Partial blocks at the right/bottom border are always dropped.
BlockMask mask_flat_regions(const Frame& frame, int component, const AnalysisConfig& cfg);

// ---- variance measurement -------------------------------------------------

struct VariancePoint {
  double intensity = 0.0;  // 8-bit domain
  double variance = 0.0;   // 8-bit sample units squared
  double weight = 0.0;     // block count

  bool operator==(const VariancePoint&) const = default;
};
using VariancePoints = std::vector<VariancePoint>;

struct BlockSample {
  double intensity = 0.0;
  double variance = 0.0;
};

struct ComponentMeasurement {
  std::vector<BlockSample> blocks;
  // AC energy marginals over kept blocks: h[u] sums coefficients (v >= 1, u)
  // and v[k] sums (k, u >= 1), so the DC term never enters.
  std::array<double, 8> h_energy{};
  std::array<double, 8> v_energy{};
  int blocks_total = 0;

  double h_centroid() const;
  double v_centroid() const;
};

// Orthonormal 8x8 DCT of each kept residual block: variance = sum(AC^2) / 63,
// key = mean of the denoised block, both in the 8-bit domain, variance divided
// by the denoiser's residual gain. Requires block_size == 8.
ComponentMeasurement measure_blocks(const ResidualPlanes& residual, int component, const BlockMask& mask,
                                    const Frame& denoised, const DenoiseResult& gains, const AnalysisConfig& cfg);

// Histogram aggregation into cfg.num_bins uniform bins over [0, 255]; bins
// with fewer than cfg.min_bin_count blocks are discarded.
VariancePoints aggregate_bins(std::span<const BlockSample> blocks, const AnalysisConfig& cfg);

VariancePoints measure_variance(const ResidualPlanes& residual, int component, const BlockMask& mask,
                                const Frame& denoised, const DenoiseResult& gains, const AnalysisConfig& cfg);

// ---- fitting and quantisation --------------------------------------------

// Weighted least-squares polynomial of sqrt(variance) against intensity,
// sampled at every integer intensity of the occupied range.
struct SigmaCurve {
  std::vector<double> coeffs;  // in t = (x - x_center) / x_scale
  double x_center = 0.0;
  double x_scale = 1.0;
  int range_lo = 0;
  int range_hi = 0;
  std::vector<double> sigma;  // sigma[i] at intensity range_lo + i, clamped >= 0
  bool fallback = false;      // too few points: constant at the weighted mean

  double max_sigma() const;
};

std::optional<SigmaCurve> fit_sigma_curve(const VariancePoints& points, const AnalysisConfig& cfg);

struct LloydMaxResult {
  std::vector<double> levels;  // ascending
  std::vector<int> cell;       // per sample, index into levels
  int iterations = 0;
};

// Scalar Lloyd-Max quantiser with uniform initialisation over [min, max].
// Empty cells are removed and levels closer than min_gap merged; samples on a
// decision threshold go to the lower cell.
LloydMaxResult lloyd_max(std::span<const double> samples, int max_levels, double min_gap, int max_iterations);

// Grain calibration of the pattern database as seen by this analyser: for
// each cutoff pair, the AC energy centroids and the ratio of measured block
// AC sigma to the nominal sf * sigma_pattern / 2^(lsf + 6).
class CutoffCalibration {
 public:
  struct Entry {
    double h_centroid = 0.0;
    double v_centroid = 0.0;
    double gain = 1.0;
  };

  // Synthesises flat frames for all 169 pairs. Results are cached per (seed, deblock).
  static const CutoffCalibration& get(const GrainPatternDb& db, bool deblock = true);

  const Entry& entry(int h_cutoff, int v_cutoff) const;
  // Cutoff pair whose calibrated centroids are nearest (Euclidean) to the measurement.
  std::pair<int, int> nearest(double h_centroid, double v_centroid) const;

 private:
  std::array<Entry, 169> entries_{};
};

// Effective per-unit-sf sigma of the pattern pair in the analyser's
// measurement: sigma_pattern(h, v) * gain(h, v).
double effective_pattern_sigma(const GrainPatternDb& db, int h_cutoff, int v_cutoff);

// Largest log2_scale_factor in [2, 7] keeping round(sigma * 2^(lsf + 6) / sigma_eff) <= 255.
int choose_log2_scale_factor(double max_sigma, double sigma_eff);

// Quantised intervals for one component. sf_per_sigma converts the fitted
// sigma into scaling-factor units. Returns nullopt when every level rounds to 0.
std::optional<IntervalModel> quantize_intervals(const SigmaCurve& curve, double sf_per_sigma, int h_cutoff,
                                                int v_cutoff, const AnalysisConfig& cfg);

// ---- sequence analysis ----------------------------------------------------

struct ComponentDiagnostics {
  bool analyzed = false;
  double mask_coverage = 0.0;
  int blocks_kept = 0;
  VariancePoints points;
  std::optional<SigmaCurve> curve;
  double h_centroid = 0.0;
  double v_centroid = 0.0;
  int h_cutoff = kDefaultCutoff;
  int v_cutoff = kDefaultCutoff;
  std::string note;
};

struct EpochDiagnostics {
  std::uint32_t frame_index = 0;
  std::size_t window_frames = 0;
  bool denoise_passthrough = false;
  std::array<ComponentDiagnostics, 3> components{};
  FgcParams params;
};

struct FrameParams {
  std::uint32_t frame_index = 0;
  FgcParams params;
};

// Full analysis of window[center]: denoise, mask, residual, variance, fit,
// quantise. Luma is always analysed; chroma when cfg.analyze_chroma.
EpochDiagnostics analyze_window(std::span<const Frame> window, std::size_t center, std::uint32_t frame_index,
                                const GrainPatternDb& db, const DenoiseConfig& dcfg, const AnalysisConfig& acfg);

// Push-based analyser. Analysis runs on frames 0, stride, 2*stride, ... once
// temporal_radius frames of lookahead are available; every frame receives the
// parameters of its epoch, in order.
class GrainAnalyzer {
 public:
  GrainAnalyzer(const GrainPatternDb& db, DenoiseConfig dcfg, AnalysisConfig acfg);

  std::vector<FrameParams> push(Frame frame);
  std::vector<FrameParams> finish();

  const std::vector<EpochDiagnostics>& diagnostics() const { return diagnostics_; }

 private:
  void run_epoch(std::uint32_t epoch);
  std::vector<FrameParams> drain();

  const GrainPatternDb& db_;
  DenoiseConfig dcfg_;
  AnalysisConfig acfg_;
  std::deque<Frame> window_;  // most recent frames, at most 2r + 1
  std::uint32_t next_index_ = 0;
  std::uint32_t next_emit_ = 0;
  std::deque<std::uint32_t> pending_epochs_;
  std::map<std::uint32_t, FgcParams> epoch_params_;
  std::vector<EpochDiagnostics> diagnostics_;
};

std::vector<FrameParams> analyze_sequence(FrameSource& source, const GrainPatternDb& db, const DenoiseConfig& dcfg,
                                          const AnalysisConfig& acfg,
                                          std::vector<EpochDiagnostics>* diagnostics = nullptr);

}  // namespace grainkit
