#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "grainkit/frame.hpp"

namespace grainkit {

class FrameSource;

// Per-component PSNR in dB; +infinity when the planes are identical.
std::array<double, 3> psnr(const Frame& ref, const Frame& test);

// PSNR from a mean squared error and the peak value.
double psnr_from_mse(double mse, int max_value);

// Per-component sum of squared differences.
std::array<double, 3> squared_error(const Frame& ref, const Frame& test);

struct GrainSigmaConfig {
  int block_size = 8;
  // Flatness test on the 5x5 box-smoothed plane: 3x3 max-min at most this (8-bit units).
  double flat_threshold = 16.0;
};

// Robust estimate of high-frequency noise sigma (8-bit domain) over flat
// blocks: 1.4826 * median(|Laplacian residual|) / 6, the residual taken with
// the kernel [1 -2 1; -2 4 -2; 1 -2 1]. nullopt when no block is flat.
std::optional<double> grain_sigma(const Frame& frame, int component, const GrainSigmaConfig& cfg = {});

struct FrameMetrics {
  std::uint32_t frame_index = 0;
  std::array<double, 3> psnr{};
  std::array<std::optional<double>, 3> sigma_ref{};
  std::array<std::optional<double>, 3> sigma_test{};
};

struct MetricReport {
  std::vector<FrameMetrics> frames;
  // From the MSE pooled over all frames.
  std::array<double, 3> psnr{};
  std::array<std::optional<double>, 3> mean_sigma_ref{};
  std::array<std::optional<double>, 3> mean_sigma_test{};
};

// Compares two sequences frame by frame up to the shorter length. Throws
// FormatError when the formats differ.
MetricReport compare_sequences(FrameSource& ref, FrameSource& test, bool with_sigma = true);

}  // namespace grainkit
