#include "grainkit/sei_codec.hpp"

#include <string>

#include "grainkit/bitstream.hpp"
#include "grainkit/error.hpp"

namespace grainkit {

std::vector<std::uint8_t> encode_sei(const FgcParams& params) {
  require_valid(params);

  BitWriter bw;
  bw.write_flag(false);  // cancel flag
  bw.write_bits(static_cast<std::uint32_t>(params.film_grain_model_id), 2);
  bw.write_flag(params.separate_colour_description_present_flag);
  bw.write_bits(static_cast<std::uint32_t>(params.blending_mode_id), 2);
  bw.write_bits(static_cast<std::uint32_t>(params.log2_scale_factor), 4);
  for (int c = 0; c < 3; ++c) {
    bw.write_flag(params.comp_model_present(c));
  }
  for (int c = 0; c < 3; ++c) {
    if (!params.components[c]) {
      continue;
    }
    const IntervalModel& m = *params.components[c];
    bw.write_bits(static_cast<std::uint32_t>(m.intervals.size() - 1), 8);
    bw.write_bits(static_cast<std::uint32_t>(m.num_model_values - 1), 3);
    for (const Interval& iv : m.intervals) {
      bw.write_bits(static_cast<std::uint32_t>(iv.lower_bound), 8);
      bw.write_bits(static_cast<std::uint32_t>(iv.upper_bound), 8);
      const int values[kMaxModelValues] = {iv.scaling_factor, iv.h_cutoff, iv.v_cutoff};
      for (int j = 0; j < m.num_model_values; ++j) {
        bw.write_se(values[j]);
      }
    }
  }
  bw.write_flag(params.persistence_flag);
  bw.write_trailing_bits();
  return bw.take();
}

namespace {

[[noreturn]] void fail_at(std::size_t bit, const std::string& what) {
  throw ValidationError("SEI payload bit offset " + std::to_string(bit) + ": " + what);
}

}  // namespace

FgcParams decode_sei_unchecked(std::span<const std::uint8_t> payload) {
  BitReader br(payload);
  FgcParams p;
  if (br.read_flag()) {
    fail_at(0, "film_grain_characteristics_cancel_flag = 1 (cancellation messages carry no parameters)");
  }
  p.film_grain_model_id = static_cast<int>(br.read_bits(2));
  {
    const std::size_t at = br.position();
    p.separate_colour_description_present_flag = br.read_flag();
    if (p.separate_colour_description_present_flag) {
      fail_at(at, "separate_colour_description_present_flag = 1 is unsupported");
    }
  }
  p.blending_mode_id = static_cast<int>(br.read_bits(2));
  p.log2_scale_factor = static_cast<int>(br.read_bits(4));
  bool present[3];
  for (bool& f : present) {
    f = br.read_flag();
  }
  for (int c = 0; c < 3; ++c) {
    if (!present[c]) {
      continue;
    }
    IntervalModel m;
    const std::size_t count_at = br.position();
    const int count = static_cast<int>(br.read_bits(8)) + 1;
    if (count > kMaxIntensityIntervals) {
      fail_at(count_at, "num_intensity_intervals_minus1 = " + std::to_string(count - 1) + " \xE2\x88\x89 [0,9]");
    }
    const std::size_t nmv_at = br.position();
    m.num_model_values = static_cast<int>(br.read_bits(3)) + 1;
    if (m.num_model_values > kMaxModelValues) {
      fail_at(nmv_at, "num_model_values_minus1 = " + std::to_string(m.num_model_values - 1) + " \xE2\x88\x89 [0,2]");
    }
    for (int i = 0; i < count; ++i) {
      Interval iv;
      const std::size_t lower_at = br.position();
      iv.lower_bound = static_cast<int>(br.read_bits(8));
      iv.upper_bound = static_cast<int>(br.read_bits(8));
      if (iv.lower_bound > iv.upper_bound) {
        fail_at(lower_at, "intensity_interval_lower_bound > upper_bound");
      }
      if (!m.intervals.empty() && !(m.intervals.back().upper_bound < iv.lower_bound)) {
        fail_at(lower_at, "intensity intervals overlap (upper_bound[i] must be < lower_bound[i+1])");
      }
      const std::size_t values_at = br.position();
      int values[kMaxModelValues] = {0, kDefaultCutoff, kDefaultCutoff};
      for (int j = 0; j < m.num_model_values; ++j) {
        values[j] = br.read_se();
      }
      if (m.num_model_values == 2) {
        values[2] = values[1];
      }
      iv.scaling_factor = values[0];
      iv.h_cutoff = values[1];
      iv.v_cutoff = values[2];
      if (iv.scaling_factor < 0 || iv.scaling_factor > kMaxScalingFactor) {
        fail_at(values_at, "scaling factor " + std::to_string(iv.scaling_factor) + " \xE2\x88\x89 [0,255]");
      }
      if (iv.h_cutoff < kMinCutoff || iv.h_cutoff > kMaxCutoff || iv.v_cutoff < kMinCutoff ||
          iv.v_cutoff > kMaxCutoff) {
        fail_at(values_at, "cutoff \xE2\x88\x89 [2,14]");
      }
      m.intervals.push_back(iv);
    }
    p.components[c] = std::move(m);
  }
  p.persistence_flag = br.read_flag();
  br.read_trailing_bits();
  return p;
}

FgcParams decode_sei(std::span<const std::uint8_t> payload) {
  FgcParams p = decode_sei_unchecked(payload);
  // Header fields are at fixed offsets: model id at bit 1, blending mode at 4,
  // log2_scale_factor at 6, persistence right before the trailing bits.
  if (p.film_grain_model_id != 0) {
    fail_at(1, "film_grain_model_id = " + std::to_string(p.film_grain_model_id) +
                   " (only the frequency filtering model 0 is supported)");
  }
  if (p.blending_mode_id != 0) {
    fail_at(4, "blending_mode_id = " + std::to_string(p.blending_mode_id) + " (only additive blending 0 is supported)");
  }
  if (p.log2_scale_factor < kMinLog2ScaleFactor || p.log2_scale_factor > kMaxLog2ScaleFactor) {
    fail_at(6, "log2_scale_factor = " + std::to_string(p.log2_scale_factor) + " \xE2\x88\x89 [2,7]");
  }
  if (p.persistence_flag) {
    std::size_t bits = payload.size() * 8;
    // persistence flag precedes the stop bit and its zero padding
    while (bits > 0 && ((payload[(bits - 1) / 8] >> (7 - (bits - 1) % 8)) & 1u) == 0) {
      --bits;
    }
    fail_at(bits >= 2 ? bits - 2 : 0, "film_grain_characteristics_persistence_flag = 1 (must be 0)");
  }
  return p;
}

}  // namespace grainkit
