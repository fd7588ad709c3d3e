#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "grainkit/fgc_params.hpp"

namespace grainkit {

// FGC SEI payload layout (MSB first):
//
//   film_grain_characteristics_cancel_flag        u(1)   always 0
//   film_grain_model_id                           u(2)
//   separate_colour_description_present_flag      u(1)
//   blending_mode_id                              u(2)
//   log2_scale_factor                             u(4)
//   comp_model_present_flag[c], c = 0..2          u(1) each
//   for each present c:
//     num_intensity_intervals_minus1[c]           u(8)
//     num_model_values_minus1[c]                  u(3)
//     for each interval i:
//       intensity_interval_lower_bound[c][i]      u(8)
//       intensity_interval_upper_bound[c][i]      u(8)
//       comp_model_value[c][i][j], j < nmv        se(v)
//   film_grain_characteristics_persistence_flag   u(1)
//   rbsp_trailing_bits                            stop bit + zero padding
//
// Values the layout can carry but the frequency-filtering/additive profile
// forbids (model id 1..3, overlapping intervals, ...) decode successfully
// and are then rejected by validation with the offending bit offset.

// Throws ValidationError when `params` has any violation.
std::vector<std::uint8_t> encode_sei(const FgcParams& params);

// Applies cutoff inference: one model value -> both cutoffs 8; two model
// values -> v_cutoff = h_cutoff.
FgcParams decode_sei(std::span<const std::uint8_t> payload);

// Decodes without the final validation step (used for inspection of
// non-conforming payloads). Structural errors still throw.
FgcParams decode_sei_unchecked(std::span<const std::uint8_t> payload);

}  // namespace grainkit
