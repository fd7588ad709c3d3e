#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace grainkit {

inline constexpr int kMaxIntensityIntervals = 10;
inline constexpr int kMaxModelValues = 3;
inline constexpr int kMinCutoff = 2;
inline constexpr int kMaxCutoff = 14;
inline constexpr int kDefaultCutoff = 8;
inline constexpr int kMinLog2ScaleFactor = 2;
inline constexpr int kMaxLog2ScaleFactor = 7;
// Scaling factors and interval bounds live in the 8-bit intensity domain.
inline constexpr int kIntensityBits = 8;
inline constexpr int kMaxIntensity = (1 << kIntensityBits) - 1;
inline constexpr int kMaxScalingFactor = (1 << kIntensityBits) - 1;

enum class FilmGrainModel : std::uint8_t { FrequencyFiltering = 0, AutoRegression = 1 };
enum class BlendingMode : std::uint8_t { Additive = 0, Multiplicative = 1 };

// One intensity interval with its component model values:
// [0] scaling factor, [1] horizontal cutoff, [2] vertical cutoff.
struct Interval {
  int lower_bound = 0;
  int upper_bound = kMaxIntensity;
  int scaling_factor = 0;
  int h_cutoff = kDefaultCutoff;
  int v_cutoff = kDefaultCutoff;

  bool operator==(const Interval&) const = default;
};

struct IntervalModel {
  std::vector<Interval> intervals;
  int num_model_values = kMaxModelValues;

  bool operator==(const IntervalModel&) const = default;
};

// Film grain characteristics for the frequency-filtering model. The wire codes
// of model id and blending mode are kept as integers so that decoded payloads
// carrying unsupported values can still be inspected and reported.
struct FgcParams {
  int film_grain_model_id = 0;
  bool separate_colour_description_present_flag = false;
  int blending_mode_id = 0;
  int log2_scale_factor = 5;
  std::array<std::optional<IntervalModel>, 3> components{};
  bool persistence_flag = false;

  bool comp_model_present(int c) const { return components[c].has_value(); }
  bool any_component_present() const {
    return components[0].has_value() || components[1].has_value() || components[2].has_value();
  }

  bool operator==(const FgcParams&) const = default;
};

struct Violation {
  std::string field;    // e.g. "components[0].intervals[1].h_cutoff"
  long long value = 0;  // offending value
  std::string rule;     // allowed range or constraint

  std::string to_string() const;
};

// Empty iff `params` is encodable.
std::vector<Violation> validate(const FgcParams& params);

// Throws ValidationError listing every violation.
void require_valid(const FgcParams& params);

// Returns the interval with lower <= avg <= upper, or nullptr when `avg` falls
// in a gap.
const Interval* select_interval(const IntervalModel& model, int block_avg);

std::string describe(const FgcParams& params);

}  // namespace grainkit
