#include "grainkit/fgc_params.hpp"

#include <sstream>

#include "grainkit/error.hpp"

namespace grainkit {

std::string Violation::to_string() const {
  return field + " = " + std::to_string(value) + " violates " + rule;
}

namespace {

void check_range(std::vector<Violation>& out, const std::string& field, long long value, long long lo, long long hi) {
  if (value < lo || value > hi) {
    out.push_back({field, value, field.substr(field.rfind('.') + 1) + " \xE2\x88\x89 [" + std::to_string(lo) + "," +
                                     std::to_string(hi) + "]"});
  }
}

void validate_component(std::vector<Violation>& out, int c, const IntervalModel& model) {
  const std::string base = "components[" + std::to_string(c) + "]";
  const auto count = static_cast<long long>(model.intervals.size());
  check_range(out, base + ".num_intensity_intervals", count, 1, kMaxIntensityIntervals);
  check_range(out, base + ".num_model_values", model.num_model_values, 1, kMaxModelValues);

  for (std::size_t i = 0; i < model.intervals.size(); ++i) {
    const Interval& iv = model.intervals[i];
    const std::string f = base + ".intervals[" + std::to_string(i) + "]";
    check_range(out, f + ".lower_bound", iv.lower_bound, 0, kMaxIntensity);
    check_range(out, f + ".upper_bound", iv.upper_bound, 0, kMaxIntensity);
    if (iv.lower_bound > iv.upper_bound) {
      out.push_back({f + ".lower_bound", iv.lower_bound, "lower_bound <= upper_bound (" +
                                                            std::to_string(iv.upper_bound) + ")"});
    }
    check_range(out, f + ".scaling_factor", iv.scaling_factor, 0, kMaxScalingFactor);
    check_range(out, f + ".h_cutoff", iv.h_cutoff, kMinCutoff, kMaxCutoff);
    check_range(out, f + ".v_cutoff", iv.v_cutoff, kMinCutoff, kMaxCutoff);
    // Values the wire cannot carry with the signalled model-value count.
    if (model.num_model_values == 1 && iv.h_cutoff != kDefaultCutoff) {
      out.push_back({f + ".h_cutoff", iv.h_cutoff, "cutoff inferred as 8 when num_model_values = 1"});
    }
    if (model.num_model_values == 1 && iv.v_cutoff != kDefaultCutoff) {
      out.push_back({f + ".v_cutoff", iv.v_cutoff, "cutoff inferred as 8 when num_model_values = 1"});
    }
    if (model.num_model_values == 2 && iv.v_cutoff != iv.h_cutoff) {
      out.push_back({f + ".v_cutoff", iv.v_cutoff, "v_cutoff equals h_cutoff when num_model_values = 2"});
    }
    if (i + 1 < model.intervals.size() && !(iv.upper_bound < model.intervals[i + 1].lower_bound)) {
      out.push_back({f + ".upper_bound", iv.upper_bound,
                     "non-overlap: upper_bound[i] < lower_bound[i+1] (" +
                         std::to_string(model.intervals[i + 1].lower_bound) + ")"});
    }
  }
}

}  // namespace

std::vector<Violation> validate(const FgcParams& p) {
  std::vector<Violation> out;
  check_range(out, "film_grain_model_id", p.film_grain_model_id, 0, 0);
  if (p.separate_colour_description_present_flag) {
    out.push_back({"separate_colour_description_present_flag", 1, "must be 0 (colour description unsupported)"});
  }
  check_range(out, "blending_mode_id", p.blending_mode_id, 0, 0);
  check_range(out, "log2_scale_factor", p.log2_scale_factor, kMinLog2ScaleFactor, kMaxLog2ScaleFactor);
  for (int c = 0; c < 3; ++c) {
    if (p.components[c]) {
      validate_component(out, c, *p.components[c]);
    }
  }
  if (p.persistence_flag) {
    out.push_back({"persistence_flag", 1, "must be 0 (one message per frame)"});
  }
  return out;
}

void require_valid(const FgcParams& params) {
  const auto violations = validate(params);
  if (violations.empty()) {
    return;
  }
  std::string msg = "invalid film grain parameters:";
  for (const auto& v : violations) {
    msg += "\n  " + v.to_string();
  }
  throw ValidationError(msg);
}

const Interval* select_interval(const IntervalModel& model, int block_avg) {
  for (const Interval& iv : model.intervals) {
    if (block_avg < iv.lower_bound) {
      return nullptr;
    }
    if (block_avg <= iv.upper_bound) {
      return &iv;
    }
  }
  return nullptr;
}

std::string describe(const FgcParams& p) {
  static constexpr const char* kNames[3] = {"Y", "Cb", "Cr"};
  std::ostringstream os;
  os << "film_grain_model_id                      " << p.film_grain_model_id << '\n'
     << "separate_colour_description_present_flag " << p.separate_colour_description_present_flag << '\n'
     << "blending_mode_id                         " << p.blending_mode_id << '\n'
     << "log2_scale_factor                        " << p.log2_scale_factor << '\n';
  for (int c = 0; c < 3; ++c) {
    os << "comp_model_present_flag[" << kNames[c] << "]" << (c == 0 ? "  " : " ") << "             "
       << p.comp_model_present(c) << '\n';
  }
  for (int c = 0; c < 3; ++c) {
    if (!p.components[c]) {
      continue;
    }
    const auto& m = *p.components[c];
    os << kNames[c] << ": " << m.intervals.size() << " interval(s), " << m.num_model_values << " model value(s)\n";
    for (const auto& iv : m.intervals) {
      os << "  [" << iv.lower_bound << ", " << iv.upper_bound << "]  sf " << iv.scaling_factor << "  cutoff h "
         << iv.h_cutoff << " v " << iv.v_cutoff << '\n';
    }
  }
  os << "film_grain_characteristics_persistence_flag " << p.persistence_flag << '\n';
  return os.str();
}

}  // namespace grainkit
