#include "grainkit/json_report.hpp"

#include <cmath>
#include <cstdio>

namespace grainkit {

namespace {

nlohmann::json number_or_inf(double v) {
  if (std::isinf(v)) {
    return "inf";
  }
  return v;
}

nlohmann::json optional_number(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

const char* kComponentNames[3] = {"y", "cb", "cr"};

}  // namespace

nlohmann::json to_json(const FgcParams& p) {
  nlohmann::json j;
  j["film_grain_model_id"] = p.film_grain_model_id;
  j["separate_colour_description_present_flag"] = p.separate_colour_description_present_flag;
  j["blending_mode_id"] = p.blending_mode_id;
  j["log2_scale_factor"] = p.log2_scale_factor;
  j["persistence_flag"] = p.persistence_flag;
  nlohmann::json comps = nlohmann::json::array();
  for (int c = 0; c < 3; ++c) {
    nlohmann::json jc;
    jc["component"] = kComponentNames[c];
    jc["present"] = p.components[c].has_value();
    if (p.components[c]) {
      jc["num_model_values"] = p.components[c]->num_model_values;
      nlohmann::json iv = nlohmann::json::array();
      for (const auto& i : p.components[c]->intervals) {
        iv.push_back({{"lower", i.lower_bound},
                      {"upper", i.upper_bound},
                      {"scaling_factor", i.scaling_factor},
                      {"h_cutoff", i.h_cutoff},
                      {"v_cutoff", i.v_cutoff}});
      }
      jc["intervals"] = iv;
    }
    comps.push_back(jc);
  }
  j["components"] = comps;
  return j;
}

FgcParams params_from_json(const nlohmann::json& j) {
  FgcParams p;
  p.film_grain_model_id = j.value("film_grain_model_id", 0);
  p.separate_colour_description_present_flag = j.value("separate_colour_description_present_flag", false);
  p.blending_mode_id = j.value("blending_mode_id", 0);
  p.log2_scale_factor = j.at("log2_scale_factor").get<int>();
  p.persistence_flag = j.value("persistence_flag", false);
  const auto& comps = j.at("components");
  for (std::size_t c = 0; c < 3 && c < comps.size(); ++c) {
    const auto& jc = comps[c];
    if (!jc.value("present", false)) {
      continue;
    }
    IntervalModel m;
    m.num_model_values = jc.value("num_model_values", 3);
    for (const auto& i : jc.at("intervals")) {
      m.intervals.push_back({i.at("lower").get<int>(), i.at("upper").get<int>(), i.at("scaling_factor").get<int>(),
                             i.value("h_cutoff", kDefaultCutoff), i.value("v_cutoff", kDefaultCutoff)});
    }
    p.components[c] = m;
  }
  return p;
}

nlohmann::json to_json(const BlendReport& r) {
  nlohmann::json j;
  j["frame_index"] = r.frame_index;
  j["sei_applied"] = r.sei_applied;
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(r.seed_digest));
  j["seed_digest"] = digest;
  if (!r.error.empty()) {
    j["error"] = r.error;
  }
  nlohmann::json comps = nlohmann::json::object();
  for (int c = 0; c < 3; ++c) {
    const auto& cr = r.components[c];
    comps[kComponentNames[c]] = {{"present", cr.present},
                                 {"blocks_grained", cr.blocks_grained},
                                 {"blocks_skipped_no_interval", cr.blocks_skipped_no_interval},
                                 {"clip_count", cr.clip_count}};
  }
  j["components"] = comps;
  return j;
}

nlohmann::json to_json(const EpochDiagnostics& d) {
  nlohmann::json j;
  j["frame_index"] = d.frame_index;
  j["window_frames"] = d.window_frames;
  j["denoise_passthrough"] = d.denoise_passthrough;
  nlohmann::json comps = nlohmann::json::object();
  for (int c = 0; c < 3; ++c) {
    const auto& cd = d.components[c];
    if (!cd.analyzed) {
      continue;
    }
    nlohmann::json jc;
    jc["mask_coverage"] = cd.mask_coverage;
    jc["blocks_kept"] = cd.blocks_kept;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : cd.points) {
      pts.push_back({{"intensity", p.intensity}, {"variance", p.variance}, {"weight", p.weight}});
    }
    jc["variance_points"] = pts;
    if (cd.curve) {
      jc["polynomial"] = {{"coefficients", cd.curve->coeffs},
                          {"x_center", cd.curve->x_center},
                          {"x_scale", cd.curve->x_scale},
                          {"range", {cd.curve->range_lo, cd.curve->range_hi}},
                          {"fallback", cd.curve->fallback}};
    }
    jc["centroid"] = {cd.h_centroid, cd.v_centroid};
    jc["cutoffs"] = {cd.h_cutoff, cd.v_cutoff};
    if (!cd.note.empty()) {
      jc["note"] = cd.note;
    }
    comps[kComponentNames[c]] = jc;
  }
  j["components"] = comps;
  j["params"] = to_json(d.params);
  return j;
}

nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json j;
  nlohmann::json frames = nlohmann::json::array();
  for (const auto& f : r.frames) {
    nlohmann::json jf;
    jf["frame_index"] = f.frame_index;
    for (int c = 0; c < 3; ++c) {
      jf[std::string("psnr_") + kComponentNames[c]] = number_or_inf(f.psnr[c]);
      jf[std::string("sigma_ref_") + kComponentNames[c]] = optional_number(f.sigma_ref[c]);
      jf[std::string("sigma_test_") + kComponentNames[c]] = optional_number(f.sigma_test[c]);
    }
    frames.push_back(jf);
  }
  j["frames"] = frames;
  nlohmann::json agg;
  for (int c = 0; c < 3; ++c) {
    agg[std::string("psnr_") + kComponentNames[c]] = number_or_inf(r.psnr[c]);
    agg[std::string("sigma_ref_") + kComponentNames[c]] = optional_number(r.mean_sigma_ref[c]);
    agg[std::string("sigma_test_") + kComponentNames[c]] = optional_number(r.mean_sigma_test[c]);
  }
  j["aggregate"] = agg;
  return j;
}

nlohmann::json to_json(const ThroughputReport& r) {
  nlohmann::json j;
  j["machine"] = r.machine;
  j["frames"] = r.frames;
  j["format"] = {{"width", r.format.width}, {"height", r.format.height}, {"bit_depth", r.format.bit_depth}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"threads", row.threads},
                    {"fps_passthrough", row.fps_passthrough},
                    {"fps_synthesis", row.fps_synthesis},
                    {"overhead_percent", row.overhead_percent},
                    {"frame_ms_synthesis", row.frame_ms_synthesis},
                    {"frame_ms_passthrough", row.frame_ms_passthrough}});
  }
  j["rows"] = rows;
  return j;
}

}  // namespace grainkit
