#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "grainkit/analysis.hpp"
#include "grainkit/synthesis.hpp"

namespace grainkit {

// key = value lines, optional [section] headers, '#' or ';' comments.
// A key inside [analysis] is equivalent to "analysis.key" at top level.
struct ConfigEntry {
  std::string key;  // fully qualified, e.g. "denoise.search_range"
  std::string value;
  int line = 0;
};

struct RunSettings {
  DenoiseConfig denoise;
  AnalysisConfig analysis;
  SynthesisConfig synthesis;
};

std::vector<ConfigEntry> parse_config(std::istream& in, const std::string& source_name);
std::vector<ConfigEntry> load_config(const std::filesystem::path& path);

// Applies entries on top of `settings`. Unknown keys and malformed values
// throw ValidationError naming the line.
void apply_config(const std::vector<ConfigEntry>& entries, RunSettings& settings);

// Every key with its current value, in config-file syntax.
std::string render_config(const RunSettings& settings);

}  // namespace grainkit
