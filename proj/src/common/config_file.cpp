#include "grainkit/config_file.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "grainkit/error.hpp"

namespace grainkit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const ConfigEntry& e) {
  T v{};
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ValidationError("config line " + std::to_string(e.line) + ": '" + e.key + "' expects a number, got '" +
                          e.value + "'");
  }
  return v;
}

bool parse_bool(const ConfigEntry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes" || e.value == "on") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no" || e.value == "off") return false;
  throw ValidationError("config line " + std::to_string(e.line) + ": '" + e.key + "' expects a boolean, got '" +
                        e.value + "'");
}

using Setter = std::function<void(const ConfigEntry&, RunSettings&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"denoise.temporal_radius", [](auto& e, auto& s) { s.denoise.temporal_radius = parse_number<int>(e); }},
      {"denoise.match_block", [](auto& e, auto& s) { s.denoise.match_block = parse_number<int>(e); }},
      {"denoise.search_range", [](auto& e, auto& s) { s.denoise.search_range = parse_number<int>(e); }},
      {"denoise.blend_strength", [](auto& e, auto& s) { s.denoise.blend_strength = parse_number<double>(e); }},
      {"analysis.block_size", [](auto& e, auto& s) { s.analysis.block_size = parse_number<int>(e); }},
      {"analysis.edge_threshold", [](auto& e, auto& s) { s.analysis.edge_threshold = parse_number<double>(e); }},
      {"analysis.dilation_radius", [](auto& e, auto& s) { s.analysis.dilation_radius = parse_number<int>(e); }},
      {"analysis.poly_order", [](auto& e, auto& s) { s.analysis.poly_order = parse_number<int>(e); }},
      {"analysis.max_intervals", [](auto& e, auto& s) { s.analysis.max_intervals = parse_number<int>(e); }},
      {"analysis.analysis_stride_frames",
       [](auto& e, auto& s) { s.analysis.analysis_stride_frames = parse_number<int>(e); }},
      {"analysis.num_bins", [](auto& e, auto& s) { s.analysis.num_bins = parse_number<int>(e); }},
      {"analysis.min_bin_count", [](auto& e, auto& s) { s.analysis.min_bin_count = parse_number<int>(e); }},
      {"analysis.min_level_gap", [](auto& e, auto& s) { s.analysis.min_level_gap = parse_number<double>(e); }},
      {"analysis.lloyd_max_iterations",
       [](auto& e, auto& s) { s.analysis.lloyd_max_iterations = parse_number<int>(e); }},
      {"analysis.chroma_sigma_floor",
       [](auto& e, auto& s) { s.analysis.chroma_sigma_floor = parse_number<double>(e); }},
      {"analysis.analyze_chroma", [](auto& e, auto& s) { s.analysis.analyze_chroma = parse_bool(e); }},
      {"synthesis.master_seed", [](auto& e, auto& s) { s.synthesis.master_seed = parse_number<std::uint64_t>(e); }},
      {"synthesis.deblock", [](auto& e, auto& s) { s.synthesis.deblock = parse_bool(e); }},
      {"synthesis.deblock_horizontal", [](auto& e, auto& s) { s.synthesis.deblock_horizontal = parse_bool(e); }},
      {"synthesis.threads", [](auto& e, auto& s) { s.synthesis.threads = parse_number<int>(e); }},
  };
  return table;
}

}  // namespace

std::vector<ConfigEntry> parse_config(std::istream& in, const std::string& source_name) {
  std::vector<ConfigEntry> out;
  std::string section;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ValidationError(source_name + ":" + std::to_string(n) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(source_name + ":" + std::to_string(n) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) {
      key = section + "." + key;
    }
    out.push_back({key, trim(line.substr(eq + 1)), n});
  }
  return out;
}

std::vector<ConfigEntry> load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file '" + path.string() + "'");
  }
  return parse_config(in, path.string());
}

void apply_config(const std::vector<ConfigEntry>& entries, RunSettings& settings) {
  const auto& table = setters();
  for (const auto& e : entries) {
    const auto it = table.find(e.key);
    if (it == table.end()) {
      throw ValidationError("config line " + std::to_string(e.line) + ": unknown key '" + e.key + "'");
    }
    it->second(e, settings);
  }
  settings.denoise.validate();
  settings.analysis.validate();
}

std::string render_config(const RunSettings& s) {
  std::ostringstream o;
  o << "[denoise]\n"
    << "temporal_radius = " << s.denoise.temporal_radius << "\n"
    << "match_block = " << s.denoise.match_block << "\n"
    << "search_range = " << s.denoise.search_range << "\n"
    << "blend_strength = " << s.denoise.blend_strength << "\n\n"
    << "[analysis]\n"
    << "block_size = " << s.analysis.block_size << "\n"
    << "edge_threshold = " << s.analysis.edge_threshold << "\n"
    << "dilation_radius = " << s.analysis.dilation_radius << "\n"
    << "poly_order = " << s.analysis.poly_order << "\n"
    << "max_intervals = " << s.analysis.max_intervals << "\n"
    << "analysis_stride_frames = " << s.analysis.analysis_stride_frames << "\n"
    << "num_bins = " << s.analysis.num_bins << "\n"
    << "min_bin_count = " << s.analysis.min_bin_count << "\n"
    << "min_level_gap = " << s.analysis.min_level_gap << "\n"
    << "lloyd_max_iterations = " << s.analysis.lloyd_max_iterations << "\n"
    << "chroma_sigma_floor = " << s.analysis.chroma_sigma_floor << "\n"
    << "analyze_chroma = " << (s.analysis.analyze_chroma ? "true" : "false") << "\n\n"
    << "[synthesis]\n"
    << "master_seed = " << s.synthesis.master_seed << "\n"
    << "deblock = " << (s.synthesis.deblock ? "true" : "false") << "\n"
    << "deblock_horizontal = " << (s.synthesis.deblock_horizontal ? "true" : "false") << "\n"
    << "threads = " << s.synthesis.threads << "\n";
  return o.str();
}

}  // namespace grainkit
