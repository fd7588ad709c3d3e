#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "grainkit/dct.hpp"
#include "grainkit/error.hpp"
#include "grainkit/synthesis.hpp"

namespace grainkit {

static_assert(std::endian::native == std::endian::little, "cache I/O assumes a little-endian host");

int cutoff_index(int comp_model_value) {
  if (comp_model_value < kMinCutoff || comp_model_value > kMaxCutoff) {
    throw std::out_of_range("cutoff value " + std::to_string(comp_model_value) + " outside [2, 14]");
  }
  const int h = comp_model_value - 2;
  return ((h + 3) << 2) - 1;
}

std::size_t GrainPatternDb::index(int h_cutoff, int v_cutoff) {
  if (h_cutoff < kMinCutoff || h_cutoff > kMaxCutoff || v_cutoff < kMinCutoff || v_cutoff > kMaxCutoff) {
    throw std::out_of_range("cutoff pair (" + std::to_string(h_cutoff) + ", " + std::to_string(v_cutoff) +
                            ") outside [2, 14]");
  }
  return static_cast<std::size_t>(h_cutoff - kMinCutoff) * kNumCutoffValues + (v_cutoff - kMinCutoff);
}

std::span<const std::int16_t, kPatternArea> GrainPatternDb::pattern(int h_cutoff, int v_cutoff) const {
  return std::span<const std::int16_t, kPatternArea>(patterns_.data() + index(h_cutoff, v_cutoff) * kPatternArea,
                                                     kPatternArea);
}

double GrainPatternDb::pattern_sigma(int h_cutoff, int v_cutoff) const { return sigmas_[index(h_cutoff, v_cutoff)]; }

void GrainPatternDb::compute_sigmas() {
  sigmas_.assign(kNumCutoffValues * kNumCutoffValues, 0.0);
  for (std::size_t p = 0; p < sigmas_.size(); ++p) {
    const std::int16_t* s = patterns_.data() + p * kPatternArea;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int i = 0; i < kPatternArea; ++i) {
      sum += s[i];
      sum2 += static_cast<double>(s[i]) * s[i];
    }
    const double mean = sum / kPatternArea;
    sigmas_[p] = std::sqrt(std::max(0.0, sum2 / kPatternArea - mean * mean));
  }
  sigma_db_ = sigmas_[index(kDefaultCutoff, kDefaultCutoff)];
}

GrainPatternDb GrainPatternDb::build(std::uint64_t seed) {
  GrainPatternDb db;
  db.seed_ = seed;
  db.patterns_.resize(static_cast<std::size_t>(kNumCutoffValues) * kNumCutoffValues * kPatternArea);

  // Coefficients in the orthonormal scale, pre-scaled by 2^6, carried with the
  // inverse transform's fractional bits.
  constexpr double kCoeffScale = static_cast<double>(1 << (kPatternScaleBits + dct::kCoeffFracBits));
  std::array<std::int32_t, kPatternArea> source{};
  GrainRng rng(mix64(seed));
  for (auto& c : source) {
    c = static_cast<std::int32_t>(std::lround(rng.next_gaussian() * kCoeffScale));
  }
  source[0] = 0;

  std::array<std::int32_t, kPatternArea> filtered{};
  std::array<std::int32_t, kPatternArea> spatial{};
  for (int h = kMinCutoff; h <= kMaxCutoff; ++h) {
    const int hc = cutoff_index(h);
    for (int v = kMinCutoff; v <= kMaxCutoff; ++v) {
      const int vc = cutoff_index(v);
      for (int y = 0; y < kPatternSize; ++y) {
        for (int x = 0; x < kPatternSize; ++x) {
          filtered[y * kPatternSize + x] = (x > hc || y > vc) ? 0 : source[y * kPatternSize + x];
        }
      }
      dct::inverse64(filtered, spatial);
      std::int16_t* out = db.patterns_.data() + index(h, v) * kPatternArea;
      for (int i = 0; i < kPatternArea; ++i) {
        out[i] = static_cast<std::int16_t>(std::clamp(spatial[i], -32767, 32767));
      }
    }
  }
  db.compute_sigmas();
  return db;
}

namespace {
constexpr char kMagic[4] = {'F', 'G', 'D', 'B'};
}

void GrainPatternDb::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot create pattern cache '" + path.string() + "'");
  }
  const std::uint32_t version = kCacheVersion;
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&seed_), sizeof seed_);
  out.write(reinterpret_cast<const char*>(&sigma_db_), sizeof sigma_db_);
  out.write(reinterpret_cast<const char*>(patterns_.data()),
            static_cast<std::streamsize>(patterns_.size() * sizeof(std::int16_t)));
  if (!out) {
    throw IoError("failed writing pattern cache '" + path.string() + "'");
  }
}

GrainPatternDb GrainPatternDb::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open pattern cache '" + path.string() + "'");
  }
  char magic[4] = {};
  std::uint32_t version = 0;
  GrainPatternDb db;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&db.seed_), sizeof db.seed_);
  double stored_sigma = 0.0;
  in.read(reinterpret_cast<char*>(&stored_sigma), sizeof stored_sigma);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("'" + path.string() + "' is not a grain pattern cache");
  }
  if (version != kCacheVersion) {
    throw IoError("pattern cache version " + std::to_string(version) + " (expected " +
                  std::to_string(kCacheVersion) + ")");
  }
  db.patterns_.resize(static_cast<std::size_t>(kNumCutoffValues) * kNumCutoffValues * kPatternArea);
  in.read(reinterpret_cast<char*>(db.patterns_.data()),
          static_cast<std::streamsize>(db.patterns_.size() * sizeof(std::int16_t)));
  if (static_cast<std::size_t>(in.gcount()) != db.patterns_.size() * sizeof(std::int16_t)) {
    throw IoError("truncated pattern cache '" + path.string() + "'");
  }
  db.compute_sigmas();
  if (db.sigma_db_ != stored_sigma) {
    throw IoError("pattern cache '" + path.string() + "' is inconsistent (sigma_db mismatch)");
  }
  return db;
}

GrainPatternDb GrainPatternDb::load_or_build(const std::filesystem::path& cache, std::uint64_t seed) {
  std::error_code ec;
  if (std::filesystem::exists(cache, ec)) {
    try {
      GrainPatternDb db = load(cache);
      if (db.seed() == seed) {
        return db;
      }
    } catch (const IoError&) {
      // stale or foreign file; rebuild below
    }
  }
  GrainPatternDb db = build(seed);
  try {
    db.save(cache);
  } catch (const IoError&) {
  }
  return db;
}

}  // namespace grainkit
