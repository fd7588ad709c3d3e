#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "block_dct.hpp"
#include "grainkit/analysis.hpp"
#include "grainkit/synthesis.hpp"

namespace grainkit {

namespace {

constexpr int kCalibSize = 384;
constexpr int kCalibLsf = 2;
constexpr double kCalibSigma = 8.0;
constexpr std::uint64_t kCalibSeed = 0xCA11B8A7E;

std::size_t entry_index(int h, int v) {
  return static_cast<std::size_t>(h - kMinCutoff) * kNumCutoffValues + static_cast<std::size_t>(v - kMinCutoff);
}

}  // namespace

const CutoffCalibration& CutoffCalibration::get(const GrainPatternDb& db, bool deblock) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint64_t, bool>, std::unique_ptr<CutoffCalibration>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{db.seed(), deblock}];
  if (slot) {
    return *slot;
  }
  auto cal = std::make_unique<CutoffCalibration>();
  VideoFormat fmt;
  fmt.width = kCalibSize;
  fmt.height = kCalibSize;
  const Frame flat(fmt, 128, 128);
  SynthesisConfig scfg;
  scfg.master_seed = kCalibSeed;
  scfg.deblock = deblock;
  scfg.threads = 1;

  for (int h = kMinCutoff; h <= kMaxCutoff; ++h) {
    for (int v = kMinCutoff; v <= kMaxCutoff; ++v) {
      const double sp = db.pattern_sigma(h, v);
      const int sf = static_cast<int>(
          std::clamp<long>(std::lround(kCalibSigma * std::ldexp(1.0, kCalibLsf + 6) / sp), 1, kMaxScalingFactor));
      FgcParams p;
      p.log2_scale_factor = kCalibLsf;
      p.components[0] = IntervalModel{{Interval{0, kMaxIntensity, sf, h, v}}, 3};
      const Frame g = blend_frame(flat, p, db, scfg, 0);

      std::array<double, 8> he{};
      std::array<double, 8> ve{};
      double ac = 0.0;
      int blocks = 0;
      std::array<double, 64> block;
      for (int by = 0; by < kCalibSize / 8; ++by) {
        for (int bx = 0; bx < kCalibSize / 8; ++bx) {
          for (int j = 0; j < 8; ++j) {
            for (int i = 0; i < 8; ++i) {
              block[j * 8 + i] = g.at(0, bx * 8 + i, by * 8 + j) - 128.0;
            }
          }
          ac += detail::block_ac_energy(block, he, ve);
          ++blocks;
        }
      }
      Entry& e = cal->entries_[entry_index(h, v)];
      e.h_centroid = detail::marginal_centroid(he);
      e.v_centroid = detail::marginal_centroid(ve);
      const double nominal = sf * sp / std::ldexp(1.0, kCalibLsf + 6);
      e.gain = std::sqrt(ac / (63.0 * blocks)) / nominal;
    }
  }
  slot = std::move(cal);
  return *slot;
}

const CutoffCalibration::Entry& CutoffCalibration::entry(int h_cutoff, int v_cutoff) const {
  cutoff_index(h_cutoff);
  cutoff_index(v_cutoff);
  return entries_[entry_index(h_cutoff, v_cutoff)];
}

std::pair<int, int> CutoffCalibration::nearest(double h_centroid, double v_centroid) const {
  std::pair<int, int> best{kDefaultCutoff, kDefaultCutoff};
  double best_d = std::numeric_limits<double>::infinity();
  for (int h = kMinCutoff; h <= kMaxCutoff; ++h) {
    for (int v = kMinCutoff; v <= kMaxCutoff; ++v) {
      const Entry& e = entries_[entry_index(h, v)];
      const double d = std::hypot(e.h_centroid - h_centroid, e.v_centroid - v_centroid);
      if (d < best_d) {
        best_d = d;
        best = {h, v};
      }
    }
  }
  return best;
}

double effective_pattern_sigma(const GrainPatternDb& db, int h_cutoff, int v_cutoff) {
  return db.pattern_sigma(h_cutoff, v_cutoff) * CutoffCalibration::get(db).entry(h_cutoff, v_cutoff).gain;
}

}  // namespace grainkit
