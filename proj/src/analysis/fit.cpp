#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "grainkit/analysis.hpp"
#include "grainkit/error.hpp"

namespace grainkit {

double SigmaCurve::max_sigma() const { return sigma.empty() ? 0.0 : *std::max_element(sigma.begin(), sigma.end()); }

std::optional<SigmaCurve> fit_sigma_curve(const VariancePoints& points, const AnalysisConfig& cfg) {
  if (points.empty()) {
    return std::nullopt;
  }
  double xmin = points.front().intensity;
  double xmax = points.front().intensity;
  for (const auto& p : points) {
    xmin = std::min(xmin, p.intensity);
    xmax = std::max(xmax, p.intensity);
  }
  SigmaCurve curve;
  curve.range_lo = std::clamp(static_cast<int>(std::floor(xmin)), 0, kMaxIntensity);
  curve.range_hi = std::clamp(static_cast<int>(std::ceil(xmax)), curve.range_lo, kMaxIntensity);
  curve.x_center = 0.5 * (xmin + xmax);
  curve.x_scale = std::max(0.5 * (xmax - xmin), 1.0);

  const int order = cfg.poly_order;
  if (static_cast<int>(points.size()) < order + 1) {
    double wsum = 0.0;
    double vsum = 0.0;
    for (const auto& p : points) {
      wsum += p.weight;
      vsum += p.weight * p.variance;
    }
    curve.fallback = true;
    curve.coeffs = {wsum > 0.0 ? std::sqrt(std::max(0.0, vsum / wsum)) : 0.0};
  } else {
    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd a(n, order + 1);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& p = points[static_cast<std::size_t>(i)];
      const double sw = std::sqrt(std::max(p.weight, 0.0));
      const double t = (p.intensity - curve.x_center) / curve.x_scale;
      double tp = 1.0;
      for (int k = 0; k <= order; ++k) {
        a(i, k) = sw * tp;
        tp *= t;
      }
      b(i) = sw * std::sqrt(std::max(p.variance, 0.0));
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    curve.coeffs.assign(c.data(), c.data() + c.size());
  }

  curve.sigma.resize(static_cast<std::size_t>(curve.range_hi - curve.range_lo + 1));
  for (int x = curve.range_lo; x <= curve.range_hi; ++x) {
    const double t = (x - curve.x_center) / curve.x_scale;
    double y = 0.0;
    for (auto it = curve.coeffs.rbegin(); it != curve.coeffs.rend(); ++it) {
      y = y * t + *it;
    }
    curve.sigma[static_cast<std::size_t>(x - curve.range_lo)] = std::max(0.0, y);
  }
  return curve;
}

namespace {

void assign_cells(std::span<const double> samples, const std::vector<double>& levels, std::vector<int>& cell) {
  cell.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    int k = 0;
    while (k + 1 < static_cast<int>(levels.size()) && samples[i] > 0.5 * (levels[k] + levels[k + 1])) {
      ++k;
    }
    cell[i] = k;
  }
}

// One centroid update; empty cells disappear. Returns the largest level move
// among surviving cells.
double update_levels(std::span<const double> samples, std::vector<double>& levels, std::vector<int>& cell) {
  assign_cells(samples, levels, cell);
  std::vector<double> sum(levels.size(), 0.0);
  std::vector<int> count(levels.size(), 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    sum[cell[i]] += samples[i];
    ++count[cell[i]];
  }
  std::vector<double> next;
  double moved = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (count[k] == 0) {
      continue;
    }
    const double c = sum[k] / count[k];
    moved = std::max(moved, std::abs(c - levels[k]));
    next.push_back(c);
  }
  if (next.size() != levels.size()) {
    moved = std::max(moved, 1.0);
  }
  levels = std::move(next);
  return moved;
}

}  // namespace

LloydMaxResult lloyd_max(std::span<const double> samples, int max_levels, double min_gap, int max_iterations) {
  LloydMaxResult r;
  if (samples.empty() || max_levels < 1) {
    return r;
  }
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  const int k = std::min<int>(max_levels, static_cast<int>(samples.size()));
  for (int i = 0; i < k; ++i) {
    r.levels.push_back(*mn + (i + 0.5) * (*mx - *mn) / k);
  }
  constexpr double kConverged = 0.5;
  for (;;) {
    while (r.iterations < max_iterations) {
      ++r.iterations;
      if (update_levels(samples, r.levels, r.cell) < kConverged) {
        break;
      }
    }
    // Merge the closest pair below min_gap, then iterate again.
    std::size_t closest = 0;
    double gap = min_gap;
    for (std::size_t i = 0; i + 1 < r.levels.size(); ++i) {
      const double g = r.levels[i + 1] - r.levels[i];
      if (g < gap) {
        gap = g;
        closest = i + 1;
      }
    }
    if (closest == 0 || r.iterations >= max_iterations) {
      break;
    }
    r.levels[closest - 1] = 0.5 * (r.levels[closest - 1] + r.levels[closest]);
    r.levels.erase(r.levels.begin() + static_cast<std::ptrdiff_t>(closest));
  }
  update_levels(samples, r.levels, r.cell);
  assign_cells(samples, r.levels, r.cell);
  return r;
}

int choose_log2_scale_factor(double max_sigma, double sigma_eff) {
  for (int lsf = kMaxLog2ScaleFactor; lsf > kMinLog2ScaleFactor; --lsf) {
    if (std::lround(max_sigma * std::ldexp(1.0, lsf + 6) / sigma_eff) <= kMaxScalingFactor) {
      return lsf;
    }
  }
  return kMinLog2ScaleFactor;
}

std::optional<IntervalModel> quantize_intervals(const SigmaCurve& curve, double sf_per_sigma, int h_cutoff,
                                                int v_cutoff, const AnalysisConfig& cfg) {
  if (curve.sigma.empty()) {
    return std::nullopt;
  }
  std::vector<double> sf(curve.sigma.size());
  for (std::size_t i = 0; i < sf.size(); ++i) {
    sf[i] = curve.sigma[i] * sf_per_sigma;
  }
  const LloydMaxResult q =
      lloyd_max(sf, cfg.max_intervals, cfg.min_level_gap * sf_per_sigma, cfg.lloyd_max_iterations);

  struct Run {
    int lo, hi;
    double level;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < sf.size(); ++i) {
    const int x = curve.range_lo + static_cast<int>(i);
    const double level = q.levels[q.cell[i]];
    if (!runs.empty() && std::lround(runs.back().level) == std::lround(level)) {
      runs.back().hi = x;
    } else {
      runs.push_back({x, x, level});
    }
  }
  // A non-monotone curve revisits levels and so can produce more runs than
  // levels; merge the most similar neighbours.
  const auto max_runs = static_cast<std::size_t>(std::min(cfg.max_intervals, kMaxIntensityIntervals));
  while (runs.size() > max_runs) {
    std::size_t best = 0;
    for (std::size_t i = 1; i + 1 < runs.size(); ++i) {
      if (std::abs(runs[i + 1].level - runs[i].level) < std::abs(runs[best + 1].level - runs[best].level)) {
        best = i;
      }
    }
    Run& a = runs[best];
    const Run& b = runs[best + 1];
    const double la = a.hi - a.lo + 1;
    const double lb = b.hi - b.lo + 1;
    a.level = (a.level * la + b.level * lb) / (la + lb);
    a.hi = b.hi;
    runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  // Intensities outside the measured range take the nearest level.
  runs.front().lo = 0;
  runs.back().hi = kMaxIntensity;

  IntervalModel model;
  if (h_cutoff == kDefaultCutoff && v_cutoff == kDefaultCutoff) {
    model.num_model_values = 1;
  } else if (h_cutoff == v_cutoff) {
    model.num_model_values = 2;
  } else {
    model.num_model_values = 3;
  }
  for (const Run& r : runs) {
    const int s = static_cast<int>(std::clamp<long>(std::lround(r.level), 0, kMaxScalingFactor));
    if (s == 0) {
      continue;
    }
    if (!model.intervals.empty() && model.intervals.back().scaling_factor == s &&
        model.intervals.back().upper_bound + 1 == r.lo) {
      model.intervals.back().upper_bound = r.hi;
      continue;
    }
    model.intervals.push_back({r.lo, r.hi, s, h_cutoff, v_cutoff});
  }
  if (model.intervals.empty()) {
    return std::nullopt;
  }
  return model;
}

}  // namespace grainkit
