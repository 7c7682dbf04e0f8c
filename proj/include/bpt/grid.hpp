#ifndef BPT_GRID_HPP
#define BPT_GRID_HPP

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bpt {

// Uniform angular-frequency lattice, symmetric about `center`:
// sample(i) = center + (i - (N-1)/2) * spacing.
struct FrequencyGrid {
  double center = 0.0;   // rad/s
  double spacing = 0.0;  // rad/s
  int count = 0;

  double sample(int i) const { return center + (i - 0.5 * (count - 1)) * spacing; }
  double span() const { return spacing * (count - 1); }

  Eigen::ArrayXd samples() const {
    Eigen::ArrayXd out(count);
    for (int i = 0; i < count; ++i) out[i] = sample(i);
    return out;
  }
  // Offsets relative to the grid center.
  Eigen::ArrayXd offsets() const {
    Eigen::ArrayXd out(count);
    for (int i = 0; i < count; ++i) out[i] = (i - 0.5 * (count - 1)) * spacing;
    return out;
  }
};

struct TimeGrid {
  double spacing = 0.0;  // s
  int count = 0;
  double origin = 0.0;   // s, position of sample 0

  double sample(int i) const { return origin + i * spacing; }
  double span() const { return spacing * (count - 1); }
  double center() const { return origin + 0.5 * (count - 1) * spacing; }

  Eigen::ArrayXd samples() const {
    Eigen::ArrayXd out(count);
    for (int i = 0; i < count; ++i) out[i] = sample(i);
    return out;
  }
};

inline void validate_grid(const FrequencyGrid& g, const char* where) {
  if (g.count < 2 || !(g.spacing > 0.0) || !std::isfinite(g.spacing) || !std::isfinite(g.center))
    throw std::invalid_argument(std::string(where) + ": invalid frequency grid");
}

inline FrequencyGrid make_frequency_grid(double center, double span, int n) {
  if (!(span > 0.0) || !std::isfinite(span) || !std::isfinite(center))
    throw std::invalid_argument("make_frequency_grid: span must be positive and finite");
  if (n < 2) throw std::invalid_argument("make_frequency_grid: need at least 2 samples");
  return FrequencyGrid{center, span / (n - 1), n};
}

// Time lattice dual to `fgrid` under the discrete Fourier pair:
// dt = 2*pi / (N * dw), same N, symmetric about t = 0.
inline TimeGrid dual_time_grid(const FrequencyGrid& fgrid) {
  validate_grid(fgrid, "dual_time_grid");
  const double dt = 2.0 * std::numbers::pi / (fgrid.count * fgrid.spacing);
  return TimeGrid{dt, fgrid.count, -0.5 * (fgrid.count - 1) * dt};
}

inline bool is_dual(const FrequencyGrid& fg, const TimeGrid& tg) {
  if (fg.count != tg.count || fg.count < 2 || !(fg.spacing > 0.0)) return false;
  const double expected = 2.0 * std::numbers::pi / (fg.count * fg.spacing);
  return std::abs(tg.spacing - expected) <= 1e-12 * expected;
}

}  // namespace bpt

#endif  // BPT_GRID_HPP
