#ifndef BPT_JSA_HPP
#define BPT_JSA_HPP

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

#include "bpt/grid.hpp"

namespace bpt {

// Double-Gaussian pulsed model: pump envelope of width sigma_p times a
// Gaussian phase-matching function of width sigma_c, both in the offset
// coordinates measured from each grid center.
struct GaussianJsaParams {
  double amplitude = 0.1;  // dimensionless; does not affect normalized quantities
  double sigma_p = 0.0;    // pump spectral width (rad/s)
  double sigma_c = 0.0;    // phase-matching width (rad/s)
};

struct CwProfileParams {
  double amplitude = 0.1;
  double sigma_c = 0.0;  // phase-matching width (rad/s)
};

// Complex kernel sampled on a grid pair. Entries are stored complex even for
// the real analytic models so tabulated kernels from other sources load
// without change.
struct TabulatedJsa {
  FrequencyGrid grid_a;
  FrequencyGrid grid_b;
  Eigen::MatrixXcd values;  // grid_a.count x grid_b.count
};

inline void validate_params(const GaussianJsaParams& p) {
  if (!(p.amplitude >= 0.0) || !std::isfinite(p.amplitude))
    throw std::invalid_argument("gaussian jsa: amplitude must be finite and >= 0");
  if (!(p.sigma_p > 0.0) || !(p.sigma_c > 0.0) || !std::isfinite(p.sigma_p) ||
      !std::isfinite(p.sigma_c))
    throw std::invalid_argument("gaussian jsa: widths must be finite and > 0");
}

inline void validate_params(const CwProfileParams& p) {
  if (!(p.amplitude >= 0.0) || !std::isfinite(p.amplitude))
    throw std::invalid_argument("cw profile: amplitude must be finite and >= 0");
  if (!(p.sigma_c > 0.0) || !std::isfinite(p.sigma_c))
    throw std::invalid_argument("cw profile: sigma_c must be finite and > 0");
}

// J(Wa, Wb) = A exp(-(Wa+Wb)^2 / (2 sigma_p^2)) exp(-(Wa-Wb)^2 / (2 sigma_c^2)).
// Symmetric under a<->b exchange when the grids coincide; separable exactly
// when sigma_p == sigma_c.
inline TabulatedJsa build_gaussian_jsa(const GaussianJsaParams& p, const FrequencyGrid& grid_a,
                                       const FrequencyGrid& grid_b) {
  validate_params(p);
  validate_grid(grid_a, "build_gaussian_jsa");
  validate_grid(grid_b, "build_gaussian_jsa");
  const Eigen::ArrayXd wa = grid_a.offsets();
  const Eigen::ArrayXd wb = grid_b.offsets();
  const double inv_p = 1.0 / (2.0 * p.sigma_p * p.sigma_p);
  const double inv_c = 1.0 / (2.0 * p.sigma_c * p.sigma_c);
  Eigen::MatrixXcd values(grid_a.count, grid_b.count);
  for (int i = 0; i < grid_a.count; ++i)
    for (int j = 0; j < grid_b.count; ++j) {
      const double sum = wa[i] + wb[j];
      const double diff = wa[i] - wb[j];
      values(i, j) = p.amplitude * std::exp(-sum * sum * inv_p - diff * diff * inv_c);
    }
  return TabulatedJsa{grid_a, grid_b, std::move(values)};
}

// CW squeezing profile r(W) = A exp(-(2W)^2 / (2 sigma_c^2)); nonnegative and even.
inline Eigen::ArrayXd build_cw_profile(const CwProfileParams& p, const FrequencyGrid& grid) {
  validate_params(p);
  validate_grid(grid, "build_cw_profile");
  const Eigen::ArrayXd w = grid.offsets();
  return p.amplitude * (-2.0 * w.square() / (p.sigma_c * p.sigma_c)).exp();
}

// Discrete representation of the CW kernel r(W) delta(W + W'): the profile on
// the antidiagonal, weighted by 1/dw (delta(0) -> 1/dw on the lattice).
inline TabulatedJsa build_cw_jsa(const Eigen::ArrayXd& profile, const FrequencyGrid& grid) {
  validate_grid(grid, "build_cw_jsa");
  if (profile.size() != grid.count)
    throw std::invalid_argument("build_cw_jsa: profile length does not match grid count");
  Eigen::MatrixXcd values = Eigen::MatrixXcd::Zero(grid.count, grid.count);
  for (int i = 0; i < grid.count; ++i) values(i, grid.count - 1 - i) = profile[i] / grid.spacing;
  return TabulatedJsa{grid, grid, std::move(values)};
}

}  // namespace bpt

#endif  // BPT_JSA_HPP
