#ifndef BPT_CORRELATIONS_HPP
#define BPT_CORRELATIONS_HPP

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <variant>

#include "bpt/constants.hpp"
#include "bpt/errors.hpp"
#include "bpt/fourier.hpp"
#include "bpt/grid.hpp"
#include "bpt/photon_stats.hpp"
#include "bpt/schmidt.hpp"

namespace bpt {

enum class CorrelationKind { spectral_s, temporal_g1, temporal_g2, normalized_g1, normalized_g2 };

inline const char* correlation_kind_name(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::spectral_s: return "spectral-S";
    case CorrelationKind::temporal_g1: return "temporal-G1";
    case CorrelationKind::temporal_g2: return "temporal-G2";
    case CorrelationKind::normalized_g1: return "normalized-g1";
    case CorrelationKind::normalized_g2: return "normalized-g2";
  }
  return "unknown";
}

// Square correlation matrix over a frequency or time axis.
// spectral-S and temporal-G1 are Hermitian with real nonnegative diagonals;
// the G2 kinds are real symmetric. Normalized kinds may carry a mask of
// undefined entries (zero-intensity points); an empty mask means every entry
// is defined.
struct CorrelationMatrix {
  CorrelationKind kind = CorrelationKind::spectral_s;
  std::variant<FrequencyGrid, TimeGrid> axis;
  Eigen::MatrixXcd values;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> defined;  // empty => all defined

  int size() const { return static_cast<int>(values.rows()); }
  bool is_defined(Eigen::Index i, Eigen::Index j) const {
    return defined.size() == 0 || defined(i, j);
  }
  double axis_spacing() const {
    return std::holds_alternative<FrequencyGrid>(axis) ? std::get<FrequencyGrid>(axis).spacing
                                                       : std::get<TimeGrid>(axis).spacing;
  }
  double axis_center() const {
    return std::holds_alternative<FrequencyGrid>(axis) ? std::get<FrequencyGrid>(axis).center
                                                       : std::get<TimeGrid>(axis).center();
  }
};

inline Eigen::VectorXd mean_photon_numbers(const SchmidtDecomposition& d) {
  Eigen::VectorXd n(d.mode_count());
  for (int k = 0; k < d.mode_count(); ++k) {
    const double sh = std::sinh(d.coefficients[k]);
    n[k] = sh * sh;
  }
  return n;
}

// S(w, w') = sum_k sinh^2(r_k) conj(phi_k(w)) phi_k(w'): Hermitian, positive
// semidefinite; its diagonal is the spectral density.
inline CorrelationMatrix spectral_correlation(const SchmidtDecomposition& d) {
  validate_grid(d.grid_a, "spectral_correlation");
  CorrelationMatrix s;
  s.kind = CorrelationKind::spectral_s;
  s.axis = d.grid_a;
  if (d.mode_count() == 0) {
    s.values = Eigen::MatrixXcd::Zero(d.grid_a.count, d.grid_a.count);
    return s;
  }
  const Eigen::VectorXd n = mean_photon_numbers(d);
  s.values = d.modes_a.conjugate() * n.cast<std::complex<double>>().asDiagonal() *
             d.modes_a.transpose();
  return s;
}

// G1(t1, t2) = sum_k n_bar_k conj(phi~_k(t1)) phi~_k(t2) with phi~_k the
// time-domain Schmidt modes. Computed from the modes directly rather than by
// transforming S: O(K N^2) instead of the O(N^4)-equivalent double transform.
inline CorrelationMatrix g1_matrix(const SchmidtDecomposition& d, const TimeGrid& tgrid,
                                   TransformMethod method = TransformMethod::fft) {
  validate_grid(d.grid_a, "g1_matrix");
  if (!is_dual(d.grid_a, tgrid))
    throw std::invalid_argument("g1_matrix: time grid is not dual to the decomposition grid");
  CorrelationMatrix g;
  g.kind = CorrelationKind::temporal_g1;
  g.axis = tgrid;
  if (d.mode_count() == 0) {
    g.values = Eigen::MatrixXcd::Zero(tgrid.count, tgrid.count);
    return g;
  }
  const Eigen::MatrixXcd time_modes = modes_to_time(d.modes_a, d.grid_a, tgrid, method);
  const Eigen::VectorXd n = mean_photon_numbers(d);
  g.values = time_modes.conjugate() * n.cast<std::complex<double>>().asDiagonal() *
             time_modes.transpose();
  return g;
}

// Intensity-diagonal threshold below which normalized entries are masked
// instead of divided (avoids NaN propagation from underflowed tails).
inline constexpr double kIntensityMaskThreshold = 1e-300;

// g1(t1, t2) = G1(t1, t2) / sqrt(G1(t1, t1) G1(t2, t2)); |g1| <= 1, unit
// diagonal. Entries where the intensity underflows are masked, not thrown.
inline CorrelationMatrix g1_normalized(const CorrelationMatrix& g1) {
  if (g1.kind != CorrelationKind::temporal_g1)
    throw std::invalid_argument("g1_normalized: input must be a temporal-G1 matrix");
  const int n = g1.size();
  const Eigen::VectorXd diag = g1.values.diagonal().real();
  const double peak = diag.maxCoeff();
  const double cutoff = kIntensityMaskThreshold * std::max(peak, 0.0);

  CorrelationMatrix g;
  g.kind = CorrelationKind::normalized_g1;
  g.axis = g1.axis;
  g.values.resize(n, n);
  bool any_masked = false;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> defined(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool ok = diag[i] > cutoff && diag[j] > cutoff;
      defined(i, j) = ok;
      if (!ok) {
        any_masked = true;
        g.values(i, j) = 0.0;
      } else if (i == j) {
        g.values(i, j) = 1.0;
      } else {
        g.values(i, j) = g1.values(i, j) / std::sqrt(diag[i] * diag[j]);
      }
    }
  }
  if (any_masked) g.defined = std::move(defined);
  return g;
}

// G2(t1, t2) = G1(t1, t1) G1(t2, t2) + |G1(t1, t2)|^2; real, symmetric, >= 0.
inline CorrelationMatrix g2_matrix(const CorrelationMatrix& g1) {
  if (g1.kind != CorrelationKind::temporal_g1)
    throw std::invalid_argument("g2_matrix: input must be a temporal-G1 matrix");
  const int n = g1.size();
  const Eigen::VectorXd diag = g1.values.diagonal().real();
  CorrelationMatrix g;
  g.kind = CorrelationKind::temporal_g2;
  g.axis = g1.axis;
  g.values.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g.values(i, j) = diag[i] * diag[j] + std::norm(g1.values(i, j));
  return g;
}

// g2(t1, t2) = G2(t1, t2) / (G1(t1, t1) G1(t2, t2)) = 1 + |g1(t1, t2)|^2.
inline CorrelationMatrix g2_normalized(const CorrelationMatrix& g1) {
  CorrelationMatrix g = g1_normalized(g1);
  g.kind = CorrelationKind::normalized_g2;
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j)
      g.values(i, j) = g.is_defined(i, j) ? 1.0 + std::norm(g.values(i, j)) : 0.0;
  return g;
}

// Time-integrated g2 over the full dual time grid:
//   (iint G2 dt1 dt2) / (iint G1(t1,t1) G1(t2,t2) dt1 dt2)
//     = 1 + sum_k n_bar_k^2 / (sum_k n_bar_k)^2.
// Evaluates both the closed form and the quadrature over the G2 matrix and
// requires them to agree to 1e-6 relative before returning the closed form.
inline double g2_time_integrated(const SchmidtDecomposition& d) {
  const Eigen::VectorXd n = mean_photon_numbers(d);
  const double total = n.sum();
  if (!(total > 0.0))
    throw std::invalid_argument("g2_time_integrated: total mean photon number is zero");
  const double closed = 1.0 + n.squaredNorm() / (total * total);

  const TimeGrid tgrid = dual_time_grid(d.grid_a);
  const CorrelationMatrix g1 = g1_matrix(d, tgrid);
  const double dt = tgrid.spacing;
  const double diag_integral = g1.values.diagonal().real().sum() * dt;
  const double offdiag_integral = g1.values.squaredNorm() * dt * dt;  // iint |G1|^2
  const double quadrature = 1.0 + offdiag_integral / (diag_integral * diag_integral);
  if (std::abs(quadrature - closed) > 1e-6 * closed)
    throw NumericError("g2_time_integrated: closed form and quadrature disagree");
  return closed;
}

// Stationary beam from a CW pump: a diagonal mixture of thermal states, one
// per frequency. On the lattice each bin is an independent mode with
// squeezing r(w_i); there are no spectral correlations between bins.
struct CwBeam {
  FrequencyGrid grid;
  Eigen::ArrayXd n_bar;  // sinh^2(r(w_i)), >= 0
};

inline CwBeam cw_beam(const Eigen::ArrayXd& profile, const FrequencyGrid& grid) {
  validate_grid(grid, "cw_beam");
  if (profile.size() != grid.count)
    throw std::invalid_argument("cw_beam: profile length does not match grid count");
  if (!profile.isFinite().all() || (profile < 0.0).any())
    throw std::invalid_argument("cw_beam: profile must be finite and nonnegative");
  CwBeam beam;
  beam.grid = grid;
  beam.n_bar = profile.sinh().square();
  return beam;
}

// Frequency-bin Schmidt form of the CW beam: coefficient r(w_i) on the
// indicator mode e_i / sqrt(dw), partner mode at the energy-conserving
// mirror bin. Reconstruction gives exactly the antidiagonal kernel of
// build_cw_jsa, and spectral_correlation of it is diag(n_bar / dw).
inline SchmidtDecomposition cw_mode_decomposition(const Eigen::ArrayXd& profile,
                                                  const FrequencyGrid& grid,
                                                  double rel_tol = 1e-6) {
  validate_grid(grid, "cw_mode_decomposition");
  if (profile.size() != grid.count)
    throw std::invalid_argument("cw_mode_decomposition: profile length does not match grid");
  if (!profile.isFinite().all() || (profile < 0.0).any())
    throw std::invalid_argument("cw_mode_decomposition: profile must be finite and nonnegative");
  if (!(rel_tol >= 0.0) || rel_tol >= 1.0)
    throw std::invalid_argument("cw_mode_decomposition: rel_tol must lie in [0, 1)");

  const int n = grid.count;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (profile[a] != profile[b]) return profile[a] > profile[b];
    return a < b;
  });
  const double r0 = profile[order[0]];
  int keep = 0;
  while (keep < n && profile[order[keep]] > 0.0 && profile[order[keep]] >= rel_tol * r0) ++keep;

  SchmidtDecomposition d;
  d.grid_a = grid;
  d.grid_b = grid;
  d.coefficients.resize(keep);
  d.modes_a = Eigen::MatrixXcd::Zero(n, keep);
  d.modes_b = Eigen::MatrixXcd::Zero(n, keep);
  const double inv_sqrt_dw = 1.0 / std::sqrt(grid.spacing);
  for (int k = 0; k < keep; ++k) {
    const int i = order[k];
    d.coefficients[k] = profile[i];
    d.modes_a(i, k) = inv_sqrt_dw;
    d.modes_b(n - 1 - i, k) = inv_sqrt_dw;
  }
  return d;
}

// Wiener-Khinchin transform of the occupation spectrum:
//   G1_cw(tau) = (1/2pi) sum_i exp(+i w_i tau) n_bar(w_i) dw,
// evaluated at the points of `tgrid`.
inline Eigen::VectorXcd cw_g1(const CwBeam& beam, const TimeGrid& tgrid) {
  if (!is_dual(beam.grid, tgrid))
    throw std::invalid_argument("cw_g1: time grid is not dual to the beam grid");
  const Eigen::VectorXcd spectrum = beam.n_bar.matrix().cast<std::complex<double>>();
  const Eigen::VectorXcd transformed = mode_to_time_fft(spectrum, beam.grid, tgrid);
  return transformed.conjugate() / std::sqrt(2.0 * std::numbers::pi);
}

inline double cw_g1_zero_delay(const CwBeam& beam) {
  return beam.n_bar.sum() * beam.grid.spacing / (2.0 * std::numbers::pi);
}

inline Eigen::VectorXcd cw_g1_normalized(const CwBeam& beam, const TimeGrid& tgrid) {
  const double g0 = cw_g1_zero_delay(beam);
  if (!(g0 > 0.0)) throw std::invalid_argument("cw_g1_normalized: beam carries no photons");
  return cw_g1(beam, tgrid) / g0;
}

// G2_cw(tau) = G1_cw(0)^2 + |G1_cw(tau)|^2.
inline Eigen::VectorXd cw_g2(const CwBeam& beam, const TimeGrid& tgrid) {
  const Eigen::VectorXcd g1 = cw_g1(beam, tgrid);
  const double g0 = cw_g1_zero_delay(beam);
  Eigen::VectorXd out(g1.size());
  for (Eigen::Index i = 0; i < g1.size(); ++i) out[i] = g0 * g0 + std::norm(g1[i]);
  return out;
}

// g2_cw(tau) = 1 + |g1_cw(tau)|^2; equals 2 at zero delay and decays to 1
// beyond the coherence time.
inline Eigen::VectorXd cw_g2_normalized(const CwBeam& beam, const TimeGrid& tgrid) {
  const Eigen::VectorXcd g1n = cw_g1_normalized(beam, tgrid);
  Eigen::VectorXd out(g1n.size());
  for (Eigen::Index i = 0; i < g1n.size(); ++i) out[i] = 1.0 + std::norm(g1n[i]);
  return out;
}

// Squeezing profile that makes the CW beam a true thermal state at
// temperature T: alpha(w) = hbar w / (k_B T), r(w) = atanh(exp(-alpha/2)).
// The resulting occupancy is the Bose-Einstein 1 / (exp(alpha) - 1).
// Grid frequencies are absolute and must be positive (rad/s).
inline Eigen::ArrayXd thermal_r_profile(double temperature, const FrequencyGrid& grid) {
  validate_grid(grid, "thermal_r_profile");
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw std::invalid_argument("thermal_r_profile: temperature must be finite and > 0");
  Eigen::ArrayXd r(grid.count);
  for (int i = 0; i < grid.count; ++i) {
    const double w = grid.sample(i);
    if (!(w > 0.0))
      throw std::invalid_argument("thermal_r_profile: grid frequencies must be positive");
    const double alpha = k_hbar * w / (k_boltzmann * temperature);
    r[i] = std::atanh(std::exp(-0.5 * alpha));
  }
  return r;
}

}  // namespace bpt

#endif  // BPT_CORRELATIONS_HPP
