#ifndef BPT_SCHMIDT_HPP
#define BPT_SCHMIDT_HPP

#include <Eigen/Core>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bpt/jsa.hpp"

namespace bpt {

// Low-rank form J(wa, wb) ~= sum_k r_k phi_k(wa) psi_k(wb) with descending
// coefficients and quadrature-orthonormal sampled mode functions:
//   dw * sum_i conj(phi_j(w_i)) phi_k(w_i) = delta_jk.
//
// Phase convention: in each column of modes_a the entry of largest magnitude
// (first index on ties) is made real and positive; modes_b absorbs the
// compensating phase so every rank-1 term r_k phi_k psi_k^T is unchanged.
// Degenerate coefficient subspaces are only defined up to rotation; all
// downstream correlation functions are invariant under such rotations.
struct SchmidtDecomposition {
  Eigen::VectorXd coefficients;  // r_k >= 0, descending
  Eigen::MatrixXcd modes_a;      // grid_a.count x K
  Eigen::MatrixXcd modes_b;      // grid_b.count x K
  FrequencyGrid grid_a;
  FrequencyGrid grid_b;

  int mode_count() const { return static_cast<int>(coefficients.size()); }
};

namespace detail {

inline void fix_mode_phases(SchmidtDecomposition& d) {
  for (int k = 0; k < d.mode_count(); ++k) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < d.modes_a.rows(); ++i) {
      const double mag = std::abs(d.modes_a(i, k));
      if (mag > best) {
        best = mag;
        imax = i;
      }
    }
    if (best <= 0.0) continue;
    const std::complex<double> phase = d.modes_a(imax, k) / best;
    d.modes_a.col(k) *= std::conj(phase);
    d.modes_b.col(k) *= phase;
  }
}

// Secondary ordering for exactly tied coefficients: grid index of the mode's
// largest-magnitude entry, ascending. Makes repeated runs byte-identical even
// through degenerate spectra.
inline void sort_modes(SchmidtDecomposition& d) {
  const int k = d.mode_count();
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Eigen::Index> peak(k);
  for (int j = 0; j < k; ++j) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < d.modes_a.rows(); ++i)
      if (std::abs(d.modes_a(i, j)) > best) {
        best = std::abs(d.modes_a(i, j));
        imax = i;
      }
    peak[j] = imax;
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (d.coefficients[a] != d.coefficients[b]) return d.coefficients[a] > d.coefficients[b];
    return peak[a] < peak[b];
  });
  SchmidtDecomposition sorted = d;
  for (int j = 0; j < k; ++j) {
    sorted.coefficients[j] = d.coefficients[order[j]];
    sorted.modes_a.col(j) = d.modes_a.col(order[j]);
    sorted.modes_b.col(j) = d.modes_b.col(order[j]);
  }
  d = std::move(sorted);
}

}  // namespace detail

// Quadrature-weighted singular value decomposition of a tabulated kernel.
// Continuous-kernel scaling: r_k = s_k * sqrt(dwa * dwb) where s_k are the
// matrix singular values, and mode samples are scaled by 1/sqrt(dw), so the
// results converge to the continuous kernel's Schmidt data under grid
// refinement. Modes with r_k < rel_tol * r_0 (and exact zeros) are discarded.
inline SchmidtDecomposition schmidt_decompose(const TabulatedJsa& jsa, double rel_tol = 1e-6) {
  validate_grid(jsa.grid_a, "schmidt_decompose");
  validate_grid(jsa.grid_b, "schmidt_decompose");
  if (jsa.values.rows() != jsa.grid_a.count || jsa.values.cols() != jsa.grid_b.count)
    throw std::invalid_argument("schmidt_decompose: value matrix does not match grids");
  if (jsa.values.size() == 0) throw std::invalid_argument("schmidt_decompose: empty matrix");
  if (!jsa.values.allFinite())
    throw std::invalid_argument("schmidt_decompose: non-finite kernel entries");
  if (!(rel_tol >= 0.0) || rel_tol >= 1.0)
    throw std::invalid_argument("schmidt_decompose: rel_tol must lie in [0, 1)");

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(jsa.values, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  const double scale = std::sqrt(jsa.grid_a.spacing * jsa.grid_b.spacing);

  int keep = 0;
  const double threshold = s.size() > 0 ? rel_tol * s[0] : 0.0;
  while (keep < s.size() && s[keep] > 0.0 && s[keep] >= threshold) ++keep;

  SchmidtDecomposition d;
  d.grid_a = jsa.grid_a;
  d.grid_b = jsa.grid_b;
  d.coefficients = s.head(keep) * scale;
  d.modes_a = svd.matrixU().leftCols(keep) / std::sqrt(jsa.grid_a.spacing);
  d.modes_b = svd.matrixV().leftCols(keep).conjugate() / std::sqrt(jsa.grid_b.spacing);
  detail::fix_mode_phases(d);
  detail::sort_modes(d);
  return d;
}

namespace detail {

// Orthonormal Hermite functions h_k(x) = H_k(x) exp(-x^2/2) / sqrt(2^k k! sqrt(pi))
// by the stable two-term recurrence.
inline Eigen::MatrixXd hermite_functions(const Eigen::ArrayXd& x, int k_max) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd h(n, k_max);
  const double norm0 = std::pow(std::numbers::pi, -0.25);
  for (Eigen::Index i = 0; i < n; ++i) h(i, 0) = norm0 * std::exp(-0.5 * x[i] * x[i]);
  if (k_max > 1)
    for (Eigen::Index i = 0; i < n; ++i) h(i, 1) = std::sqrt(2.0) * x[i] * h(i, 0);
  for (int k = 2; k < k_max; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      h(i, k) = std::sqrt(2.0 / k) * x[i] * h(i, k - 1) - std::sqrt((k - 1.0) / k) * h(i, k - 2);
  return h;
}

}  // namespace detail

// Closed-form decomposition of the double-Gaussian kernel: Hermite-Gauss
// modes of scale s = sqrt(sigma_p sigma_c / 2) with geometric coefficients
//   r_k = r_0 mu^k,  mu = |sigma_c - sigma_p| / (sigma_c + sigma_p),
//   r_0 = A sigma_p sigma_c sqrt(2 pi) / (sigma_p + sigma_c),
// and psi_k carrying sign^k with sign = -1 when sigma_c > sigma_p. Validated
// against schmidt_decompose in the test suite; sigma_p == sigma_c forces
// mu = 0 and a single separable mode.
inline SchmidtDecomposition analytic_gaussian_schmidt(const GaussianJsaParams& p, int k_max,
                                                      const FrequencyGrid& grid_a,
                                                      const FrequencyGrid& grid_b) {
  validate_params(p);
  validate_grid(grid_a, "analytic_gaussian_schmidt");
  validate_grid(grid_b, "analytic_gaussian_schmidt");
  if (k_max < 1) throw std::invalid_argument("analytic_gaussian_schmidt: k_max must be >= 1");

  const double mu = std::abs(p.sigma_c - p.sigma_p) / (p.sigma_c + p.sigma_p);
  const double s = std::sqrt(0.5 * p.sigma_p * p.sigma_c);
  const double r0 = p.amplitude * p.sigma_p * p.sigma_c * std::sqrt(2.0 * std::numbers::pi) /
                    (p.sigma_p + p.sigma_c);
  const double sign = p.sigma_c > p.sigma_p ? -1.0 : 1.0;

  SchmidtDecomposition d;
  d.grid_a = grid_a;
  d.grid_b = grid_b;
  const int k = r0 == 0.0 ? 0 : (mu == 0.0 ? 1 : k_max);
  d.coefficients.resize(k);
  for (int j = 0; j < k; ++j) d.coefficients[j] = r0 * std::pow(mu, j);

  const Eigen::MatrixXd ha = detail::hermite_functions(grid_a.offsets() / s, std::max(k, 1));
  const Eigen::MatrixXd hb = detail::hermite_functions(grid_b.offsets() / s, std::max(k, 1));
  d.modes_a = (ha.leftCols(k) / std::sqrt(s)).cast<std::complex<double>>();
  d.modes_b = (hb.leftCols(k) / std::sqrt(s)).cast<std::complex<double>>();
  for (int j = 1; j < k; j += 2)
    if (sign < 0.0) d.modes_b.col(j) *= -1.0;
  detail::fix_mode_phases(d);
  return d;
}

inline TabulatedJsa reconstruct_jsa(const SchmidtDecomposition& d) {
  validate_grid(d.grid_a, "reconstruct_jsa");
  validate_grid(d.grid_b, "reconstruct_jsa");
  TabulatedJsa jsa;
  jsa.grid_a = d.grid_a;
  jsa.grid_b = d.grid_b;
  if (d.mode_count() == 0) {
    jsa.values = Eigen::MatrixXcd::Zero(d.grid_a.count, d.grid_b.count);
  } else {
    jsa.values = d.modes_a * d.coefficients.cast<std::complex<double>>().asDiagonal() *
                 d.modes_b.transpose();
  }
  return jsa;
}

// Effective mode count K = (sum lambda)^2 / sum lambda^2 with lambda_k = r_k^2.
inline double schmidt_number(const SchmidtDecomposition& d) {
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < d.mode_count(); ++k) {
    const double lambda = d.coefficients[k] * d.coefficients[k];
    sum += lambda;
    sum_sq += lambda * lambda;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("schmidt_number: all coefficients are zero");
  return sum * sum / sum_sq;
}

}  // namespace bpt

#endif  // BPT_SCHMIDT_HPP
