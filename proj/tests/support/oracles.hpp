#ifndef BPT_TESTS_ORACLES_HPP
#define BPT_TESTS_ORACLES_HPP

// Test-side oracles, kept independent of the library code paths they check.

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace oracles {

// Compensated sum_i w_i * exp(+i f_i tau). Brute-force reference for the
// Wiener-Khinchin transforms and for mode_to_time (pass negated tau for the
// exp(-i w t) convention).
inline std::complex<double> kahan_fourier_sum(const Eigen::ArrayXd& weights,
                                              const Eigen::ArrayXd& freqs, double tau) {
  double sum_re = 0.0, comp_re = 0.0, sum_im = 0.0, comp_im = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    const double re = weights[i] * std::cos(freqs[i] * tau);
    const double im = weights[i] * std::sin(freqs[i] * tau);
    double y = re - comp_re;
    double t = sum_re + y;
    comp_re = (t - sum_re) - y;
    sum_re = t;
    y = im - comp_im;
    t = sum_im + y;
    comp_im = (t - sum_im) - y;
    sum_im = t;
  }
  return {sum_re, sum_im};
}

namespace detail {

inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_continued_fraction(double a, double x) {
  constexpr double eps = 1e-15;
  constexpr double fpmin = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// Regularized upper incomplete gamma Q(a, x).
inline double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_continued_fraction(a, x);
}

// Upper-tail p-value of a chi-square statistic.
inline double chi_square_pvalue(double stat, int dof) {
  return gamma_q(0.5 * dof, 0.5 * stat);
}

inline double rel_frobenius(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).norm() / b.norm();
}

}  // namespace oracles

#endif  // BPT_TESTS_ORACLES_HPP
