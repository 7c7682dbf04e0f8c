#ifndef BPT_PHOTON_STATS_HPP
#define BPT_PHOTON_STATS_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace bpt {

// Thermal-statistics bundle of a single squeezed Schmidt mode:
//   n_bar      = sinh^2(r)
//   exp(-alpha) = tanh^2(r) = n_bar / (1 + n_bar)
//   z          = 1 / (1 - exp(-alpha)) = 1 + n_bar
// alpha is empty for the vacuum (r = 0), where it diverges; storing a tag
// instead of a floating infinity keeps serialized output portable.
struct ModeStatistics {
  double r = 0.0;
  double n_bar = 0.0;
  std::optional<double> alpha;
  double z = 1.0;

  bool is_vacuum() const { return !alpha.has_value(); }
};

inline ModeStatistics mode_statistics(double r) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw std::invalid_argument("mode_statistics: r must be finite and >= 0");
  ModeStatistics m;
  m.r = r;
  const double sh = std::sinh(r);
  m.n_bar = sh * sh;
  if (r > 0.0) m.alpha = -2.0 * std::log(std::tanh(r));
  m.z = 1.0 + m.n_bar;
  return m;
}

inline double squeezing_from_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("squeezing_from_alpha: alpha must be finite and > 0");
  return std::atanh(std::exp(-0.5 * alpha));
}

// Geometric photon-number distribution P_n = (1/(1+n_bar)) (n_bar/(1+n_bar))^n
// for n = 0..n_max. Successive entries form an exact geometric sequence.
inline Eigen::ArrayXd photon_pmf(double n_bar, int n_max) {
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar))
    throw std::invalid_argument("photon_pmf: n_bar must be finite and >= 0");
  if (n_max < 0) throw std::invalid_argument("photon_pmf: n_max must be >= 0");
  const double q = n_bar / (1.0 + n_bar);
  Eigen::ArrayXd p(n_max + 1);
  p[0] = 1.0 / (1.0 + n_bar);
  for (int n = 1; n <= n_max; ++n) p[n] = p[n - 1] * q;
  return p;
}

// Smallest pmf length whose cumulative mass reaches 1 - 1e-12.
inline int default_pmf_length(double n_bar) {
  if (!(n_bar > 0.0)) return 1;
  const double q = n_bar / (1.0 + n_bar);
  const int n = static_cast<int>(std::ceil(std::log(1e-12) / std::log(q)));
  return std::max(n, 1);
}

namespace detail {

// SplitMix64 avalanche; the full counter-based generator is
//   h = mix(mix(mix(seed) ^ shot) ^ mode)
// so every (seed, shot, mode) cell is an independent, platform-stable draw.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
}

}  // namespace detail

// One inverse-CDF draw from the geometric distribution with mean n_bar.
inline std::int64_t draw_photon_number(double n_bar, std::uint64_t seed, std::uint64_t shot,
                                       std::uint64_t mode) {
  if (!(n_bar > 0.0)) return 0;
  const std::uint64_t h =
      detail::splitmix64(detail::splitmix64(detail::splitmix64(seed) ^ shot) ^ mode);
  const double u = detail::uniform01(h);
  const double q = n_bar / (1.0 + n_bar);
  return static_cast<std::int64_t>(std::floor(std::log1p(-u) / std::log(q)));
}

// shots x modes matrix of i.i.d. geometric draws; modes are sampled
// independently (the reduced state is a tensor product over Schmidt modes).
// Deterministic per (seed, shot, mode), so shots may be generated in parallel
// with results identical to serial generation.
inline Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> sample_photon_numbers(
    const std::vector<ModeStatistics>& stats, std::uint64_t seed, int shots) {
  if (shots < 1) throw std::invalid_argument("sample_photon_numbers: shots must be >= 1");
  const int modes = static_cast<int>(stats.size());
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> out(shots, modes);
  for (int s = 0; s < shots; ++s)
    for (int m = 0; m < modes; ++m) out(s, m) = draw_photon_number(stats[m].n_bar, seed, s, m);
  return out;
}

}  // namespace bpt

#endif  // BPT_PHOTON_STATS_HPP
