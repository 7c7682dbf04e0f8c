#ifndef BPT_CONSTANTS_HPP
#define BPT_CONSTANTS_HPP

namespace bpt {

// 2019 SI exact values.
inline constexpr double k_boltzmann = 1.380649e-23;     // J/K
inline constexpr double k_hbar = 1.054571817e-34;       // J s

}  // namespace bpt

#endif  // BPT_CONSTANTS_HPP
