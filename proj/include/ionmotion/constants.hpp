#pragma once

namespace ionmotion::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// CODATA 2018
inline constexpr double planck = 6.62607015e-34;               // J s (exact)
inline constexpr double hbar = 1.054571817e-34;                // J s
inline constexpr double elementary_charge = 1.602176634e-19;   // C (exact)
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

inline constexpr double cd111_mass_amu = 110.904;

}  // namespace ionmotion::constants
