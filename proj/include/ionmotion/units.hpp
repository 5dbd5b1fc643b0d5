#pragma once

#include "ionmotion/constants.hpp"

// Internal quantities are strictly SI with angular frequencies in rad/s.
// Human-facing layers (config files, CSV columns, console output) use
// MHz/kHz, us/ms, um/nm and convert here, nowhere else.
namespace ionmotion::units {

inline constexpr double mhz_to_rad_s(double mhz) { return constants::two_pi * mhz * 1e6; }
inline constexpr double khz_to_rad_s(double khz) { return constants::two_pi * khz * 1e3; }
inline constexpr double ghz_to_rad_s(double ghz) { return constants::two_pi * ghz * 1e9; }
inline constexpr double rad_s_to_mhz(double w) { return w / (constants::two_pi * 1e6); }
inline constexpr double rad_s_to_khz(double w) { return w / (constants::two_pi * 1e3); }
inline constexpr double rad_s_to_hz(double w) { return w / constants::two_pi; }

inline constexpr double us_to_s(double us) { return us * 1e-6; }
inline constexpr double ms_to_s(double ms) { return ms * 1e-3; }
inline constexpr double s_to_us(double s) { return s * 1e6; }
inline constexpr double s_to_ms(double s) { return s * 1e3; }

inline constexpr double um_to_m(double um) { return um * 1e-6; }
inline constexpr double nm_to_m(double nm) { return nm * 1e-9; }
inline constexpr double m_to_um(double m) { return m * 1e6; }

inline constexpr double amu_to_kg(double amu) { return amu * constants::atomic_mass_unit; }

}  // namespace ionmotion::units
