#pragma once

#include <optional>
#include <string>

#include "ionmotion/constants.hpp"
#include "ionmotion/errors.hpp"

namespace ionmotion {

struct IonSpecies {
    std::string name;
    double mass = 0.0;                   // kg
    double transition_wavelength = 0.0;  // m
    double gamma0 = 0.0;                 // excited-state linewidth, rad/s
    double omega_hf = 0.0;               // hyperfine splitting, rad/s

    void validate() const;

    // 111Cd+: S1/2 -> P3/2 at 214.5 nm, gamma0/2pi = 47 MHz, hyperfine 14.53 GHz.
    static IonSpecies cd111();
};

struct RamanGeometry {
    double delta_k = 0.0;  // wave-vector difference along the probed axis, rad/m
    double omega0 = 0.0;   // carrier Rabi frequency, rad/s

    void validate() const;

    // Counter-propagating pair at 90 degrees: |dk| = sqrt(2) * 2pi/lambda.
    static RamanGeometry ninety_degree(double wavelength, double omega0);
};

// Informational electrode-drive figures; never used in any computation.
struct DriveMetadata {
    double rf_amplitude = 0.0;      // V
    double drive_frequency = 0.0;   // rad/s
    double static_potential = 0.0;  // V
};

struct TrapConfig {
    double omega_x = 0.0;  // secular frequency of the simulated axis, rad/s
    double d = 0.0;        // distance to the closest electrode, m
    std::string label;
    std::optional<DriveMetadata> drive;

    void validate() const;
};

// Electric-field noise spectral density S_E(omega, d) in (V/m)^2/Hz:
// a power law anchored at (omega_ref, d_ref) plus an optional flat floor.
struct NoiseModel {
    double s0 = 0.0;         // (V/m)^2/Hz at the reference point
    double omega_ref = 0.0;  // rad/s
    double d_ref = 0.0;      // m
    double alpha = 0.0;      // S_E ~ omega^-alpha
    double p = 0.0;          // S_E ~ d^-p
    double floor = 0.0;      // additive flat contribution, (V/m)^2/Hz

    void validate() const;
};

/// eta = dk * sqrt(hbar / (2 m omega_x))
double lamb_dicke(const RamanGeometry& geometry, const IonSpecies& ion, double omega_x);

/// omega_R = hbar dk^2 / (2 m)
double recoil_frequency(const RamanGeometry& geometry, const IonSpecies& ion);

/// Doppler-limit mean occupation gamma0 / (2 omega_x).
double doppler_limit_nbar(const IonSpecies& ion, double omega_x);

/// Minimum secular frequency for first-sideband cooling to reach the
/// ground state from the Doppler limit: sqrt(gamma0 omega_R / 2).
double cooling_threshold(const IonSpecies& ion, const RamanGeometry& geometry);

/// ndot = e^2 S_E / (4 m hbar omega_x), quanta/s.
double heating_rate_from_noise(double s_e, const IonSpecies& ion, double omega_x);
double heating_rate_from_noise(double s_e, double mass, double omega_x);

/// Inverse of heating_rate_from_noise.
double noise_from_heating_rate(double ndot, const IonSpecies& ion, double omega_x);
double noise_from_heating_rate(double ndot, double mass, double omega_x);

/// S_E = s0 (omega/omega_ref)^-alpha (d/d_ref)^-p + floor
double evaluate_noise(const NoiseModel& model, double omega, double d);

}  // namespace ionmotion
