#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ionmotion/fockstate.hpp"

namespace ionmotion {

// Shot count requesting exact probabilities (no sampling, no detection error).
inline constexpr std::uint64_t kInfiniteShots = std::numeric_limits<std::uint64_t>::max();

struct ProbeConfig {
    double t_probe = 0.0;               // s
    std::vector<double> detuning_grid;  // offsets from the carrier, rad/s
    std::vector<SidebandOrder> orders{SidebandOrder::lower(), SidebandOrder::upper()};
    std::uint64_t shots = kInfiniteShots;
    double detection_fidelity = 1.0;

    void validate() const;
};

struct SpectrumPoint {
    double delta = 0.0;     // rad/s from the carrier
    double p_bright = 0.0;  // transfer probability
    double sigma = 0.0;     // binomial standard error (0 in exact mode)
};

struct Spectrum {
    std::vector<SpectrumPoint> points;
    bool clamped = false;  // some grid point saturated the p <= 1 clamp
};

/// Detuned two-level transfer: [w^2/(w^2+d^2)] sin^2(sqrt(w^2+d^2) t / 2).
double flop_probability(double omega, double delta, double t);

/// Bright-state transfer probability over the probe's detuning grid.
/// Each order s contributes resonantly at delta = s * omega_x. Overlapping
/// orders are summed and clamped at 1; clamping sets Spectrum::clamped.
Spectrum synthesize_spectrum(const PopulationDistribution& dist, double eta, double omega0,
                             double omega_x, const ProbeConfig& probe, std::uint64_t seed = 0);

struct FlopPoint {
    double t = 0.0;
    double p_bright = 0.0;
};

/// p(t) = sum_n P_n sin^2(Omega_{n -> n-s} t / 2), exact.
std::vector<FlopPoint> rabi_flop_trace(const PopulationDistribution& dist, SidebandOrder order,
                                       double eta, double omega0, const std::vector<double>& times,
                                       CouplingMode mode = CouplingMode::lamb_dicke);

struct DetectionResult {
    double p_est = 0.0;
    double sigma = 0.0;
};

/// Finite-shot state detection with symmetric bright/dark error:
/// p_eff = fidelity p + (1 - fidelity)(1 - p). Returns the empirical
/// fraction and its binomial standard error.
DetectionResult simulate_detection(double p_true, std::uint64_t shots, double fidelity,
                                   std::uint64_t seed);

/// nbar = r / (1 - r) for the upper/lower sideband strength ratio r.
/// r >= 1 is unphysical (heating during the probe, or noise) and throws.
double nbar_from_sideband_ratio(double r);

enum class ThermometryMethod {
    peak_ratio,  // on-resonance sideband asymmetry; exact for thermal states
    flop_fit,    // level populations fitted to flopping traces on both sidebands
};

struct NbarEstimate {
    double nbar = 0.0;
    double sigma = 0.0;
};

/// Mean-occupation thermometry. Finite-shot mode samples the detection,
/// inverts the known fidelity, and propagates binomial errors; infinite
/// shots evaluate the model exactly (sigma = 0).
NbarEstimate measure_nbar(const PopulationDistribution& dist, double eta, double omega0,
                          const ProbeConfig& probe,
                          ThermometryMethod method = ThermometryMethod::peak_ratio,
                          std::uint64_t seed = 0);

}  // namespace ionmotion
