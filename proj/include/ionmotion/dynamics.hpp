#pragma once

#include <cstdint>
#include <vector>

#include "ionmotion/fockstate.hpp"
#include "ionmotion/physcore.hpp"
#include "ionmotion/spectroscopy.hpp"

namespace ionmotion {

struct RepumpModel {
    enum class Kind { ideal, recoil };

    Kind kind = Kind::ideal;
    double eta = 0.0;      // single-photon Lamb-Dicke parameter of the repump
    double photons = 0.0;  // mean scattered photons per repump

    static RepumpModel ideal() { return {}; }
    static RepumpModel recoil(double eta, double photons) {
        return {Kind::recoil, eta, photons};
    }
};

struct CoolingSchedule {
    int cycles = 0;
    // Empty: default uniform duration (see default_pulse_duration).
    // One entry: that uniform duration. cycles entries: per-cycle durations.
    std::vector<double> pulse_durations;
    // Re-tune each pulse to a pi time for the current rounded mean level.
    bool graduated = false;
    RepumpModel repump;

    void validate() const;
};

/// Default uniform sideband pulse: pi / (4 eta Omega0), a quarter of the
/// n = 1 pi time. A full n = 1 pi pulse leaves every n = 4k^2 level with
/// exactly zero transfer (sin^2(pi sqrt(n)/2) = 0) and the cascade stalls
/// there; a quarter pulse pushes the first null out to n = 64.
double default_pulse_duration(double eta, double omega0);

/// Thermal state at the Doppler limit gamma0 / (2 omega_x).
PopulationDistribution doppler_cool(const IonSpecies& ion, double omega_x,
                                    int n_max = kAutoNMax);

/// One cooling cycle: for each n >= 1 a fraction sin^2(Omega_{n->n-1} t/2)
/// of P_n moves to P_{n-1}, then the repump acts. An ideal repump leaves
/// populations unchanged; the recoil model applies, per scattered photon,
/// a symmetric +-1 kick with probability eta^2 (reflecting at n = 0).
PopulationDistribution raman_cooling_cycle(const PopulationDistribution& dist, double eta,
                                           double omega0, double t_pulse,
                                           const RepumpModel& repump = RepumpModel::ideal(),
                                           CouplingMode mode = CouplingMode::lamb_dicke);

struct CoolingResult {
    PopulationDistribution final_state;
    std::vector<double> nbar_trajectory;  // cycles + 1 entries, starts at the input nbar
};

CoolingResult run_cooling(const PopulationDistribution& dist, const CoolingSchedule& schedule,
                          double eta, double omega0,
                          CouplingMode mode = CouplingMode::lamb_dicke);

/// Evolve under the equal-rate birth-death equation
///   dP_n/dt = ndot [ n P_{n-1} + (n+1) P_{n+1} - (2n+1) P_n ],
/// the resonant classical-noise limit with mean growth nbar + ndot tau.
/// Adaptive RK4 with a step-doubling error check; probability leaking past
/// the window is monitored and must stay below the tail budget.
PopulationDistribution heat_evolve(const PopulationDistribution& dist, double ndot, double tau,
                                   int n_max = kAutoNMax);

struct HeatingPoint {
    double delay = 0.0;  // s
    double nbar = 0.0;
    double sigma = 0.0;
};

struct HeatingSeries {
    std::vector<HeatingPoint> points;

    void validate() const;  // delays >= 0 strictly increasing, sigma >= 0
};

/// Full delay-scan experiment: Doppler + Raman cooling, free heating at
/// ndot = e^2 S_E(omega_x, d)/(4 m hbar omega_x) for each delay, then
/// thermometry. Finite shots use the sideband-ratio estimator with the
/// given seed; kInfiniteShots reports the exact mean occupation instead.
HeatingSeries run_heating_experiment(const IonSpecies& ion, const TrapConfig& trap,
                                     const NoiseModel& noise, const CoolingSchedule& schedule,
                                     const RamanGeometry& geometry, const ProbeConfig& probe,
                                     const std::vector<double>& delays, std::uint64_t shots,
                                     std::uint64_t seed);

}  // namespace ionmotion
