#include "ionmotion/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ionmotion/rng.hpp"

namespace ionmotion {

void CoolingSchedule::validate() const {
    if (cycles < 0) throw ContractError("cycle count must be >= 0");
    const auto n = pulse_durations.size();
    if (n != 0 && n != 1 && n != static_cast<std::size_t>(cycles))
        throw ContractError("pulse_durations must be empty, a single uniform value, or one per cycle");
    for (double t : pulse_durations)
        if (!(t > 0.0)) throw ContractError("pulse durations must be > 0");
    if (graduated && !pulse_durations.empty())
        throw ContractError("graduated schedule cannot also carry explicit durations");
    if (repump.kind == RepumpModel::Kind::recoil) {
        if (!(repump.eta >= 0.0 && repump.eta <= 1.0))
            throw ContractError("repump eta must lie in [0, 1]");
        if (!(repump.photons >= 0.0)) throw ContractError("repump photon count must be >= 0");
    }
}

double default_pulse_duration(double eta, double omega0) {
    if (!(eta > 0.0 && omega0 > 0.0))
        throw ContractError("default pulse duration needs eta > 0 and omega0 > 0");
    return constants::pi / (4.0 * eta * omega0);
}

PopulationDistribution doppler_cool(const IonSpecies& ion, double omega_x, int n_max) {
    return thermal_distribution(doppler_limit_nbar(ion, omega_x), n_max);
}

namespace {

// Symmetric +-1 photon-recoil kick, reflecting at n = 0 and at the top of
// the window (population there is negligible in any cooling context).
std::vector<double> recoil_kick(const std::vector<double>& p, double q) {
    const std::size_t size = p.size();
    std::vector<double> out(size, 0.0);
    for (std::size_t n = 0; n < size; ++n) {
        const double up = q / 2.0, down = q / 2.0;
        out[n] += (1.0 - q) * p[n];
        if (n + 1 < size) out[n + 1] += up * p[n]; else out[n] += up * p[n];
        if (n >= 1) out[n - 1] += down * p[n]; else out[n] += down * p[n];
    }
    return out;
}

}  // namespace

PopulationDistribution raman_cooling_cycle(const PopulationDistribution& dist, double eta,
                                           double omega0, double t_pulse,
                                           const RepumpModel& repump, CouplingMode mode) {
    if (!(t_pulse > 0.0)) throw ContractError("pulse duration must be > 0");
    const auto& p = dist.probabilities();
    std::vector<double> out(p.size(), 0.0);
    out[0] = p[0];
    for (std::size_t n = 1; n < p.size(); ++n) {
        const double omega = rabi_coupling(static_cast<int>(n), SidebandOrder::upper(), eta,
                                           omega0, mode);
        const double s = std::sin(omega * t_pulse / 2.0);
        const double transfer = s * s;
        out[n] += (1.0 - transfer) * p[n];
        out[n - 1] += transfer * p[n];
    }
    if (repump.kind == RepumpModel::Kind::recoil && repump.photons > 0.0) {
        const double q = repump.eta * repump.eta;
        const long kicks = std::lround(repump.photons);
        for (long k = 0; k < kicks; ++k) out = recoil_kick(out, q);
    }
    return PopulationDistribution(std::move(out));
}

CoolingResult run_cooling(const PopulationDistribution& dist, const CoolingSchedule& schedule,
                          double eta, double omega0, CouplingMode mode) {
    schedule.validate();
    PopulationDistribution state = dist;
    std::vector<double> trajectory;
    trajectory.reserve(static_cast<std::size_t>(schedule.cycles) + 1);
    trajectory.push_back(mean_occupation(state));
    for (int k = 0; k < schedule.cycles; ++k) {
        double t_pulse;
        if (schedule.graduated) {
            // pi pulse for the current rounded mean level
            const long level = std::max(1L, std::lround(trajectory.back()));
            t_pulse = constants::pi /
                      (rabi_coupling(static_cast<int>(level), SidebandOrder::upper(), eta,
                                     omega0, mode));
        } else if (schedule.pulse_durations.empty()) {
            t_pulse = default_pulse_duration(eta, omega0);
        } else if (schedule.pulse_durations.size() == 1) {
            t_pulse = schedule.pulse_durations.front();
        } else {
            t_pulse = schedule.pulse_durations[static_cast<std::size_t>(k)];
        }
        state = raman_cooling_cycle(state, eta, omega0, t_pulse, schedule.repump, mode);
        trajectory.push_back(mean_occupation(state));
    }
    return {std::move(state), std::move(trajectory)};
}

namespace {

// dP_n/dt for the equal-rate birth-death generator. Flow past the top of
// the window is dropped; the caller watches the lost mass.
void birth_death_rhs(const std::vector<double>& p, double ndot, std::vector<double>& dp) {
    const std::size_t size = p.size();
    for (std::size_t n = 0; n < size; ++n) {
        double v = -(2.0 * n + 1.0) * p[n];
        if (n >= 1) v += static_cast<double>(n) * p[n - 1];
        if (n + 1 < size) v += (n + 1.0) * p[n + 1];
        dp[n] = ndot * v;
    }
}

void rk4_step(std::vector<double>& y, double ndot, double dt, std::vector<double>& k1,
              std::vector<double>& k2, std::vector<double>& k3, std::vector<double>& k4,
              std::vector<double>& tmp) {
    const std::size_t size = y.size();
    birth_death_rhs(y, ndot, k1);
    for (std::size_t i = 0; i < size; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    birth_death_rhs(tmp, ndot, k2);
    for (std::size_t i = 0; i < size; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    birth_death_rhs(tmp, ndot, k3);
    for (std::size_t i = 0; i < size; ++i) tmp[i] = y[i] + dt * k3[i];
    birth_death_rhs(tmp, ndot, k4);
    for (std::size_t i = 0; i < size; ++i)
        y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

PopulationDistribution heat_evolve(const PopulationDistribution& dist, double ndot, double tau,
                                   int n_max) {
    if (!(ndot >= 0.0)) throw ContractError("heating rate must be >= 0");
    if (!(tau >= 0.0)) throw ContractError("evolution time must be >= 0");

    if (n_max == kAutoNMax) n_max = dist.n_max() + default_n_max(ndot * tau);
    if (n_max < 1) throw ContractError("distribution needs n_max >= 1");

    // re-window; mass discarded by a shrink counts against the tail budget
    std::vector<double> y(static_cast<std::size_t>(n_max) + 1, 0.0);
    const auto& p = dist.probabilities();
    double discarded = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        if (n < y.size()) y[n] = p[n]; else discarded += p[n];
    }
    if (discarded > kTailBudget)
        throw TruncationError("re-windowing to n_max " + std::to_string(n_max) + " discards " +
                              std::to_string(discarded) + " probability");

    if (tau == 0.0 || ndot == 0.0) return PopulationDistribution(std::move(y));

    const std::size_t size = y.size();
    std::vector<double> k1(size), k2(size), k3(size), k4(size), tmp(size);
    std::vector<double> y_full(size), y_half(size);

    // start inside the RK4 stability region of the stiffest mode
    double dt = std::min(tau, 1.0 / (ndot * (2.0 * n_max + 1.0)));
    const double min_dt = tau * 1e-13;
    double t = 0.0;
    while (t < tau) {
        dt = std::min(dt, tau - t);
        y_full = y;
        rk4_step(y_full, ndot, dt, k1, k2, k3, k4, tmp);
        y_half = y;
        rk4_step(y_half, ndot, dt / 2.0, k1, k2, k3, k4, tmp);
        rk4_step(y_half, ndot, dt / 2.0, k1, k2, k3, k4, tmp);

        double err = 0.0;
        for (std::size_t i = 0; i < size; ++i) err += std::abs(y_full[i] - y_half[i]);
        err /= 15.0;  // Richardson estimate for a 4th-order step pair

        const double tol = 1e-8 * std::max(ndot * dt, 1e-16);
        if (err <= tol) {
            y = y_half;
            t += dt;
            double sum = 0.0;
            for (double v : y) sum += v;
            if (1.0 - sum + discarded > kTailBudget)
                throw TruncationError("probability leaking past n_max " + std::to_string(n_max) +
                                      " exceeded the 1e-9 budget; enlarge the window");
        }
        const double grow = 0.9 * std::pow(tol / std::max(err, 1e-300), 0.2);
        dt *= std::clamp(grow, 0.25, 4.0);
        if (dt < min_dt) throw ContractError("heat_evolve step size collapsed; integration failed");
    }
    return PopulationDistribution(std::move(y));
}

void HeatingSeries::validate() const {
    double prev = -1.0;
    for (const auto& pt : points) {
        if (!(pt.delay >= 0.0)) throw ContractError("delays must be >= 0");
        if (!(pt.delay > prev)) throw ContractError("delays must be strictly increasing");
        if (!(pt.sigma >= 0.0)) throw ContractError("sigma must be >= 0");
        prev = pt.delay;
    }
}

HeatingSeries run_heating_experiment(const IonSpecies& ion, const TrapConfig& trap,
                                     const NoiseModel& noise, const CoolingSchedule& schedule,
                                     const RamanGeometry& geometry, const ProbeConfig& probe,
                                     const std::vector<double>& delays, std::uint64_t shots,
                                     std::uint64_t seed) {
    if (delays.empty()) throw ContractError("delay list must not be empty");
    trap.validate();
    probe.validate();

    const double eta = lamb_dicke(geometry, ion, trap.omega_x);
    const auto cooled =
        run_cooling(doppler_cool(ion, trap.omega_x), schedule, eta, geometry.omega0).final_state;
    const double ndot =
        heating_rate_from_noise(evaluate_noise(noise, trap.omega_x, trap.d), ion, trap.omega_x);

    // one shared window sized for the longest delay
    const int window = cooled.n_max() + default_n_max(ndot * delays.back());
    PopulationDistribution state = heat_evolve(cooled, ndot, 0.0, window);

    ProbeConfig measurement = probe;
    measurement.shots = shots;

    HeatingSeries series;
    series.points.reserve(delays.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < delays.size(); ++i) {
        const double tau = delays[i];
        if (!(tau >= 0.0)) throw ContractError("delays must be >= 0");
        if (i > 0 && !(tau > prev)) throw ContractError("delays must be strictly increasing");
        if (tau > prev) state = heat_evolve(state, ndot, tau - prev, state.n_max());
        prev = tau;

        HeatingPoint point;
        point.delay = tau;
        if (shots == kInfiniteShots) {
            // noiseless diagnostic: bypass the estimator entirely
            point.nbar = mean_occupation(state);
            point.sigma = 0.0;
        } else {
            const auto est = measure_nbar(state, eta, geometry.omega0, measurement,
                                          ThermometryMethod::peak_ratio, derive_seed(seed, i));
            point.nbar = est.nbar;
            point.sigma = est.sigma;
        }
        series.points.push_back(point);
    }
    series.validate();
    return series;
}

}  // namespace ionmotion
