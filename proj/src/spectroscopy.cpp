#include "ionmotion/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ionmotion/constants.hpp"
#include "ionmotion/rng.hpp"

namespace ionmotion {

void ProbeConfig::validate() const {
    if (!(t_probe >= 0.0)) throw ContractError("probe duration must be >= 0");
    if (shots == 0) throw ContractError("shots must be >= 1");
    if (!(detection_fidelity > 0.5 && detection_fidelity <= 1.0))
        throw ContractError("detection fidelity must lie in (0.5, 1]");
    for (const auto& order : orders) order.validate();
}

double flop_probability(double omega, double delta, double t) {
    if (!(t >= 0.0)) throw ContractError("pulse time must be >= 0");
    if (omega == 0.0) return 0.0;
    const double w2 = omega * omega;
    const double r2 = w2 + delta * delta;
    const double s = std::sin(std::sqrt(r2) * t / 2.0);
    return w2 / r2 * s * s;
}

Spectrum synthesize_spectrum(const PopulationDistribution& dist, double eta, double omega0,
                             double omega_x, const ProbeConfig& probe, std::uint64_t seed) {
    probe.validate();
    if (!(omega_x > 0.0)) throw ContractError("omega_x must be > 0");

    const auto& p = dist.probabilities();
    // per-order coupling tables over the window
    std::vector<std::vector<double>> couplings(probe.orders.size());
    for (std::size_t k = 0; k < probe.orders.size(); ++k) {
        couplings[k].resize(p.size());
        for (std::size_t n = 0; n < p.size(); ++n)
            couplings[k][n] = rabi_coupling(static_cast<int>(n), probe.orders[k], eta, omega0);
    }

    Spectrum spectrum;
    spectrum.points.reserve(probe.detuning_grid.size());
    for (std::size_t i = 0; i < probe.detuning_grid.size(); ++i) {
        const double delta = probe.detuning_grid[i];
        double p_true = 0.0;
        for (std::size_t k = 0; k < probe.orders.size(); ++k) {
            const double offset = delta - probe.orders[k].s * omega_x;
            for (std::size_t n = 0; n < p.size(); ++n) {
                if (p[n] == 0.0) continue;
                p_true += p[n] * flop_probability(couplings[k][n], offset, probe.t_probe);
            }
        }
        if (p_true > 1.0) {
            p_true = 1.0;
            spectrum.clamped = true;
        }
        SpectrumPoint point;
        point.delta = delta;
        if (probe.shots == kInfiniteShots) {
            point.p_bright = p_true;
            point.sigma = 0.0;
        } else {
            const auto det = simulate_detection(p_true, probe.shots, probe.detection_fidelity,
                                                derive_seed(seed, i));
            point.p_bright = det.p_est;
            point.sigma = det.sigma;
        }
        spectrum.points.push_back(point);
    }
    return spectrum;
}

std::vector<FlopPoint> rabi_flop_trace(const PopulationDistribution& dist, SidebandOrder order,
                                       double eta, double omega0, const std::vector<double>& times,
                                       CouplingMode mode) {
    order.validate();
    const auto& p = dist.probabilities();
    std::vector<double> couplings(p.size());
    for (std::size_t n = 0; n < p.size(); ++n)
        couplings[n] = rabi_coupling(static_cast<int>(n), order, eta, omega0, mode);

    std::vector<FlopPoint> trace;
    trace.reserve(times.size());
    for (double t : times) {
        if (!(t >= 0.0)) throw ContractError("trace times must be >= 0");
        double pb = 0.0;
        for (std::size_t n = 0; n < p.size(); ++n) {
            if (p[n] == 0.0) continue;
            const double s = std::sin(couplings[n] * t / 2.0);
            pb += p[n] * s * s;
        }
        trace.push_back({t, pb});
    }
    return trace;
}

DetectionResult simulate_detection(double p_true, std::uint64_t shots, double fidelity,
                                   std::uint64_t seed) {
    if (!(p_true >= 0.0 && p_true <= 1.0)) throw ContractError("probability must lie in [0, 1]");
    if (!(fidelity > 0.5 && fidelity <= 1.0))
        throw ContractError("detection fidelity must lie in (0.5, 1]");
    if (shots == 0) throw ContractError("shots must be >= 1");
    const double p_eff = fidelity * p_true + (1.0 - fidelity) * (1.0 - p_true);
    if (shots == kInfiniteShots) return {p_eff, 0.0};

    std::mt19937_64 gen(seed);
    std::binomial_distribution<std::uint64_t> draw(shots, p_eff);
    const std::uint64_t k = draw(gen);
    const double n = static_cast<double>(shots);
    const double p_est = static_cast<double>(k) / n;
    // rule-of-half keeps the error bar finite at k = 0 or k = shots
    const double p_mid = (static_cast<double>(k) + 0.5) / (n + 1.0);
    return {p_est, std::sqrt(p_mid * (1.0 - p_mid) / n)};
}

double nbar_from_sideband_ratio(double r) {
    if (!(r >= 0.0)) throw ContractError("sideband ratio must be >= 0");
    if (r >= 1.0)
        throw UnphysicalRatioError(
            "sideband ratio >= 1 has no thermal mean occupation (heating during the probe, "
            "or measurement noise)");
    return r / (1.0 - r);
}

namespace {

struct SidebandStrengths {
    double upper = 0.0;
    double lower = 0.0;
};

SidebandStrengths resonant_strengths(const PopulationDistribution& dist, double eta,
                                     double omega0, double t, CouplingMode mode) {
    SidebandStrengths out;
    const auto& p = dist.probabilities();
    for (std::size_t n = 0; n < p.size(); ++n) {
        if (p[n] == 0.0) continue;
        const double wu = rabi_coupling(static_cast<int>(n), SidebandOrder::upper(), eta, omega0, mode);
        const double wl = rabi_coupling(static_cast<int>(n), SidebandOrder::lower(), eta, omega0, mode);
        const double su = std::sin(wu * t / 2.0);
        const double sl = std::sin(wl * t / 2.0);
        out.upper += p[n] * su * su;
        out.lower += p[n] * sl * sl;
    }
    return out;
}

// Invert the symmetric detection map p_eff = f p + (1-f)(1-p).
DetectionResult invert_readout(const DetectionResult& raw, double fidelity) {
    const double contrast = 2.0 * fidelity - 1.0;
    const double p = std::clamp((raw.p_est - (1.0 - fidelity)) / contrast, 0.0, 1.0);
    return {p, raw.sigma / contrast};
}

// Linear least squares for level populations on both sideband traces,
// followed by clamping and renormalization. K+1 unknowns, diagnostics for
// non-thermal states where the ratio identity does not apply.
NbarEstimate flop_fit_nbar(const PopulationDistribution& dist, double eta, double omega0,
                           const ProbeConfig& probe, CouplingMode mode, std::uint64_t seed) {
    const int levels = std::min(dist.n_max(), 40) + 1;
    const double base = rabi_coupling(1, SidebandOrder::upper(), eta, omega0, mode);
    if (!(base > 0.0)) throw ContractError("flop fit needs a nonzero sideband coupling");
    const int n_times = 160;
    const double t_max = 20.0 * constants::pi / base;

    std::vector<double> times(n_times);
    for (int i = 0; i < n_times; ++i) times[i] = (i + 1) * t_max / n_times;

    // rows: upper trace then lower trace
    std::vector<std::vector<double>> design;
    std::vector<double> rhs;
    std::vector<double> weights;
    design.reserve(2 * n_times);
    const SidebandOrder sides[2] = {SidebandOrder::upper(), SidebandOrder::lower()};
    for (int side = 0; side < 2; ++side) {
        const auto trace = rabi_flop_trace(dist, sides[side], eta, omega0, times, mode);
        for (int i = 0; i < n_times; ++i) {
            std::vector<double> row(levels);
            for (int n = 0; n < levels; ++n) {
                const double w = rabi_coupling(n, sides[side], eta, omega0, mode);
                const double s = std::sin(w * times[i] / 2.0);
                row[n] = s * s;
            }
            double y = trace[i].p_bright;
            double weight = 1.0;
            if (probe.shots != kInfiniteShots) {
                const auto det = invert_readout(
                    simulate_detection(y, probe.shots, probe.detection_fidelity,
                                       derive_seed(seed, side, i)),
                    probe.detection_fidelity);
                y = det.p_est;
                weight = 1.0 / std::max(det.sigma * det.sigma, 1e-12);
            }
            design.push_back(std::move(row));
            rhs.push_back(y);
            weights.push_back(weight);
        }
    }

    // normal equations, solved by Gaussian elimination with partial pivoting
    std::vector<std::vector<double>> ata(levels, std::vector<double>(levels, 0.0));
    std::vector<double> atb(levels, 0.0);
    for (std::size_t r = 0; r < design.size(); ++r) {
        for (int i = 0; i < levels; ++i) {
            atb[i] += weights[r] * design[r][i] * rhs[r];
            for (int j = i; j < levels; ++j) ata[i][j] += weights[r] * design[r][i] * design[r][j];
        }
    }
    for (int i = 0; i < levels; ++i)
        for (int j = 0; j < i; ++j) ata[i][j] = ata[j][i];

    for (int col = 0; col < levels; ++col) {
        int pivot = col;
        for (int r = col + 1; r < levels; ++r)
            if (std::abs(ata[r][col]) > std::abs(ata[pivot][col])) pivot = r;
        std::swap(ata[col], ata[pivot]);
        std::swap(atb[col], atb[pivot]);
        if (std::abs(ata[col][col]) < 1e-14) throw FitError("flop fit design matrix is singular");
        for (int r = col + 1; r < levels; ++r) {
            const double f = ata[r][col] / ata[col][col];
            for (int c = col; c < levels; ++c) ata[r][c] -= f * ata[col][c];
            atb[r] -= f * atb[col];
        }
    }
    std::vector<double> pops(levels);
    for (int r = levels - 1; r >= 0; --r) {
        double v = atb[r];
        for (int c = r + 1; c < levels; ++c) v -= ata[r][c] * pops[c];
        pops[r] = v / ata[r][r];
    }

    double total = 0.0;
    for (double& v : pops) {
        v = std::max(v, 0.0);
        total += v;
    }
    if (!(total > 0.0)) throw FitError("flop fit recovered no population");
    double nbar = 0.0, second = 0.0;
    for (int n = 0; n < levels; ++n) {
        nbar += n * pops[n] / total;
        second += static_cast<double>(n) * n * pops[n] / total;
    }
    const double var = std::max(second - nbar * nbar, 0.0);
    const double sigma =
        probe.shots == kInfiniteShots ? 0.0 : std::sqrt(var / static_cast<double>(design.size()));
    return {nbar, sigma};
}

}  // namespace

NbarEstimate measure_nbar(const PopulationDistribution& dist, double eta, double omega0,
                          const ProbeConfig& probe, ThermometryMethod method,
                          std::uint64_t seed) {
    probe.validate();
    if (!(probe.t_probe > 0.0)) throw ContractError("thermometry needs probe duration > 0");

    if (method == ThermometryMethod::flop_fit)
        return flop_fit_nbar(dist, eta, omega0, probe, CouplingMode::lamb_dicke, seed);

    const auto strengths =
        resonant_strengths(dist, eta, omega0, probe.t_probe, CouplingMode::lamb_dicke);

    if (probe.shots == kInfiniteShots) {
        if (!(strengths.lower > 0.0))
            throw ContractError("lower sideband response vanished; cannot form the ratio");
        return {nbar_from_sideband_ratio(strengths.upper / strengths.lower), 0.0};
    }

    const auto upper = invert_readout(simulate_detection(strengths.upper, probe.shots,
                                                          probe.detection_fidelity,
                                                          derive_seed(seed, 1)),
                                      probe.detection_fidelity);
    const auto lower = invert_readout(simulate_detection(strengths.lower, probe.shots,
                                                          probe.detection_fidelity,
                                                          derive_seed(seed, 2)),
                                      probe.detection_fidelity);
    if (!(lower.p_est > 0.0))
        throw ContractError("lower sideband measurement is zero; cannot form the ratio");

    const double r = upper.p_est / lower.p_est;
    const double sigma_r = std::sqrt(upper.sigma * upper.sigma +
                                     r * r * lower.sigma * lower.sigma) /
                           lower.p_est;
    const double nbar = nbar_from_sideband_ratio(r);
    const double denom = (1.0 - r) * (1.0 - r);
    return {nbar, sigma_r / denom};
}

}  // namespace ionmotion
