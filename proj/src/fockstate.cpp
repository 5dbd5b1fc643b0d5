#include "ionmotion/fockstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ionmotion {

PopulationDistribution::PopulationDistribution(std::vector<double> probabilities)
    : p_(std::move(probabilities)) {
    if (p_.size() < 2) throw ContractError("distribution needs n_max >= 1");
    double sum = 0.0;
    for (double& v : p_) {
        if (v < 0.0) {
            // Integrators legitimately produce O(eps) negatives at the edges.
            if (v < -1e-12) throw ContractError("negative occupation probability");
            v = 0.0;
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ContractError("occupation probabilities sum to " + std::to_string(sum) +
                            ", not 1");
    for (double& v : p_) v /= sum;
}

PopulationDistribution PopulationDistribution::ground_state(int n_max) {
    if (n_max < 1) throw ContractError("distribution needs n_max >= 1");
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    p[0] = 1.0;
    return PopulationDistribution(std::move(p));
}

namespace {

// Geometric tail mass beyond n_max: (nbar/(1+nbar))^(n_max+1).
double thermal_tail(double nbar, int n_max) {
    if (nbar <= 0.0) return 0.0;
    return std::exp((n_max + 1) * std::log(nbar / (1.0 + nbar)));
}

}  // namespace

int default_n_max(double nbar) {
    if (!(nbar >= 0.0)) throw ContractError("nbar must be >= 0");
    int n = std::max(20, static_cast<int>(std::ceil(10.0 * nbar + 10.0)));
    while (thermal_tail(nbar, n) >= kTailBudget / 10.0) ++n;
    return n;
}

PopulationDistribution thermal_distribution(double nbar, int n_max) {
    if (!(nbar >= 0.0)) throw ContractError("nbar must be >= 0");
    if (n_max == kAutoNMax) {
        n_max = default_n_max(nbar);
    } else {
        if (n_max < 1) throw ContractError("distribution needs n_max >= 1");
        const double tail = thermal_tail(nbar, n_max);
        if (tail >= kTailBudget)
            throw TruncationError("thermal tail mass " + std::to_string(tail) + " at n_max " +
                                  std::to_string(n_max) + " exceeds the 1e-9 budget");
    }
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (nbar == 0.0) {
        p[0] = 1.0;
    } else {
        // log space; nbar^n overflows well inside useful windows
        const double log_ratio = std::log(nbar / (1.0 + nbar));
        const double log_p0 = -std::log1p(nbar);
        double sum = 0.0;
        for (int n = 0; n <= n_max; ++n) {
            p[n] = std::exp(log_p0 + n * log_ratio);
            sum += p[n];
        }
        for (double& v : p) v /= sum;
    }
    return PopulationDistribution(std::move(p));
}

double mean_occupation(const PopulationDistribution& dist) {
    double nbar = 0.0;
    const auto& p = dist.probabilities();
    for (std::size_t n = 1; n < p.size(); ++n) nbar += static_cast<double>(n) * p[n];
    return nbar;
}

double ground_state_fraction(const PopulationDistribution& dist) {
    return dist.probability(0);
}

void SidebandOrder::validate() const {
    if (s < -2 || s > 2) throw ContractError("sideband order |s| <= 2, got " + std::to_string(s));
}

namespace {

// Associated Laguerre L_k^a(x) by the three-term recurrence
// (k+1) L_{k+1}^a = (2k+1+a-x) L_k^a - (k+a) L_{k-1}^a.
double assoc_laguerre(int k, int a, double x) {
    if (k == 0) return 1.0;
    double lm = 1.0;
    double lc = 1.0 + a - x;
    for (int j = 1; j < k; ++j) {
        const double ln = ((2.0 * j + 1.0 + a - x) * lc - (j + a) * lm) / (j + 1.0);
        lm = lc;
        lc = ln;
    }
    return lc;
}

}  // namespace

double rabi_coupling(int n, SidebandOrder order, double eta, double omega0, CouplingMode mode) {
    order.validate();
    if (n < 0) throw ContractError("level index must be >= 0");
    if (!(eta >= 0.0)) throw ContractError("eta must be >= 0");
    if (!(omega0 >= 0.0)) throw ContractError("omega0 must be >= 0");

    const int n_target = n - order.s;
    if (n_target < 0) return 0.0;  // no level below the ground state

    const int n_low = std::min(n, n_target);
    const int n_high = std::max(n, n_target);
    const int ds = n_high - n_low;  // |s|

    if (mode == CouplingMode::lamb_dicke) {
        // Omega0 eta^|s| sqrt(n_high!/n_low!) / |s|!
        double root = 1.0;
        for (int k = n_low + 1; k <= n_high; ++k) root *= k;
        double fact = 1.0;
        for (int k = 2; k <= ds; ++k) fact *= k;
        return omega0 * std::pow(eta, ds) * std::sqrt(root) / fact;
    }

    const double x = eta * eta;
    double inv_root = 1.0;  // sqrt(n_low!/n_high!)
    for (int k = n_low + 1; k <= n_high; ++k) inv_root *= k;
    return omega0 * std::exp(-x / 2.0) * std::pow(eta, ds) / std::sqrt(inv_root) *
           assoc_laguerre(n_low, ds, x);
}

}  // namespace ionmotion
