#pragma once

#include <vector>

#include "ionmotion/errors.hpp"

namespace ionmotion {

// Probability lost to truncation above which fock-space operations refuse
// to proceed. Silent truncation is the dominant numerical failure mode in
// this kind of simulation, so the budget is a single project-wide number.
inline constexpr double kTailBudget = 1e-9;

// Occupation probabilities of one motional mode, n = 0..n_max.
// Values are non-negative and normalized on construction.
class PopulationDistribution {
  public:
    explicit PopulationDistribution(std::vector<double> probabilities);

    static PopulationDistribution ground_state(int n_max);

    int n_max() const { return static_cast<int>(p_.size()) - 1; }
    double probability(int n) const { return (n >= 0 && n <= n_max()) ? p_[n] : 0.0; }
    const std::vector<double>& probabilities() const { return p_; }

  private:
    std::vector<double> p_;
};

// Pass as n_max to let the operation size the window itself.
inline constexpr int kAutoNMax = -1;

// Smallest window holding a thermal state of the given mean with a
// geometric tail below a tenth of the budget. Floors at max(20, 10 nbar + 10).
int default_n_max(double nbar);

/// P_n = nbar^n / (1+nbar)^(n+1), renormalized over the window.
/// With an explicit n_max, throws TruncationError when the discarded tail
/// exceeds the budget; with kAutoNMax the window is raised until it fits.
PopulationDistribution thermal_distribution(double nbar, int n_max = kAutoNMax);

double mean_occupation(const PopulationDistribution& dist);
double ground_state_fraction(const PopulationDistribution& dist);

// s = +1: first upper sideband (n -> n-1), s = -1: first lower sideband
// (n -> n+1), s = 0: carrier. |s| <= 2.
struct SidebandOrder {
    int s = 0;

    void validate() const;

    static constexpr SidebandOrder carrier() { return {0}; }
    static constexpr SidebandOrder upper(int k = 1) { return {k}; }
    static constexpr SidebandOrder lower(int k = 1) { return {-k}; }
};

enum class CouplingMode {
    lamb_dicke,  // eta Omega0 sqrt(n) style expressions
    exact,       // full Fock matrix element with Laguerre polynomial
};

/// Rabi frequency of the |n> -> |n - s> transition.
///
/// lamb_dicke: Omega0 eta^|s| sqrt(n_>! / n_<!) / |s|!
/// exact:      Omega0 e^(-eta^2/2) eta^|s| sqrt(n_<! / n_>!) L_{n_<}^{|s|}(eta^2)
///
/// A transition below n = 0 has zero coupling (the upper sideband vanishes
/// from the ground state); that is a result, not an error.
double rabi_coupling(int n, SidebandOrder order, double eta, double omega0,
                     CouplingMode mode = CouplingMode::lamb_dicke);

}  // namespace ionmotion
