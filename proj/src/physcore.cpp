#include "ionmotion/physcore.hpp"

#include <cmath>

#include "ionmotion/units.hpp"

namespace ionmotion {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw ContractError(std::string(what) + " must be > 0");
}

void require_nonnegative(double v, const char* what) {
    if (!(v >= 0.0)) throw ContractError(std::string(what) + " must be >= 0");
}

}  // namespace

void IonSpecies::validate() const {
    require_positive(mass, "ion mass");
    require_positive(transition_wavelength, "transition wavelength");
    require_positive(gamma0, "excited-state linewidth");
}

IonSpecies IonSpecies::cd111() {
    IonSpecies ion;
    ion.name = "Cd-111";
    ion.mass = units::amu_to_kg(constants::cd111_mass_amu);
    ion.transition_wavelength = units::nm_to_m(214.5);
    ion.gamma0 = units::mhz_to_rad_s(47.0);
    ion.omega_hf = units::ghz_to_rad_s(14.53);
    return ion;
}

void RamanGeometry::validate() const {
    require_nonnegative(delta_k, "delta_k");
    require_nonnegative(omega0, "carrier Rabi frequency");
}

RamanGeometry RamanGeometry::ninety_degree(double wavelength, double omega0) {
    require_positive(wavelength, "wavelength");
    return {std::sqrt(2.0) * constants::two_pi / wavelength, omega0};
}

void TrapConfig::validate() const {
    require_positive(omega_x, "secular frequency");
    require_positive(d, "electrode distance");
}

void NoiseModel::validate() const {
    require_nonnegative(s0, "noise amplitude s0");
    require_positive(omega_ref, "noise reference frequency");
    require_positive(d_ref, "noise reference distance");
    require_nonnegative(floor, "noise floor");
}

double lamb_dicke(const RamanGeometry& geometry, const IonSpecies& ion, double omega_x) {
    geometry.validate();
    ion.validate();
    require_positive(omega_x, "omega_x");
    return geometry.delta_k * std::sqrt(constants::hbar / (2.0 * ion.mass * omega_x));
}

double recoil_frequency(const RamanGeometry& geometry, const IonSpecies& ion) {
    geometry.validate();
    ion.validate();
    return constants::hbar * geometry.delta_k * geometry.delta_k / (2.0 * ion.mass);
}

double doppler_limit_nbar(const IonSpecies& ion, double omega_x) {
    ion.validate();
    require_positive(omega_x, "omega_x");
    return ion.gamma0 / (2.0 * omega_x);
}

double cooling_threshold(const IonSpecies& ion, const RamanGeometry& geometry) {
    return std::sqrt(ion.gamma0 * recoil_frequency(geometry, ion) / 2.0);
}

double heating_rate_from_noise(double s_e, double mass, double omega_x) {
    require_nonnegative(s_e, "spectral density");
    require_positive(mass, "ion mass");
    require_positive(omega_x, "omega_x");
    const double e = constants::elementary_charge;
    return e * e * s_e / (4.0 * mass * constants::hbar * omega_x);
}

double heating_rate_from_noise(double s_e, const IonSpecies& ion, double omega_x) {
    ion.validate();
    return heating_rate_from_noise(s_e, ion.mass, omega_x);
}

double noise_from_heating_rate(double ndot, double mass, double omega_x) {
    require_nonnegative(ndot, "heating rate");
    require_positive(mass, "ion mass");
    require_positive(omega_x, "omega_x");
    const double e = constants::elementary_charge;
    return ndot * 4.0 * mass * constants::hbar * omega_x / (e * e);
}

double noise_from_heating_rate(double ndot, const IonSpecies& ion, double omega_x) {
    ion.validate();
    return noise_from_heating_rate(ndot, ion.mass, omega_x);
}

double evaluate_noise(const NoiseModel& model, double omega, double d) {
    model.validate();
    require_positive(omega, "omega");
    require_positive(d, "distance");
    return model.s0 * std::pow(omega / model.omega_ref, -model.alpha) *
               std::pow(d / model.d_ref, -model.p) +
           model.floor;
}

}  // namespace ionmotion
