#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ionmotion/analysis.hpp"
#include "ionmotion/config.hpp"
#include "ionmotion/dynamics.hpp"
#include "ionmotion/io.hpp"
#include "ionmotion/physcore.hpp"
#include "ionmotion/spectroscopy.hpp"

namespace py = pybind11;
using namespace ionmotion;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Trapped-ion motional state simulator: sideband cooling, heating under "
              "electric-field noise, sideband thermometry, and the scaling analysis chain.";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);

    m.attr("INFINITE_SHOTS") = kInfiniteShots;
    m.attr("AUTO_N_MAX") = kAutoNMax;

    py::class_<IonSpecies>(m, "IonSpecies")
        .def(py::init([](std::string name, double mass, double transition_wavelength,
                         double gamma0, double omega_hf) {
                 IonSpecies ion{std::move(name), mass, transition_wavelength, gamma0, omega_hf};
                 ion.validate();
                 return ion;
             }),
             py::arg("name"), py::arg("mass"), py::arg("transition_wavelength"),
             py::arg("gamma0"), py::arg("omega_hf") = 0.0)
        .def_static("cd111", &IonSpecies::cd111)
        .def_readonly("name", &IonSpecies::name)
        .def_readonly("mass", &IonSpecies::mass)
        .def_readonly("transition_wavelength", &IonSpecies::transition_wavelength)
        .def_readonly("gamma0", &IonSpecies::gamma0)
        .def_readonly("omega_hf", &IonSpecies::omega_hf);

    py::class_<RamanGeometry>(m, "RamanGeometry")
        .def(py::init([](double delta_k, double omega0) {
                 RamanGeometry g{delta_k, omega0};
                 g.validate();
                 return g;
             }),
             py::arg("delta_k"), py::arg("omega0"))
        .def_static("ninety_degree", &RamanGeometry::ninety_degree, py::arg("wavelength"),
                    py::arg("omega0"))
        .def_readonly("delta_k", &RamanGeometry::delta_k)
        .def_readonly("omega0", &RamanGeometry::omega0);

    py::class_<TrapConfig>(m, "TrapConfig")
        .def(py::init([](double omega_x, double d, std::string label) {
                 TrapConfig t{omega_x, d, std::move(label), {}};
                 t.validate();
                 return t;
             }),
             py::arg("omega_x"), py::arg("d"), py::arg("label") = "trap")
        .def_readonly("omega_x", &TrapConfig::omega_x)
        .def_readonly("d", &TrapConfig::d)
        .def_readonly("label", &TrapConfig::label);

    py::class_<NoiseModel>(m, "NoiseModel")
        .def(py::init([](double s0, double omega_ref, double d_ref, double alpha, double p,
                         double floor) {
                 NoiseModel n{s0, omega_ref, d_ref, alpha, p, floor};
                 n.validate();
                 return n;
             }),
             py::arg("s0"), py::arg("omega_ref"), py::arg("d_ref"), py::arg("alpha"),
             py::arg("p"), py::arg("floor") = 0.0)
        .def_readonly("s0", &NoiseModel::s0)
        .def_readonly("omega_ref", &NoiseModel::omega_ref)
        .def_readonly("d_ref", &NoiseModel::d_ref)
        .def_readonly("alpha", &NoiseModel::alpha)
        .def_readonly("p", &NoiseModel::p)
        .def_readonly("floor", &NoiseModel::floor);

    py::class_<PopulationDistribution>(m, "PopulationDistribution")
        .def(py::init<std::vector<double>>(), py::arg("probabilities"))
        .def_static("ground_state", &PopulationDistribution::ground_state, py::arg("n_max"))
        .def_property_readonly("n_max", &PopulationDistribution::n_max)
        .def_property_readonly("probabilities", &PopulationDistribution::probabilities)
        .def("probability", &PopulationDistribution::probability, py::arg("n"));

    py::class_<SidebandOrder>(m, "SidebandOrder")
        .def(py::init([](int s) {
                 SidebandOrder o{s};
                 o.validate();
                 return o;
             }),
             py::arg("s"))
        .def_readonly("s", &SidebandOrder::s)
        .def_static("carrier", &SidebandOrder::carrier)
        .def_static("upper", &SidebandOrder::upper, py::arg("k") = 1)
        .def_static("lower", &SidebandOrder::lower, py::arg("k") = 1);

    py::enum_<CouplingMode>(m, "CouplingMode")
        .value("lamb_dicke", CouplingMode::lamb_dicke)
        .value("exact", CouplingMode::exact);

    py::enum_<ThermometryMethod>(m, "ThermometryMethod")
        .value("peak_ratio", ThermometryMethod::peak_ratio)
        .value("flop_fit", ThermometryMethod::flop_fit);

    py::class_<RepumpModel>(m, "RepumpModel")
        .def_static("ideal", &RepumpModel::ideal)
        .def_static("recoil", &RepumpModel::recoil, py::arg("eta"), py::arg("photons"));

    py::class_<CoolingSchedule>(m, "CoolingSchedule")
        .def(py::init([](int cycles, std::vector<double> pulse_durations, bool graduated,
                         RepumpModel repump) {
                 CoolingSchedule s{cycles, std::move(pulse_durations), graduated, repump};
                 s.validate();
                 return s;
             }),
             py::arg("cycles"), py::arg("pulse_durations") = std::vector<double>{},
             py::arg("graduated") = false, py::arg("repump") = RepumpModel::ideal())
        .def_readonly("cycles", &CoolingSchedule::cycles)
        .def_readonly("pulse_durations", &CoolingSchedule::pulse_durations)
        .def_readonly("graduated", &CoolingSchedule::graduated);

    py::class_<ProbeConfig>(m, "ProbeConfig")
        .def(py::init([](double t_probe, std::vector<double> detuning_grid,
                         std::vector<SidebandOrder> orders, std::uint64_t shots,
                         double detection_fidelity) {
                 ProbeConfig p{t_probe, std::move(detuning_grid), std::move(orders), shots,
                               detection_fidelity};
                 p.validate();
                 return p;
             }),
             py::arg("t_probe"), py::arg("detuning_grid") = std::vector<double>{},
             py::arg("orders") =
                 std::vector<SidebandOrder>{SidebandOrder::lower(), SidebandOrder::upper()},
             py::arg("shots") = kInfiniteShots, py::arg("detection_fidelity") = 1.0)
        .def_readonly("t_probe", &ProbeConfig::t_probe)
        .def_readonly("shots", &ProbeConfig::shots)
        .def_readonly("detection_fidelity", &ProbeConfig::detection_fidelity);

    py::class_<SpectrumPoint>(m, "SpectrumPoint")
        .def_readonly("delta", &SpectrumPoint::delta)
        .def_readonly("p_bright", &SpectrumPoint::p_bright)
        .def_readonly("sigma", &SpectrumPoint::sigma);

    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("points", &Spectrum::points)
        .def_readonly("clamped", &Spectrum::clamped);

    py::class_<FlopPoint>(m, "FlopPoint")
        .def_readonly("t", &FlopPoint::t)
        .def_readonly("p_bright", &FlopPoint::p_bright);

    py::class_<DetectionResult>(m, "DetectionResult")
        .def_readonly("p_est", &DetectionResult::p_est)
        .def_readonly("sigma", &DetectionResult::sigma);

    py::class_<NbarEstimate>(m, "NbarEstimate")
        .def_readonly("nbar", &NbarEstimate::nbar)
        .def_readonly("sigma", &NbarEstimate::sigma);

    py::class_<HeatingPoint>(m, "HeatingPoint")
        .def(py::init([](double delay, double nbar, double sigma) {
                 return HeatingPoint{delay, nbar, sigma};
             }),
             py::arg("delay"), py::arg("nbar"), py::arg("sigma") = 0.0)
        .def_readonly("delay", &HeatingPoint::delay)
        .def_readonly("nbar", &HeatingPoint::nbar)
        .def_readonly("sigma", &HeatingPoint::sigma);

    py::class_<HeatingSeries>(m, "HeatingSeries")
        .def(py::init([](std::vector<HeatingPoint> points) {
                 HeatingSeries s{std::move(points)};
                 s.validate();
                 return s;
             }),
             py::arg("points"))
        .def_readonly("points", &HeatingSeries::points);

    py::class_<CoolingResult>(m, "CoolingResult")
        .def_readonly("final_state", &CoolingResult::final_state)
        .def_readonly("nbar_trajectory", &CoolingResult::nbar_trajectory);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("parameter_names", &FitResult::parameter_names)
        .def_readonly("parameters", &FitResult::parameters)
        .def_readonly("covariance", &FitResult::covariance)
        .def_readonly("residual_norm", &FitResult::residual_norm)
        .def("parameter", &FitResult::parameter, py::arg("name"))
        .def("sigma", &FitResult::sigma, py::arg("name"));

    py::class_<SurveyRecord>(m, "SurveyRecord")
        .def(py::init([](std::string system_label, double ion_mass, double electrode_distance,
                         double trap_frequency, double heating_rate, std::string source_tag) {
                 SurveyRecord r{std::move(system_label), ion_mass,      electrode_distance,
                                trap_frequency,          heating_rate, std::move(source_tag)};
                 r.validate();
                 return r;
             }),
             py::arg("system_label"), py::arg("ion_mass"), py::arg("electrode_distance"),
             py::arg("trap_frequency"), py::arg("heating_rate"), py::arg("source_tag") = "")
        .def_readonly("system_label", &SurveyRecord::system_label)
        .def_readonly("heating_rate", &SurveyRecord::heating_rate);

    py::class_<SurveyInference>(m, "SurveyInference")
        .def_readonly("system_label", &SurveyInference::system_label)
        .def_readonly("electrode_distance", &SurveyInference::electrode_distance)
        .def_readonly("s_e", &SurveyInference::s_e);

    m.def("lamb_dicke", &lamb_dicke, py::arg("geometry"), py::arg("ion"), py::arg("omega_x"));
    m.def("recoil_frequency", &recoil_frequency, py::arg("geometry"), py::arg("ion"));
    m.def("doppler_limit_nbar", &doppler_limit_nbar, py::arg("ion"), py::arg("omega_x"));
    m.def("cooling_threshold", &cooling_threshold, py::arg("ion"), py::arg("geometry"));
    m.def("heating_rate_from_noise",
          py::overload_cast<double, const IonSpecies&, double>(&heating_rate_from_noise),
          py::arg("s_e"), py::arg("ion"), py::arg("omega_x"));
    m.def("noise_from_heating_rate",
          py::overload_cast<double, const IonSpecies&, double>(&noise_from_heating_rate),
          py::arg("ndot"), py::arg("ion"), py::arg("omega_x"));
    m.def("evaluate_noise", &evaluate_noise, py::arg("model"), py::arg("omega"), py::arg("d"));

    m.def("default_n_max", &default_n_max, py::arg("nbar"));
    m.def("thermal_distribution", &thermal_distribution, py::arg("nbar"),
          py::arg("n_max") = kAutoNMax);
    m.def("mean_occupation", &mean_occupation, py::arg("dist"));
    m.def("ground_state_fraction", &ground_state_fraction, py::arg("dist"));
    m.def("rabi_coupling", &rabi_coupling, py::arg("n"), py::arg("order"), py::arg("eta"),
          py::arg("omega0"), py::arg("mode") = CouplingMode::lamb_dicke);

    m.def("default_pulse_duration", &default_pulse_duration, py::arg("eta"), py::arg("omega0"));
    m.def("doppler_cool", &doppler_cool, py::arg("ion"), py::arg("omega_x"),
          py::arg("n_max") = kAutoNMax);
    m.def("raman_cooling_cycle", &raman_cooling_cycle, py::arg("dist"), py::arg("eta"),
          py::arg("omega0"), py::arg("t_pulse"), py::arg("repump") = RepumpModel::ideal(),
          py::arg("mode") = CouplingMode::lamb_dicke);
    m.def("run_cooling", &run_cooling, py::arg("dist"), py::arg("schedule"), py::arg("eta"),
          py::arg("omega0"), py::arg("mode") = CouplingMode::lamb_dicke);
    m.def("heat_evolve", &heat_evolve, py::arg("dist"), py::arg("ndot"), py::arg("tau"),
          py::arg("n_max") = kAutoNMax);
    m.def("run_heating_experiment", &run_heating_experiment, py::arg("ion"), py::arg("trap"),
          py::arg("noise"), py::arg("schedule"), py::arg("geometry"), py::arg("probe"),
          py::arg("delays"), py::arg("shots"), py::arg("seed"));

    m.def("flop_probability", &flop_probability, py::arg("omega"), py::arg("delta"),
          py::arg("t"));
    m.def("synthesize_spectrum", &synthesize_spectrum, py::arg("dist"), py::arg("eta"),
          py::arg("omega0"), py::arg("omega_x"), py::arg("probe"), py::arg("seed") = 0);
    m.def("rabi_flop_trace", &rabi_flop_trace, py::arg("dist"), py::arg("order"), py::arg("eta"),
          py::arg("omega0"), py::arg("times"), py::arg("mode") = CouplingMode::lamb_dicke);
    m.def("simulate_detection", &simulate_detection, py::arg("p_true"), py::arg("shots"),
          py::arg("fidelity"), py::arg("seed"));
    m.def("nbar_from_sideband_ratio", &nbar_from_sideband_ratio, py::arg("r"));
    m.def("measure_nbar", &measure_nbar, py::arg("dist"), py::arg("eta"), py::arg("omega0"),
          py::arg("probe"), py::arg("method") = ThermometryMethod::peak_ratio,
          py::arg("seed") = 0);

    m.def("fit_heating_rate", &fit_heating_rate, py::arg("series"), py::arg("weighted") = false);
    m.def("fit_power_law", &fit_power_law, py::arg("xs"), py::arg("ys"),
          py::arg("sigmas") = std::vector<double>{});
    m.def("survey_noise_inference", &survey_noise_inference, py::arg("records"));
    m.def("thermal_floor_ratio", &thermal_floor_ratio, py::arg("observed_s_e"),
          py::arg("assumed_floor"));

    m.def("parse_config", [](const std::string& path) { return parse_config(path); },
          py::arg("path"));
    py::class_<RunConfig>(m, "RunConfig")
        .def_readonly("ion", &RunConfig::ion)
        .def_readonly("trap", &RunConfig::trap)
        .def_readonly("raman", &RunConfig::raman)
        .def_readonly("noise", &RunConfig::noise)
        .def_readonly("probe", &RunConfig::probe)
        .def_readonly("schedule", &RunConfig::schedule)
        .def_readonly("seed", &RunConfig::seed)
        .def_readonly("delays", &RunConfig::delays);

#ifdef IONMOTION_VERSION
    m.attr("__version__") = IONMOTION_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
