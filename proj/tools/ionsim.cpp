// ionsim: batch driver for the trapped-ion motional simulator.
//
// Subcommands: cool, spectrum, flop, heat, fit-heating, sweep-frequency,
// survey, derive. Every run is reproducible: identical config and seed
// give byte-identical output files.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "ionmotion/analysis.hpp"
#include "ionmotion/config.hpp"
#include "ionmotion/dynamics.hpp"
#include "ionmotion/io.hpp"
#include "ionmotion/rng.hpp"
#include "ionmotion/units.hpp"

namespace fs = std::filesystem;
using namespace ionmotion;

namespace {

struct Options {
    std::string config_path;
    std::string in_path;
    std::string out_dir = ".";
    std::string format = "csv";
    std::string shots;  // empty: use config; integer or "inf"
    std::uint64_t seed = 0;
    bool seed_given = false;
    int jobs = 1;
    bool weighted = false;
    double delay_ms = 0.0;
    std::string stage = "cooled";
};

std::string display(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

RunConfig load_config(Options& opt) {
    if (opt.config_path.empty()) throw ConfigError("--config PATH is required for this command");
    RunConfig config = parse_config(opt.config_path);
    if (opt.seed_given) config.seed = opt.seed;
    if (!opt.shots.empty()) {
        if (opt.shots == "inf") {
            config.probe.shots = kInfiniteShots;
        } else {
            long long v = 0;
            try {
                v = std::stoll(opt.shots);
            } catch (...) {
                throw ConfigError("--shots must be a positive integer or 'inf'");
            }
            if (v < 1) throw ConfigError("--shots must be a positive integer or 'inf'");
            config.probe.shots = static_cast<std::uint64_t>(v);
        }
    }
    return config;
}

fs::path out_file(const Options& opt, const std::string& name) {
    fs::create_directories(opt.out_dir);
    return fs::path(opt.out_dir) / name;
}

void parallel_for(int jobs, std::size_t count, const std::function<void(std::size_t)>& body) {
    jobs = std::clamp(jobs, 1, 64);
    if (jobs == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

PopulationDistribution prepared_state(const RunConfig& config, double eta,
                                      const std::string& stage) {
    auto doppler = doppler_cool(config.ion, config.trap.omega_x);
    if (stage == "doppler") return doppler;
    return run_cooling(doppler, config.schedule, eta, config.raman.omega0).final_state;
}

std::vector<double> default_detuning_grid(double omega_x) {
    const int points = 261;
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = -1.3 * omega_x + 2.6 * omega_x * i / (points - 1);
    return grid;
}

int cmd_derive(Options& opt) {
    const RunConfig config = load_config(opt);
    const double eta = lamb_dicke(config.raman, config.ion, config.trap.omega_x);
    const double omega_r = recoil_frequency(config.raman, config.ion);
    const double nbar_d = doppler_limit_nbar(config.ion, config.trap.omega_x);
    const double threshold = cooling_threshold(config.ion, config.raman);
    const double s_e = evaluate_noise(config.noise, config.trap.omega_x, config.trap.d);
    const double ndot = heating_rate_from_noise(s_e, config.ion, config.trap.omega_x);
    const double s_e_back = noise_from_heating_rate(ndot, config.ion, config.trap.omega_x);
    const bool have_pulse = config.raman.omega0 > 0.0 && eta > 0.0;
    const double t_pulse = have_pulse ? default_pulse_duration(eta, config.raman.omega0) : 0.0;

    if (opt.format == "json") {
        nlohmann::ordered_json j;
        j["ion"] = config.ion.name;
        j["trap_label"] = config.trap.label;
        j["freq_mhz"] = units::rad_s_to_mhz(config.trap.omega_x);
        j["eta_x"] = eta;
        j["recoil_frequency_hz"] = units::rad_s_to_hz(omega_r);
        j["doppler_nbar"] = nbar_d;
        j["cooling_threshold_hz"] = units::rad_s_to_hz(threshold);
        j["default_pulse_us"] = units::s_to_us(t_pulse);
        j["s_e_v2_per_m2_hz"] = s_e;
        j["ndot_quanta_per_s"] = ndot;
        j["ndot_quanta_per_ms"] = ndot * 1e-3;
        j["s_e_roundtrip_v2_per_m2_hz"] = s_e_back;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "quantity,value,unit\n";
        std::cout << "eta_x," << display(eta) << ",1\n";
        std::cout << "recoil_frequency," << display(units::rad_s_to_khz(omega_r)) << ",kHz\n";
        std::cout << "doppler_nbar," << display(nbar_d) << ",quanta\n";
        std::cout << "cooling_threshold," << display(units::rad_s_to_mhz(threshold)) << ",MHz\n";
        std::cout << "default_pulse," << display(units::s_to_us(t_pulse)) << ",us\n";
        std::cout << "s_e_at_trap," << display(s_e) << ",(V/m)^2/Hz\n";
        std::cout << "heating_rate," << display(ndot) << ",quanta/s\n";
        std::cout << "heating_rate," << display(ndot * 1e-3) << ",quanta/ms\n";
    }
    return kExitOk;
}

int cmd_cool(Options& opt) {
    const RunConfig config = load_config(opt);
    const double eta = lamb_dicke(config.raman, config.ion, config.trap.omega_x);
    const auto result = run_cooling(doppler_cool(config.ion, config.trap.omega_x),
                                    config.schedule, eta, config.raman.omega0);

    const auto traj = out_file(opt, "cooling_trajectory.csv");
    write_trajectory_csv(traj, result.nbar_trajectory);
    write_sidecar(traj, "mean occupation after each sideband cooling cycle",
                  {"cycle: cycle index, 0 is the pre-cooling state",
                   "nbar: mean motional occupation"});

    const auto dist = out_file(opt, "final_distribution.csv");
    write_distribution_csv(dist, result.final_state);
    write_sidecar(dist, "motional level occupations after the full cooling schedule",
                  {"n: harmonic level", "p: occupation probability"});
    return kExitOk;
}

int cmd_spectrum(Options& opt) {
    const RunConfig config = load_config(opt);
    const double eta = lamb_dicke(config.raman, config.ion, config.trap.omega_x);
    const auto state = prepared_state(config, eta, opt.stage);

    ProbeConfig probe = config.probe;
    if (probe.detuning_grid.empty()) probe.detuning_grid = default_detuning_grid(config.trap.omega_x);
    const auto spectrum = synthesize_spectrum(state, eta, config.raman.omega0,
                                              config.trap.omega_x, probe,
                                              derive_seed(config.seed, 0xA1));
    if (spectrum.clamped)
        std::cerr << "warning: overlapping orders saturated p_bright at 1 on part of the grid\n";

    const auto path = out_file(opt, "spectrum.csv");
    write_spectrum_csv(path, spectrum);
    write_sidecar(path, "bright-state transfer probability vs beatnote offset from the carrier",
                  {"delta_hz_from_carrier: probe detuning, Hz",
                   "p_bright: transfer probability",
                   "sigma: binomial standard error (0 in exact mode)"});
    return kExitOk;
}

int cmd_flop(Options& opt) {
    const RunConfig config = load_config(opt);
    const double eta = lamb_dicke(config.raman, config.ion, config.trap.omega_x);
    auto state = prepared_state(config, eta, "cooled");
    if (opt.delay_ms > 0.0) {
        const double s_e = evaluate_noise(config.noise, config.trap.omega_x, config.trap.d);
        const double ndot = heating_rate_from_noise(s_e, config.ion, config.trap.omega_x);
        state = heat_evolve(state, ndot, units::ms_to_s(opt.delay_ms));
    }

    const double base = rabi_coupling(1, SidebandOrder::upper(), eta, config.raman.omega0);
    if (!(base > 0.0)) throw ContractError("flop traces need a nonzero sideband coupling");
    const int points = 241;
    std::vector<double> times(points);
    for (int i = 0; i < points; ++i)
        times[i] = 10.0 * constants::pi / base * i / (points - 1);

    const struct {
        SidebandOrder order;
        const char* name;
    } sides[2] = {{SidebandOrder::lower(), "flop_lower.csv"},
                  {SidebandOrder::upper(), "flop_upper.csv"}};
    for (const auto& side : sides) {
        const auto trace = rabi_flop_trace(state, side.order, eta, config.raman.omega0, times);
        const auto path = out_file(opt, side.name);
        write_flop_csv(path, trace);
        write_sidecar(path, "sideband Rabi oscillation of the prepared state",
                      {"t_us: pulse duration, microseconds", "p_bright: transfer probability"});
    }
    return kExitOk;
}

HeatingSeries generate_series(const RunConfig& config) {
    if (config.delays.empty())
        throw ConfigError("run.delays_ms is required to generate a heating series");
    return run_heating_experiment(config.ion, config.trap, config.noise, config.schedule,
                                  config.raman, config.probe, config.delays, config.probe.shots,
                                  config.seed);
}

void write_series(const Options& opt, const HeatingSeries& series) {
    const auto path = out_file(opt, "heating_series.csv");
    write_heating_series_csv(path, series);
    write_sidecar(path, "measured mean occupation vs free-heating delay",
                  {"delay_s: delay between cooling and probe, seconds",
                   "nbar: estimated mean occupation",
                   "sigma: propagated statistical error (0 in exact mode)"});
}

int cmd_heat(Options& opt) {
    const RunConfig config = load_config(opt);
    write_series(opt, generate_series(config));
    return kExitOk;
}

int cmd_fit_heating(Options& opt) {
    HeatingSeries series;
    if (!opt.in_path.empty()) {
        series = read_heating_series_csv(opt.in_path);
    } else {
        const RunConfig config = load_config(opt);
        series = generate_series(config);
        write_series(opt, series);
    }
    const auto fit = fit_heating_rate(series, opt.weighted);
    const auto path = out_file(opt, "heating_fit.json");
    write_text_file(path, fit_result_to_json(
                              fit, {{"slope_quanta_per_ms", fit.parameter("slope") * 1e-3}}));
    return kExitOk;
}

int cmd_sweep_frequency(Options& opt) {
    const RunConfig config = load_config(opt);
    if (!config.sweep.present)
        throw ConfigError("a [sweep] section is required for sweep-frequency");

    std::vector<double> omegas(static_cast<std::size_t>(config.sweep.points));
    for (int i = 0; i < config.sweep.points; ++i) {
        const double f = static_cast<double>(i) / (config.sweep.points - 1);
        omegas[static_cast<std::size_t>(i)] =
            config.sweep.log_spacing
                ? config.sweep.freq_min *
                      std::pow(config.sweep.freq_max / config.sweep.freq_min, f)
                : config.sweep.freq_min + (config.sweep.freq_max - config.sweep.freq_min) * f;
    }

    std::vector<double> ndots(omegas.size()), sigmas(omegas.size());
    const bool exact = config.probe.shots == kInfiniteShots;
    parallel_for(opt.jobs, omegas.size(), [&](std::size_t i) {
        TrapConfig trap = config.trap;
        trap.omega_x = omegas[i];
        if (exact) {
            ndots[i] = heating_rate_from_noise(evaluate_noise(config.noise, trap.omega_x, trap.d),
                                               config.ion, trap.omega_x);
            sigmas[i] = 0.0;
        } else {
            if (config.delays.empty())
                throw ConfigError("run.delays_ms is required for a finite-shot sweep");
            const auto series = run_heating_experiment(
                config.ion, trap, config.noise, config.schedule, config.raman, config.probe,
                config.delays, config.probe.shots, derive_seed(config.seed, i));
            const auto fit = fit_heating_rate(series, true);
            ndots[i] = fit.parameter("slope");
            sigmas[i] = fit.sigma("slope");
        }
    });

    const auto table = out_file(opt, "frequency_sweep.csv");
    {
        std::string body = "freq_mhz,ndot_quanta_per_s,sigma\n";
        for (std::size_t i = 0; i < omegas.size(); ++i)
            body += format_double(units::rad_s_to_mhz(omegas[i])) + "," +
                    format_double(ndots[i]) + "," + format_double(sigmas[i]) + "\n";
        write_text_file(table, body);
    }
    write_sidecar(table, "heating rate vs secular frequency",
                  {"freq_mhz: secular frequency, MHz", "ndot_quanta_per_s: heating rate",
                   "sigma: statistical error on the rate (0 in exact mode)"});

    const auto fit = fit_power_law(std::vector<double>(omegas.begin(), omegas.end()), ndots,
                                   exact ? std::vector<double>{} : sigmas);
    const auto fit_path = out_file(opt, "frequency_fit.json");
    write_text_file(fit_path,
                    fit_result_to_json(fit, {{"implied_noise_exponent",
                                              fit.parameter("exponent") + 1.0}}));
    return kExitOk;
}

int cmd_survey(Options& opt) {
    if (opt.in_path.empty()) throw ConfigError("--in FILE.csv is required for survey");
    const auto records = read_survey_csv(opt.in_path);
    const auto rows = survey_noise_inference(records);

    const auto table = out_file(opt, "survey_inference.csv");
    write_survey_inference_csv(table, rows);
    write_sidecar(table, "electric-field noise spectral density inferred per system",
                  {"system: system label", "d_um: closest electrode distance, micrometers",
                   "s_e_v2_per_m2_hz: inferred S_E at the trap frequency"});

    std::vector<double> ds, ndots, ses;
    for (const auto& record : records) {
        ds.push_back(record.electrode_distance);
        ndots.push_back(record.heating_rate);
    }
    for (const auto& row : rows) ses.push_back(row.s_e);
    std::vector<double> ds_sorted;
    for (const auto& row : rows) ds_sorted.push_back(row.electrode_distance);

    const auto rate_fit = fit_power_law(ds, ndots);
    const auto noise_fit = fit_power_law(ds_sorted, ses);
    const auto fit_path = out_file(opt, "distance_fit.json");
    write_text_file(fit_path, fit_result_to_json(
                                  rate_fit, {{"s_e_exponent", noise_fit.parameter("exponent")},
                                             {"s_e_exponent_sigma", noise_fit.sigma("exponent")}}));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trapped-ion motional state simulator and analysis toolkit"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    Options opt;
    int selected = -1;
    const char* names[] = {"cool",        "spectrum", "flop",   "heat",
                           "fit-heating", "sweep-frequency", "survey", "derive"};
    const char* descriptions[] = {
        "run the cooling schedule, emit the nbar trajectory and final level populations",
        "synthesize a sideband spectrum of the prepared state",
        "emit sideband Rabi flopping traces of the prepared state",
        "run the delay-scan heating experiment, emit the nbar series",
        "fit a heating rate to an imported or generated series",
        "heating rate vs trap frequency with a power-law fit",
        "infer electric-field noise from a cross-system survey file",
        "print derived quantities for the configuration"};
    for (int i = 0; i < 8; ++i) {
        auto* sub = app.add_subcommand(names[i], descriptions[i]);
        sub->add_option("--config", opt.config_path, "run configuration file");
        sub->add_option("--seed", opt.seed, "override the RNG seed")
            ->check(CLI::NonNegativeNumber)
            ->each([&](const std::string&) { opt.seed_given = true; });
        sub->add_option("--jobs", opt.jobs, "worker threads for independent points")
            ->check(CLI::PositiveNumber);
        sub->add_option("--shots", opt.shots, "override probe shots: N or 'inf'");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--format", opt.format, "derive output format")
            ->check(CLI::IsMember({"csv", "json"}));
        if (std::string(names[i]) == "fit-heating" || std::string(names[i]) == "survey")
            sub->add_option("--in", opt.in_path, "input CSV file");
        if (std::string(names[i]) == "fit-heating")
            sub->add_flag("--weighted", opt.weighted, "inverse-variance weighted fit");
        if (std::string(names[i]) == "flop")
            sub->add_option("--delay-ms", opt.delay_ms, "free-heating delay before the trace")
                ->check(CLI::NonNegativeNumber);
        if (std::string(names[i]) == "spectrum")
            sub->add_option("--stage", opt.stage, "state to probe")
                ->check(CLI::IsMember({"doppler", "cooled"}));
        sub->callback([&, i] { selected = i; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfigError;
    }

    try {
        switch (selected) {
            case 0: return cmd_cool(opt);
            case 1: return cmd_spectrum(opt);
            case 2: return cmd_flop(opt);
            case 3: return cmd_heat(opt);
            case 4: return cmd_fit_heating(opt);
            case 5: return cmd_sweep_frequency(opt);
            case 6: return cmd_survey(opt);
            case 7: return cmd_derive(opt);
            default: return kExitConfigError;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const FitError& e) {
        std::cerr << "fit error: " << e.what() << "\n";
        return kExitFitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitContractError;
    }
}
