#include "ionmotion/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ionmotion/units.hpp"

namespace ionmotion {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

struct RawEntry {
    std::string value;
    int line = 0;
    mutable bool consumed = false;
};

class ConfigReader {
  public:
    explicit ConfigReader(const std::filesystem::path& path) : path_(path.string()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path_);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError(where(lineno) + "malformed section header: " + line);
                section = trim(line.substr(1, line.size() - 2));
                if (section.empty()) throw ConfigError(where(lineno) + "empty section name");
                sections_[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(where(lineno) + "expected 'key = value': " + line);
            if (section.empty())
                throw ConfigError(where(lineno) + "key outside any [section]: " + line);
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError(where(lineno) + "empty key");
            if (value.empty())
                throw ConfigError(where(lineno) + "empty value for " + section + "." + key);
            auto [it, inserted] = sections_[section].emplace(key, RawEntry{value, lineno});
            if (!inserted)
                throw ConfigError(where(lineno) + "duplicate key " + section + "." + key);
        }
    }

    bool has(const std::string& section, const std::string& key) const {
        const auto sec = sections_.find(section);
        return sec != sections_.end() && sec->second.count(key) > 0;
    }

    std::string require_string(const std::string& section, const std::string& key) const {
        const auto* entry = find(section, key);
        if (!entry) throw ConfigError(path_ + ": missing required key " + section + "." + key);
        entry->consumed = true;
        return entry->value;
    }

    std::string optional_string(const std::string& section, const std::string& key,
                                const std::string& fallback) const {
        const auto* entry = find(section, key);
        if (!entry) return fallback;
        entry->consumed = true;
        return entry->value;
    }

    double require_double(const std::string& section, const std::string& key) const {
        const auto* entry = find(section, key);
        if (!entry) throw ConfigError(path_ + ": missing required key " + section + "." + key);
        return as_double(*entry, section, key);
    }

    double optional_double(const std::string& section, const std::string& key,
                           double fallback) const {
        const auto* entry = find(section, key);
        if (!entry) return fallback;
        return as_double(*entry, section, key);
    }

    long long require_int(const std::string& section, const std::string& key) const {
        const auto* entry = find(section, key);
        if (!entry) throw ConfigError(path_ + ": missing required key " + section + "." + key);
        return as_int(*entry, section, key);
    }

    long long optional_int(const std::string& section, const std::string& key,
                           long long fallback) const {
        const auto* entry = find(section, key);
        if (!entry) return fallback;
        return as_int(*entry, section, key);
    }

    std::vector<double> require_double_list(const std::string& section,
                                            const std::string& key) const {
        const auto* entry = find(section, key);
        if (!entry) throw ConfigError(path_ + ": missing required key " + section + "." + key);
        entry->consumed = true;
        std::vector<double> values;
        std::stringstream ss(entry->value);
        std::string token;
        while (std::getline(ss, token, ',')) {
            token = trim(token);
            if (token.empty())
                throw ConfigError(where(entry->line) + "empty element in " + section + "." + key);
            values.push_back(parse_number(token, *entry, section, key));
        }
        if (values.empty())
            throw ConfigError(where(entry->line) + section + "." + key + " lists no values");
        return values;
    }

    bool section_present(const std::string& section) const {
        return sections_.count(section) > 0;
    }

    // every key must have been consumed; anything else is a typo
    void finish(const std::vector<std::string>& known_sections) const {
        for (const auto& [section, entries] : sections_) {
            if (std::find(known_sections.begin(), known_sections.end(), section) ==
                known_sections.end())
                throw ConfigError(path_ + ": unknown section [" + section + "]");
            for (const auto& [key, entry] : entries)
                if (!entry.consumed)
                    throw ConfigError(where(entry.line) + "unknown key " + section + "." + key);
        }
    }

    std::string where(int line) const { return path_ + ":" + std::to_string(line) + ": "; }
    const std::string& path() const { return path_; }

  private:
    const RawEntry* find(const std::string& section, const std::string& key) const {
        const auto sec = sections_.find(section);
        if (sec == sections_.end()) return nullptr;
        const auto entry = sec->second.find(key);
        return entry == sec->second.end() ? nullptr : &entry->second;
    }

    double parse_number(const std::string& token, const RawEntry& entry,
                        const std::string& section, const std::string& key) const {
        double v = 0.0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
        if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
            throw ConfigError(where(entry.line) + section + "." + key + " is not a number: '" +
                              token + "'");
        return v;
    }

    double as_double(const RawEntry& entry, const std::string& section,
                     const std::string& key) const {
        entry.consumed = true;
        return parse_number(entry.value, entry, section, key);
    }

    long long as_int(const RawEntry& entry, const std::string& section,
                     const std::string& key) const {
        entry.consumed = true;
        long long v = 0;
        const auto res =
            std::from_chars(entry.value.data(), entry.value.data() + entry.value.size(), v);
        if (res.ec != std::errc{} || res.ptr != entry.value.data() + entry.value.size())
            throw ConfigError(where(entry.line) + section + "." + key + " is not an integer: '" +
                              entry.value + "'");
        return v;
    }

    std::string path_;
    std::map<std::string, std::map<std::string, RawEntry>> sections_;
};

void check(bool ok, const ConfigReader& reader, const std::string& key,
           const std::string& rule) {
    if (!ok) throw ConfigError(reader.path() + ": " + key + " " + rule);
}

}  // namespace

RunConfig parse_config(const std::filesystem::path& path) {
    ConfigReader reader(path);
    RunConfig config;

    config.ion.name = reader.require_string("ion", "name");
    const double mass_amu = reader.require_double("ion", "mass_amu");
    check(mass_amu > 0.0, reader, "ion.mass_amu", "must be > 0");
    config.ion.mass = units::amu_to_kg(mass_amu);
    const double wavelength_nm = reader.require_double("ion", "wavelength_nm");
    check(wavelength_nm > 0.0, reader, "ion.wavelength_nm", "must be > 0");
    config.ion.transition_wavelength = units::nm_to_m(wavelength_nm);
    const double gamma0_mhz = reader.require_double("ion", "gamma0_mhz");
    check(gamma0_mhz > 0.0, reader, "ion.gamma0_mhz", "must be > 0");
    config.ion.gamma0 = units::mhz_to_rad_s(gamma0_mhz);
    const double hyperfine_ghz = reader.optional_double("ion", "hyperfine_ghz", 0.0);
    check(hyperfine_ghz >= 0.0, reader, "ion.hyperfine_ghz", "must be >= 0");
    config.ion.omega_hf = units::ghz_to_rad_s(hyperfine_ghz);

    const double freq_mhz = reader.require_double("trap", "freq_mhz");
    check(freq_mhz > 0.0, reader, "trap.freq_mhz", "must be > 0");
    config.trap.omega_x = units::mhz_to_rad_s(freq_mhz);
    const double d_um = reader.require_double("trap", "d_um");
    check(d_um > 0.0, reader, "trap.d_um", "must be > 0");
    config.trap.d = units::um_to_m(d_um);
    config.trap.label = reader.optional_string("trap", "label", "trap");
    if (reader.has("trap", "rf_amplitude_v") || reader.has("trap", "drive_freq_mhz") ||
        reader.has("trap", "static_potential_v")) {
        DriveMetadata drive;
        drive.rf_amplitude = reader.optional_double("trap", "rf_amplitude_v", 0.0);
        drive.drive_frequency =
            units::mhz_to_rad_s(reader.optional_double("trap", "drive_freq_mhz", 0.0));
        drive.static_potential = reader.optional_double("trap", "static_potential_v", 0.0);
        config.trap.drive = drive;
    }

    const double omega0_khz = reader.require_double("raman", "omega0_khz");
    check(omega0_khz >= 0.0, reader, "raman.omega0_khz", "must be >= 0");
    config.raman.omega0 = units::khz_to_rad_s(omega0_khz);
    if (reader.has("raman", "delta_k_per_m")) {
        const double dk = reader.require_double("raman", "delta_k_per_m");
        check(dk >= 0.0, reader, "raman.delta_k_per_m", "must be >= 0");
        config.raman.delta_k = dk;
    } else {
        // 90-degree beam pair at the ion's transition wavelength
        config.raman.delta_k =
            RamanGeometry::ninety_degree(config.ion.transition_wavelength, config.raman.omega0)
                .delta_k;
    }

    config.noise.s0 = reader.require_double("noise", "s0_v2_per_m2_hz");
    check(config.noise.s0 >= 0.0, reader, "noise.s0_v2_per_m2_hz", "must be >= 0");
    const double ref_freq_mhz = reader.require_double("noise", "ref_freq_mhz");
    check(ref_freq_mhz > 0.0, reader, "noise.ref_freq_mhz", "must be > 0");
    config.noise.omega_ref = units::mhz_to_rad_s(ref_freq_mhz);
    const double ref_d_um = reader.require_double("noise", "ref_d_um");
    check(ref_d_um > 0.0, reader, "noise.ref_d_um", "must be > 0");
    config.noise.d_ref = units::um_to_m(ref_d_um);
    config.noise.alpha = reader.require_double("noise", "alpha");
    config.noise.p = reader.require_double("noise", "dist_exponent");
    config.noise.floor = reader.optional_double("noise", "floor_v2_per_m2_hz", 0.0);
    check(config.noise.floor >= 0.0, reader, "noise.floor_v2_per_m2_hz", "must be >= 0");

    const double t_probe_us = reader.require_double("probe", "t_probe_us");
    check(t_probe_us >= 0.0, reader, "probe.t_probe_us", "must be >= 0");
    config.probe.t_probe = units::us_to_s(t_probe_us);
    const std::string shots = reader.optional_string("probe", "shots", "inf");
    if (shots == "inf") {
        config.probe.shots = kInfiniteShots;
    } else {
        long long v = 0;
        const auto res = std::from_chars(shots.data(), shots.data() + shots.size(), v);
        if (res.ec != std::errc{} || res.ptr != shots.data() + shots.size() || v < 1)
            throw ConfigError(reader.path() +
                              ": probe.shots must be a positive integer or 'inf', got '" + shots +
                              "'");
        config.probe.shots = static_cast<std::uint64_t>(v);
    }
    config.probe.detection_fidelity = reader.optional_double("probe", "fidelity", 1.0);
    check(config.probe.detection_fidelity > 0.5 && config.probe.detection_fidelity <= 1.0,
          reader, "probe.fidelity", "must lie in (0.5, 1]");
    if (reader.has("probe", "detuning_min_mhz") || reader.has("probe", "detuning_max_mhz") ||
        reader.has("probe", "detuning_points")) {
        const double lo = reader.require_double("probe", "detuning_min_mhz");
        const double hi = reader.require_double("probe", "detuning_max_mhz");
        const long long pts = reader.require_int("probe", "detuning_points");
        check(hi > lo, reader, "probe.detuning_max_mhz", "must exceed detuning_min_mhz");
        check(pts >= 2, reader, "probe.detuning_points", "must be >= 2");
        config.probe.detuning_grid.resize(static_cast<std::size_t>(pts));
        for (long long i = 0; i < pts; ++i)
            config.probe.detuning_grid[static_cast<std::size_t>(i)] =
                units::mhz_to_rad_s(lo + (hi - lo) * static_cast<double>(i) /
                                             static_cast<double>(pts - 1));
    }
    if (reader.has("probe", "orders")) {
        config.probe.orders.clear();
        std::stringstream ss(reader.require_string("probe", "orders"));
        std::string token;
        while (std::getline(ss, token, ',')) {
            token = trim(token);
            long long s = 0;
            const auto res = std::from_chars(token.data(), token.data() + token.size(), s);
            if (res.ec != std::errc{} || res.ptr != token.data() + token.size() || s < -2 ||
                s > 2)
                throw ConfigError(reader.path() +
                                  ": probe.orders entries must be integers in [-2, 2], got '" +
                                  token + "'");
            config.probe.orders.push_back({static_cast<int>(s)});
        }
        check(!config.probe.orders.empty(), reader, "probe.orders", "lists no orders");
    }

    const long long cycles = reader.optional_int("schedule", "cycles", 0);
    check(cycles >= 0, reader, "schedule.cycles", "must be >= 0");
    config.schedule.cycles = static_cast<int>(cycles);
    const std::string pulse_mode = reader.optional_string("schedule", "pulse_mode", "uniform");
    if (pulse_mode == "graduated") {
        config.schedule.graduated = true;
    } else if (pulse_mode != "uniform") {
        throw ConfigError(reader.path() + ": schedule.pulse_mode must be uniform or graduated, got '" +
                          pulse_mode + "'");
    }
    if (reader.has("schedule", "t_pulse_us")) {
        const double t_pulse_us = reader.require_double("schedule", "t_pulse_us");
        check(t_pulse_us > 0.0, reader, "schedule.t_pulse_us", "must be > 0");
        check(!config.schedule.graduated, reader, "schedule.t_pulse_us",
              "cannot be combined with the graduated mode");
        config.schedule.pulse_durations = {units::us_to_s(t_pulse_us)};
    }
    const std::string repump = reader.optional_string("schedule", "repump", "ideal");
    if (repump == "recoil") {
        const double repump_eta = reader.require_double("schedule", "repump_eta");
        check(repump_eta >= 0.0 && repump_eta <= 1.0, reader, "schedule.repump_eta",
              "must lie in [0, 1]");
        const double photons = reader.require_double("schedule", "repump_photons");
        check(photons >= 0.0, reader, "schedule.repump_photons", "must be >= 0");
        config.schedule.repump = RepumpModel::recoil(repump_eta, photons);
    } else if (repump != "ideal") {
        throw ConfigError(reader.path() + ": schedule.repump must be ideal or recoil, got '" +
                          repump + "'");
    }

    if (reader.section_present("run")) {
        const long long seed = reader.optional_int("run", "seed", static_cast<long long>(kDefaultSeed));
        check(seed >= 0, reader, "run.seed", "must be >= 0");
        config.seed = static_cast<std::uint64_t>(seed);
        if (reader.has("run", "delays_ms")) {
            const auto delays_ms = reader.require_double_list("run", "delays_ms");
            config.delays.reserve(delays_ms.size());
            double prev = -1.0;
            for (double ms : delays_ms) {
                check(ms >= 0.0, reader, "run.delays_ms", "entries must be >= 0");
                check(ms > prev, reader, "run.delays_ms", "entries must be strictly increasing");
                prev = ms;
                config.delays.push_back(units::ms_to_s(ms));
            }
        }
    }

    if (reader.section_present("sweep")) {
        config.sweep.present = true;
        const double lo = reader.require_double("sweep", "freq_min_mhz");
        const double hi = reader.require_double("sweep", "freq_max_mhz");
        check(lo > 0.0, reader, "sweep.freq_min_mhz", "must be > 0");
        check(hi > lo, reader, "sweep.freq_max_mhz", "must exceed freq_min_mhz");
        config.sweep.freq_min = units::mhz_to_rad_s(lo);
        config.sweep.freq_max = units::mhz_to_rad_s(hi);
        const long long pts = reader.require_int("sweep", "points");
        check(pts >= 3, reader, "sweep.points", "must be >= 3");
        config.sweep.points = static_cast<int>(pts);
        const std::string spacing = reader.optional_string("sweep", "spacing", "log");
        if (spacing == "linear") config.sweep.log_spacing = false;
        else if (spacing != "log")
            throw ConfigError(reader.path() + ": sweep.spacing must be log or linear, got '" +
                              spacing + "'");
    }

    reader.finish({"ion", "trap", "raman", "noise", "probe", "schedule", "run", "sweep"});

    config.ion.validate();
    config.trap.validate();
    config.raman.validate();
    config.noise.validate();
    config.probe.validate();
    config.schedule.validate();
    return config;
}

}  // namespace ionmotion
