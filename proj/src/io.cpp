#include "ionmotion/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ionmotion/units.hpp"

namespace ionmotion {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-identical across runs
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    return in;
}

double parse_double(const std::string& token, const std::filesystem::path& path, int line) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ConfigError(path.string() + ":" + std::to_string(line) + ": not a number: '" +
                          token + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<double>& nbar_per_cycle) {
    auto out = open_out(path);
    out << "cycle,nbar\n";
    for (std::size_t i = 0; i < nbar_per_cycle.size(); ++i)
        out << i << "," << format_double(nbar_per_cycle[i]) << "\n";
}

void write_distribution_csv(const std::filesystem::path& path,
                            const PopulationDistribution& dist) {
    auto out = open_out(path);
    out << "n,p\n";
    const auto& p = dist.probabilities();
    for (std::size_t n = 0; n < p.size(); ++n) out << n << "," << format_double(p[n]) << "\n";
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
    auto out = open_out(path);
    out << "delta_hz_from_carrier,p_bright,sigma\n";
    for (const auto& pt : spectrum.points)
        out << format_double(units::rad_s_to_hz(pt.delta)) << "," << format_double(pt.p_bright)
            << "," << format_double(pt.sigma) << "\n";
}

void write_flop_csv(const std::filesystem::path& path, const std::vector<FlopPoint>& trace) {
    auto out = open_out(path);
    out << "t_us,p_bright\n";
    for (const auto& pt : trace)
        out << format_double(units::s_to_us(pt.t)) << "," << format_double(pt.p_bright) << "\n";
}

void write_heating_series_csv(const std::filesystem::path& path, const HeatingSeries& series) {
    auto out = open_out(path);
    out << "delay_s,nbar,sigma\n";
    for (const auto& pt : series.points)
        out << format_double(pt.delay) << "," << format_double(pt.nbar) << ","
            << format_double(pt.sigma) << "\n";
}

HeatingSeries read_heating_series_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line) || line != "delay_s,nbar,sigma")
        throw ConfigError(path.string() + ": expected header 'delay_s,nbar,sigma'");
    ++lineno;
    HeatingSeries series;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_csv(line);
        if (fields.size() != 3)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected 3 columns");
        series.points.push_back({parse_double(fields[0], path, lineno),
                                 parse_double(fields[1], path, lineno),
                                 parse_double(fields[2], path, lineno)});
    }
    series.validate();
    return series;
}

std::vector<SurveyRecord> read_survey_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    int lineno = 0;
    std::string header;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        header = line;
        break;
    }
    double rate_scale = 1.0;  // header name declares the unit
    if (header == "system,mass_amu,d_um,freq_mhz,ndot_quanta_per_s,source")
        rate_scale = 1.0;
    else if (header == "system,mass_amu,d_um,freq_mhz,ndot_quanta_per_ms,source")
        rate_scale = 1e3;
    else
        throw ConfigError(path.string() +
                          ": expected header 'system,mass_amu,d_um,freq_mhz,"
                          "ndot_quanta_per_s,source' (or ndot_quanta_per_ms)");

    std::vector<SurveyRecord> records;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_csv(line);
        if (fields.size() != 6)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected 6 columns");
        SurveyRecord record;
        record.system_label = fields[0];
        record.ion_mass = units::amu_to_kg(parse_double(fields[1], path, lineno));
        record.electrode_distance = units::um_to_m(parse_double(fields[2], path, lineno));
        record.trap_frequency = units::mhz_to_rad_s(parse_double(fields[3], path, lineno));
        record.heating_rate = rate_scale * parse_double(fields[4], path, lineno);
        record.source_tag = fields[5];
        try {
            record.validate();
        } catch (const ContractError& err) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + err.what());
        }
        records.push_back(std::move(record));
    }
    return records;
}

void write_survey_inference_csv(const std::filesystem::path& path,
                                const std::vector<SurveyInference>& rows) {
    auto out = open_out(path);
    out << "system,d_um,s_e_v2_per_m2_hz\n";
    for (const auto& row : rows)
        out << row.system_label << "," << format_double(units::m_to_um(row.electrode_distance))
            << "," << format_double(row.s_e) << "\n";
}

std::string fit_result_to_json(const FitResult& fit,
                               const std::vector<std::pair<std::string, double>>& extras) {
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < fit.parameter_names.size(); ++i)
        j["parameters"][fit.parameter_names[i]] = fit.parameters[i];
    for (std::size_t i = 0; i < fit.parameter_names.size(); ++i)
        j["sigmas"][fit.parameter_names[i]] = std::sqrt(fit.covariance[i][i]);
    j["covariance"] = fit.covariance;
    j["residual_norm"] = fit.residual_norm;
    for (const auto& [key, value] : extras) j[key] = value;
    return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
}

void write_sidecar(const std::filesystem::path& data_path, const std::string& description,
                   const std::vector<std::string>& column_notes) {
    std::filesystem::path meta = data_path;
    meta += ".meta";
    auto out = open_out(meta);
    out << "file: " << data_path.filename().string() << "\n";
    out << "description: " << description << "\n";
    out << "columns:\n";
    for (const auto& note : column_notes) out << "  " << note << "\n";
}

}  // namespace ionmotion
