#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ionmotion/analysis.hpp"
#include "ionmotion/dynamics.hpp"
#include "ionmotion/spectroscopy.hpp"

namespace ionmotion {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Every writer emits a header line and one comma-separated row per record.
// Columns carry their unit in the name; values round-trip exactly.

void write_trajectory_csv(const std::filesystem::path& path, const std::vector<double>& nbar_per_cycle);
void write_distribution_csv(const std::filesystem::path& path, const PopulationDistribution& dist);
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);
void write_flop_csv(const std::filesystem::path& path, const std::vector<FlopPoint>& trace);

void write_heating_series_csv(const std::filesystem::path& path, const HeatingSeries& series);
HeatingSeries read_heating_series_csv(const std::filesystem::path& path);

// Survey input schema (header required):
//   system,mass_amu,d_um,freq_mhz,ndot_quanta_per_s,source
// The rate column may instead be named ndot_quanta_per_ms; the header name
// is the unit declaration, nothing is inferred from the values.
std::vector<SurveyRecord> read_survey_csv(const std::filesystem::path& path);
void write_survey_inference_csv(const std::filesystem::path& path,
                                const std::vector<SurveyInference>& rows);

std::string fit_result_to_json(const FitResult& fit,
                               const std::vector<std::pair<std::string, double>>& extras = {});
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Plot-data sidecar: a short plain-text description of the columns in a
// data file, written next to it as <file>.meta.
void write_sidecar(const std::filesystem::path& data_path, const std::string& description,
                   const std::vector<std::string>& column_notes);

}  // namespace ionmotion
