#pragma once

#include <string>
#include <vector>

#include "ionmotion/dynamics.hpp"
#include "ionmotion/physcore.hpp"

namespace ionmotion {

struct FitResult {
    std::vector<std::string> parameter_names;
    std::vector<double> parameters;
    std::vector<std::vector<double>> covariance;
    double residual_norm = 0.0;

    double parameter(const std::string& name) const;
    double sigma(const std::string& name) const;
};

/// Linear least squares nbar = intercept + slope * delay.
/// weighted = true uses inverse-variance weights; if any point has
/// sigma = 0 the fit silently falls back to unweighted for all points.
FitResult fit_heating_rate(const HeatingSeries& series, bool weighted = false);

/// Straight-line fit in log-log space: y = amplitude * x^exponent.
/// Parameters are "exponent" and "log_amplitude"; weights follow from
/// sigma_log y = sigma/y when sigmas are given.
FitResult fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::vector<double>& sigmas = {});

struct SurveyRecord {
    std::string system_label;
    double ion_mass = 0.0;            // kg
    double electrode_distance = 0.0;  // m
    double trap_frequency = 0.0;      // rad/s
    double heating_rate = 0.0;        // quanta/s
    std::string source_tag;

    void validate() const;
};

struct SurveyInference {
    std::string system_label;
    double electrode_distance = 0.0;  // m
    double s_e = 0.0;                 // (V/m)^2/Hz
};

/// Electric-field noise inferred per record via S_E = 4 m hbar omega ndot / e^2,
/// using each record's own mass and frequency so the result is species-free.
/// Rows come back sorted by electrode distance.
std::vector<SurveyInference> survey_noise_inference(const std::vector<SurveyRecord>& records);

/// observed / floor, the excess of measured noise over an assumed thermal floor.
double thermal_floor_ratio(double observed_s_e, double assumed_floor);

}  // namespace ionmotion
