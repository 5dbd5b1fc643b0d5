#include "ionmotion/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ionmotion {

double FitResult::parameter(const std::string& name) const {
    for (std::size_t i = 0; i < parameter_names.size(); ++i)
        if (parameter_names[i] == name) return parameters[i];
    throw ContractError("fit has no parameter named '" + name + "'");
}

double FitResult::sigma(const std::string& name) const {
    for (std::size_t i = 0; i < parameter_names.size(); ++i)
        if (parameter_names[i] == name) return std::sqrt(covariance[i][i]);
    throw ContractError("fit has no parameter named '" + name + "'");
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double var_slope = 0.0;
    double var_intercept = 0.0;
    double cov_si = 0.0;
    double chi2 = 0.0;
};

// Weighted straight line y = intercept + slope x. With trusted per-point
// sigmas the covariance is (X^T W X)^-1; in unweighted mode it is scaled
// by chi2/(n-2) as usual.
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys,
                 const std::vector<double>& ws, bool scale_by_chi2) {
    const std::size_t n = xs.size();
    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sw += ws[i];
        sx += ws[i] * xs[i];
        sy += ws[i] * ys[i];
        sxx += ws[i] * xs[i] * xs[i];
        sxy += ws[i] * xs[i] * ys[i];
    }
    const double det = sw * sxx - sx * sx;
    if (!(std::abs(det) > 0.0)) throw FitError("degenerate abscissa; cannot fit a line");

    LineFit fit;
    fit.slope = (sw * sxy - sx * sy) / det;
    fit.intercept = (sxx * sy - sx * sxy) / det;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - fit.intercept - fit.slope * xs[i];
        fit.chi2 += ws[i] * r * r;
    }
    double scale = 1.0;
    if (scale_by_chi2) {
        if (n < 3) throw FitError("insufficient data: unweighted errors need >= 3 points");
        scale = fit.chi2 / static_cast<double>(n - 2);
    }
    fit.var_slope = scale * sw / det;
    fit.var_intercept = scale * sxx / det;
    fit.cov_si = -scale * sx / det;
    return fit;
}

FitResult to_fit_result(const LineFit& fit, const std::string& slope_name,
                        const std::string& intercept_name) {
    FitResult out;
    out.parameter_names = {slope_name, intercept_name};
    out.parameters = {fit.slope, fit.intercept};
    out.covariance = {{fit.var_slope, fit.cov_si}, {fit.cov_si, fit.var_intercept}};
    out.residual_norm = std::sqrt(fit.chi2);
    return out;
}

}  // namespace

FitResult fit_heating_rate(const HeatingSeries& series, bool weighted) {
    series.validate();
    const std::size_t n = series.points.size();
    if (n < 3) throw FitError("insufficient data: a heating-rate fit needs >= 3 points");

    bool all_sigma = true;
    for (const auto& pt : series.points) all_sigma = all_sigma && pt.sigma > 0.0;
    const bool use_weights = weighted && all_sigma;

    std::vector<double> xs(n), ys(n), ws(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = series.points[i].delay;
        ys[i] = series.points[i].nbar;
        ws[i] = use_weights ? 1.0 / (series.points[i].sigma * series.points[i].sigma) : 1.0;
    }
    return to_fit_result(fit_line(xs, ys, ws, !use_weights), "slope", "intercept");
}

FitResult fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::vector<double>& sigmas) {
    const std::size_t n = xs.size();
    if (ys.size() != n || (!sigmas.empty() && sigmas.size() != n))
        throw ContractError("power-law fit inputs must have matching lengths");
    if (n < 3) throw FitError("insufficient data: a power-law fit needs >= 3 points");

    bool use_weights = !sigmas.empty();
    for (double s : sigmas) use_weights = use_weights && s > 0.0;

    std::vector<double> lx(n), ly(n), ws(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0 && ys[i] > 0.0))
            throw ContractError("power-law fit needs strictly positive data");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
        // sigma(log y) = sigma/y
        ws[i] = use_weights ? (ys[i] * ys[i]) / (sigmas[i] * sigmas[i]) : 1.0;
    }
    return to_fit_result(fit_line(lx, ly, ws, !use_weights), "exponent", "log_amplitude");
}

void SurveyRecord::validate() const {
    if (!(ion_mass > 0.0)) throw ContractError("survey record ion mass must be > 0");
    if (!(electrode_distance > 0.0)) throw ContractError("survey record distance must be > 0");
    if (!(trap_frequency > 0.0)) throw ContractError("survey record frequency must be > 0");
    if (!(heating_rate > 0.0)) throw ContractError("survey record heating rate must be > 0");
}

std::vector<SurveyInference> survey_noise_inference(const std::vector<SurveyRecord>& records) {
    if (records.empty()) throw ContractError("survey requires at least one record");
    std::vector<SurveyInference> rows;
    rows.reserve(records.size());
    for (const auto& record : records) {
        record.validate();
        rows.push_back({record.system_label, record.electrode_distance,
                        noise_from_heating_rate(record.heating_rate, record.ion_mass,
                                                record.trap_frequency)});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.electrode_distance < b.electrode_distance;
    });
    return rows;
}

double thermal_floor_ratio(double observed_s_e, double assumed_floor) {
    if (!(assumed_floor > 0.0)) throw ContractError("assumed noise floor must be > 0");
    if (!(observed_s_e >= 0.0)) throw ContractError("observed noise must be >= 0");
    return observed_s_e / assumed_floor;
}

}  // namespace ionmotion
