#pragma once

#include <string>

#include "json.hpp"
#include "lapsmooth/estimator.hpp"
#include "lapsmooth/experiments.hpp"
#include "lapsmooth/gof.hpp"
#include "lapsmooth/synthetic.hpp"

namespace lapsmooth {

using json = nlohmann::json;

inline json to_json(const DesignSpec& s) {
    json j;
    j["family"] = to_string(s.family);
    j["d"] = s.d;
    j["m"] = s.m;
    j["domain"] = s.domain == CubeDomain::unit ? "unit" : "symmetric";
    j["p_min"] = s.p_min;
    j["p_max"] = s.p_max;
    return j;
}

inline DesignSpec design_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    const int d = j.at("d").get<int>();
    DesignSpec s;
    if (family == "uniform-cube")
        s = DesignSpec::uniform(d, j.value("domain", "unit") == std::string("unit")
                                       ? CubeDomain::unit
                                       : CubeDomain::symmetric);
    else if (family == "lipschitz-rejection")
        s = DesignSpec::lipschitz(d);
    else if (family == "circle")
        s = DesignSpec::circle_in(d);
    else if (family == "swiss-roll")
        s = DesignSpec::swiss_roll();
    else
        throw input_error("unknown design family: " + family);
    return s;
}

inline json to_json(const SignalSpec& s) {
    json j;
    switch (s.family) {
        case SignalFamily::cosine_product: j["family"] = "cosine-product"; break;
        case SignalFamily::single_coordinate_linear: j["family"] = "single-coordinate-linear"; break;
        case SignalFamily::zero: j["family"] = "zero"; break;
        case SignalFamily::custom: j["family"] = "custom"; break;
    }
    j["amplitude"] = s.amplitude;
    j["a"] = s.a;
    j["d"] = s.d;
    return j;
}

inline SignalSpec signal_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    const int d = j.at("d").get<int>();
    if (family == "cosine-product")
        return SignalSpec::cosine(d, j.value("a", 1.0), j.value("amplitude", 1.0));
    if (family == "single-coordinate-linear")
        return SignalSpec::linear(d, j.value("amplitude", 1.0));
    if (family == "zero") return SignalSpec::none(d);
    throw input_error("unknown signal family: " + family);
}

inline json to_json(const TuningSpec& t) {
    json j;
    j["mode"] = t.mode == TuningMode::theorem_rule ? "theorem-rule"
                : t.mode == TuningMode::fixed      ? "fixed"
                                                   : "oracle-grid";
    j["task"] = t.task == TuningTask::estimation ? "estimation" : "testing";
    j["M"] = t.M;
    j["dim_used"] = t.dim_used;
    j["rho"] = t.rho;
    j["r"] = t.r;
    j["r_rule"] = t.r_rule == RadiusRule::connectivity ? "connectivity" : "explicit";
    j["connectivity_c0"] = t.connectivity_c0;
    j["radius_warning"] = t.radius_warning;
    return j;
}

inline json to_json(const GofTestResult& r) {
    json j;
    j["statistic"] = r.t_hat;
    if (r.threshold) j["threshold"] = *r.threshold;
    if (r.p_value) j["p_value"] = *r.p_value;
    j["alpha"] = r.alpha;
    j["reject"] = r.reject;
    j["calibration"] = r.calibration == Calibration::spectral ? "spectral" : "permutation";
    j["rho"] = r.rho;
    j["r"] = r.r;
    return j;
}

inline json to_json(const RateCurve& c) {
    json rows = json::array();
    for (const auto& row : c.rows)
        rows.push_back({{"n", row.n},
                        {"mean_error", row.mean_error},
                        {"std_error", row.std_error},
                        {"radius", row.radius},
                        {"chosen_rho", row.chosen_rho}});
    return json{{"rows", rows},
                {"fitted_slope", c.fitted_slope},
                {"slope_std_err", c.slope_std_err},
                {"reference_slope", c.reference_slope}};
}

}  // namespace lapsmooth
