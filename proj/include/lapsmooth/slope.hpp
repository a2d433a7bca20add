#pragma once

#include <cmath>
#include <vector>

#include "lapsmooth/common.hpp"

namespace lapsmooth {

struct SlopeFit {
    double slope = 0.0;
    double std_err = 0.0;
    double intercept = 0.0;
};

/// OLS of log(y) on log(x); std_err is the regression standard error of the
/// slope. Requires at least 4 rows of positive values.
inline SlopeFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw input_error("fit_loglog_slope: length mismatch");
    const std::size_t n = x.size();
    if (n < 4) throw input_error("fit_loglog_slope: need at least 4 rows");
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw input_error("fit_loglog_slope: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw input_error("fit_loglog_slope: degenerate x grid");
    SlopeFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ly[i] - (out.intercept + out.slope * lx[i]);
        rss += e * e;
    }
    if (n > 2) out.std_err = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    return out;
}

/// Pooled variant taking explicit (x, y) pairs.
inline SlopeFit fit_loglog_slope_pairs(const std::vector<std::pair<double, double>>& rows) {
    std::vector<double> x, y;
    x.reserve(rows.size());
    y.reserve(rows.size());
    for (const auto& [a, b] : rows) {
        x.push_back(a);
        y.push_back(b);
    }
    return fit_loglog_slope(x, y);
}

}  // namespace lapsmooth
