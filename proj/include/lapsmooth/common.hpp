#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lapsmooth {

// Error taxonomy, mirrored by the CLI exit codes:
//   input_error -> 2, solver_error -> 3, capacity_error -> 4.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

/// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
    if (d <= 0) throw input_error("unit_ball_volume: dimension must be positive");
    return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Design points, one row per point, row-major.
struct PointCloud {
    std::vector<double> coords;  // n * d values
    std::size_t n = 0;
    int d = 0;
    int intrinsic_dim = 0;  // 0 = unset; m <= d when the manifold hypothesis applies

    const double* row(std::size_t i) const { return coords.data() + i * static_cast<std::size_t>(d); }
    double coord(std::size_t i, int k) const { return coords[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)]; }

    void validate() const {
        if (n < 2) throw input_error("PointCloud: need at least 2 points");
        if (d < 1) throw input_error("PointCloud: ambient dimension must be >= 1");
        if (coords.size() != n * static_cast<std::size_t>(d))
            throw input_error("PointCloud: coordinate buffer size mismatch");
        if (!all_finite(coords)) throw input_error("PointCloud: non-finite coordinate");
        if (intrinsic_dim < 0 || intrinsic_dim > d)
            throw input_error("PointCloud: intrinsic dimension out of range");
    }
};

inline double squared_distance(const PointCloud& pts, std::size_t i, std::size_t j) {
    const double* a = pts.row(i);
    const double* b = pts.row(j);
    double s = 0.0;
    for (int k = 0; k < pts.d; ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return s;
}

}  // namespace lapsmooth
