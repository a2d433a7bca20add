#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lapsmooth/estimator.hpp"
#include "lapsmooth/parallel.hpp"
#include "lapsmooth/rng.hpp"
#include "lapsmooth/spectrum.hpp"

namespace lapsmooth {

enum class Calibration { spectral, permutation };

struct GofTestResult {
    double t_hat = 0.0;
    std::optional<double> threshold;  // spectral mode
    std::optional<double> p_value;    // permutation mode
    double alpha = 0.0;
    bool reject = false;
    Calibration calibration = Calibration::permutation;
    double rho = 0.0;
    double r = 0.0;
};

/// T = (1/n) |f|_2^2.
inline double test_statistic(const std::vector<double>& f_hat) {
    if (f_hat.empty()) throw input_error("test_statistic: empty fit");
    double s = 0.0;
    for (double v : f_hat) s += v * v;
    return s / static_cast<double>(f_hat.size());
}

inline double test_statistic(const SmoothingFit& fit_result) {
    if (!fit_result.solve.converged) throw solver_error("test_statistic: fit not converged");
    return test_statistic(fit_result.f_hat);
}

/// t_alpha = (1/n) sum (rho l_k + 1)^-2 + (1/n) sqrt((2/alpha) sum (rho l_k + 1)^-4).
inline double spectral_threshold(const SpectrumResult& spectrum, double rho, double alpha, std::size_t n) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw input_error("spectral_threshold: alpha must be in (0,1)");
    if (spectrum.mode != SpectrumMode::full_dense || spectrum.eigenvalues.size() != n)
        throw capacity_error("spectral_threshold: full spectrum required; use permutation calibration");
    double s2 = 0.0, s4 = 0.0;
    for (double lam : spectrum.eigenvalues) {
        const double c = 1.0 / (rho * lam + 1.0);
        const double c2 = c * c;
        s2 += c2;
        s4 += c2 * c2;
    }
    const double nn = static_cast<double>(n);
    return s2 / nn + std::sqrt(2.0 / alpha * s4) / nn;
}

// Test with the eigenvalue-based threshold: reject iff T > t_alpha. Exact
// level-alpha by Chebyshev, conservative in practice. A non-zero null f0* is
// handled by the caller pre-subtracting f0*(X_i) from y.
inline GofTestResult gof_test_spectral(const PointCloud& points, const std::vector<double>& y,
                                       const TuningSpec& tuning, const KernelSpec& kernel,
                                       double alpha, std::size_t dense_cap = kDenseSpectrumCap,
                                       const BuildOptions& build_opts = {}) {
    if (points.n > dense_cap)
        throw capacity_error("gof_test_spectral: n exceeds dense spectral cap; use permutation mode");
    SmoothingFit f = fit(points, y, tuning, kernel, build_opts);
    const SpectrumResult spectrum = full_spectrum(*f.graph, dense_cap);
    GofTestResult out;
    out.calibration = Calibration::spectral;
    out.alpha = alpha;
    out.rho = tuning.rho;
    out.r = tuning.r;
    out.t_hat = test_statistic(f);
    out.threshold = spectral_threshold(spectrum, tuning.rho, alpha, points.n);
    out.reject = out.t_hat > *out.threshold;
    return out;
}

/// Permutation p-value with the add-one convention:
/// p = (1 + #{b : T_b >= T_obs}) / (n_perm + 1). Permutations shuffle y over
/// the fixed design and graph; replicate b draws its own stream (seed, b).
inline GofTestResult gof_test_permutation(const PointCloud& points, const std::vector<double>& y,
                                          const TuningSpec& tuning, const KernelSpec& kernel,
                                          double alpha, int n_perm, std::uint64_t seed,
                                          int threads = 0, const BuildOptions& build_opts = {}) {
    if (n_perm < 99) throw input_error("gof_test_permutation: need n_perm >= 99");
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw input_error("gof_test_permutation: alpha in (0,1)");
    SmoothingFit observed = fit(points, y, tuning, kernel, build_opts);
    const double t_obs = test_statistic(observed);
    const auto graph = observed.graph;

    std::vector<std::uint8_t> exceed(static_cast<std::size_t>(n_perm), 0);
    parallel_for(static_cast<std::size_t>(n_perm), threads, [&](std::size_t b) {
        std::mt19937_64 rng = make_stream(seed, "perm", b);
        std::vector<double> yp = y;
        for (std::size_t i = yp.size() - 1; i > 0; --i) {
            std::uniform_int_distribution<std::size_t> pick(0, i);
            std::swap(yp[i], yp[pick(rng)]);
        }
        auto [fp, rep] = solve_smoothing_system(*graph, yp, tuning.rho, tuning.solver_tol,
                                                tuning.solver_max_iter);
        if (!rep.converged) throw solver_error("gof_test_permutation: permuted solve failed");
        exceed[b] = test_statistic(fp) >= t_obs ? 1 : 0;
    });
    const int count = std::accumulate(exceed.begin(), exceed.end(), 0);

    GofTestResult out;
    out.calibration = Calibration::permutation;
    out.alpha = alpha;
    out.rho = tuning.rho;
    out.r = tuning.r;
    out.t_hat = t_obs;
    out.p_value = (1.0 + count) / (static_cast<double>(n_perm) + 1.0);
    out.reject = *out.p_value <= alpha;
    return out;
}

}  // namespace lapsmooth
