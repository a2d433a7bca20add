#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "lapsmooth/graph.hpp"

namespace lapsmooth {

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;  // |(I + rho L) f - y|_2 / |y|_2, recomputed at exit
    bool converged = false;
    double residual_floor = 0.0;  // eps * |I + rho L|_inf bound; below this a
                                  // residual certificate is not representable
    std::vector<double> residual_history;  // recursive CG residuals, relative
    std::vector<double> energy_history;    // 1/2 f'Af - y'f; CG decreases this monotonically
};

// Conjugate gradient on v -> v + rho * Lv, matrix-free. The operator is SPD
// for rho >= 0 (L is PSD), with unit lower spectral bound, so |f|_2 <= |y|_2
// throughout. rho = 0 short-circuits to the interpolation f = y.
//
// Convergence: the iteration stops on the recursive residual; converged is
// judged against max(tol, residual_floor) on the true residual. The floor
// matters only for extreme rho where the solution is accurate but the
// residual of any representable vector stays above tol.
inline std::pair<std::vector<double>, SolveReport> solve_smoothing_system(
    const NeighborhoodGraph& g, const std::vector<double>& y, double rho,
    double tol = 1e-10, int max_iter = 20000, const std::vector<double>* warm_start = nullptr) {
    if (y.size() != g.n) throw input_error("solve_smoothing_system: length mismatch");
    if (rho < 0.0) throw input_error("solve_smoothing_system: rho must be >= 0");
    if (!(tol > 0.0)) throw input_error("solve_smoothing_system: tol must be positive");

    SolveReport report;
    double max_degree = 0.0;
    for (double d : g.degree) max_degree = std::max(max_degree, d);
    report.residual_floor =
        4.0 * std::numeric_limits<double>::epsilon() * (1.0 + 2.0 * rho * max_degree);

    if (rho == 0.0) {
        report.converged = true;
        return {y, report};
    }

    const std::size_t n = g.n;
    double ynorm2 = 0.0;
    for (double v : y) ynorm2 += v * v;
    const double ynorm = std::sqrt(ynorm2);
    if (ynorm == 0.0) {
        report.converged = true;
        return {std::vector<double>(n, 0.0), report};
    }

    std::vector<double> x(n, 0.0), ax(n, 0.0), r = y, p = y, lap(n), ap(n);
    if (warm_start != nullptr && warm_start->size() == n) {
        x = *warm_start;
        apply_laplacian(g, x, lap);
        for (std::size_t i = 0; i < n; ++i) {
            ax[i] = x[i] + rho * lap[i];
            r[i] = y[i] - ax[i];
        }
        p = r;
    }
    double rs = 0.0;
    for (double v : r) rs += v * v;
    int it = 0;
    report.residual_history.push_back(std::sqrt(rs) / ynorm);
    {
        double energy0 = 0.0;
        for (std::size_t i = 0; i < n; ++i) energy0 += 0.5 * x[i] * ax[i] - y[i] * x[i];
        report.energy_history.push_back(energy0);
    }
    while (it < max_iter) {
        if (std::sqrt(rs) / ynorm <= tol) break;
        apply_laplacian(g, p, lap);
        for (std::size_t i = 0; i < n; ++i) ap[i] = p[i] + rho * lap[i];
        double pap = 0.0;
        for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
        const double alpha = rs / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            ax[i] += alpha * ap[i];
            r[i] -= alpha * ap[i];
        }
        double rs_next = 0.0;
        for (std::size_t i = 0; i < n; ++i) rs_next += r[i] * r[i];
        const double beta = rs_next / rs;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
        rs = rs_next;
        ++it;
        report.residual_history.push_back(std::sqrt(rs) / ynorm);
        double energy = 0.0;
        for (std::size_t i = 0; i < n; ++i) energy += 0.5 * x[i] * ax[i] - y[i] * x[i];
        report.energy_history.push_back(energy);
    }

    apply_laplacian(g, x, lap);
    double true_res2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ri = x[i] + rho * lap[i] - y[i];
        true_res2 += ri * ri;
    }
    report.iterations = it;
    report.final_residual = std::sqrt(true_res2) / ynorm;
    report.converged = report.final_residual <= std::max(tol, report.residual_floor);
    return {std::move(x), report};
}

}  // namespace lapsmooth
