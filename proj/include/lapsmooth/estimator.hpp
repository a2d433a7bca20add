#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lapsmooth/graph.hpp"
#include "lapsmooth/kdtree.hpp"
#include "lapsmooth/solver.hpp"
#include "lapsmooth/spectrum.hpp"

namespace lapsmooth {

enum class TuningMode { theorem_rule, fixed, oracle_grid };
enum class TuningTask { estimation, testing };
enum class RadiusRule { connectivity, explicit_value };

// Resolved tuning parameters. The theorem rules pick rho from (n, dim, M);
// the radius default is the connectivity rule r = C0 (log n / n)^(1/dim).
struct TuningSpec {
    TuningMode mode = TuningMode::theorem_rule;
    TuningTask task = TuningTask::estimation;
    double M = 1.0;
    int dim_used = 1;  // d, or the intrinsic m under the manifold hypothesis
    double rho = 0.0;
    double r = 0.0;
    RadiusRule r_rule = RadiusRule::connectivity;
    double connectivity_c0 = 2.0;
    bool radius_warning = false;  // r above the theorem range's upper endpoint
    double solver_tol = 1e-10;
    int solver_max_iter = 20000;
};

/// rho prescribed by the theorems, given the radius actually in use.
inline double theorem_rho(std::size_t n, int dim, double r, double M, TuningTask task) {
    const double nn = static_cast<double>(n);
    if (task == TuningTask::testing)
        return 1.0 / (nn * std::pow(r, dim + 2)) * std::pow(nn, -4.0 / (4 + dim)) *
               std::pow(M, -8.0 / (4 + dim));
    if (dim < 4)
        return std::pow(M, -4.0 / (2 + dim)) / (nn * std::pow(r, dim + 2)) *
               std::pow(nn, -2.0 / (2 + dim));
    if (dim == 4)
        return std::pow(M, -2.0 / 3.0) / (nn * std::pow(r, 6)) * std::cbrt(std::log(nn) / nn);
    return std::pow(M, -2.0 / 3.0) / (nn * std::pow(r, 2 + dim)) * std::pow(nn, -4.0 / (3.0 * dim));
}

/// Upper endpoint of the admissible radius range (estimation (R1)/(R4),
/// testing (R2)/(R5)), up to the theorems' unspecified constants.
inline double radius_upper_endpoint(std::size_t n, int dim, double M, TuningTask task) {
    const double nn = static_cast<double>(n);
    if (task == TuningTask::estimation)
        return std::pow(M, (dim - 4.0) / (4.0 + 2.0 * dim)) * std::pow(nn, -3.0 / (4.0 + 2.0 * dim));
    return std::pow(M, (dim - 8.0) / (8.0 + 2.0 * dim)) * std::pow(nn, (dim - 20.0) / (32.0 + 8.0 * dim));
}

struct TuningOverrides {
    std::optional<double> rho;
    std::optional<double> r;
    double connectivity_c0 = 2.0;
    double solver_tol = 1e-10;
};

inline TuningSpec resolve_tuning(std::size_t n, int dim_used, double M, TuningTask task,
                                 const TuningOverrides& overrides = {}) {
    if (n < 2) throw input_error("resolve_tuning: need n >= 2");
    if (!(M > 0.0)) throw input_error("resolve_tuning: need M > 0");
    if (dim_used < 1) throw input_error("resolve_tuning: need dim_used >= 1");
    TuningSpec spec;
    spec.task = task;
    spec.M = M;
    spec.dim_used = dim_used;
    spec.connectivity_c0 = overrides.connectivity_c0;
    spec.solver_tol = overrides.solver_tol;
    if (overrides.r) {
        spec.r = *overrides.r;
        spec.r_rule = RadiusRule::explicit_value;
    } else {
        spec.r = overrides.connectivity_c0 *
                 std::pow(std::log(static_cast<double>(n)) / static_cast<double>(n), 1.0 / dim_used);
        spec.r_rule = RadiusRule::connectivity;
    }
    if (!(spec.r > 0.0)) throw input_error("resolve_tuning: resolved radius must be positive");
    if (overrides.rho) {
        spec.rho = *overrides.rho;
        spec.mode = TuningMode::fixed;
        if (spec.rho < 0.0) throw input_error("resolve_tuning: rho must be >= 0");
    } else {
        spec.rho = theorem_rho(n, dim_used, spec.r, M, task);
        spec.mode = TuningMode::theorem_rule;
    }
    spec.radius_warning = spec.r > radius_upper_endpoint(n, dim_used, M, task);
    return spec;
}

struct SmoothingFit {
    std::vector<double> f_hat;
    TuningSpec tuning;
    SolveReport solve;
    std::shared_ptr<const NeighborhoodGraph> graph;
    std::optional<double> in_sample_mse;  // filled when the truth is known
};

/// Solve (I + rho L) f = y on an existing graph. Throws solver_error if the
/// solve does not converge or the first-order optimality check fails.
inline SmoothingFit fit_on_graph(std::shared_ptr<const NeighborhoodGraph> graph,
                                 const std::vector<double>& y, TuningSpec tuning) {
    auto [f, report] = solve_smoothing_system(*graph, y, tuning.rho, tuning.solver_tol,
                                              tuning.solver_max_iter);
    if (!report.converged)
        throw solver_error("fit: solver did not converge (residual " +
                           std::to_string(report.final_residual) + ")");
    // gradient of the objective: 2 (f - y) + 2 rho L f
    double y_inf = 0.0;
    for (double v : y) y_inf = std::max(y_inf, std::abs(v));
    std::vector<double> lap = apply_laplacian(*graph, f);
    double grad_inf = 0.0;
    for (std::size_t i = 0; i < graph->n; ++i)
        grad_inf = std::max(grad_inf, std::abs(2.0 * (f[i] - y[i]) + 2.0 * tuning.rho * lap[i]));
    if (y_inf > 0.0 && grad_inf > 1e-6 * y_inf &&
        grad_inf > 2.0 * report.residual_floor * std::sqrt(static_cast<double>(graph->n)) * y_inf)
        throw solver_error("fit: optimality check failed, |grad|_inf = " + std::to_string(grad_inf));
    SmoothingFit out;
    out.f_hat = std::move(f);
    out.tuning = tuning;
    out.solve = std::move(report);
    out.graph = std::move(graph);
    return out;
}

inline SmoothingFit fit(const PointCloud& points, const std::vector<double>& y,
                        const TuningSpec& tuning, const KernelSpec& kernel,
                        const BuildOptions& build_opts = {}) {
    if (y.size() != points.n) throw input_error("fit: response length mismatch");
    auto graph = std::make_shared<NeighborhoodGraph>(build_graph(points, tuning.r, kernel, build_opts));
    return fit_on_graph(std::move(graph), y, tuning);
}

/// In-sample mean squared error (1/n) sum (f_hat_i - f0(X_i))^2.
inline double in_sample_mse(const std::vector<double>& f_hat, const std::vector<double>& f0_at_points) {
    if (f_hat.size() != f0_at_points.size()) throw input_error("in_sample_mse: length mismatch");
    if (f_hat.empty()) throw input_error("in_sample_mse: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < f_hat.size(); ++i) {
        const double d = f_hat[i] - f0_at_points[i];
        s += d * d;
    }
    return s / static_cast<double>(f_hat.size());
}

inline double in_sample_mse(const SmoothingFit& fit_result, const std::vector<double>& f0_at_points) {
    return in_sample_mse(fit_result.f_hat, f0_at_points);
}

// Piecewise-constant extension over the Voronoi tessellation of the design,
// evaluated by nearest-neighbor lookup (the definitions coincide). Ties go to
// the lowest design index.
class VoronoiExtension {
public:
    VoronoiExtension(PointCloud anchors, std::vector<double> values)
        : anchors_(std::make_unique<PointCloud>(std::move(anchors))), values_(std::move(values)) {
        if (values_.size() != anchors_->n) throw input_error("VoronoiExtension: size mismatch");
        if (values_.empty()) throw input_error("VoronoiExtension: empty fit");
        index_ = std::make_unique<KdTree>(*anchors_);
    }

    double evaluate(const double* x) const { return values_[index_->nearest(x)]; }

    double evaluate(const std::vector<double>& x) const {
        if (x.size() != static_cast<std::size_t>(anchors_->d))
            throw input_error("VoronoiExtension::evaluate: dimension mismatch");
        return evaluate(x.data());
    }

    const PointCloud& anchors() const { return *anchors_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::unique_ptr<PointCloud> anchors_;
    std::vector<double> values_;
    std::unique_ptr<KdTree> index_;
};

inline VoronoiExtension extend_voronoi(const SmoothingFit& fit_result, const PointCloud& points) {
    if (fit_result.f_hat.empty()) throw input_error("extend_voronoi: empty fit");
    return VoronoiExtension(points, fit_result.f_hat);
}

struct BiasVarianceBounds {
    double bias_bound = 0.0;      // (2 rho / n) f0' L f0
    double variance_bound = 0.0;  // (10 / n) sum_k (rho lambda_k + 1)^-2
    double probability = 0.0;     // 1 - exp(-sum_k (rho lambda_k + 1)^-2)
};

inline BiasVarianceBounds bias_variance_certificate(const SmoothingFit& fit_result,
                                                    const std::vector<double>& f0_at_points,
                                                    const SpectrumResult& spectrum) {
    if (spectrum.mode != SpectrumMode::full_dense || spectrum.eigenvalues.size() != fit_result.graph->n)
        throw capacity_error("bias_variance_certificate: full spectrum required");
    const double n = static_cast<double>(fit_result.graph->n);
    const double rho = fit_result.tuning.rho;
    BiasVarianceBounds out;
    out.bias_bound = 2.0 * rho / n * laplacian_quadratic_form(*fit_result.graph, f0_at_points);
    double s2 = 0.0;
    for (double lam : spectrum.eigenvalues) {
        const double c = 1.0 / (rho * lam + 1.0);
        s2 += c * c;
    }
    out.variance_bound = 10.0 / n * s2;
    out.probability = 1.0 - std::exp(-s2);
    return out;
}

}  // namespace lapsmooth
