#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "lapsmooth/graph.hpp"
#include "lapsmooth/rng.hpp"

namespace lapsmooth {

enum class SpectrumMode { full_dense, partial_iterative };

struct SpectrumResult {
    std::vector<double> eigenvalues;  // ascending
    SpectrumMode mode = SpectrumMode::full_dense;
    Eigen::MatrixXd eigenvectors;     // retained in full mode only, column k <-> eigenvalue k
};

inline constexpr std::size_t kDenseSpectrumCap = 4000;

inline Eigen::MatrixXd dense_laplacian(const NeighborhoodGraph& g) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.n), static_cast<Eigen::Index>(g.n));
    for (std::size_t i = 0; i < g.n; ++i) {
        L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = g.degree[i];
        for (std::size_t k = g.row_ptr[i]; k < g.row_ptr[i + 1]; ++k)
            L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(g.col[k])) = -g.weight[k];
    }
    return L;
}

/// Dense symmetric eigendecomposition of L. The threshold formula needs every
/// eigenvalue, which caps n; larger problems go through partial_spectrum or
/// permutation calibration.
inline SpectrumResult full_spectrum(const NeighborhoodGraph& g, std::size_t dense_cap = kDenseSpectrumCap) {
    if (g.n > dense_cap)
        throw capacity_error("full_spectrum: n=" + std::to_string(g.n) + " exceeds dense cap " +
                             std::to_string(dense_cap) +
                             "; use partial_spectrum or permutation calibration");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_laplacian(g));
    if (es.info() != Eigen::Success) throw solver_error("full_spectrum: eigendecomposition failed");
    SpectrumResult out;
    out.mode = SpectrumMode::full_dense;
    out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + g.n);
    out.eigenvectors = es.eigenvectors();
    return out;
}

enum class SpectrumEnd { smallest, largest };

struct lanczos_error : solver_error {
    lanczos_error(const std::string& msg, SpectrumResult partial_result)
        : solver_error(msg), partial(std::move(partial_result)) {}
    SpectrumResult partial;
};

// Lanczos with full reorthogonalization on the matrix-free Laplacian. Not
// restarted: desk-scale n keeps the stored basis small and robustness matters
// more than memory.
inline SpectrumResult partial_spectrum(const NeighborhoodGraph& g, std::size_t k, SpectrumEnd which,
                                       std::size_t max_steps = 0) {
    if (k < 1 || k >= g.n) throw input_error("partial_spectrum: need 1 <= k < n");
    if (k > 200) throw input_error("partial_spectrum: k capped at 200");
    const std::size_t n = g.n;
    if (max_steps == 0) max_steps = std::min(n, std::max<std::size_t>(4 * k + 40, 120));

    double max_degree = 0.0;
    for (double d : g.degree) max_degree = std::max(max_degree, d);
    const double scale = std::max(1.0, 2.0 * max_degree);  // |L|_2 <= 2 max degree
    const double resid_tol = 1e-8 * scale;

    std::mt19937_64 rng = make_stream(0x1a2cf5u, "lanczos");
    std::vector<std::vector<double>> basis;  // v_0 .. v_m
    std::vector<double> alpha, beta;

    auto normalize = [&](std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        s = std::sqrt(s);
        if (s > 0) for (double& x : v) x /= s;
        return s;
    };
    auto reorthogonalize = [&](std::vector<double>& w) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& v : basis) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += v[i] * w[i];
                for (std::size_t i = 0; i < n; ++i) w[i] -= dot * v[i];
            }
        }
    };

    std::vector<double> v(n);
    for (auto& x : v) x = normal(rng);
    normalize(v);
    basis.push_back(v);

    std::vector<double> w(n);
    SpectrumResult out;
    out.mode = SpectrumMode::partial_iterative;

    for (std::size_t step = 0; step < max_steps; ++step) {
        apply_laplacian(g, basis.back(), w);
        double a = 0.0;
        for (std::size_t i = 0; i < n; ++i) a += basis.back()[i] * w[i];
        alpha.push_back(a);
        reorthogonalize(w);
        double b = normalize(w);
        if (b <= 1e-13 * scale) {
            // invariant subspace; continue from a fresh direction
            for (auto& x : w) x = normal(rng);
            reorthogonalize(w);
            b = normalize(w);
            if (b == 0.0) break;
            beta.push_back(0.0);
        } else {
            beta.push_back(b);
        }
        basis.push_back(w);

        const std::size_t m = alpha.size();
        if (m < k + 2 && m < n) continue;
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) {
            T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = alpha[i];
            if (i + 1 < m) {
                T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = beta[i];
                T(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = beta[i];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const auto& theta = es.eigenvalues();
        const auto& S = es.eigenvectors();
        const double blast = beta.back();
        bool all_ok = true;
        std::vector<double> vals;
        for (std::size_t j = 0; j < k; ++j) {
            const Eigen::Index idx = (which == SpectrumEnd::smallest)
                                         ? static_cast<Eigen::Index>(j)
                                         : static_cast<Eigen::Index>(m - 1 - j);
            const double resid = std::abs(blast * S(static_cast<Eigen::Index>(m - 1), idx));
            if (resid > resid_tol) {
                all_ok = false;
                break;
            }
            vals.push_back(theta(idx));
        }
        if (all_ok && vals.size() == k) {
            std::sort(vals.begin(), vals.end());
            out.eigenvalues = std::move(vals);
            return out;
        }
        if (m >= n) break;
    }

    // budget exhausted: hand back the best Ritz values we have
    const std::size_t m = alpha.size();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = alpha[i];
        if (i + 1 < m) {
            T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = beta[i];
            T(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = beta[i];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    for (std::size_t j = 0; j < std::min(k, m); ++j) {
        const Eigen::Index idx = (which == SpectrumEnd::smallest)
                                     ? static_cast<Eigen::Index>(j)
                                     : static_cast<Eigen::Index>(m - 1 - j);
        out.eigenvalues.push_back(es.eigenvalues()(idx));
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    throw lanczos_error("partial_spectrum: not converged within iteration budget", std::move(out));
}

}  // namespace lapsmooth
