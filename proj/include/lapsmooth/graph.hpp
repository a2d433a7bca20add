#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "lapsmooth/common.hpp"
#include "lapsmooth/kdtree.hpp"
#include "lapsmooth/kernel.hpp"
#include "lapsmooth/parallel.hpp"

namespace lapsmooth {

// Kernel-weighted radius-neighborhood graph G_{n,r}. Weights are
// W_ij = K(|X_i - X_j| / r) for distinct i, j with |X_i - X_j| <= r, stored
// symmetrically in compressed-row layout (each unordered pair appears in both
// rows with the identical weight). Self-loops are excluded: they cancel in
// the penalty (f_i - f_j)^2 and would only inflate degrees.
//
// A built graph is immutable; concurrent readers are safe.
struct NeighborhoodGraph {
    std::size_t n = 0;
    double radius = 0.0;
    KernelSpec kernel;
    std::vector<std::size_t> row_ptr;   // n + 1
    std::vector<std::uint32_t> col;     // 2 * edge_count
    std::vector<double> weight;         // aligned with col
    std::vector<double> degree;         // D_ii = sum_j W_ij
    std::size_t edge_count = 0;         // unordered pairs with positive weight
};

struct GraphDiagnostics {
    double max_degree = 0.0;
    bool connected = false;
    std::size_t edge_count = 0;
    std::vector<std::pair<std::string, double>> seminorm_samples;  // (function id, f'Lf)
};

struct BuildOptions {
    bool force_exhaustive = false;  // test hook; production picks by size
    int threads = 0;
};

namespace detail {

inline constexpr std::size_t kExhaustiveCutoff = 256;

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    std::uint32_t find(std::uint32_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace detail

inline NeighborhoodGraph build_graph(const PointCloud& pts, double r, const KernelSpec& kernel,
                                     const BuildOptions& opts = {}) {
    pts.validate();
    if (!(r > 0.0)) throw input_error("build_graph: radius must be positive");
    if (kernel.dim() != pts.d)
        throw input_error("build_graph: kernel dimension " + std::to_string(kernel.dim()) +
                          " does not match point dimension " + std::to_string(pts.d));

    const std::size_t n = pts.n;
    const double r2 = r * r;

    // Half-edges i < j, found per row. Weight evaluated once per pair and
    // mirrored, so W_ij == W_ji holds exactly.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> upper(n);

    const bool exhaustive = opts.force_exhaustive || n < detail::kExhaustiveCutoff;
    if (exhaustive) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d2 = squared_distance(pts, i, j);
                if (d2 <= r2) {
                    const double w = kernel(std::sqrt(d2) / r);
                    if (w > 0.0) upper[i].emplace_back(static_cast<std::uint32_t>(j), w);
                }
            }
        }
    } else {
        KdTree tree(pts);
        parallel_for(n, opts.threads, [&](std::size_t i) {
            std::vector<std::uint32_t> hits;
            tree.radius_query(i, r, hits);
            auto& row = upper[i];
            for (std::uint32_t j : hits) {
                if (j <= i) continue;
                const double d2 = squared_distance(pts, i, j);
                const double w = kernel(std::sqrt(d2) / r);
                if (w > 0.0) row.emplace_back(j, w);
            }
            std::sort(row.begin(), row.end());
        });
    }

    NeighborhoodGraph g{.n = n, .radius = r, .kernel = kernel};
    std::vector<std::size_t> count(n, 0);
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        pairs += upper[i].size();
        count[i] += upper[i].size();
        for (const auto& [j, w] : upper[i]) count[j] += 1;
    }
    g.edge_count = pairs;
    g.row_ptr.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) g.row_ptr[i + 1] = g.row_ptr[i] + count[i];
    g.col.resize(2 * pairs);
    g.weight.resize(2 * pairs);

    std::vector<std::size_t> cursor(g.row_ptr.begin(), g.row_ptr.end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [j, w] : upper[i]) {
            g.col[cursor[i]] = j;
            g.weight[cursor[i]] = w;
            ++cursor[i];
            g.col[cursor[j]] = static_cast<std::uint32_t>(i);
            g.weight[cursor[j]] = w;
            ++cursor[j];
        }
    }
    // Rows land already sorted: row i receives mirrored entries from i' < i in
    // ascending order, then its own upper entries with ascending j > i.

    g.degree.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = g.row_ptr[i]; k < g.row_ptr[i + 1]; ++k) s += g.weight[k];
        g.degree[i] = s;
    }
    return g;
}

/// f'Lf = (1/2) sum_ij W_ij (f_i - f_j)^2, summed edge-wise over the sparse
/// structure. Nonnegative by construction; zero exactly on constants.
inline double laplacian_quadratic_form(const NeighborhoodGraph& g, const std::vector<double>& f) {
    if (f.size() != g.n) throw input_error("laplacian_quadratic_form: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t k = g.row_ptr[i]; k < g.row_ptr[i + 1]; ++k) {
            const double diff = f[i] - f[g.col[k]];
            s += g.weight[k] * diff * diff;
        }
    }
    return 0.5 * s;
}

/// out = (D - W) f, in edge-difference form (Lf)_i = sum_j W_ij (f_i - f_j).
/// This form annihilates constant vectors exactly, which keeps the solver
/// stable even when rho * |L| dwarfs the identity.
inline void apply_laplacian(const NeighborhoodGraph& g, const std::vector<double>& f, std::vector<double>& out) {
    if (f.size() != g.n) throw input_error("apply_laplacian: length mismatch");
    out.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        double s = 0.0;
        for (std::size_t k = g.row_ptr[i]; k < g.row_ptr[i + 1]; ++k)
            s += g.weight[k] * (f[i] - f[g.col[k]]);
        out[i] = s;
    }
}

inline std::vector<double> apply_laplacian(const NeighborhoodGraph& g, const std::vector<double>& f) {
    std::vector<double> out;
    apply_laplacian(g, f, out);
    return out;
}

inline GraphDiagnostics graph_diagnostics(const NeighborhoodGraph& g) {
    GraphDiagnostics diag;
    diag.edge_count = g.edge_count;
    for (double d : g.degree) diag.max_degree = std::max(diag.max_degree, d);
    detail::UnionFind uf(g.n);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t k = g.row_ptr[i]; k < g.row_ptr[i + 1]; ++k)
            if (g.weight[k] > 0.0) uf.unite(static_cast<std::uint32_t>(i), g.col[k]);
    diag.connected = true;
    const std::uint32_t root = uf.find(0);
    for (std::size_t i = 1; i < g.n; ++i) {
        if (uf.find(static_cast<std::uint32_t>(i)) != root) {
            diag.connected = false;
            break;
        }
    }
    return diag;
}

}  // namespace lapsmooth
