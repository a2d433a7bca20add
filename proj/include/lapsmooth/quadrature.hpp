#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "lapsmooth/common.hpp"

namespace lapsmooth {

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m) {
    std::vector<double> x(static_cast<std::size_t>(m)), w(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = z;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return {std::move(x), std::move(w)};
}

/// Integrate f over [a, b] with an m-point Gauss-Legendre rule.
inline double integrate_gl(const std::function<double(double)>& f, double a, double b, int m = 64) {
    const auto [x, w] = gauss_legendre(m);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(mid + half * x[i]);
    return s * half;
}

/// Adaptive Simpson; used where a fixed rule has no a-priori accuracy claim.
inline double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                 double rel_tol = 1e-10, int max_depth = 40) {
    struct Rec {
        const std::function<double(double)>& f;
        double rel_tol;
        int max_depth;
        double simpson(double lo, double hi, double flo, double fmid, double fhi) const {
            return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        }
        double go(double lo, double hi, double flo, double fmid, double fhi, double whole, int depth) const {
            const double mid = 0.5 * (lo + hi);
            const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
            const double flm = f(lmid), frm = f(rmid);
            const double left = simpson(lo, mid, flo, flm, fmid);
            const double right = simpson(mid, hi, fmid, frm, fhi);
            const double delta = left + right - whole;
            if (depth >= max_depth || std::abs(delta) <= 15.0 * rel_tol * (std::abs(left + right) + 1e-300))
                return left + right + delta / 15.0;
            return go(lo, mid, flo, flm, fmid, left, depth + 1) + go(mid, hi, fmid, frm, fhi, right, depth + 1);
        }
    } rec{f, rel_tol, max_depth};
    const double mid = 0.5 * (a + b);
    const double fa = f(a), fm = f(mid), fb = f(b);
    return rec.go(a, b, fa, fm, fb, rec.simpson(a, b, fa, fm, fb), 0);
}

}  // namespace lapsmooth
