#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lapsmooth/common.hpp"
#include "lapsmooth/quadrature.hpp"
#include "lapsmooth/rng.hpp"

namespace lapsmooth {

enum class DesignFamily { uniform_cube, lipschitz_rejection, circle, swiss_roll };
enum class CubeDomain { unit, symmetric };  // [0,1]^d or [-1,1]^d

inline const char* to_string(DesignFamily f) {
    switch (f) {
        case DesignFamily::uniform_cube: return "uniform-cube";
        case DesignFamily::lipschitz_rejection: return "lipschitz-rejection";
        case DesignFamily::circle: return "circle";
        case DesignFamily::swiss_roll: return "swiss-roll";
    }
    return "?";
}

struct DesignSpec {
    DesignFamily family = DesignFamily::uniform_cube;
    int d = 1;                              // ambient dimension
    int m = 0;                              // intrinsic dimension; 0 = full-dimensional
    CubeDomain domain = CubeDomain::unit;   // cube families only
    double p_min = 1.0;
    double p_max = 1.0;

    static DesignSpec uniform(int d, CubeDomain domain = CubeDomain::unit) {
        DesignSpec s;
        s.family = DesignFamily::uniform_cube;
        s.d = d;
        s.domain = domain;
        const double density = domain == CubeDomain::unit ? 1.0 : std::pow(0.5, d);
        s.p_min = s.p_max = density;
        return s;
    }

    // p(x) proportional to 1 + x_1/2 on [0,1]^d: Lipschitz, bounded away from
    // 0 and infinity, sampled by rejection against the uniform envelope.
    static DesignSpec lipschitz(int d) {
        DesignSpec s;
        s.family = DesignFamily::lipschitz_rejection;
        s.d = d;
        s.p_min = 1.0 / 1.25;
        s.p_max = 1.5 / 1.25;
        return s;
    }

    static DesignSpec circle_in(int d) {
        if (d < 2) throw input_error("circle design needs ambient dimension >= 2");
        DesignSpec s;
        s.family = DesignFamily::circle;
        s.d = d;
        s.m = 1;
        s.p_min = s.p_max = 1.0 / (2.0 * kPi);  // w.r.t. arc length
        return s;
    }

    static DesignSpec swiss_roll() {
        DesignSpec s;
        s.family = DesignFamily::swiss_roll;
        s.d = 3;
        s.m = 2;
        s.p_min = 0.05;  // induced surface density bounds for the parametrization below
        s.p_max = 0.2;
        return s;
    }
};

enum class SignalFamily { cosine_product, single_coordinate_linear, zero, custom };

struct SignalSpec {
    SignalFamily family = SignalFamily::cosine_product;
    double amplitude = 1.0;
    double a = 1.0;  // frequency of the cosine product
    int d = 1;
    std::function<double(const double*, int)> custom;  // custom family only

    static SignalSpec cosine(int d, double a, double amplitude = 1.0) {
        SignalSpec s;
        s.family = SignalFamily::cosine_product;
        s.d = d;
        s.a = a;
        s.amplitude = amplitude;
        return s;
    }
    static SignalSpec linear(int d, double amplitude = 1.0) {
        SignalSpec s;
        s.family = SignalFamily::single_coordinate_linear;
        s.d = d;
        s.amplitude = amplitude;
        return s;
    }
    static SignalSpec none(int d) {
        SignalSpec s;
        s.family = SignalFamily::zero;
        s.d = d;
        s.amplitude = 0.0;
        return s;
    }
};

struct Dataset {
    PointCloud points;
    std::vector<double> y;
    std::vector<double> f0_at_points;
    double noise_sd = 1.0;
};

struct RejectionStats {
    std::uint64_t proposals = 0;
    std::uint64_t accepts = 0;
};

inline PointCloud sample_design(const DesignSpec& spec, std::size_t n, std::mt19937_64& rng,
                                RejectionStats* stats = nullptr) {
    if (n < 2) throw input_error("sample_design: need n >= 2");
    PointCloud pts;
    pts.n = n;
    pts.d = spec.d;
    pts.intrinsic_dim = spec.m;
    pts.coords.resize(n * static_cast<std::size_t>(spec.d), 0.0);
    switch (spec.family) {
        case DesignFamily::uniform_cube: {
            const double lo = spec.domain == CubeDomain::unit ? 0.0 : -1.0;
            const double hi = 1.0;
            std::uniform_real_distribution<double> u(lo, hi);
            for (auto& c : pts.coords) c = u(rng);
            break;
        }
        case DesignFamily::lipschitz_rejection: {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            RejectionStats local;
            for (std::size_t i = 0; i < n; ++i) {
                for (;;) {
                    ++local.proposals;
                    if (local.proposals > 200 &&
                        static_cast<double>(local.accepts) < 0.01 * static_cast<double>(local.proposals))
                        throw input_error("sample_design: rejection acceptance rate below 1%");
                    double x0 = u(rng);
                    const double accept_p = (1.0 + 0.5 * x0) / 1.5;
                    if (u(rng) <= accept_p) {
                        ++local.accepts;
                        pts.coords[i * static_cast<std::size_t>(spec.d)] = x0;
                        for (int k = 1; k < spec.d; ++k)
                            pts.coords[i * static_cast<std::size_t>(spec.d) + static_cast<std::size_t>(k)] = u(rng);
                        break;
                    }
                }
            }
            if (stats != nullptr) *stats = local;
            break;
        }
        case DesignFamily::circle: {
            std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
            for (std::size_t i = 0; i < n; ++i) {
                const double theta = u(rng);
                pts.coords[i * static_cast<std::size_t>(spec.d)] = std::cos(theta);
                pts.coords[i * static_cast<std::size_t>(spec.d) + 1] = std::sin(theta);
            }
            break;
        }
        case DesignFamily::swiss_roll: {
            // (t cos t, h, t sin t), t in [1.5 pi, 4.5 pi], h in [0, 10];
            // uniform w.r.t. surface area needs t-density ~ sqrt(1 + t^2).
            const double t_lo = 1.5 * kPi, t_hi = 4.5 * kPi;
            const double env = std::sqrt(1.0 + t_hi * t_hi);
            std::uniform_real_distribution<double> ut(t_lo, t_hi), uh(0.0, 10.0), u01(0.0, 1.0);
            RejectionStats local;
            for (std::size_t i = 0; i < n; ++i) {
                double t = 0.0;
                for (;;) {
                    ++local.proposals;
                    t = ut(rng);
                    if (u01(rng) <= std::sqrt(1.0 + t * t) / env) {
                        ++local.accepts;
                        break;
                    }
                }
                const double h = uh(rng);
                pts.coords[i * 3] = t * std::cos(t);
                pts.coords[i * 3 + 1] = h;
                pts.coords[i * 3 + 2] = t * std::sin(t);
            }
            if (stats != nullptr) *stats = local;
            break;
        }
    }
    pts.validate();
    return pts;
}

inline PointCloud sample_design(const DesignSpec& spec, std::size_t n, std::uint64_t seed,
                                RejectionStats* stats = nullptr) {
    std::mt19937_64 rng = make_stream(seed, "design");
    return sample_design(spec, n, rng, stats);
}

inline double evaluate_signal_at(const SignalSpec& spec, const double* x, int d) {
    switch (spec.family) {
        case SignalFamily::cosine_product: {
            double v = spec.amplitude;
            for (int k = 0; k < d; ++k) v *= std::cos(spec.a * kPi * x[k]);
            return v;
        }
        case SignalFamily::single_coordinate_linear:
            return spec.amplitude * x[0];
        case SignalFamily::zero:
            return 0.0;
        case SignalFamily::custom:
            if (!spec.custom) throw input_error("evaluate_signal: custom family without function");
            return spec.amplitude * spec.custom(x, d);
    }
    return 0.0;
}

inline std::vector<double> evaluate_signal(const SignalSpec& spec, const PointCloud& pts) {
    if (spec.d != pts.d) throw input_error("evaluate_signal: dimension mismatch");
    std::vector<double> out(pts.n);
    for (std::size_t i = 0; i < pts.n; ++i) out[i] = evaluate_signal_at(spec, pts.row(i), pts.d);
    return out;
}

/// Y_i = f0(X_i) + eps_i with standard normal noise. The design and noise
/// streams are split so replicated pipelines can vary one without the other.
inline Dataset make_dataset(const DesignSpec& design, const SignalSpec& signal, std::size_t n,
                            std::uint64_t seed) {
    Dataset ds;
    std::mt19937_64 design_rng = make_stream(seed, "design");
    ds.points = sample_design(design, n, design_rng);
    ds.f0_at_points = evaluate_signal(signal, ds.points);
    std::mt19937_64 noise_rng = make_stream(seed, "noise");
    ds.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) ds.y[i] = ds.f0_at_points[i] + normal(noise_rng);
    return ds;
}

// |f0|^2_{H^1} over the design's domain. Cube cosine products separate into
// 1-d integrals with closed forms; the circle reduces to a theta quadrature.
inline double sobolev_seminorm_oracle(const SignalSpec& signal, const DesignSpec& design) {
    const double A = signal.amplitude;
    if (signal.family == SignalFamily::zero || A == 0.0) return 0.0;

    if (design.family == DesignFamily::uniform_cube) {
        const double lo = design.domain == CubeDomain::unit ? 0.0 : -1.0;
        const double len = 1.0 - lo;
        if (signal.family == SignalFamily::single_coordinate_linear)
            return A * A * std::pow(len, design.d);  // |grad| = A everywhere
        if (signal.family == SignalFamily::cosine_product) {
            const double w = signal.a * kPi;
            // int sin^2(w x) dx and int cos^2(w x) dx over the domain edge
            auto int_sin2 = [&](void) {
                return 0.5 * len - (std::sin(2.0 * w * 1.0) - std::sin(2.0 * w * lo)) / (4.0 * w);
            };
            auto int_cos2 = [&](void) {
                return 0.5 * len + (std::sin(2.0 * w * 1.0) - std::sin(2.0 * w * lo)) / (4.0 * w);
            };
            const double s2 = int_sin2(), c2 = int_cos2();
            double total = 0.0;
            for (int j = 0; j < design.d; ++j)
                total += w * w * s2 * std::pow(c2, design.d - 1);
            return A * A * total;
        }
    }
    if (design.family == DesignFamily::circle) {
        // arc-length parametrization x(theta) = (cos, sin, 0, ...)
        auto df_dtheta = [&](double th) {
            const double c = std::cos(th), s = std::sin(th);
            if (signal.family == SignalFamily::single_coordinate_linear) return -A * s;
            if (signal.family == SignalFamily::cosine_product) {
                const double w = signal.a * kPi;
                double tail = 1.0;  // cos(w * 0) factors for ambient dims > 2
                return A * w * (s * std::sin(w * c) * std::cos(w * s) -
                                c * std::cos(w * c) * std::sin(w * s)) * tail;
            }
            throw input_error("sobolev_seminorm_oracle: unsupported signal family");
        };
        return integrate_adaptive([&](double th) { const double g = df_dtheta(th); return g * g; },
                                  0.0, 2.0 * kPi, 1e-8);
    }
    throw input_error("sobolev_seminorm_oracle: unsupported design/signal combination");
}

/// Squared L2 norm of the signal over the design's domain (used to express
/// test separations epsilon = |f0|_{L2}).
inline double l2_norm_sq_oracle(const SignalSpec& signal, const DesignSpec& design) {
    const double A = signal.amplitude;
    if (signal.family == SignalFamily::zero || A == 0.0) return 0.0;
    if (design.family == DesignFamily::uniform_cube) {
        const double lo = design.domain == CubeDomain::unit ? 0.0 : -1.0;
        const double len = 1.0 - lo;
        if (signal.family == SignalFamily::single_coordinate_linear)
            return A * A * (1.0 - lo * lo * lo) / 3.0 * std::pow(len, design.d - 1);
        if (signal.family == SignalFamily::cosine_product) {
            const double w = signal.a * kPi;
            const double c2 = 0.5 * len + (std::sin(2.0 * w) - std::sin(2.0 * w * lo)) / (4.0 * w);
            return A * A * std::pow(c2, design.d);
        }
    }
    if (design.family == DesignFamily::circle) {
        auto f = [&](double th) {
            const double x[2] = {std::cos(th), std::sin(th)};
            SignalSpec s2 = signal;
            s2.d = 2;
            const double v = evaluate_signal_at(s2, x, 2);
            return v * v;
        };
        return integrate_adaptive(f, 0.0, 2.0 * kPi, 1e-8);
    }
    throw input_error("l2_norm_sq_oracle: unsupported design/signal combination");
}

}  // namespace lapsmooth
