#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lapsmooth/common.hpp"
#include "lapsmooth/quadrature.hpp"

namespace lapsmooth {

enum class KernelFamily { uniform, truncated_gaussian, epanechnikov_like, custom_table };

inline const char* to_string(KernelFamily f) {
    switch (f) {
        case KernelFamily::uniform: return "uniform";
        case KernelFamily::truncated_gaussian: return "truncated-gaussian";
        case KernelFamily::epanechnikov_like: return "epanechnikov-like";
        case KernelFamily::custom_table: return "custom-table";
    }
    return "?";
}

inline KernelFamily kernel_family_from_string(const std::string& s) {
    if (s == "uniform") return KernelFamily::uniform;
    if (s == "truncated-gaussian" || s == "tgauss") return KernelFamily::truncated_gaussian;
    if (s == "epanechnikov-like" || s == "epan") return KernelFamily::epanechnikov_like;
    if (s == "custom-table") return KernelFamily::custom_table;
    throw input_error("unknown kernel family: " + s);
}

// A radial kernel K nonincreasing on [0,1], zero beyond 1, K(1) > 0, normalized
// so that the d-dimensional integral of K(|z|) is 1. sigma_k is the second
// moment (1/d) * int |x|^2 K(|x|) dx. Both are fixed at construction by a
// 64-point Gauss-Legendre rule on the radial profile.
class KernelSpec {
public:
    static KernelSpec make(KernelFamily family, int dim) {
        if (family == KernelFamily::custom_table)
            throw input_error("KernelSpec::make: custom-table requires a value table");
        return KernelSpec(family, dim, {});
    }

    /// values are samples of the unnormalized profile at equally spaced points on
    /// [0, 1] (first at t=0, last at t=1), interpolated linearly in between.
    static KernelSpec make_table(std::vector<double> values, int dim) {
        if (values.size() < 2) throw input_error("custom-table kernel needs at least 2 samples");
        for (std::size_t i = 0; i + 1 < values.size(); ++i)
            if (values[i + 1] > values[i] + 1e-15)
                throw input_error("custom-table kernel must be nonincreasing on [0,1]");
        if (values.back() <= 0.0) throw input_error("custom-table kernel requires K(1) > 0");
        if (values.front() <= 0.0) throw input_error("custom-table kernel must be positive at 0");
        return KernelSpec(KernelFamily::custom_table, dim, std::move(values));
    }

    double operator()(double t) const {
        if (t > 1.0 || t < 0.0) return 0.0;
        return norm_const_ * profile(t);
    }

    KernelFamily family() const { return family_; }
    int dim() const { return dim_; }
    double normalization() const { return norm_const_; }
    double sigma_k() const { return sigma_k_; }

private:
    KernelSpec(KernelFamily family, int dim, std::vector<double> table)
        : family_(family), dim_(dim), table_(std::move(table)) {
        if (dim < 1) throw input_error("KernelSpec: dimension must be positive");
        const double vd = unit_ball_volume(dim);
        // int_{R^d} K(|z|) dz = d * nu_d * int_0^1 t^{d-1} K(t) dt
        const double mass = dim * vd *
            integrate_gl([this](double t) { return std::pow(t, dim_ - 1) * profile(t); }, 0.0, 1.0);
        if (!(mass > 0.0)) throw input_error("KernelSpec: kernel profile has no mass");
        norm_const_ = 1.0 / mass;
        sigma_k_ = vd * norm_const_ *
            integrate_gl([this](double t) { return std::pow(t, dim_ + 1) * profile(t); }, 0.0, 1.0);
        if (!(sigma_k_ > 0.0) || !std::isfinite(sigma_k_))
            throw input_error("KernelSpec: invalid second moment");
    }

    double profile(double t) const {
        switch (family_) {
            case KernelFamily::uniform:
                return 1.0;
            case KernelFamily::truncated_gaussian:
                return std::exp(-2.0 * t * t);  // bandwidth 1/2, truncated at 1; K(1)/K(0) = e^-2
            case KernelFamily::epanechnikov_like:
                return 1.0 - 0.5 * t * t;  // parabolic but K(1) = 1/2 > 0, per (K1)
            case KernelFamily::custom_table: {
                const double pos = t * static_cast<double>(table_.size() - 1);
                const std::size_t lo = std::min(static_cast<std::size_t>(pos), table_.size() - 2);
                const double frac = pos - static_cast<double>(lo);
                return table_[lo] * (1.0 - frac) + table_[lo + 1] * frac;
            }
        }
        return 0.0;
    }

    KernelFamily family_;
    int dim_;
    std::vector<double> table_;
    double norm_const_ = 0.0;
    double sigma_k_ = 0.0;
};

}  // namespace lapsmooth
