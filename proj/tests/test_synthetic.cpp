#include <catch2/catch_amalgamated.hpp>

#include "lapsmooth/graph.hpp"
#include "lapsmooth/slope.hpp"
#include "lapsmooth/synthetic.hpp"

using namespace lapsmooth;

TEST_CASE("uniform cube sampling") {
    const auto spec = DesignSpec::uniform(1, CubeDomain::symmetric);
    const auto pts = sample_design(spec, 4000, std::uint64_t{5});
    double mean = 0.0;
    for (double c : pts.coords) mean += c;
    mean /= static_cast<double>(pts.n);
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(4000.0));
    for (double c : pts.coords) {
        CHECK(c >= -1.0);
        CHECK(c <= 1.0);
    }
}

TEST_CASE("circle samples live on the unit circle") {
    const auto pts = sample_design(DesignSpec::circle_in(3), 500, std::uint64_t{6});
    CHECK(pts.intrinsic_dim == 1);
    for (std::size_t i = 0; i < pts.n; ++i) {
        double norm = 0.0;
        for (int k = 0; k < 3; ++k) norm += pts.coord(i, k) * pts.coord(i, k);
        CHECK_THAT(std::sqrt(norm), Catch::Matchers::WithinAbs(1.0, 1e-12));
        CHECK(pts.coord(i, 2) == 0.0);
    }
}

TEST_CASE("swiss roll respects its parametrization") {
    const auto pts = sample_design(DesignSpec::swiss_roll(), 300, std::uint64_t{7});
    CHECK(pts.intrinsic_dim == 2);
    for (std::size_t i = 0; i < pts.n; ++i) {
        const double t = std::hypot(pts.coord(i, 0), pts.coord(i, 2));
        CHECK(t >= 1.5 * kPi - 1e-9);
        CHECK(t <= 4.5 * kPi + 1e-9);
        CHECK(pts.coord(i, 1) >= 0.0);
        CHECK(pts.coord(i, 1) <= 10.0);
    }
}

TEST_CASE("Kolmogorov-Smirnov check of the uniform first coordinate") {
    // alpha = 0.01 critical value ~ 1.63 / sqrt(n)
    const std::size_t n = 500;
    const double crit = 1.63 / std::sqrt(static_cast<double>(n));
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto pts = sample_design(DesignSpec::uniform(2), n, 3000 + seed);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = pts.coord(i, 0);
        std::sort(x.begin(), x.end());
        double ks = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = x[i];
            ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - u));
            ks = std::max(ks, std::abs(u - static_cast<double>(i) / n));
        }
        ok += ks < crit ? 1 : 0;
    }
    CHECK(ok >= 95);
}

TEST_CASE("rejection sampler tilts the first coordinate") {
    RejectionStats stats;
    std::mt19937_64 rng = make_stream(8, "design");
    const auto pts = sample_design(DesignSpec::lipschitz(1), 20000, rng, &stats);
    CHECK(stats.proposals > stats.accepts);
    // density (1 + x/2)/1.25 on [0,1] has mean (1/2 + 1/6)/1.25 = 8/15
    double mean = 0.0;
    for (double c : pts.coords) mean += c;
    mean /= static_cast<double>(pts.n);
    CHECK_THAT(mean, Catch::Matchers::WithinAbs(8.0 / 15.0, 0.02));
}

TEST_CASE("signal evaluation") {
    SignalSpec cosine = SignalSpec::cosine(2, 2.0, 1.5);
    const double origin[2] = {0.0, 0.0};
    CHECK(evaluate_signal_at(cosine, origin, 2) == 1.5);  // cos 0 factors
    const double x1[2] = {0.25, 0.5};
    CHECK_THAT(evaluate_signal_at(cosine, x1, 2), Catch::Matchers::WithinAbs(0.0, 1e-14));
    SignalSpec c1 = SignalSpec::cosine(1, 1.0, 1.0);
    const double half = 0.5;
    CHECK_THAT(evaluate_signal_at(c1, &half, 1), Catch::Matchers::WithinAbs(0.0, 1e-15));
    SignalSpec lin = SignalSpec::linear(3, 2.0);
    const double p[3] = {0.3, 9.0, -4.0};
    CHECK(evaluate_signal_at(lin, p, 3) == 0.6);
}

TEST_CASE("datasets are reproducible and consistent") {
    const auto spec = DesignSpec::uniform(2);
    const auto signal = SignalSpec::cosine(2, 2.0);
    const auto a = make_dataset(spec, signal, 200, 99);
    const auto b = make_dataset(spec, signal, 200, 99);
    CHECK(a.points.coords == b.points.coords);  // bit-identical
    CHECK(a.y == b.y);
    CHECK(a.f0_at_points == b.f0_at_points);
    CHECK(a.f0_at_points == evaluate_signal(signal, a.points));

    const auto c = make_dataset(spec, signal, 200, 100);
    CHECK(a.y != c.y);
}

TEST_CASE("zero amplitude leaves pure standard noise") {
    const auto ds = make_dataset(DesignSpec::uniform(1), SignalSpec::none(1), 1000, 101);
    double mean = 0.0;
    for (double v : ds.y) mean += v;
    mean /= 1000.0;
    double var = 0.0;
    for (double v : ds.y) var += (v - mean) * (v - mean);
    var /= 999.0;
    CHECK(var >= 0.8);
    CHECK(var <= 1.2);
    // third / fourth standardized moments within generous MC bands
    double m3 = 0.0, m4 = 0.0;
    for (double v : ds.y) {
        const double z = (v - mean) / std::sqrt(var);
        m3 += z * z * z;
        m4 += z * z * z * z;
    }
    CHECK(std::abs(m3 / 1000.0) < 0.35);
    CHECK(std::abs(m4 / 1000.0 - 3.0) < 0.8);
}

TEST_CASE("Sobolev seminorm oracle closed forms") {
    // d=1 on [0,1], cos(pi x): integral of pi^2 sin^2 = pi^2 / 2
    const auto d1 = DesignSpec::uniform(1);
    const auto sig = SignalSpec::cosine(1, 1.0, 1.0);
    CHECK_THAT(sobolev_seminorm_oracle(sig, d1), Catch::Matchers::WithinRel(kPi * kPi / 2.0, 1e-12));

    CHECK(sobolev_seminorm_oracle(SignalSpec::none(1), d1) == 0.0);

    // amplitude scales the squared seminorm quadratically
    const auto sig3 = SignalSpec::cosine(1, 1.0, 3.0);
    CHECK_THAT(sobolev_seminorm_oracle(sig3, d1),
               Catch::Matchers::WithinRel(9.0 * sobolev_seminorm_oracle(sig, d1), 1e-12));

    // linear on [0,1]^d: |f|^2 = A^2
    CHECK_THAT(sobolev_seminorm_oracle(SignalSpec::linear(3, 2.0), DesignSpec::uniform(3)),
               Catch::Matchers::WithinRel(4.0, 1e-12));

    // cross-check a cube case against quadrature of the defining integral
    const auto sig2 = SignalSpec::cosine(2, 2.0, 1.0);
    const auto d2 = DesignSpec::uniform(2, CubeDomain::symmetric);
    const double w = 2.0 * kPi;
    const double quad = 2.0 * w * w *
                        integrate_adaptive([&](double x) { return std::sin(w * x) * std::sin(w * x); }, -1.0, 1.0, 1e-10) *
                        integrate_adaptive([&](double x) { return std::cos(w * x) * std::cos(w * x); }, -1.0, 1.0, 1e-10);
    CHECK_THAT(sobolev_seminorm_oracle(sig2, d2), Catch::Matchers::WithinRel(quad, 1e-8));

    // circle case: linear signal has seminorm pi * A^2
    CHECK_THAT(sobolev_seminorm_oracle(SignalSpec::linear(3, 1.0), DesignSpec::circle_in(3)),
               Catch::Matchers::WithinRel(kPi, 1e-6));
}

TEST_CASE("L2 norm oracle") {
    // |cos(pi x)|^2 on [0,1] = 1/2
    CHECK_THAT(l2_norm_sq_oracle(SignalSpec::cosine(1, 1.0, 1.0), DesignSpec::uniform(1)),
               Catch::Matchers::WithinRel(0.5, 1e-12));
    // |A x|^2 on [0,1] = A^2 / 3
    CHECK_THAT(l2_norm_sq_oracle(SignalSpec::linear(1, 2.0), DesignSpec::uniform(1)),
               Catch::Matchers::WithinRel(4.0 / 3.0, 1e-12));
    // circle: |cos(theta)|^2 over arc length = pi
    CHECK_THAT(l2_norm_sq_oracle(SignalSpec::linear(3, 1.0), DesignSpec::circle_in(3)),
               Catch::Matchers::WithinRel(kPi, 1e-6));
}

TEST_CASE("circle graphs expose intrinsic dimension through degree growth") {
    // mean degree ~ n r^1 on the circle although the ambient dimension is 3
    const auto pts = sample_design(DesignSpec::circle_in(3), 2000, std::uint64_t{11});
    std::vector<double> radii{0.05, 0.1, 0.2, 0.4}, degs;
    for (double r : radii) {
        const auto g = build_graph(pts, r, KernelSpec::make(KernelFamily::uniform, 3));
        double mean = 0.0;
        for (double dg : g.degree) mean += dg;
        degs.push_back(mean / static_cast<double>(g.n));
    }
    const auto sf = fit_loglog_slope(radii, degs);
    CHECK(sf.slope >= 0.8);
    CHECK(sf.slope <= 1.2);
}
