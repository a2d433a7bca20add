#include <catch2/catch_amalgamated.hpp>

#include "lapsmooth/estimator.hpp"
#include "oracles.hpp"

using namespace lapsmooth;

TEST_CASE("theorem tuning rules evaluate the stated formulas") {
    // n=1000, d=1, M=1, estimation, r=0.05: rho = (n r^3)^-1 n^{-2/3} = 0.08
    TuningOverrides ov;
    ov.r = 0.05;
    const auto t = resolve_tuning(1000, 1, 1.0, TuningTask::estimation, ov);
    CHECK_THAT(t.rho, Catch::Matchers::WithinRel(0.08, 1e-12));
    CHECK(t.r_rule == RadiusRule::explicit_value);

    // M = 1 makes every M factor 1
    TuningOverrides ov2;
    ov2.r = 0.1;
    const auto t_m1 = resolve_tuning(500, 2, 1.0, TuningTask::estimation, ov2);
    CHECK_THAT(t_m1.rho,
               Catch::Matchers::WithinRel(1.0 / (500.0 * std::pow(0.1, 4)) * std::pow(500.0, -0.5), 1e-12));

    // testing rule, d=2: rho = (n r^4)^-1 n^{-2/3}
    const auto t_test = resolve_tuning(1000, 2, 1.0, TuningTask::testing, ov2);
    CHECK_THAT(t_test.rho,
               Catch::Matchers::WithinRel(1.0 / (1000.0 * std::pow(0.1, 4)) * std::pow(1000.0, -2.0 / 3.0),
                                          1e-12));

    // d = 4 and d >= 5 estimation branches
    const double r4 = 0.3;
    CHECK_THAT(theorem_rho(2000, 4, r4, 2.0, TuningTask::estimation),
               Catch::Matchers::WithinRel(std::pow(2.0, -2.0 / 3.0) / (2000.0 * std::pow(r4, 6)) *
                                              std::cbrt(std::log(2000.0) / 2000.0),
                                          1e-12));
    CHECK_THAT(theorem_rho(2000, 5, r4, 1.0, TuningTask::estimation),
               Catch::Matchers::WithinRel(1.0 / (2000.0 * std::pow(r4, 7)) * std::pow(2000.0, -4.0 / 15.0),
                                          1e-12));
}

TEST_CASE("connectivity radius rule and range warning") {
    const auto t = resolve_tuning(1000, 2, 1.0, TuningTask::estimation, {});
    CHECK_THAT(t.r, Catch::Matchers::WithinRel(2.0 * std::sqrt(std::log(1000.0) / 1000.0), 1e-12));
    CHECK(t.r_rule == RadiusRule::connectivity);

    // a huge explicit radius exceeds the (R1) upper endpoint
    TuningOverrides big;
    big.r = 0.9;
    CHECK(resolve_tuning(100000, 1, 1.0, TuningTask::estimation, big).radius_warning);

    CHECK_THROWS_AS(resolve_tuning(1, 1, 1.0, TuningTask::estimation, {}), input_error);
    CHECK_THROWS_AS(resolve_tuning(100, 1, 0.0, TuningTask::estimation, {}), input_error);
    CHECK_THROWS_AS(resolve_tuning(100, 1, -2.0, TuningTask::estimation, {}), input_error);
}

namespace {

TuningSpec fixed_tuning(double rho, double r) {
    TuningOverrides ov;
    ov.rho = rho;
    ov.r = r;
    return resolve_tuning(100, 1, 1.0, TuningTask::estimation, ov);
}

}  // namespace

TEST_CASE("fit: rho = 0 interpolates, huge rho shrinks to the mean") {
    const auto pts = oracles::random_cloud(50, 1, 61);
    const auto y = oracles::random_vector(50, 62);
    const auto kernel = KernelSpec::make(KernelFamily::uniform, 1);

    const auto f0 = fit(pts, y, fixed_tuning(0.0, 0.4), kernel);
    CHECK(f0.f_hat == y);

    const auto fbig = fit(pts, y, fixed_tuning(1e12, 0.4), kernel);
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    for (double v : fbig.f_hat) CHECK_THAT(v, Catch::Matchers::WithinAbs(mean, 1e-3));
}

TEST_CASE("fit attains a lower objective than natural candidates") {
    const auto pts = oracles::random_cloud(50, 1, 63);
    const auto y = oracles::random_vector(50, 64);
    const auto kernel = KernelSpec::make(KernelFamily::uniform, 1);
    const auto tuning = fixed_tuning(0.5, 0.3);
    const auto f = fit(pts, y, tuning, kernel);

    auto objective = [&](const std::vector<double>& v) {
        double loss = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) loss += (y[i] - v[i]) * (y[i] - v[i]);
        return loss + tuning.rho * laplacian_quadratic_form(*f.graph, v);
    };
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    CHECK(objective(f.f_hat) <= objective(y) + 1e-10);
    CHECK(objective(f.f_hat) <= objective(std::vector<double>(y.size(), mean)) + 1e-10);
}

TEST_CASE("fit is linear in y") {
    const auto pts = oracles::random_cloud(60, 2, 65);
    const auto kernel = KernelSpec::make(KernelFamily::uniform, 2);
    const auto tuning = fixed_tuning(0.8, 0.35);
    const auto y1 = oracles::random_vector(60, 66);
    const auto y2 = oracles::random_vector(60, 67);
    std::vector<double> combo(60);
    for (std::size_t i = 0; i < 60; ++i) combo[i] = 2.0 * y1[i] - 0.5 * y2[i];
    const auto f1 = fit(pts, y1, tuning, kernel);
    const auto f2 = fit(pts, y2, tuning, kernel);
    const auto fc = fit(pts, combo, tuning, kernel);
    for (std::size_t i = 0; i < 60; ++i)
        CHECK_THAT(fc.f_hat[i], Catch::Matchers::WithinAbs(2.0 * f1.f_hat[i] - 0.5 * f2.f_hat[i], 1e-8));
}

TEST_CASE("smoother never roughens and mean is preserved") {
    const auto pts = oracles::random_cloud(70, 1, 71);
    const auto kernel = KernelSpec::make(KernelFamily::uniform, 1);
    const auto tuning = fixed_tuning(1.5, 0.35);
    const auto y = oracles::random_vector(70, 72);
    const auto f = fit(pts, y, tuning, kernel);
    REQUIRE(graph_diagnostics(*f.graph).connected);

    CHECK(laplacian_quadratic_form(*f.graph, f.f_hat) <=
          laplacian_quadratic_form(*f.graph, y) + 1e-8);

    double my = 0.0, mf = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        my += y[i];
        mf += f.f_hat[i];
    }
    CHECK_THAT(mf / 70.0, Catch::Matchers::WithinAbs(my / 70.0, 1e-9));
}

TEST_CASE("norm of the fit is monotone nonincreasing in rho") {
    const auto pts = oracles::random_cloud(60, 1, 73);
    const auto kernel = KernelSpec::make(KernelFamily::uniform, 1);
    const auto y = oracles::random_vector(60, 74);
    double prev = std::numeric_limits<double>::infinity();
    for (double rho : {0.0, 0.01, 0.1, 1.0, 10.0, 1e3}) {
        const auto f = fit(pts, y, fixed_tuning(rho, 0.35), kernel);
        double norm = 0.0;
        for (double v : f.f_hat) norm += v * v;
        norm = std::sqrt(norm);
        CHECK(norm <= prev + 1e-8);
        prev = norm;
    }
}

TEST_CASE("in-sample MSE") {
    CHECK(in_sample_mse({1.0, 2.0}, {1.0, 2.0}) == 0.0);
    CHECK_THAT(in_sample_mse({1.5, 2.5, -0.5}, {1.0, 2.0, -1.0}),
               Catch::Matchers::WithinAbs(0.25, 1e-15));
    // hand computation on short random vectors
    const auto a = oracles::random_vector(10, 80);
    const auto b = oracles::random_vector(10, 81);
    double s = 0.0;
    for (std::size_t i = 0; i < 10; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    CHECK_THAT(in_sample_mse(a, b), Catch::Matchers::WithinRel(s / 10.0, 1e-15));
    CHECK_THROWS_AS(in_sample_mse({1.0}, {1.0, 2.0}), input_error);
}

TEST_CASE("Voronoi extension evaluates by nearest anchor with low-index ties") {
    PointCloud anchors;
    anchors.n = 2;
    anchors.d = 1;
    anchors.coords = {0.0, 1.0};
    const VoronoiExtension ext(anchors, {10.0, 20.0});
    CHECK(ext.evaluate({0.4}) == 10.0);
    CHECK(ext.evaluate({0.6}) == 20.0);
    CHECK(ext.evaluate({0.5}) == 10.0);  // tie -> lowest index
    CHECK(ext.evaluate({0.0}) == 10.0);  // design point -> its own value
    CHECK(ext.evaluate({1.0}) == 20.0);
    CHECK_THROWS_AS(ext.evaluate({0.0, 0.0}), input_error);
}

TEST_CASE("Voronoi extension reproduces the fit at every design point") {
    const auto pts = oracles::random_cloud(200, 2, 83);
    const auto y = oracles::random_vector(200, 84);
    const auto f = fit(pts, y, fixed_tuning(0.4, 0.3), KernelSpec::make(KernelFamily::uniform, 2));
    const auto ext = extend_voronoi(f, pts);
    for (std::size_t i = 0; i < pts.n; ++i) CHECK(ext.evaluate(pts.row(i)) == f.f_hat[i]);
}

TEST_CASE("bias/variance certificate") {
    const auto pts = oracles::random_cloud(30, 1, 85);
    const auto y = oracles::random_vector(30, 86);
    const auto kernel = KernelSpec::make(KernelFamily::uniform, 1);

    // rho = 0: every spectral term is 1, bias vanishes
    const auto f0 = fit(pts, y, fixed_tuning(0.0, 0.4), kernel);
    const auto s = full_spectrum(*f0.graph);
    const auto b0 = bias_variance_certificate(f0, y, s);
    CHECK(b0.bias_bound == 0.0);
    CHECK_THAT(b0.variance_bound, Catch::Matchers::WithinRel(10.0, 1e-12));

    // constant truth has zero bias bound for any rho
    const auto f1 = fit(pts, y, fixed_tuning(0.7, 0.4), kernel);
    const auto b1 = bias_variance_certificate(f1, std::vector<double>(30, 2.5), full_spectrum(*f1.graph));
    CHECK(b1.bias_bound == 0.0);

    // dense recomputation of both terms
    const auto truth = oracles::random_vector(30, 87);
    const auto b2 = bias_variance_certificate(f1, truth, full_spectrum(*f1.graph));
    const Eigen::MatrixXd L = oracles::laplacian_from_weights(oracles::graph_weights_dense(*f1.graph));
    const double bias_ref = 2.0 * 0.7 / 30.0 * oracles::dense_quadratic_form(L, truth);
    double var_ref = 0.0;
    for (double lam : oracles::jacobi_eigenvalues(L)) var_ref += 1.0 / ((0.7 * lam + 1.0) * (0.7 * lam + 1.0));
    var_ref *= 10.0 / 30.0;
    CHECK_THAT(b2.bias_bound, Catch::Matchers::WithinAbs(bias_ref, 1e-9));
    CHECK_THAT(b2.variance_bound, Catch::Matchers::WithinAbs(var_ref, 1e-9));

    // partial spectra are rejected
    SpectrumResult partial;
    partial.mode = SpectrumMode::partial_iterative;
    partial.eigenvalues = {0.0};
    CHECK_THROWS_AS(bias_variance_certificate(f1, truth, partial), capacity_error);
}
