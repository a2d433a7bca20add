#include <catch2/catch_amalgamated.hpp>

#include "lapsmooth/graph.hpp"
#include "oracles.hpp"

using namespace lapsmooth;

TEST_CASE("three collinear points, unit radius, uniform kernel") {
    PointCloud pts;
    pts.n = 3;
    pts.d = 1;
    pts.coords = {0.0, 0.5, 2.0};
    const auto kernel = KernelSpec::make(KernelFamily::uniform, 1);
    const auto g = build_graph(pts, 1.0, kernel);

    const Eigen::MatrixXd W = oracles::graph_weights_dense(g);
    CHECK(W(0, 1) == 0.5);
    CHECK(W(1, 0) == 0.5);
    CHECK(W(0, 2) == 0.0);
    CHECK(W(1, 2) == 0.0);
    CHECK(W.diagonal().isZero());
    CHECK(g.degree[0] == 0.5);
    CHECK(g.degree[1] == 0.5);
    CHECK(g.degree[2] == 0.0);

    const auto diag = graph_diagnostics(g);
    CHECK(diag.max_degree == 0.5);
    CHECK_FALSE(diag.connected);
    CHECK(diag.edge_count == 1);
}

TEST_CASE("quadratic form basics") {
    const auto g = oracles::graph_from_edges(2, {{0, 1, 1.0}});
    CHECK(laplacian_quadratic_form(g, {0.0, 1.0}) == 1.0);
    CHECK(laplacian_quadratic_form(g, {3.7, 3.7}) == 0.0);
    CHECK_THROWS_AS(laplacian_quadratic_form(g, {1.0}), input_error);

    // apply on e_0: L e_0 = (1, -1)
    const auto le = apply_laplacian(g, {1.0, 0.0});
    CHECK(le[0] == 1.0);
    CHECK(le[1] == -1.0);
}

TEST_CASE("constant vectors are exact null vectors") {
    const auto pts = oracles::random_cloud(120, 2, 11);
    const auto g = build_graph(pts, 0.3, KernelSpec::make(KernelFamily::truncated_gaussian, 2));
    const std::vector<double> ones(g.n, 4.25);
    CHECK(laplacian_quadratic_form(g, ones) == 0.0);
    for (double v : apply_laplacian(g, ones)) CHECK(v == 0.0);
}

TEST_CASE("edge-wise quadratic form equals dense oracle") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const std::size_t n = 20 + 7 * seed;
        const int d = 1 + static_cast<int>(seed % 3);
        const auto pts = oracles::random_cloud(n, d, seed);
        const auto g = build_graph(pts, 0.4, KernelSpec::make(KernelFamily::epanechnikov_like, d));
        const Eigen::MatrixXd L = oracles::laplacian_from_weights(oracles::graph_weights_dense(g));
        const auto f = oracles::random_vector(n, seed + 100);
        CHECK_THAT(laplacian_quadratic_form(g, f),
                   Catch::Matchers::WithinAbs(oracles::dense_quadratic_form(L, f), 1e-10));
        // matvec against the dense matrix
        const auto lf = apply_laplacian(g, f);
        Eigen::Map<const Eigen::VectorXd> fv(f.data(), static_cast<Eigen::Index>(n));
        const Eigen::VectorXd dense_lf = L * fv;
        for (std::size_t i = 0; i < n; ++i)
            CHECK_THAT(lf[i], Catch::Matchers::WithinAbs(dense_lf(static_cast<Eigen::Index>(i)), 1e-12));
    }
}

TEST_CASE("spatial index agrees with exhaustive build exactly") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::size_t n = 300 + 40 * seed;  // above the exhaustive cutoff
        const int d = 1 + static_cast<int>(seed % 3);
        const auto pts = oracles::random_cloud(n, d, 50 + seed);
        const auto kernel = KernelSpec::make(KernelFamily::uniform, d);
        const double r = d == 1 ? 0.02 : (d == 2 ? 0.12 : 0.25);
        const auto g_tree = build_graph(pts, r, kernel);
        const auto g_brute = build_graph(pts, r, kernel, {.force_exhaustive = true});
        REQUIRE(g_tree.row_ptr == g_brute.row_ptr);
        REQUIRE(g_tree.col == g_brute.col);
        REQUIRE(g_tree.weight == g_brute.weight);  // bitwise
        REQUIRE(g_tree.degree == g_brute.degree);
    }
}

TEST_CASE("weights are mirrored exactly and only within radius") {
    const auto pts = oracles::random_cloud(400, 2, 3);
    const double r = 0.15;
    const auto g = build_graph(pts, r, KernelSpec::make(KernelFamily::truncated_gaussian, 2));
    const Eigen::MatrixXd W = oracles::graph_weights_dense(g);
    CHECK(W == W.transpose());
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t k = g.row_ptr[i]; k < g.row_ptr[i + 1]; ++k)
            CHECK(squared_distance(pts, i, g.col[k]) <= r * r);
    // degrees equal row sums to 1e-12 relative
    for (std::size_t i = 0; i < g.n; ++i) {
        double s = 0.0;
        for (std::size_t k = g.row_ptr[i]; k < g.row_ptr[i + 1]; ++k) s += g.weight[k];
        CHECK_THAT(g.degree[i], Catch::Matchers::WithinRel(s, 1e-12));
    }
}

TEST_CASE("permutation symmetry of the quadratic form") {
    const auto pts = oracles::random_cloud(80, 2, 21);
    const auto kernel = KernelSpec::make(KernelFamily::uniform, 2);
    const auto g = build_graph(pts, 0.3, kernel);
    const auto f = oracles::random_vector(pts.n, 22);

    std::vector<std::size_t> perm(pts.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng = make_stream(9, "perm-test");
    std::shuffle(perm.begin(), perm.end(), rng);

    PointCloud shuffled;
    shuffled.n = pts.n;
    shuffled.d = pts.d;
    shuffled.coords.resize(pts.coords.size());
    std::vector<double> f_shuffled(pts.n);
    for (std::size_t i = 0; i < pts.n; ++i) {
        for (int k = 0; k < pts.d; ++k)
            shuffled.coords[i * 2 + static_cast<std::size_t>(k)] = pts.coord(perm[i], k);
        f_shuffled[i] = f[perm[i]];
    }
    const auto g2 = build_graph(shuffled, 0.3, kernel);
    CHECK_THAT(laplacian_quadratic_form(g2, f_shuffled),
               Catch::Matchers::WithinRel(laplacian_quadratic_form(g, f), 1e-12));
}

TEST_CASE("diagnostics: complete graph is connected") {
    const auto pts = oracles::random_cloud(40, 2, 31);
    const auto g = build_graph(pts, 10.0, KernelSpec::make(KernelFamily::uniform, 2));
    CHECK(graph_diagnostics(g).connected);
    CHECK(g.edge_count == 40u * 39u / 2u);
}

TEST_CASE("connectivity-threshold radius keeps the graph connected") {
    // r = 2 (log n / n)^(1/2) at n = 500 on the unit square
    const std::size_t n = 500;
    const double r = 2.0 * std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n));
    int connected = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto pts = oracles::random_cloud(n, 2, 1000 + seed);
        const auto g = build_graph(pts, r, KernelSpec::make(KernelFamily::uniform, 2));
        connected += graph_diagnostics(g).connected ? 1 : 0;
    }
    CHECK(connected >= 95);
}

TEST_CASE("max degree stays below the density bound") {
    // Lemma-style check: D_max <= 2 p_max n r^d on the unit square (p_max = 1)
    const std::size_t n = 500;
    const double r = 0.15;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto pts = oracles::random_cloud(n, 2, 2000 + seed);
        const auto g = build_graph(pts, r, KernelSpec::make(KernelFamily::uniform, 2));
        CHECK(graph_diagnostics(g).max_degree <= 2.0 * static_cast<double>(n) * r * r);
    }
}

TEST_CASE("input validation") {
    PointCloud pts;
    pts.n = 2;
    pts.d = 1;
    pts.coords = {0.0, std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS_AS(build_graph(pts, 1.0, KernelSpec::make(KernelFamily::uniform, 1)), input_error);
    pts.coords = {0.0, 1.0};
    CHECK_THROWS_AS(build_graph(pts, -1.0, KernelSpec::make(KernelFamily::uniform, 1)), input_error);
    CHECK_THROWS_AS(build_graph(pts, 1.0, KernelSpec::make(KernelFamily::uniform, 2)), input_error);
}
