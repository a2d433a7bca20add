// Command-line front end: gen / fit / test / eigs / experiment subcommands.
// Structured results go to JSON, numeric tables to CSV; every run writes a
// manifest echoing its resolved configuration plus content hashes of the
// outputs, so downstream plots are reproducible from the manifest alone.
//
// Exit codes: 0 success, 2 usage or input error, 3 solver failure,
// 4 capacity error (dense spectral cap exceeded).

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lapsmooth/lapsmooth.hpp"
#include "lapsmooth/serialize.hpp"

namespace fs = std::filesystem;
using namespace lapsmooth;

namespace {

std::string sha1_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot hash missing file " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char two[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(two, sizeof(two), "%02x", digest[i]);
        hex += two;
    }
    return hex;
}

struct GlobalArgs {
    std::uint64_t seed = 7;
    int threads = 0;
    bool verbose = false;
};

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    const GlobalArgs& g, const std::vector<std::string>& outputs) {
    json manifest;
    manifest["command"] = command;
    manifest["config"] = config;
    manifest["seed"] = g.seed;
    manifest["threads"] = g.threads;
    json hashes;
    for (const auto& name : outputs) hashes[name] = "sha1:" + sha1_file((dir / name).string());
    manifest["outputs"] = hashes;
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << "\n";
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

/// "1000:10000:log5" -> 5 log-spaced values; "250,500,1000" -> explicit list.
std::vector<std::size_t> parse_n_grid(const std::string& spec) {
    std::vector<std::size_t> grid;
    if (spec.find(':') != std::string::npos) {
        const auto p1 = spec.find(':');
        const auto p2 = spec.find(':', p1 + 1);
        if (p2 == std::string::npos) throw input_error("n-grid spec needs lo:hi:logK");
        const double lo = std::stod(spec.substr(0, p1));
        const double hi = std::stod(spec.substr(p1 + 1, p2 - p1 - 1));
        std::string tail = spec.substr(p2 + 1);
        if (tail.rfind("log", 0) != 0) throw input_error("n-grid spec tail must be logK");
        const int k = std::stoi(tail.substr(3));
        if (k < 2 || lo <= 0 || hi <= lo) throw input_error("bad n-grid spec " + spec);
        for (int i = 0; i < k; ++i) {
            const double t = static_cast<double>(i) / (k - 1);
            grid.push_back(static_cast<std::size_t>(std::llround(std::exp(
                std::log(lo) + t * (std::log(hi) - std::log(lo))))));
        }
    } else {
        std::stringstream ss(spec);
        std::string cell;
        while (std::getline(ss, cell, ',')) grid.push_back(std::stoull(cell));
    }
    if (grid.empty()) throw input_error("empty n-grid");
    return grid;
}

std::vector<double> parse_amp_grid(const std::string& spec) {
    std::vector<double> grid;
    const auto p1 = spec.find(':');
    if (p1 != std::string::npos) {
        const auto p2 = spec.find(':', p1 + 1);
        if (p2 == std::string::npos) throw input_error("amp grid spec needs lo:hi:logK");
        const double lo = std::stod(spec.substr(0, p1));
        const double hi = std::stod(spec.substr(p1 + 1, p2 - p1 - 1));
        const int k = std::stoi(spec.substr(p2 + 4));
        for (int i = 0; i < k; ++i) {
            const double t = static_cast<double>(i) / (k - 1);
            grid.push_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
        }
    } else {
        std::stringstream ss(spec);
        std::string cell;
        while (std::getline(ss, cell, ',')) grid.push_back(std::stod(cell));
    }
    return grid;
}

TuningSpec tuning_from_flags(std::size_t n, int dim_used, double M, const std::string& task_name,
                             const std::string& rho_flag, const std::string& r_flag, double c0) {
    TuningOverrides ov;
    ov.connectivity_c0 = c0;
    if (rho_flag != "auto") ov.rho = std::stod(rho_flag);
    if (r_flag != "auto") ov.r = std::stod(r_flag);
    const TuningTask task = task_name == "testing" ? TuningTask::testing : TuningTask::estimation;
    TuningSpec t = resolve_tuning(n, dim_used, M, task, ov);
    if (t.radius_warning)
        std::cerr << "{\"warning\":\"radius above theorem upper endpoint\",\"r\":" << t.r << "}\n";
    return t;
}

int run_gen(const GlobalArgs& g, const std::string& design_name, int d, const std::string& domain,
            const std::string& signal_name, double amplitude, double freq_a, std::size_t n,
            const std::string& spec_json, const std::string& out_dir) {
    DesignSpec design;
    SignalSpec signal;
    if (!spec_json.empty()) {
        std::ifstream in(spec_json);
        if (!in) throw input_error("cannot open spec file " + spec_json);
        json j = json::parse(in);
        design = design_from_json(j.at("design"));
        signal = signal_from_json(j.at("signal"));
    } else {
        if (design_name == "uniform-cube")
            design = DesignSpec::uniform(d, domain == "sym" ? CubeDomain::symmetric : CubeDomain::unit);
        else if (design_name == "lipschitz-rejection")
            design = DesignSpec::lipschitz(d);
        else if (design_name == "circle")
            design = DesignSpec::circle_in(d);
        else if (design_name == "swiss-roll")
            design = DesignSpec::swiss_roll();
        else
            throw input_error("unknown design " + design_name);
        if (signal_name == "cosine")
            signal = SignalSpec::cosine(design.d, freq_a, amplitude);
        else if (signal_name == "linear")
            signal = SignalSpec::linear(design.d, amplitude);
        else if (signal_name == "zero")
            signal = SignalSpec::none(design.d);
        else
            throw input_error("unknown signal " + signal_name);
    }
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    Dataset data = make_dataset(design, signal, n, g.seed);
    write_points_csv((dir / "points.csv").string(), data.points);
    write_vector_csv((dir / "y.csv").string(), data.y);
    write_vector_csv((dir / "f0.csv").string(), data.f0_at_points);
    json config{{"design", to_json(design)}, {"signal", to_json(signal)}, {"n", n}};
    write_manifest(dir, "gen", config, g, {"points.csv", "y.csv", "f0.csv"});
    return 0;
}

int run_fit(const GlobalArgs& g, const std::string& data_path, const std::string& response_path,
            const std::string& rho_flag, const std::string& r_flag, double M,
            const std::string& kernel_name, const std::string& task, int dim_used, double c0,
            const std::string& out_path) {
    PointCloud pts = read_points_csv(data_path);
    std::vector<double> y = read_vector_csv(response_path);
    if (y.size() != pts.n) throw input_error("response length does not match point count");
    if (dim_used == 0) dim_used = pts.d;
    TuningSpec tuning = tuning_from_flags(pts.n, dim_used, M, task, rho_flag, r_flag, c0);
    KernelSpec kernel = KernelSpec::make(kernel_family_from_string(kernel_name), pts.d);
    SmoothingFit f = fit(pts, y, tuning, kernel, {.threads = g.threads});
    std::ofstream out(out_path);
    if (!out) throw input_error("cannot write " + out_path);
    out << "index,f_hat\n";
    for (std::size_t i = 0; i < f.f_hat.size(); ++i) out << i << ',' << fmt_double(f.f_hat[i]) << '\n';
    if (g.verbose)
        std::cerr << "{\"fit\":{\"rho\":" << tuning.rho << ",\"r\":" << tuning.r
                  << ",\"iterations\":" << f.solve.iterations
                  << ",\"residual\":" << f.solve.final_residual << "}}\n";
    return 0;
}

int run_test(const GlobalArgs& g, const std::string& data_path, const std::string& response_path,
             double alpha, const std::string& calibration, int n_perm, const std::string& rho_flag,
             const std::string& r_flag, double M, int dim_used, double c0, const std::string& out_path) {
    PointCloud pts = read_points_csv(data_path);
    std::vector<double> y = read_vector_csv(response_path);
    if (y.size() != pts.n) throw input_error("response length does not match point count");
    if (dim_used == 0) dim_used = pts.d;
    TuningSpec tuning = tuning_from_flags(pts.n, dim_used, M, "testing", rho_flag, r_flag, c0);
    KernelSpec kernel = KernelSpec::make(KernelFamily::uniform, pts.d);
    GofTestResult result =
        calibration == "spectral"
            ? gof_test_spectral(pts, y, tuning, kernel, alpha, kDenseSpectrumCap, {.threads = g.threads})
            : gof_test_permutation(pts, y, tuning, kernel, alpha, n_perm, g.seed, g.threads,
                                   {.threads = 1});
    std::ofstream out(out_path);
    if (!out) throw input_error("cannot write " + out_path);
    out << to_json(result).dump(2) << "\n";
    std::cout << to_json(result).dump() << "\n";
    return 0;
}

int run_eigs(const GlobalArgs& g, const std::string& data_path, const std::string& r_flag, int k,
             const std::string& which, double c0, const std::string& out_path) {
    PointCloud pts = read_points_csv(data_path);
    double r;
    if (r_flag == "auto")
        r = c0 * std::pow(std::log(static_cast<double>(pts.n)) / static_cast<double>(pts.n),
                          1.0 / pts.d);
    else
        r = std::stod(r_flag);
    const NeighborhoodGraph graph =
        build_graph(pts, r, KernelSpec::make(KernelFamily::uniform, pts.d), {.threads = g.threads});
    SpectrumResult spectrum;
    if (k <= 0)
        spectrum = full_spectrum(graph);
    else
        spectrum = partial_spectrum(graph, static_cast<std::size_t>(k),
                                    which == "largest" ? SpectrumEnd::largest : SpectrumEnd::smallest);
    std::ofstream out(out_path);
    if (!out) throw input_error("cannot write " + out_path);
    out << "k,lambda\n";
    for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i)
        out << (i + 1) << ',' << fmt_double(spectrum.eigenvalues[i]) << '\n';
    return 0;
}

void write_rate_outputs(const fs::path& dir, const RateCurve& curve) {
    std::ofstream csv(dir / "curve.csv");
    csv << "n,mean_mse,stderr\n";
    for (const auto& row : curve.rows)
        csv << row.n << ',' << fmt_double(row.mean_error) << ',' << fmt_double(row.std_error) << '\n';
    std::ofstream slope(dir / "slope.json");
    slope << json{{"fitted_slope", curve.fitted_slope},
                  {"slope_std_err", curve.slope_std_err},
                  {"reference_slope", curve.reference_slope}}
                 .dump(2)
          << "\n";
}

int run_experiment_rates(const GlobalArgs& g, int d, const std::string& n_grid, int reps,
                         const std::string& tuning_name, const std::string& domain, double freq_a,
                         double c0, const std::string& out_dir, bool manifold) {
    ExperimentConfig cfg;
    cfg.kind = manifold ? ExperimentKind::manifold_rate : ExperimentKind::rate_estimation;
    cfg.n_grid = parse_n_grid(n_grid);
    cfg.reps = reps;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    cfg.connectivity_c0 = c0;
    cfg.tuning_mode = tuning_name == "theorem" ? TuningMode::theorem_rule : TuningMode::oracle_grid;
    if (manifold) {
        cfg.design = DesignSpec::circle_in(d);
        cfg.signal = SignalSpec::cosine(d, freq_a);
    } else {
        cfg.design = DesignSpec::uniform(d, domain == "sym" ? CubeDomain::symmetric : CubeDomain::unit);
        if (freq_a <= 0.0) freq_a = (d == 2) ? 2.0 : 1.0;  // the figure's convention
        cfg.signal = SignalSpec::cosine(d, freq_a);
    }
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const RateCurve curve = manifold ? run_manifold_rate_experiment(cfg) : run_rate_experiment(cfg);
    write_rate_outputs(dir, curve);
    json config{{"kind", manifold ? "manifold-rate" : "rate-estimation"},
                {"design", to_json(cfg.design)},
                {"signal", to_json(cfg.signal)},
                {"reps", reps},
                {"tuning", tuning_name},
                {"c0", c0}};
    write_manifest(dir, "experiment", config, g, {"curve.csv", "slope.json"});
    std::cout << to_json(curve).dump() << "\n";
    return 0;
}

int run_experiment_spectral(const GlobalArgs& g, int d, const std::string& n_grid, int reps, double c0,
                            const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::spectral_envelope;
    cfg.design = DesignSpec::uniform(d);
    cfg.n_grid = parse_n_grid(n_grid);
    cfg.reps = reps;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    cfg.connectivity_c0 = c0;
    const auto rows = run_spectral_envelope(cfg);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    std::ofstream csv(dir / "table.csv");
    csv << "n,d,r,min_ratio,max_ratio,midrange_slope\n";
    for (const auto& row : rows)
        csv << row.n << ',' << row.d << ',' << fmt_double(row.radius) << ','
            << fmt_double(row.min_ratio) << ',' << fmt_double(row.max_ratio) << ','
            << fmt_double(row.midrange_slope) << '\n';
    write_manifest(dir, "experiment", json{{"kind", "spectral-envelope"}, {"d", d}, {"reps", reps}}, g,
                   {"table.csv"});
    return 0;
}

int run_experiment_seminorm(const GlobalArgs& g, int d, const std::string& n_grid, int reps, double c0,
                            const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::seminorm;
    cfg.design = DesignSpec::uniform(d);
    cfg.signal = SignalSpec::linear(d);
    cfg.n_grid = parse_n_grid(n_grid);
    cfg.reps = reps;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    cfg.connectivity_c0 = c0;
    const auto rows = run_seminorm_check(cfg);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    std::ofstream csv(dir / "table.csv");
    csv << "n,mean_ratio,var_ratio,min_ratio,max_ratio\n";
    for (const auto& row : rows)
        csv << row.n << ',' << fmt_double(row.mean_ratio) << ',' << fmt_double(row.var_ratio) << ','
            << fmt_double(row.min_ratio) << ',' << fmt_double(row.max_ratio) << '\n';
    write_manifest(dir, "experiment", json{{"kind", "seminorm"}, {"d", d}, {"reps", reps}}, g,
                   {"table.csv"});
    return 0;
}

int run_experiment_varsums(const GlobalArgs& g, std::size_t n, const std::string& out_dir) {
    std::vector<double> t_grid;
    for (int i = 0; i < 10; ++i) t_grid.push_back(std::pow(10.0, -3.0 + 3.0 * i / 9.0));
    const auto rows = run_variance_sum_check({1, 2, 3, 4}, t_grid, n);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    std::ofstream csv(dir / "table.csv");
    csv << "d,t,sum2,lower2,upper2,sum4,lower4,upper4,ok\n";
    bool all_ok = true;
    for (const auto& row : rows) {
        all_ok = all_ok && row.ok;
        csv << row.d << ',' << fmt_double(row.t) << ',' << fmt_double(row.sum2) << ','
            << fmt_double(row.lower2) << ',' << fmt_double(row.upper2) << ',' << fmt_double(row.sum4)
            << ',' << fmt_double(row.lower4) << ',' << fmt_double(row.upper4) << ','
            << (row.ok ? 1 : 0) << '\n';
    }
    write_manifest(dir, "experiment", json{{"kind", "variance-sums"}, {"n", n}, {"all_ok", all_ok}}, g,
                   {"table.csv"});
    std::cout << json{{"all_ok", all_ok}}.dump() << "\n";
    return 0;
}

int run_experiment_power(const GlobalArgs& g, int d, const std::string& n_grid, int reps,
                         int noise_reps, double alpha, const std::string& amps, double c0,
                         const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::power;
    cfg.design = DesignSpec::uniform(d);
    cfg.signal = SignalSpec::cosine(d, 1.0);
    cfg.reps = reps;
    cfg.noise_reps_per_design = noise_reps;
    cfg.alpha = alpha;
    cfg.amplitude_grid = parse_amp_grid(amps);
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    cfg.connectivity_c0 = c0;
    const auto grid = parse_n_grid(n_grid);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    std::ofstream csv(dir / "power.csv");
    csv << "n,amplitude,eps,power,stderr\n";
    std::vector<double> ns, eps80;
    for (std::size_t n : grid) {
        const PowerCurve curve = run_power_curve(cfg, n);
        for (const auto& row : curve.rows)
            csv << n << ',' << fmt_double(row.amplitude) << ',' << fmt_double(row.eps) << ','
                << fmt_double(row.rejection_rate) << ',' << fmt_double(row.mc_std_err) << '\n';
        ns.push_back(static_cast<double>(n));
        eps80.push_back(power_crossing_eps(curve, 0.8));
    }
    std::ofstream eps_csv(dir / "eps80.csv");
    eps_csv << "n,eps80\n";
    for (std::size_t i = 0; i < ns.size(); ++i)
        eps_csv << static_cast<std::size_t>(ns[i]) << ',' << fmt_double(eps80[i]) << '\n';
    json slope_json;
    if (ns.size() >= 4) {
        const SlopeFit sf = fit_loglog_slope(ns, eps80);
        slope_json = json{{"fitted_slope", sf.slope},
                          {"slope_std_err", sf.std_err},
                          {"reference_slope", -2.0 / (4.0 + d)}};
    }
    std::ofstream slope(dir / "slope.json");
    slope << slope_json.dump(2) << "\n";
    write_manifest(dir, "experiment",
                   json{{"kind", "power"}, {"d", d}, {"alpha", alpha}, {"reps", reps},
                        {"noise_reps", noise_reps}},
                   g, {"power.csv", "eps80.csv", "slope.json"});
    if (!slope_json.is_null()) std::cout << slope_json.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Laplacian smoothing on kernel neighborhood graphs"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--seed", g.seed, "RNG seed");
    app.add_option("--threads", g.threads, "worker threads (0 = auto)");
    app.add_flag("--verbose", g.verbose, "extra diagnostics on stderr");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    std::string gen_design = "uniform-cube", gen_domain = "unit", gen_signal = "cosine";
    std::string gen_spec_json, gen_out = "data";
    int gen_d = 1;
    double gen_amp = 1.0, gen_a = 1.0;
    std::size_t gen_n = 500;
    gen->add_option("--design", gen_design, "uniform-cube|lipschitz-rejection|circle|swiss-roll");
    gen->add_option("--d", gen_d, "ambient dimension");
    gen->add_option("--domain", gen_domain, "unit|sym cube domain");
    gen->add_option("--signal", gen_signal, "cosine|linear|zero");
    gen->add_option("--amplitude", gen_amp, "signal amplitude");
    gen->add_option("--freq-a", gen_a, "cosine frequency a");
    gen->add_option("--n", gen_n, "sample size");
    gen->add_option("--spec-json", gen_spec_json, "JSON file with design/signal specs");
    gen->add_option("--out-dir", gen_out, "output directory");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit the Laplacian smoothing estimator");
    std::string fit_data, fit_resp, fit_rho = "auto", fit_r = "auto", fit_kernel = "uniform";
    std::string fit_task = "estimation", fit_out = "fit.csv";
    double fit_M = 1.0, fit_c0 = 2.0;
    int fit_dim = 0;
    fit_cmd->add_option("--data", fit_data, "points CSV")->required();
    fit_cmd->add_option("--response", fit_resp, "response CSV")->required();
    fit_cmd->add_option("--rho", fit_rho, "penalty level or 'auto'");
    fit_cmd->add_option("--r", fit_r, "graph radius or 'auto'");
    fit_cmd->add_option("--M", fit_M, "Sobolev radius for the theorem rules");
    fit_cmd->add_option("--kernel", fit_kernel, "uniform|truncated-gaussian|epanechnikov-like");
    fit_cmd->add_option("--task", fit_task, "estimation|testing tuning rules");
    fit_cmd->add_option("--dim-used", fit_dim, "dimension for the tuning rules (0 = ambient)");
    fit_cmd->add_option("--c0", fit_c0, "connectivity radius constant");
    fit_cmd->add_option("--out", fit_out, "output CSV (index,f_hat)");

    // test
    auto* test_cmd = app.add_subcommand("test", "goodness-of-fit test of f0 = 0");
    std::string test_data, test_resp, test_cal = "perm", test_rho = "auto", test_r = "auto";
    std::string test_out = "result.json";
    double test_alpha = 0.05, test_M = 1.0, test_c0 = 2.0;
    int test_nperm = 999, test_dim = 0;
    test_cmd->add_option("--data", test_data, "points CSV")->required();
    test_cmd->add_option("--response", test_resp, "response CSV")->required();
    test_cmd->add_option("--alpha", test_alpha, "level");
    test_cmd->add_option("--calibration", test_cal, "spectral|perm");
    test_cmd->add_option("--n-perm", test_nperm, "permutation count");
    test_cmd->add_option("--rho", test_rho, "penalty level or 'auto'");
    test_cmd->add_option("--r", test_r, "graph radius or 'auto'");
    test_cmd->add_option("--M", test_M, "Sobolev radius");
    test_cmd->add_option("--dim-used", test_dim, "tuning dimension (0 = ambient)");
    test_cmd->add_option("--c0", test_c0, "connectivity radius constant");
    test_cmd->add_option("--out", test_out, "result JSON path");

    // eigs
    auto* eigs_cmd = app.add_subcommand("eigs", "graph Laplacian spectrum");
    std::string eigs_data, eigs_r = "auto", eigs_which = "smallest", eigs_out = "spectrum.csv";
    int eigs_k = 0;
    double eigs_c0 = 2.0;
    eigs_cmd->add_option("--data", eigs_data, "points CSV")->required();
    eigs_cmd->add_option("--r", eigs_r, "graph radius or 'auto'");
    eigs_cmd->add_option("--k", eigs_k, "number of extremal eigenvalues (0 = full spectrum)");
    eigs_cmd->add_option("--which", eigs_which, "smallest|largest");
    eigs_cmd->add_option("--c0", eigs_c0, "connectivity radius constant");
    eigs_cmd->add_option("--out", eigs_out, "output CSV (k,lambda)");

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "run a study from the harness");
    exp_cmd->require_subcommand(1);
    auto* exp_rates = exp_cmd->add_subcommand("rates", "estimation rate curve");
    auto* exp_manifold = exp_cmd->add_subcommand("manifold", "manifold (circle) rate curve");
    auto* exp_spectral = exp_cmd->add_subcommand("spectral", "spectral envelope check");
    auto* exp_seminorm = exp_cmd->add_subcommand("seminorm", "graph Sobolev seminorm check");
    auto* exp_varsums = exp_cmd->add_subcommand("varsums", "variance-sum bound check");
    auto* exp_power = exp_cmd->add_subcommand("power", "testing power sweep");

    int ed = 1, ereps = 20, enoise = 5;
    std::string egrid = "1000:10000:log5", etuning = "oracle", edomain = "sym", eout = "out";
    std::string eamps = "0.02:2.0:log12";
    double ec0 = 2.0, efreq = 0.0, ealpha = 0.05;
    std::size_t evn = 1000;
    for (auto* sc : {exp_rates, exp_manifold, exp_spectral, exp_seminorm, exp_power}) {
        sc->add_option("--d", ed, "dimension (ambient for manifold)");
        sc->add_option("--n-grid", egrid, "n grid, lo:hi:logK or comma list");
        sc->add_option("--reps", ereps, "replications per n");
        sc->add_option("--c0", ec0, "connectivity radius constant");
        sc->add_option("--out", eout, "output directory");
    }
    exp_rates->add_option("--tuning", etuning, "oracle|theorem");
    exp_rates->add_option("--domain", edomain, "unit|sym");
    exp_rates->add_option("--freq-a", efreq, "cosine frequency (0 = figure convention)");
    exp_manifold->add_option("--tuning", etuning, "oracle|theorem");
    exp_manifold->add_option("--freq-a", efreq, "cosine frequency");
    exp_power->add_option("--alpha", ealpha, "test level");
    exp_power->add_option("--amps", eamps, "amplitude grid lo:hi:logK or comma list");
    exp_power->add_option("--noise-reps", enoise, "noise draws per design");
    exp_varsums->add_option("--n", evn, "summation length");
    exp_varsums->add_option("--out", eout, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }

    try {
        const std::string cmdline = join_args(argc, argv);
        if (*gen)
            return run_gen(g, gen_design, gen_d, gen_domain, gen_signal, gen_amp, gen_a, gen_n,
                           gen_spec_json, gen_out);
        if (*fit_cmd)
            return run_fit(g, fit_data, fit_resp, fit_rho, fit_r, fit_M, fit_kernel, fit_task,
                           fit_dim, fit_c0, fit_out);
        if (*test_cmd)
            return run_test(g, test_data, test_resp, test_alpha, test_cal, test_nperm, test_rho,
                            test_r, test_M, test_dim, test_c0, test_out);
        if (*eigs_cmd) return run_eigs(g, eigs_data, eigs_r, eigs_k, eigs_which, eigs_c0, eigs_out);
        if (*exp_cmd) {
            if (*exp_rates)
                return run_experiment_rates(g, ed, egrid, ereps, etuning, edomain, efreq, ec0, eout,
                                            false);
            if (*exp_manifold) {
                if (efreq <= 0.0) efreq = 1.0;
                return run_experiment_rates(g, ed == 1 ? 3 : ed, egrid, ereps, etuning, "unit",
                                            efreq, ec0, eout, true);
            }
            if (*exp_spectral) return run_experiment_spectral(g, ed, egrid, ereps, ec0, eout);
            if (*exp_seminorm) return run_experiment_seminorm(g, ed, egrid, ereps, ec0, eout);
            if (*exp_varsums) return run_experiment_varsums(g, evn, eout);
            if (*exp_power)
                return run_experiment_power(g, ed, egrid, ereps, enoise, ealpha, eamps, ec0, eout);
        }
        std::cerr << json{{"error", "usage"}, {"message", "no subcommand"}}.dump() << "\n";
        return 2;
    } catch (const input_error& e) {
        std::cerr << json{{"error", "input"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const capacity_error& e) {
        std::cerr << json{{"error", "capacity"}, {"message", e.what()}}.dump() << "\n";
        return 4;
    } catch (const solver_error& e) {
        std::cerr << json{{"error", "solver"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
}
