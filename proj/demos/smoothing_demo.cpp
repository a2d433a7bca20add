// Minimal end-to-end walkthrough: simulate, fit with the theorem tuning,
// evaluate the in-sample error, and run the permutation test.

#include <cstdio>

#include "lapsmooth/lapsmooth.hpp"

int main() {
    using namespace lapsmooth;

    const auto design = DesignSpec::uniform(1, CubeDomain::symmetric);
    const auto signal = SignalSpec::cosine(1, 1.0, 1.0);
    const Dataset data = make_dataset(design, signal, 2000, 7);

    const TuningSpec tuning = resolve_tuning(data.points.n, 1, 1.0, TuningTask::estimation);
    const KernelSpec kernel = KernelSpec::make(KernelFamily::uniform, 1);
    const SmoothingFit f = fit(data.points, data.y, tuning, kernel);

    std::printf("n = %zu, r = %.4f, rho = %.3g\n", data.points.n, tuning.r, tuning.rho);
    std::printf("CG iterations = %d, residual = %.2e\n", f.solve.iterations, f.solve.final_residual);
    std::printf("in-sample MSE = %.5f\n", in_sample_mse(f, data.f0_at_points));

    const auto ext = extend_voronoi(f, data.points);
    const double probe[1] = {0.123};
    std::printf("Voronoi extension at x = 0.123: %.4f (truth %.4f)\n", ext.evaluate(probe),
                std::cos(kPi * 0.123));

    const TuningSpec test_tuning = resolve_tuning(data.points.n, 1, 1.0, TuningTask::testing);
    const GofTestResult result =
        gof_test_permutation(data.points, data.y, test_tuning, kernel, 0.05, 199, 7);
    std::printf("permutation test: T = %.4f, p = %.3f, reject = %s\n", result.t_hat,
                *result.p_value, result.reject ? "yes" : "no");
    return 0;
}
