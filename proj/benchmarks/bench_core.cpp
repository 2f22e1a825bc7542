#include <benchmark/benchmark.h>

#include "acv/simulate.hpp"

using namespace acv;

namespace {

struct Setup {
    SensorBank bank = SensorBank::defaults();
    EstimatorParams params;
    SteadyStateGain ss;
    ResidualModel model;
    PosteriorModel pmodel;

    Setup() {
        params.vl_variance = full_bank_vl_variance(bank);
        ss = steady_state_gain(bank, params);
        model = build_residual_model(ss.K, bank, params, 0.997);
        pmodel = build_posterior_model(ss.K, bank, model.C_r, params);
    }
};

Setup& setup() {
    static Setup s;
    return s;
}

void BM_KalmanStep(benchmark::State& state) {
    auto& s = setup();
    RngStream rng(1);
    const Truth truth{20.0, 80.0, 20.0};
    const auto frame = sample_readings(0.0, truth, s.bank, rng);
    auto est = init_estimator(frame, s.bank);
    const std::vector<bool> all(s.bank.n_fd(), true);
    for (auto _ : state) {
        est = kalman_step(est, 0.0, 20.0, frame, all, s.bank, s.params);
        benchmark::DoNotOptimize(est.x_hat(0, 0));
    }
}
BENCHMARK(BM_KalmanStep);

void BM_SteadyStateGain(benchmark::State& state) {
    auto& s = setup();
    for (auto _ : state) {
        const auto ss = steady_state_gain(s.bank, s.params);
        benchmark::DoNotOptimize(ss.P(0, 0));
    }
}
BENCHMARK(BM_SteadyStateGain);

void BM_OptimalController(benchmark::State& state) {
    PlantParams p;
    double u = 0.0;
    for (auto _ : state) {
        u = optimal_controller(21.3, 92.0, 20.0, u, p).u;
        benchmark::DoNotOptimize(u);
    }
}
BENCHMARK(BM_OptimalController);

void BM_MahalanobisFullSubset(benchmark::State& state) {
    auto& s = setup();
    const std::vector<double> mu{0.1, -0.2, 0.05, 0.3};
    for (auto _ : state) {
        const auto sm = mahalanobis_sd(mu, s.pmodel.full_mask(), s.pmodel);
        benchmark::DoNotOptimize(sm.D);
    }
}
BENCHMARK(BM_MahalanobisFullSubset);

void BM_UcbSelect(benchmark::State& state) {
    auto& s = setup();
    BanditState b(s.bank.n_l());
    RngStream rng(2);
    for (uint32_t arm = 1; arm <= s.pmodel.full_mask(); ++arm)
        for (int k = 0; k < 3; ++k)
            update_arm(b, arm, s.pmodel.subset_size(arm) * (0.9 + 0.2 * rng.uniform01()),
                       s.pmodel);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ucb_select(b, s.pmodel));
    }
}
BENCHMARK(BM_UcbSelect);

void BM_NStepOracle(benchmark::State& state) {
    PlantParams p;
    p.du_max = 0.1;
    const std::vector<double> forecast(3, 20.0);
    for (auto _ : state) {
        const double u = n_step_oracle({22.0, 70.0}, forecast, p, 1.0, 3, 501, 0.0);
        benchmark::DoNotOptimize(u);
    }
}
BENCHMARK(BM_NStepOracle);

void BM_SimulateSecond(benchmark::State& state) {
    ScenarioConfig cfg;
    cfg.duration = 1.0;
    cfg.detectors.prior_filter = true;
    cfg.detectors.mab = true;
    cfg.attacks.injections.push_back(
        {SensorKind::L, 2, 0.0, 1e300, InjectionMode::AdditiveConstant, 2.0});
    cfg.output.record_trace = false;
    for (auto _ : state) {
        const auto art = run_scenario(cfg);
        benchmark::DoNotOptimize(art.trace.summary.final_cum_regret);
    }
}
BENCHMARK(BM_SimulateSecond);

}  // namespace

BENCHMARK_MAIN();
