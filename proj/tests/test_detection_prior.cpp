#include <cmath>

#include "doctest.h"

#include "acv/detection_prior.hpp"
#include "acv/simulate.hpp"

using namespace acv;

namespace {

struct Fixture {
    SensorBank bank = SensorBank::defaults();
    EstimatorParams params;
    PlantParams plant;
    ResidualModel model;

    Fixture() {
        params.vl_variance = full_bank_vl_variance(bank);
        const SteadyStateGain ss = steady_state_gain(bank, params);
        model = build_residual_model(ss.K, bank, params, 0.997);
    }
};

// the estimation-error / residual recursion under a constant injection,
// driven by the true noise sources
struct ErrorSim {
    const ResidualModel& m;
    const EstimatorParams& params;
    std::vector<double> r_std;
    Mat A{2, 2}, QA{2, 2}, QF{2, 1};
    double rf = 0.0, rd = 0.0;
    RngStream rng;

    ErrorSim(const Fixture& f, uint64_t seed)
        : m(f.model), params(f.params), rng(seed) {
        for (double v : measurement_variances(f.bank)) r_std.push_back(std::sqrt(v));
        A = plant_A(params.T);
        QA = m.Q * A;
        QF = m.Q * plant_F(params.T);
    }

    // returns the residual vector mu(t) and advances the error state
    std::vector<double> step(const std::vector<double>& attack) {
        const int nfd = static_cast<int>(r_std.size());
        const double r_l = std::sqrt(params.vl_variance) * rng.normal();
        std::vector<double> e(static_cast<size_t>(nfd));
        for (int i = 0; i < nfd; ++i) e[static_cast<size_t>(i)] = r_std[static_cast<size_t>(i)] * rng.normal();
        const double pf = A(0, 0) * rf;                       // A r(t-1), F-noise enters d only
        const double pd = A(1, 0) * rf + rd + params.T * r_l;
        std::vector<double> mu(static_cast<size_t>(nfd));
        for (int i = 0; i < nfd; ++i)
            mu[static_cast<size_t>(i)] = (i < m.n_f ? pf : pd) + e[static_cast<size_t>(i)] +
                                         attack[static_cast<size_t>(i)];
        // r(t) = QA r + QF r_l - K (e + a)
        double kf = 0.0, kd = 0.0;
        for (int i = 0; i < nfd; ++i) {
            const double corrupted = e[static_cast<size_t>(i)] + attack[static_cast<size_t>(i)];
            kf += m.K(0, i) * corrupted;
            kd += m.K(1, i) * corrupted;
        }
        const double nrf = QA(0, 0) * rf + QA(0, 1) * rd + QF(0, 0) * r_l - kf;
        const double nrd = QA(1, 0) * rf + QA(1, 1) * rd + QF(1, 0) * r_l - kd;
        rf = nrf;
        rd = nrd;
        return mu;
    }
};

}  // namespace

TEST_CASE("residual model structure") {
    Fixture f;
    const Mat QA = f.model.Q * plant_A(f.params.T);
    CHECK(spectral_radius_2x2(QA) < 1.0);
    // Riccati fixed-point residual
    const Mat res = QA * f.model.C_r * QA.transpose() + f.model.C_rho - f.model.C_r;
    CHECK(res.frobenius_norm() < 1e-10);
    CHECK(is_symmetric_psd(f.model.C_rho));
    CHECK(is_symmetric_psd(f.model.C_r));
    CHECK(is_symmetric_psd(f.model.C_mu));
    // 0.997 confidence is the 3-sigma gate
    for (int i = 0; i < f.bank.n_fd(); ++i) {
        const double ratio = f.model.eta[static_cast<size_t>(i)] / std::sqrt(f.model.C_mu(i, i));
        CHECK(ratio == doctest::Approx(3.0).epsilon(0.02));
    }
    CHECK_THROWS_AS(
        build_residual_model(f.model.K, f.bank, f.params, 1.5), std::invalid_argument);
}

TEST_CASE("residual covariance is homogeneous in the noise variances") {
    // scaling every variance (measurement, leader estimate, modeled jitter)
    // by 4 leaves the gain untouched and scales C_mu by exactly 4
    SensorBank bank = SensorBank::defaults();
    EstimatorParams params;
    params.vl_variance = full_bank_vl_variance(bank);
    const ResidualModel m1 =
        build_residual_model(steady_state_gain(bank, params).K, bank, params, 0.997);

    SensorBank bank4 = bank;
    for (auto& v : bank4.f_var) v *= 4.0;
    for (auto& v : bank4.d_var) v *= 4.0;
    for (auto& v : bank4.l_var) v *= 4.0;
    EstimatorParams params4 = params;
    params4.vl_variance = full_bank_vl_variance(bank4);
    params4.accel_noise_std *= 2.0;
    const ResidualModel m4 =
        build_residual_model(steady_state_gain(bank4, params4).K, bank4, params4, 0.997);

    CHECK((m4.K - m1.K).frobenius_norm() < 1e-6);  // both stop within ~1e-7 of the common limit
    CHECK((m4.C_mu - 4.0 * m1.C_mu).frobenius_norm() / m1.C_mu.frobenius_norm() < 1e-6);
}

TEST_CASE("residual covariance matches the filter process") {
    Fixture f;
    ErrorSim sim(f, 314);
    const int nfd = f.bank.n_fd();
    const std::vector<double> no_attack(static_cast<size_t>(nfd), 0.0);
    Mat acc = Mat::zeros(nfd, nfd);
    std::vector<double> mean(static_cast<size_t>(nfd), 0.0);
    const int n = 200000;
    for (int t = 0; t < n + 1000; ++t) {
        const auto mu = sim.step(no_attack);
        if (t < 1000) continue;
        for (int i = 0; i < nfd; ++i) {
            mean[static_cast<size_t>(i)] += mu[static_cast<size_t>(i)];
            for (int j = 0; j < nfd; ++j)
                acc(i, j) += mu[static_cast<size_t>(i)] * mu[static_cast<size_t>(j)];
        }
    }
    acc *= 1.0 / n;
    CHECK((acc - f.model.C_mu).frobenius_norm() / f.model.C_mu.frobenius_norm() < 0.05);
    for (int i = 0; i < nfd; ++i) {
        const double se = std::sqrt(f.model.C_mu(i, i) / n);
        CHECK(std::abs(mean[static_cast<size_t>(i)] / n) < 4.0 * se);
    }
}

TEST_CASE("detect gates on the thresholds") {
    Fixture f;
    ReadingFrame frame;
    frame.z_f = {20.0, 20.0, 20.0, 20.0};
    frame.z_d = {80.0, 80.0, 80.0, 80.0};
    std::vector<double> z_pred(static_cast<size_t>(f.bank.n_fd()));
    for (int i = 0; i < f.bank.n_f(); ++i) z_pred[static_cast<size_t>(i)] = 20.0;
    for (int i = 0; i < f.bank.n_d(); ++i) z_pred[static_cast<size_t>(f.bank.n_f() + i)] = 80.0;

    SUBCASE("exact prediction passes everything") {
        const auto pass = detect(frame, z_pred, f.model);
        for (bool p : pass) CHECK(p);
    }
    SUBCASE("a 10-sigma injection is flagged essentially always") {
        const int target = 5;  // d2
        std::vector<double> attack(static_cast<size_t>(f.bank.n_fd()), 0.0);
        attack[target] = 10.0 * std::sqrt(f.model.C_mu(target, target));
        // the filter absorbs part of the bias, but the residual mean still
        // sits far outside the gate
        CHECK(stealth_probability(attack, f.model)[target] < 1e-3);
        ErrorSim sim(f, 11);
        int flagged = 0;
        const int n = 20000;
        for (int t = 0; t < n; ++t) {
            const auto mu = sim.step(attack);
            if (std::abs(mu[target]) >= f.model.eta[target]) ++flagged;
        }
        CHECK(static_cast<double>(flagged) / n > 0.999);
    }
}

TEST_CASE("stealth probability") {
    Fixture f;
    const int nfd = f.bank.n_fd();
    SUBCASE("no attack recovers the confidence on every sensor") {
        const auto p = stealth_probability(std::vector<double>(nfd, 0.0), f.model);
        for (double pi : p) CHECK(pi == doctest::Approx(0.997).epsilon(1e-9));
    }
    SUBCASE("huge attacks cannot stay stealthy") {
        std::vector<double> a(static_cast<size_t>(nfd), 0.0);
        a[5] = 1000.0;
        CHECK(stealth_probability(a, f.model)[5] < 1e-12);
    }
    SUBCASE("symmetric in the sign of the attack") {
        RngStream rng(6);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> a, na;
            for (int i = 0; i < nfd; ++i) {
                const double v = (rng.uniform01() - 0.5) * 4.0 * f.model.eta[static_cast<size_t>(i)];
                a.push_back(v);
                na.push_back(-v);
            }
            const auto p1 = stealth_probability(a, f.model);
            const auto p2 = stealth_probability(na, f.model);
            for (int i = 0; i < nfd; ++i)
                CHECK(p1[static_cast<size_t>(i)] ==
                      doctest::Approx(p2[static_cast<size_t>(i)]).epsilon(1e-12));
        }
    }
    SUBCASE("matches the simulated pass rate under a constant injection") {
        std::vector<double> a(static_cast<size_t>(nfd), 0.0);
        a[5] = 1.2 * f.model.eta[5];
        a[1] = -0.8 * f.model.eta[1];
        const auto p = stealth_probability(a, f.model);
        ErrorSim sim(f, 2222);
        std::vector<int> pass(static_cast<size_t>(nfd), 0);
        const int n = 100000;
        for (int t = 0; t < n + 2000; ++t) {
            const auto mu = sim.step(a);
            if (t < 2000) continue;
            for (int i = 0; i < nfd; ++i)
                if (std::abs(mu[static_cast<size_t>(i)]) < f.model.eta[static_cast<size_t>(i)])
                    pass[static_cast<size_t>(i)] += 1;
        }
        for (int i = 0; i < nfd; ++i)
            CHECK(std::abs(static_cast<double>(pass[static_cast<size_t>(i)]) / n -
                           p[static_cast<size_t>(i)]) < 0.01);
    }
}

TEST_CASE("steady bias under constant injection") {
    Fixture f;
    const int nfd = f.bank.n_fd();
    const double d_tilde = equilibrium(20.0, f.plant.b_f).d;
    SUBCASE("zero attack, zero bias") {
        const auto sb = steady_bias_and_regret(std::vector<double>(nfd, 0.0), f.model, f.plant,
                                               d_tilde);
        CHECK(sb.r_bar.frobenius_norm() == 0.0);
        CHECK(sb.objective == 0.0);
    }
    SUBCASE("bias is linear in the attack") {
        RngStream rng(9);
        std::vector<double> a;
        for (int i = 0; i < nfd; ++i) a.push_back(rng.uniform01() - 0.5);
        std::vector<double> a2(a);
        for (auto& v : a2) v *= 2.0;
        const auto s1 = steady_bias_and_regret(a, f.model, f.plant, d_tilde);
        const auto s2 = steady_bias_and_regret(a2, f.model, f.plant, d_tilde);
        CHECK(s2.r_bar(0, 0) == doctest::Approx(2.0 * s1.r_bar(0, 0)).epsilon(1e-10));
        CHECK(s2.r_bar(1, 0) == doctest::Approx(2.0 * s1.r_bar(1, 0)).epsilon(1e-10));
    }
    SUBCASE("matches the simulated steady error") {
        std::vector<double> a(static_cast<size_t>(nfd), 0.0);
        a[4] = 0.15;  // d1
        const auto sb = steady_bias_and_regret(a, f.model, f.plant, d_tilde);
        ErrorSim sim(f, 515);
        double mf = 0.0, md = 0.0;
        const int n = 400000;
        for (int t = 0; t < n + 2000; ++t) {
            sim.step(a);
            if (t < 2000) continue;
            mf += sim.rf;
            md += sim.rd;
        }
        const double se_f = std::sqrt(f.model.C_r(0, 0) / n) * 20.0;  // correlated samples
        const double se_d = std::sqrt(f.model.C_r(1, 1) / n) * 20.0;
        CHECK(std::abs(mf / n - sb.r_bar(0, 0)) < 4.0 * se_f);
        CHECK(std::abs(md / n - sb.r_bar(1, 0)) < 4.0 * se_d);
    }
}

TEST_CASE("optimal stealthy attack search") {
    Fixture f;
    const int nfd = f.bank.n_fd();
    const double d_tilde = equilibrium(20.0, f.plant.b_f).d;
    SUBCASE("tight stealth floor collapses to the zero attack") {
        // the best objective shrinks linearly with the feasibility slack
        const auto a = optimal_stealthy_attack(
            std::vector<double>(static_cast<size_t>(nfd), 0.997 - 1e-9), f.model, f.plant,
            d_tilde, {}, 8);
        CHECK(a.objective < 1e-5);
    }
    SUBCASE("unattainable stealth floor returns the zero attack") {
        const auto a = optimal_stealthy_attack(
            std::vector<double>(static_cast<size_t>(nfd), 0.999), f.model, f.plant, d_tilde, {}, 4);
        for (double v : a.attack) CHECK(v == 0.0);
    }
    SUBCASE("single-sensor search reaches the dense-grid optimum") {
        std::vector<bool> support(static_cast<size_t>(nfd), false);
        support[5] = true;  // d2
        const std::vector<double> p_min(static_cast<size_t>(nfd), 0.95);
        const auto best =
            optimal_stealthy_attack(p_min, f.model, f.plant, d_tilde, support, 8);
        double grid_best = 0.0;
        const double span = 6.0 * f.model.eta[5];
        for (int k = 0; k <= 4000; ++k) {
            std::vector<double> a(static_cast<size_t>(nfd), 0.0);
            a[5] = -span + 2.0 * span * k / 4000.0;
            bool ok = true;
            const auto p = stealth_probability(a, f.model);
            for (int i = 0; i < nfd; ++i)
                ok = ok && p[static_cast<size_t>(i)] >= 0.95;
            if (!ok) continue;
            grid_best = std::max(
                grid_best, steady_bias_and_regret(a, f.model, f.plant, d_tilde).objective);
        }
        CHECK(best.objective >= 0.99 * grid_best);
    }
    SUBCASE("relaxing the floor never shrinks the best objective") {
        double prev = 0.0;
        for (double p : {0.99, 0.95, 0.9}) {
            const auto a = optimal_stealthy_attack(
                std::vector<double>(static_cast<size_t>(nfd), p), f.model, f.plant, d_tilde, {},
                16);
            CHECK(a.objective >= prev * 0.98);
            prev = a.objective;
        }
    }
}
