// Acceptance suite: every release criterion in one binary, one PASS/FAIL
// line per criterion. Exits nonzero if anything fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "acv/simulate.hpp"

using namespace acv;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    int id;
    std::string title;
    bool pass;
    std::string details;
};

std::vector<Outcome> g_outcomes;

void report(int id, const std::string& title, bool pass, const std::string& details) {
    g_outcomes.push_back({id, title, pass, details});
    std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, title.c_str(),
                details.c_str());
    std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
void criterion_1() {
    const auto t0 = Clock::now();
    ScenarioConfig cfg = load_preset("fig3");
    const auto art = run_scenario(cfg);
    const double wall = seconds_since(t0);
    double max_gap = 0.0;
    for (const auto& r : art.trace.rows)
        if (r.t > 30.0)
            max_gap = std::max(max_gap, std::abs(optimal_spacing(r.v_f, cfg.plant.b_f) - r.d));
    const double windowed = art.trace.summary.windowed_regret;  // accumulated for t >= 30
    const bool pass = max_gap < 1.0 && windowed < 5.0 && wall < 5.0;
    report(1, "controller convergence on the sinusoid scenario", pass,
           "max|o(v_f)-d| t>30s = " + fmt(max_gap) + " m, regret(t>30s) = " + fmt(windowed) +
               " m^2, wall = " + fmt(wall) + " s");
}

// ---------------------------------------------------------------- criterion 2
void criterion_2() {
    const auto t0 = Clock::now();
    PlantParams p;  // input bounds and speed box; slew limit at its disabled default
    const int kStates = 100, kGrid = 501, kHorizon = 3;

    struct Case {
        PlantState x;
        double v_l, u_prev;
    };
    std::vector<Case> cases;
    RngStream rng(20260809, 2);
    while (static_cast<int>(cases.size()) < kStates) {
        Case c;
        c.x.v_f = 1.0 + (p.v_free - 1.0) * rng.uniform01();
        c.x.d = 0.5 + 249.5 * rng.uniform01();
        c.v_l = 33.0 * rng.uniform01();
        c.u_prev = p.u_min + (p.u_max - p.u_min) * rng.uniform01();
        const double lo = std::max({-c.x.v_f / p.T, p.u_min, c.u_prev - p.du_max});
        const double hi = std::min({(p.v_free - c.x.v_f) / p.T, p.u_max, c.u_prev + p.du_max});
        if (lo <= hi) cases.push_back(c);
    }

    std::atomic<int> next{0};
    std::atomic<bool> ok{true};
    std::atomic<int> worst_idx{-1};
    std::vector<double> errs(kStates, 0.0);
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < kStates; i = next.fetch_add(1)) {
                const Case& c = cases[static_cast<size_t>(i)];
                const auto dec = optimal_controller(c.x.v_f, c.x.d, c.v_l, c.u_prev, p);
                const std::vector<double> forecast(kHorizon, c.v_l);
                const double u0 =
                    n_step_oracle(c.x, forecast, p, 1.0, kHorizon, kGrid, c.u_prev);
                const double cell = (dec.u_hi - dec.u_lo) / (kGrid - 1);
                errs[static_cast<size_t>(i)] = std::abs(u0 - dec.u);
                if (errs[static_cast<size_t>(i)] > cell + 1e-12) {
                    ok = false;
                    worst_idx = i;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    const double wall = seconds_since(t0);
    const double worst = *std::max_element(errs.begin(), errs.end());
    report(2, "N-step search equals the one-step controller", ok && wall < 120.0,
           "100 states, N=3, grid=501, worst |du| = " + fmt(worst) + ", wall = " + fmt(wall) +
               " s");
}

// ---------------------------------------------------------------- criterion 3
void criterion_3() {
    PlantParams p;
    RngStream rng(20260809, 3);
    bool pass = true;
    double worst = -1e300;
    for (int trial = 0; trial < 50; ++trial) {
        const double v_l = 5.0 + 25.0 * rng.uniform01();
        PlantState s{30.0 * rng.uniform01(), 5.0 + 250.0 * rng.uniform01()};
        double L = lyapunov_value(s, p.b_f);
        for (int t = 0; t < 300; ++t) {
            s = closed_loop_step(s, v_l, p);
            const double Ln = lyapunov_value(s, p.b_f);
            worst = std::max(worst, Ln - L);
            if (Ln > L + 1e-9) pass = false;
            L = Ln;
        }
    }
    report(3, "Lyapunov decrease along the unsaturated closed loop", pass,
           "50 starts x 300 steps, max increase = " + fmt(worst));
}

// ---------------------------------------------------------------- criterion 4
void criterion_4() {
    ScenarioConfig cfg = load_preset("fig6");
    const auto opt = run_scenario(cfg);
    bool recovered = true;
    for (const auto& r : opt.trace.rows)
        if (r.t >= cfg.leader.drop_time + 30.0 && r.regret >= 1.0) recovered = false;

    ScenarioConfig gcfg = cfg;
    gcfg.controller = ControllerKind::Gipps;
    const auto gip = run_scenario(gcfg);
    double min_margin = 1e300;
    for (const auto& r : gip.trace.rows)
        min_margin = std::min(min_margin, r.d - optimal_spacing(r.v_f, cfg.plant.b_f));

    const bool pass = opt.trace.summary.collisions == 0 && recovered && min_margin < 0.0;
    report(4, "leader hijack: safe tracking vs the reaction-limited baseline", pass,
           "collisions = " + std::to_string(opt.trace.summary.collisions) +
               ", regret<1 within 30 s post-drop = " + (recovered ? "yes" : "no") +
               ", baseline min(d - o(v)) = " + fmt(min_margin) + " m");
}

// ------------------------------------------------- criteria 5, 6 and 9 (one run)
struct LongRunStats {
    int nfd = 0, nl = 0;
    long long count = 0;
    std::vector<double> mean;
    Mat cross{1, 1};
    std::vector<std::vector<long long>> pass;  // [confidence][sensor]
    std::vector<std::vector<double>> eta;
    std::vector<double> d_sum;  // per subset
    long long d_count = 0;
};

class LongRunCollector : public SimObserver {
  public:
    LongRunCollector(const ResidualModel& model, const PosteriorModel& pmodel,
                     const SensorBank& bank, double T, double burn_in)
        : model_(model), pmodel_(pmodel), bank_(bank), T_(T), burn_in_(burn_in) {
        st_.nfd = bank.n_fd();
        st_.nl = bank.n_l();
        st_.mean.assign(static_cast<size_t>(st_.nfd), 0.0);
        st_.cross = Mat::zeros(st_.nfd, st_.nfd);
        for (double conf : {0.68, 0.95, 0.997}) {
            std::vector<double> eta(static_cast<size_t>(st_.nfd));
            const double z = normal_quantile(0.5 * (1.0 + conf));
            for (int i = 0; i < st_.nfd; ++i)
                eta[static_cast<size_t>(i)] = z * std::sqrt(model.C_mu(i, i));
            st_.eta.push_back(eta);
            st_.pass.emplace_back(static_cast<size_t>(st_.nfd), 0);
        }
        st_.d_sum.assign(pmodel.subset_inv.size(), 0.0);
    }

    void on_step(const StepView& v) override {
        if (have_prev_ && v.t >= burn_in_) {
            st_.count += 1;
            std::vector<double> mu(static_cast<size_t>(st_.nfd));
            for (int i = 0; i < st_.nfd; ++i) {
                const double z = i < bank_.n_f()
                                     ? v.frame->z_f[static_cast<size_t>(i)]
                                     : v.frame->z_d[static_cast<size_t>(i - bank_.n_f())];
                mu[static_cast<size_t>(i)] = z - v.est->z_pred[static_cast<size_t>(i)];
            }
            for (int i = 0; i < st_.nfd; ++i) {
                const auto ii = static_cast<size_t>(i);
                st_.mean[ii] += mu[ii];
                for (size_t c = 0; c < st_.eta.size(); ++c)
                    if (std::abs(mu[ii]) < st_.eta[c][ii]) st_.pass[c][ii] += 1;
            }
            for (int i = 0; i < st_.nfd; ++i)
                for (int j = i; j < st_.nfd; ++j)
                    st_.cross(i, j) += mu[static_cast<size_t>(i)] * mu[static_cast<size_t>(j)];
            const auto pr = posterior_residual(v.est->d(), prev_d_, prev_vf_, prev_zl_, T_);
            st_.d_count += 1;
            for (uint32_t mask = 1; mask <= pmodel_.full_mask(); ++mask)
                st_.d_sum[mask] += mahalanobis_sd(pr.mu, mask, pmodel_).D;
        }
        prev_d_ = v.est->d();
        prev_vf_ = v.est->v_f();
        prev_zl_ = v.frame->z_l;
        have_prev_ = true;
    }

    LongRunStats st_;

  private:
    const ResidualModel& model_;
    const PosteriorModel& pmodel_;
    const SensorBank& bank_;
    double T_, burn_in_;
    double prev_d_ = 0.0, prev_vf_ = 0.0;
    std::vector<double> prev_zl_;
    bool have_prev_ = false;
};

void criteria_5_6_9() {
    const auto t0 = Clock::now();
    ScenarioConfig cfg = load_preset("residual-stats");
    const EstimatorParams ep = estimator_params(cfg);
    const SteadyStateGain ss = steady_state_gain(cfg.bank, ep);
    const ResidualModel model = build_residual_model(ss.K, cfg.bank, ep, 0.997);
    const PosteriorModel pmodel = build_posterior_model(ss.K, cfg.bank, model.C_r, ep);
    LongRunCollector col(model, pmodel, cfg.bank, cfg.plant.T, 100.0);
    run_scenario(cfg, &col);
    const double wall = seconds_since(t0);
    const auto& st = col.st_;
    const double n = static_cast<double>(st.count);

    // 5: covariance + mean match
    Mat emp = Mat::zeros(st.nfd, st.nfd);
    for (int i = 0; i < st.nfd; ++i)
        for (int j = i; j < st.nfd; ++j) {
            emp(i, j) = st.cross(i, j) / n;
            emp(j, i) = emp(i, j);
        }
    const double rel = (emp - model.C_mu).frobenius_norm() / model.C_mu.frobenius_norm();
    bool means_ok = true;
    double worst_z = 0.0;
    for (int i = 0; i < st.nfd; ++i) {
        const double se = std::sqrt(model.C_mu(i, i) / n);
        const double zscore = std::abs(st.mean[static_cast<size_t>(i)] / n) / se;
        worst_z = std::max(worst_z, zscore);
        if (zscore > 4.0) means_ok = false;
    }
    report(5, "analytic residual covariance matches the simulation",
           rel < 0.05 && means_ok && wall < 120.0,
           std::to_string(st.count) + " samples, rel Frobenius = " + fmt(rel) +
               ", worst mean z = " + fmt(worst_z) + ", wall = " + fmt(wall) + " s");

    // 6: gate calibration at the three confidences
    bool rates_ok = true;
    double worst_dev = 0.0;
    const double confs[3] = {0.68, 0.95, 0.997};
    for (size_t c = 0; c < 3; ++c)
        for (int i = 0; i < st.nfd; ++i) {
            const double rate = st.pass[c][static_cast<size_t>(i)] / n;
            worst_dev = std::max(worst_dev, std::abs(rate - confs[c]));
            if (std::abs(rate - confs[c]) > 0.01) rates_ok = false;
        }
    report(6, "per-sensor pass rates sit at the configured confidences", rates_ok,
           "worst |rate - confidence| = " + fmt(worst_dev));

    // 9: subset Mahalanobis calibration
    bool d_ok = true;
    double worst_ratio = 1.0;
    for (uint32_t mask = 1; mask <= pmodel.full_mask(); ++mask) {
        const double ratio = st.d_sum[mask] / static_cast<double>(st.d_count) /
                             pmodel.subset_size(mask);
        if (std::abs(ratio - 1.0) > std::abs(worst_ratio - 1.0)) worst_ratio = ratio;
        if (ratio < 0.95 || ratio > 1.05) d_ok = false;
    }
    report(9, "E[D] = |subset| for every leader-sensor subset", d_ok,
           "worst E[D]/|L| = " + fmt(worst_ratio) + " over " +
               std::to_string(pmodel.full_mask()) + " subsets");
}

// ---------------------------------------------------------------- criterion 7
class PassRateCollector : public SimObserver {
  public:
    PassRateCollector(const ResidualModel& model, const SensorBank& bank, double burn_in)
        : model_(model), bank_(bank), burn_in_(burn_in),
          pass_(static_cast<size_t>(bank.n_fd()), 0) {}

    void on_step(const StepView& v) override {
        if (v.step == 0 || v.t < burn_in_) return;
        count_ += 1;
        for (int i = 0; i < bank_.n_fd(); ++i) {
            const double z = i < bank_.n_f()
                                 ? v.frame->z_f[static_cast<size_t>(i)]
                                 : v.frame->z_d[static_cast<size_t>(i - bank_.n_f())];
            if (std::abs(z - v.est->z_pred[static_cast<size_t>(i)]) <
                model_.eta[static_cast<size_t>(i)])
                pass_[static_cast<size_t>(i)] += 1;
        }
    }

    std::vector<double> rates() const {
        std::vector<double> r;
        for (long long p : pass_) r.push_back(static_cast<double>(p) / count_);
        return r;
    }

  private:
    const ResidualModel& model_;
    const SensorBank& bank_;
    double burn_in_;
    std::vector<long long> pass_;
    long long count_ = 0;
};

void criterion_7() {
    const auto t0 = Clock::now();
    ScenarioConfig base = load_preset("residual-stats");
    base.duration = 10200.0;  // 1e5 scored steps after the burn-in
    const EstimatorParams ep = estimator_params(base);
    const SteadyStateGain ss = steady_state_gain(base.bank, ep);
    const ResidualModel model = build_residual_model(ss.K, base.bank, ep, 0.997);

    RngStream rng(20260809, 7);
    bool pass = true;
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> attack(static_cast<size_t>(base.bank.n_fd()));
        for (int i = 0; i < base.bank.n_fd(); ++i)
            attack[static_cast<size_t>(i)] =
                (rng.uniform01() * 3.0 - 1.5) * model.eta[static_cast<size_t>(i)];
        ScenarioConfig cfg = base;
        cfg.seed = 1000 + static_cast<uint64_t>(trial);
        for (int i = 0; i < cfg.bank.n_fd(); ++i) {
            Injection inj;
            inj.kind = i < cfg.bank.n_f() ? SensorKind::F : SensorKind::D;
            inj.index = i < cfg.bank.n_f() ? i : i - cfg.bank.n_f();
            inj.start = 0.0;
            inj.end = 1e300;
            inj.mode = InjectionMode::AdditiveConstant;
            inj.magnitude = attack[static_cast<size_t>(i)];
            cfg.attacks.injections.push_back(inj);
        }
        PassRateCollector col(model, cfg.bank, 200.0);
        run_scenario(cfg, &col);
        const auto rates = col.rates();
        const auto p = stealth_probability(attack, model);
        for (int i = 0; i < cfg.bank.n_fd(); ++i) {
            const double dev = std::abs(rates[static_cast<size_t>(i)] - p[static_cast<size_t>(i)]);
            worst = std::max(worst, dev);
            if (dev > 0.01) pass = false;
        }
    }
    report(7, "stealth probabilities match attacked-run pass rates", pass,
           "10 random injections, worst |analytic - empirical| = " + fmt(worst) +
               ", wall = " + fmt(seconds_since(t0)) + " s");
}

// ---------------------------------------------------------------- criterion 8
void criterion_8() {
    ScenarioConfig cfg = load_preset("residual-stats");
    const EstimatorParams ep = estimator_params(cfg);
    const SteadyStateGain ss = steady_state_gain(cfg.bank, ep);
    const ResidualModel model = build_residual_model(ss.K, cfg.bank, ep, 0.997);
    const double d_tilde = equilibrium(leader_speed(cfg.leader, 0.0), cfg.plant.b_f).d;

    bool pass = true;
    double worst_frac = 1.0;
    for (double p : {0.9, 0.95, 0.99}) {
        const std::vector<double> p_min(static_cast<size_t>(cfg.bank.n_fd()), p);
        for (int sensor = 0; sensor < cfg.bank.n_fd(); ++sensor) {
            std::vector<bool> support(static_cast<size_t>(cfg.bank.n_fd()), false);
            support[static_cast<size_t>(sensor)] = true;
            const auto found =
                optimal_stealthy_attack(p_min, model, cfg.plant, d_tilde, support);
            double grid_best = 0.0;
            const double span = 8.0 * model.eta[static_cast<size_t>(sensor)];
            for (int k = 0; k < 10000; ++k) {
                std::vector<double> a(static_cast<size_t>(cfg.bank.n_fd()), 0.0);
                a[static_cast<size_t>(sensor)] = -span + 2.0 * span * k / 9999.0;
                const auto probs = stealth_probability(a, model);
                bool ok = true;
                for (double pi : probs) ok = ok && pi >= p;
                if (!ok) continue;
                grid_best = std::max(grid_best,
                                      steady_bias_and_regret(a, model, cfg.plant, d_tilde).objective);
            }
            if (grid_best <= 0.0) continue;
            const double frac = found.objective / grid_best;
            worst_frac = std::min(worst_frac, frac);
            if (frac < 0.99) pass = false;
        }
    }
    report(8, "attack search attains the dense-grid optimum per sensor", pass,
           "8 sensors x {0.9,0.95,0.99}, worst found/grid = " + fmt(worst_frac));
}

// -------------------------------------------------------- criteria 10 and 11
void criteria_10_11() {
    const auto t0 = Clock::now();
    ScenarioConfig base = load_preset("fig9");
    const int kRuns = 20;

    struct RunOut {
        uint32_t modal = 0;
        int latency = -1;
        double half = 0.0, full = 0.0, bound = 0.0;
    };
    std::vector<RunOut> outs(kRuns);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    for (unsigned w = 0; w < std::min<unsigned>(workers, kRuns); ++w) {
        pool.emplace_back([&]() {
            for (int k = next.fetch_add(1); k < kRuns; k = next.fetch_add(1)) {
                ScenarioConfig cfg = base;
                cfg.seed = base.seed + static_cast<uint64_t>(k);
                cfg.output.record_trace = false;
                const auto art = run_scenario(cfg);
                const auto crt = cyber_regret(art.mab_records, art.mab_attack_values,
                                              *art.posterior_model);
                RunOut& o = outs[static_cast<size_t>(k)];
                o.modal = art.trace.summary.modal_arm;
                const int n_arms = (1 << cfg.bank.n_l()) - 1;
                double init_mean = 0.0;
                for (int i = 0; i < n_arms; ++i)
                    init_mean += crt.rows[static_cast<size_t>(i)].xi -
                                 crt.rows[static_cast<size_t>(i)].xi_star;
                init_mean /= n_arms;
                for (size_t i = static_cast<size_t>(n_arms); i < crt.rows.size(); ++i) {
                    if (crt.rows[i].xi - crt.rows[i].xi_star < 0.1 * init_mean) {
                        o.latency = static_cast<int>(i) - n_arms + 1;
                        break;
                    }
                }
                o.half = crt.rows[4999].cum_regret;
                o.full = crt.rows.back().cum_regret;
                o.bound = crt.rows.back().bound;
            }
        });
    }
    for (auto& th : pool) th.join();

    int modal_ok = 0, latency_ok = 0, bound_ok = 0;
    double ratio_sum = 0.0;
    for (const auto& o : outs) {
        if (o.modal == 0b1011) ++modal_ok;
        if (o.latency > 0 && o.latency <= 40) ++latency_ok;
        if (o.full <= o.bound) ++bound_ok;
        ratio_sum += o.full / o.half;
    }
    const double mean_ratio = ratio_sum / kRuns;
    report(10, "bandit pins the attacked leader sensor", modal_ok >= 18 && latency_ok >= 18,
           "modal arm 1011 in " + std::to_string(modal_ok) + "/20, regret settles <=40 plays in " +
               std::to_string(latency_ok) + "/20");
    report(11, "cyber regret grows sublinearly under the logarithmic bound",
           mean_ratio < 1.7 && bound_ok >= 18,
           "mean regret(1e4)/regret(5e3) = " + fmt(mean_ratio) + ", within bound in " +
               std::to_string(bound_ok) + "/20, wall = " + fmt(seconds_since(t0)) + " s");
}

// --------------------------------------------------------------- criterion 12
void criterion_12() {
    ScenarioConfig base = load_preset("fig10");
    bool pass = true;
    std::string detail;
    for (auto [kind, name] : {std::pair{SensorKind::F, "f1"}, std::pair{SensorKind::D, "d1"},
                              std::pair{SensorKind::L, "l1"}}) {
        double growth[2];
        double slope_t = 0.0;
        for (int defended = 1; defended >= 0; --defended) {
            ScenarioConfig cfg = base;
            cfg.attacks.injections.clear();
            Injection inj;
            inj.kind = kind;
            inj.index = 0;
            inj.start = 1000.0;
            inj.end = 1e300;
            inj.mode = InjectionMode::MultiplicativeFactor;
            inj.magnitude = 1.5;
            cfg.attacks.injections.push_back(inj);
            cfg.detectors.prior_filter = defended;
            cfg.detectors.mab = defended;
            cfg.regret_window_start = inj.start;
            const auto art = run_scenario(cfg);
            growth[defended] = art.trace.summary.windowed_regret;
            if (!defended) {
                // OLS slope of the cumulative regret over the attacked window
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                long long m = 0;
                for (const auto& r : art.trace.rows) {
                    if (r.t < inj.start) continue;
                    sx += r.t;
                    sy += r.cum_regret;
                    sxx += r.t * r.t;
                    sxy += r.t * r.cum_regret;
                    ++m;
                }
                const double mb = static_cast<double>(m);
                const double slope = (mb * sxy - sx * sy) / (mb * sxx - sx * sx);
                const double icept = (sy - slope * sx) / mb;
                double sse = 0.0;
                for (const auto& r : art.trace.rows) {
                    if (r.t < inj.start) continue;
                    const double e = r.cum_regret - (icept + slope * r.t);
                    sse += e * e;
                }
                const double se =
                    std::sqrt(sse / (mb - 2.0) / (sxx - sx * sx / mb));
                slope_t = slope / se;
            }
        }
        const bool ok = growth[1] < 0.10 * growth[0] && slope_t > 1.96;
        pass = pass && ok;
        detail += std::string(name) + ": defended/kalman = " + fmt(growth[1] / growth[0]) +
                  ", slope t = " + fmt(slope_t) + "; ";
    }
    report(12, "end-to-end defense beats plain filtering on every sensor type", pass, detail);
}

// --------------------------------------------------------------- criterion 13
std::string run_to_csv_bytes(const ScenarioConfig& cfg, const std::string& path) {
    const auto art = run_scenario(cfg);
    write_trace_csv(art.trace, path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_13() {
    bool pass = true;
    std::string detail;
    for (const std::string name : {"fig3", "fig9"}) {
        ScenarioConfig cfg = load_preset(name);
        const std::string a = run_to_csv_bytes(cfg, "tmp_det_a.csv");
        const std::string b = run_to_csv_bytes(cfg, "tmp_det_b.csv");
        const bool same = !a.empty() && a == b;
        pass = pass && same;
        detail += name + (same ? ": identical; " : ": DIFFER; ");
    }
    std::remove("tmp_det_a.csv");
    std::remove("tmp_det_b.csv");
    report(13, "fixed seeds give byte-identical traces", pass, detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criteria_5_6_9();
    criterion_7();
    criterion_8();
    criteria_10_11();
    criterion_12();
    criterion_13();

    std::sort(g_outcomes.begin(), g_outcomes.end(),
              [](const Outcome& a, const Outcome& b) { return a.id < b.id; });
    int failures = 0;
    std::printf("\n==== acceptance summary ====\n");
    for (const auto& o : g_outcomes) {
        std::printf("%s  %2d  %s\n", o.pass ? "PASS" : "FAIL", o.id, o.title.c_str());
        if (!o.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(g_outcomes.size()) - failures,
                g_outcomes.size());
    return failures == 0 ? 0 : 1;
}
