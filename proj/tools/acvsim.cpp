// acvsim: command-line front end for the two-vehicle simulator: scenario
// runs, attacker-side stealth optimization, bandit evaluation across seeds,
// and the canned figure-reproduction presets.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "CLI11.hpp"

#include "acv/simulate.hpp"

namespace fs = std::filesystem;
using namespace acv;

namespace {

void apply_seed_override(ScenarioConfig& cfg) {
    if (const char* env = std::getenv("ACVSIM_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
}

void emit_outputs(const RunArtifacts& art, const ScenarioConfig& cfg,
                  const std::string& trace_path, const std::string& summary_path,
                  const std::string& mab_path) {
    if (!trace_path.empty()) write_trace_csv(art.trace, trace_path);
    if (!summary_path.empty()) write_summary_json(art.trace.summary, summary_path);
    if (!mab_path.empty() && cfg.detectors.mab) {
        const auto crt = cyber_regret(art.mab_records, art.mab_attack_values,
                                      *art.posterior_model);
        write_mab_csv(crt, cfg.bank.n_l(), mab_path);
    }
}

int cmd_simulate(const std::string& file, std::string trace_path, std::string summary_path,
                 std::string mab_path) {
    ScenarioConfig cfg = load_scenario_file(file);
    apply_seed_override(cfg);
    if (trace_path.empty()) trace_path = cfg.output.trace_csv;
    if (summary_path.empty()) summary_path = cfg.output.summary_json;
    if (mab_path.empty()) mab_path = cfg.output.mab_csv;
    if (trace_path.empty()) trace_path = cfg.name + "_trace.csv";
    if (summary_path.empty()) summary_path = cfg.name + "_summary.json";
    const RunArtifacts art = run_scenario(cfg);
    emit_outputs(art, cfg, trace_path, summary_path, mab_path);
    std::cout << summary_to_json(art.trace.summary);
    return 0;
}

int cmd_validate(const std::string& file) {
    load_scenario_file(file);
    std::cout << "ok: " << file << "\n";
    return 0;
}

int cmd_attack_search(const std::string& file, double min_stealth, const std::string& sensor,
                      const std::string& out_path) {
    ScenarioConfig cfg = load_scenario_file(file);
    const EstimatorParams ep = estimator_params(cfg);
    const SteadyStateGain ss = steady_state_gain(cfg.bank, ep);
    const ResidualModel model =
        build_residual_model(ss.K, cfg.bank, ep, cfg.detectors.confidence);
    const double v_nominal = leader_speed(cfg.leader, 0.0);
    const double d_tilde = equilibrium(v_nominal, cfg.plant.b_f).d;

    std::vector<bool> support;
    if (!sensor.empty()) {
        support.assign(static_cast<size_t>(cfg.bank.n_fd()), false);
        bool found = false;
        for (int i = 0; i < cfg.bank.n_fd(); ++i) {
            const auto name = i < cfg.bank.n_f()
                                  ? sensor_name(SensorKind::F, i)
                                  : sensor_name(SensorKind::D, i - cfg.bank.n_f());
            if (name == sensor) {
                support[static_cast<size_t>(i)] = true;
                found = true;
            }
        }
        if (!found) throw ConfigError("attack-search: unknown F/D sensor " + sensor);
    }

    const std::vector<double> p_min(static_cast<size_t>(cfg.bank.n_fd()), min_stealth);
    const AttackAssessment a =
        optimal_stealthy_attack(p_min, model, cfg.plant, d_tilde, support);

    std::string j = "{\n  \"min_stealth\": " + format_double(min_stealth) +
                    ",\n  \"d_tilde_m\": " + format_double(d_tilde) + ",\n  \"attack\": {";
    for (int i = 0; i < cfg.bank.n_fd(); ++i) {
        const auto name = i < cfg.bank.n_f() ? sensor_name(SensorKind::F, i)
                                             : sensor_name(SensorKind::D, i - cfg.bank.n_f());
        j += (i ? ", " : "") + std::string("\"") + name +
             "\": " + format_double(a.attack[static_cast<size_t>(i)]);
    }
    j += "},\n  \"stealth\": [";
    for (size_t i = 0; i < a.stealth.size(); ++i)
        j += (i ? ", " : "") + format_double(a.stealth[i]);
    j += "],\n  \"r_bar\": [" + format_double(a.r_bar(0, 0)) + ", " +
         format_double(a.r_bar(1, 0)) + "],\n";
    j += "  \"theta_bar\": " + format_double(a.theta_bar) + ",\n";
    j += "  \"objective\": " + format_double(a.objective) + "\n}\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << j;
    }
    std::cout << j;
    return 0;
}

int cmd_mab_eval(const std::string& file, int runs, const std::string& out_dir) {
    ScenarioConfig cfg = load_scenario_file(file);
    apply_seed_override(cfg);
    if (!cfg.detectors.mab) throw ConfigError("mab-eval: scenario has the MAB detector off");
    fs::create_directories(out_dir);

    struct RunResult {
        uint64_t seed = 0;
        RunSummary summary;
        CyberRegretTrace crt;
    };
    std::vector<RunResult> results(static_cast<size_t>(runs));

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (unsigned w = 0; w < std::min<unsigned>(hw, static_cast<unsigned>(runs)); ++w) {
        pool.emplace_back([&]() {
            for (int k = next.fetch_add(1); k < runs; k = next.fetch_add(1)) {
                ScenarioConfig c = cfg;
                c.seed = cfg.seed + static_cast<uint64_t>(k);
                c.output.record_trace = false;
                const RunArtifacts art = run_scenario(c);
                results[static_cast<size_t>(k)].seed = c.seed;
                results[static_cast<size_t>(k)].summary = art.trace.summary;
                results[static_cast<size_t>(k)].crt =
                    cyber_regret(art.mab_records, art.mab_attack_values, *art.posterior_model);
            }
        });
    }
    for (auto& th : pool) th.join();

    std::map<uint32_t, int> modal_hist;
    std::ofstream runs_csv(out_dir + "/runs_summary.csv");
    runs_csv << "run,seed,modal_arm,cum_regret_half,cum_regret_final,bound_final,within_bound\n";
    for (int k = 0; k < runs; ++k) {
        const auto& r = results[static_cast<size_t>(k)];
        write_mab_csv(r.crt, cfg.bank.n_l(), out_dir + "/run_" + std::to_string(k) + ".csv");
        modal_hist[r.summary.modal_arm] += 1;
        const auto& rows = r.crt.rows;
        const double half =
            rows.empty() ? 0.0 : rows[rows.size() / 2].cum_regret;
        const double fin = rows.empty() ? 0.0 : rows.back().cum_regret;
        const double bound = rows.empty() ? 0.0 : rows.back().bound;
        runs_csv << k << ',' << r.seed << ',' << arm_to_string(r.summary.modal_arm, cfg.bank.n_l())
                 << ',' << format_double(half) << ',' << format_double(fin) << ','
                 << format_double(bound) << ',' << (fin <= bound ? 1 : 0) << '\n';
    }
    std::ofstream hist_csv(out_dir + "/arm_histogram.csv");
    hist_csv << "arm,runs_modal\n";
    for (const auto& [arm, count] : modal_hist)
        hist_csv << arm_to_string(arm, cfg.bank.n_l()) << ',' << count << '\n';
    std::cout << "wrote " << runs << " runs to " << out_dir << "\n";
    return 0;
}

// ---- reproduce ----

struct PriorStats {
    // second moments of the F/D residuals plus pass counts per confidence
    int nfd = 0;
    long long count = 0;
    std::vector<double> sum, sum2;
    Mat cross{1, 1};
    std::vector<long long> pass68, pass95, pass997;
    std::vector<double> eta68, eta95, eta997;
};

class ResidualStatsCollector : public SimObserver {
  public:
    ResidualStatsCollector(const ResidualModel& model, const PosteriorModel& pmodel,
                           const SensorBank& bank, double T, double burn_in)
        : model_(model), pmodel_(pmodel), bank_(bank), T_(T), burn_in_(burn_in) {
        const int nfd = bank.n_fd();
        st_.nfd = nfd;
        st_.sum.assign(static_cast<size_t>(nfd), 0.0);
        st_.sum2.assign(static_cast<size_t>(nfd), 0.0);
        st_.cross = Mat::zeros(nfd, nfd);
        st_.pass68.assign(static_cast<size_t>(nfd), 0);
        st_.pass95.assign(static_cast<size_t>(nfd), 0);
        st_.pass997.assign(static_cast<size_t>(nfd), 0);
        auto etas = [&](double conf) {
            std::vector<double> e(static_cast<size_t>(nfd));
            const double z = normal_quantile(0.5 * (1.0 + conf));
            for (int i = 0; i < nfd; ++i) e[static_cast<size_t>(i)] = z * std::sqrt(model.C_mu(i, i));
            return e;
        };
        st_.eta68 = etas(0.68);
        st_.eta95 = etas(0.95);
        st_.eta997 = etas(0.997);
        const uint32_t masks = pmodel.full_mask();
        d_sum_.assign(masks + 1, 0.0);
        d_count_ = 0;
    }

    void on_step(const StepView& v) override {
        const int nfd = st_.nfd;
        if (have_prev_ && v.t >= burn_in_) {
            // one-step-ahead residual of this step
            std::vector<double> mu(static_cast<size_t>(nfd));
            for (int i = 0; i < nfd; ++i) {
                const double z = i < bank_.n_f()
                                     ? v.frame->z_f[static_cast<size_t>(i)]
                                     : v.frame->z_d[static_cast<size_t>(i - bank_.n_f())];
                mu[static_cast<size_t>(i)] = z - v.est->z_pred[static_cast<size_t>(i)];
            }
            st_.count += 1;
            for (int i = 0; i < nfd; ++i) {
                const auto ii = static_cast<size_t>(i);
                st_.sum[ii] += mu[ii];
                st_.sum2[ii] += mu[ii] * mu[ii];
                if (std::abs(mu[ii]) < st_.eta68[ii]) st_.pass68[ii] += 1;
                if (std::abs(mu[ii]) < st_.eta95[ii]) st_.pass95[ii] += 1;
                if (std::abs(mu[ii]) < st_.eta997[ii]) st_.pass997[ii] += 1;
            }
            for (int i = 0; i < nfd; ++i)
                for (int j = 0; j < nfd; ++j)
                    st_.cross(i, j) += mu[static_cast<size_t>(i)] * mu[static_cast<size_t>(j)];
            // posterior leader-speed residual for the previous step
            const auto pr =
                posterior_residual(v.est->d(), prev_d_, prev_vf_, prev_zl_, T_);
            d_count_ += 1;
            for (uint32_t mask = 1; mask <= pmodel_.full_mask(); ++mask)
                d_sum_[mask] += mahalanobis_sd(pr.mu, mask, pmodel_).D;
        }
        prev_d_ = v.est->d();
        prev_vf_ = v.est->v_f();
        prev_zl_ = v.frame->z_l;
        have_prev_ = true;
    }

    void write(const std::string& out_dir) const {
        {
            std::ofstream out(out_dir + "/residual_stats_cmu.csv");
            out << "i,j,analytic,empirical\n";
            for (int i = 0; i < st_.nfd; ++i)
                for (int j = 0; j < st_.nfd; ++j) {
                    const double emp = st_.cross(i, j) / static_cast<double>(st_.count);
                    out << i + 1 << ',' << j + 1 << ',' << format_double(model_.C_mu(i, j))
                        << ',' << format_double(emp) << '\n';
                }
        }
        {
            std::ofstream out(out_dir + "/residual_stats_means.csv");
            out << "sensor,mean,std_err\n";
            for (int i = 0; i < st_.nfd; ++i) {
                const auto ii = static_cast<size_t>(i);
                const double mean = st_.sum[ii] / static_cast<double>(st_.count);
                const double var = st_.sum2[ii] / static_cast<double>(st_.count) - mean * mean;
                out << i + 1 << ',' << format_double(mean) << ','
                    << format_double(std::sqrt(var / static_cast<double>(st_.count))) << '\n';
            }
        }
        {
            std::ofstream out(out_dir + "/residual_stats_rates.csv");
            out << "sensor,confidence,pass_rate\n";
            for (int i = 0; i < st_.nfd; ++i) {
                const auto ii = static_cast<size_t>(i);
                const double n = static_cast<double>(st_.count);
                out << i + 1 << ",0.68," << format_double(st_.pass68[ii] / n) << '\n';
                out << i + 1 << ",0.95," << format_double(st_.pass95[ii] / n) << '\n';
                out << i + 1 << ",0.997," << format_double(st_.pass997[ii] / n) << '\n';
            }
        }
        {
            std::ofstream out(out_dir + "/residual_stats_subsets.csv");
            out << "subset,size,mean_D,expected\n";
            for (uint32_t mask = 1; mask <= pmodel_.full_mask(); ++mask) {
                const int sz = pmodel_.subset_size(mask);
                out << arm_to_string(mask, pmodel_.n_l) << ',' << sz << ','
                    << format_double(d_sum_[mask] / static_cast<double>(d_count_)) << ',' << sz
                    << '\n';
            }
        }
    }

  private:
    const ResidualModel& model_;
    const PosteriorModel& pmodel_;
    const SensorBank& bank_;
    double T_;
    double burn_in_;
    PriorStats st_;
    std::vector<double> d_sum_;
    long long d_count_ = 0;
    double prev_d_ = 0.0, prev_vf_ = 0.0;
    std::vector<double> prev_zl_;
    bool have_prev_ = false;
};

int reproduce_residual_stats(const ScenarioConfig& base, const std::string& out_dir) {
    ScenarioConfig cfg = base;
    cfg.output.record_trace = false;
    const EstimatorParams ep = estimator_params(cfg);
    const SteadyStateGain ss = steady_state_gain(cfg.bank, ep);
    const ResidualModel model = build_residual_model(ss.K, cfg.bank, ep, 0.997);
    const PosteriorModel pmodel = build_posterior_model(ss.K, cfg.bank, model.C_r, ep);
    ResidualStatsCollector collector(model, pmodel, cfg.bank, cfg.plant.T, 100.0);
    run_scenario(cfg, &collector);
    collector.write(out_dir);
    std::cout << "residual statistics written to " << out_dir << "\n";
    return 0;
}

int reproduce_controllers(const ScenarioConfig& base, const std::string& out_dir,
                          const std::string& tag) {
    for (auto [kind, name] : {std::pair{ControllerKind::Optimal, "optimal"},
                              std::pair{ControllerKind::Gipps, "gipps"},
                              std::pair{ControllerKind::Idm, "idm"}}) {
        ScenarioConfig cfg = base;
        cfg.controller = kind;
        const RunArtifacts art = run_scenario(cfg);
        write_trace_csv(art.trace, out_dir + "/" + tag + "_" + name + ".csv");
        write_summary_json(art.trace.summary,
                           out_dir + "/" + tag + "_" + name + "_summary.json");
    }
    return 0;
}

int reproduce_fig7(const ScenarioConfig& base, const std::string& out_dir) {
    const std::vector<std::vector<int>> attacked = {{2}, {1, 2}, {0, 1, 2}};
    for (size_t variant = 0; variant < attacked.size(); ++variant) {
        ScenarioConfig cfg = base;
        cfg.attacks.injections.clear();
        for (int idx : attacked[variant]) {
            Injection inj;
            inj.kind = SensorKind::L;
            inj.index = idx;
            inj.start = 0.0;
            inj.end = 1e300;
            inj.mode = InjectionMode::AdditiveConstant;
            inj.magnitude = 2.0;
            cfg.attacks.injections.push_back(inj);
        }
        cfg.output.record_trace = false;
        const RunArtifacts art = run_scenario(cfg);
        const auto crt =
            cyber_regret(art.mab_records, art.mab_attack_values, *art.posterior_model);
        write_mab_csv(crt, cfg.bank.n_l(),
                      out_dir + "/fig7_attacked" + std::to_string(variant + 1) + ".csv");
    }
    std::cout << "cyber-regret curves written to " << out_dir << "\n";
    return 0;
}

int reproduce_fig9(const ScenarioConfig& base, const std::string& out_dir) {
    ScenarioConfig cfg = base;
    const RunArtifacts art = run_scenario(cfg);
    std::vector<long long> counts(static_cast<size_t>(1) << cfg.bank.n_l(), 0);
    for (const auto& rec : art.mab_records) counts[rec.arm] += 1;
    long long total = 0;
    for (auto c : counts) total += c;
    std::ofstream out(out_dir + "/fig9_arm_frequency.csv");
    out << "arm,count,frequency\n";
    for (uint32_t mask = 1; mask < counts.size(); ++mask)
        out << arm_to_string(mask, cfg.bank.n_l()) << ',' << counts[mask] << ','
            << format_double(static_cast<double>(counts[mask]) / static_cast<double>(total))
            << '\n';
    const auto crt = cyber_regret(art.mab_records, art.mab_attack_values, *art.posterior_model);
    write_mab_csv(crt, cfg.bank.n_l(), out_dir + "/fig9_regret.csv");
    write_trace_csv(art.trace, out_dir + "/fig9_trace.csv");
    std::cout << "arm frequencies written to " << out_dir << "\n";
    return 0;
}

int reproduce_fig10(const ScenarioConfig& base, const std::string& out_dir) {
    std::ofstream cmp(out_dir + "/fig10_comparison.csv");
    cmp << "attack,defended_growth_m2,kalman_only_growth_m2,ratio\n";
    for (auto [kind, name] : {std::pair{SensorKind::F, "f1"}, std::pair{SensorKind::D, "d1"},
                              std::pair{SensorKind::L, "l1"}}) {
        double growth[2] = {0.0, 0.0};
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
            const RunArtifacts art = run_scenario(cfg);
            growth[defended] = art.trace.summary.windowed_regret;
            write_trace_csv(art.trace, out_dir + "/fig10_" + name +
                                           (defended ? "_defended.csv" : "_kalman_only.csv"));
        }
        cmp << name << ',' << format_double(growth[1]) << ',' << format_double(growth[0]) << ','
            << format_double(growth[1] / growth[0]) << '\n';
    }
    std::cout << "defense comparison written to " << out_dir << "\n";
    return 0;
}

int cmd_reproduce(const std::string& figure, const std::string& out_dir,
                  const std::string& presets) {
    fs::create_directories(out_dir);
    ScenarioConfig base = load_preset(figure, presets);
    apply_seed_override(base);
    if (figure == "fig3") {
        const RunArtifacts art = run_scenario(base);
        write_trace_csv(art.trace, out_dir + "/fig3_trace.csv");
        write_summary_json(art.trace.summary, out_dir + "/fig3_summary.json");
        std::cout << summary_to_json(art.trace.summary);
        return 0;
    }
    if (figure == "fig5") return reproduce_controllers(base, out_dir, "fig5");
    if (figure == "fig6") return reproduce_controllers(base, out_dir, "fig6");
    if (figure == "residual-stats") return reproduce_residual_stats(base, out_dir);
    if (figure == "fig7") return reproduce_fig7(base, out_dir);
    if (figure == "fig9") return reproduce_fig9(base, out_dir);
    if (figure == "fig10") return reproduce_fig10(base, out_dir);
    throw ConfigError("reproduce: unknown figure " + figure);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-vehicle safe-control and attack-detection simulator"};
    app.require_subcommand(1);

    std::string file, trace_path, summary_path, mab_path, out_dir = ".", sensor, presets;
    double min_stealth = 0.95;
    int runs = 20;
    std::string figure;

    auto* sim = app.add_subcommand("simulate", "run a scenario file and emit trace + summary");
    sim->add_option("scenario", file, "scenario JSON file")->required();
    sim->add_option("--trace", trace_path, "trace CSV path");
    sim->add_option("--summary", summary_path, "summary JSON path");
    sim->add_option("--mab-out", mab_path, "cyber-regret CSV path");

    auto* val = app.add_subcommand("validate", "parse and validate a scenario file");
    val->add_option("scenario", file, "scenario JSON file")->required();

    auto* atk = app.add_subcommand("attack-search",
                                   "optimal stealthy injection against the F/D filter");
    atk->add_option("scenario", file, "scenario JSON file")->required();
    atk->add_option("--min-stealth", min_stealth, "per-sensor stealth probability floor")
        ->check(CLI::Range(1e-6, 1.0 - 1e-9));
    atk->add_option("--sensor", sensor, "restrict the injection to one F/D sensor");
    atk->add_option("--out", trace_path, "write the JSON report here too");

    auto* mev = app.add_subcommand("mab-eval", "bandit detector across seeded runs");
    mev->add_option("scenario", file, "scenario JSON file")->required();
    mev->add_option("--runs", runs, "number of seeded runs")->check(CLI::PositiveNumber);
    mev->add_option("--out-dir", out_dir, "output directory");

    auto* rep = app.add_subcommand("reproduce", "run a canned preset and emit plot-ready CSV");
    rep->add_option("figure", figure, "fig3|fig5|fig6|residual-stats|fig7|fig9|fig10")
        ->required();
    rep->add_option("--out-dir", out_dir, "output directory");
    rep->add_option("--presets-dir", presets, "override the preset directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(file, trace_path, summary_path, mab_path);
        if (val->parsed()) return cmd_validate(file);
        if (atk->parsed()) return cmd_attack_search(file, min_stealth, sensor, trace_path);
        if (mev->parsed()) return cmd_mab_eval(file, runs, out_dir);
        if (rep->parsed()) return cmd_reproduce(figure, out_dir, presets);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
