#include "acv/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace acv {

double full_bank_vl_variance(const SensorBank& bank) {
    double precision = 0.0;
    for (double v : bank.l_var) precision += 1.0 / v;
    return 1.0 / precision;
}

EstimatorParams estimator_params(const ScenarioConfig& cfg) {
    EstimatorParams p;
    p.T = cfg.plant.T;
    p.accel_noise_std = cfg.accel_noise_std;
    p.vl_variance = full_bank_vl_variance(cfg.bank);
    return p;
}

namespace {

uint32_t attacked_l_mask(const AttackPlan& plan, double t) {
    uint32_t mask = 0;
    for (const auto& inj : plan.injections)
        if (inj.kind == SensorKind::L && inj.active_at(t)) mask |= 1u << inj.index;
    return mask;
}

uint32_t attacked_fd_mask(const AttackPlan& plan, double t, int n_f) {
    uint32_t mask = 0;
    for (const auto& inj : plan.injections) {
        if (!inj.active_at(t)) continue;
        if (inj.kind == SensorKind::F) mask |= 1u << inj.index;
        if (inj.kind == SensorKind::D) mask |= 1u << (n_f + inj.index);
    }
    return mask;
}

/// Effective additive magnitude per L sensor for the bound column; a
/// multiplicative injection acts as (factor - 1) times the nominal reading.
std::vector<double> effective_l_attack(const ScenarioConfig& cfg) {
    std::vector<double> a(static_cast<size_t>(cfg.bank.n_l()), 0.0);
    for (const auto& inj : cfg.attacks.injections) {
        if (inj.kind != SensorKind::L) continue;
        const double start = std::max(inj.start, 0.0);
        const double nominal = leader_speed(cfg.leader, start);
        a[static_cast<size_t>(inj.index)] =
            inj.mode == InjectionMode::AdditiveConstant ? inj.magnitude
                                                        : (inj.magnitude - 1.0) * nominal;
    }
    return a;
}

}  // namespace

RunArtifacts run_scenario(const ScenarioConfig& cfg, SimObserver* observer) {
    cfg.validate();
    RunArtifacts out;
    const PlantParams& plant = cfg.plant;
    const SensorBank& bank = cfg.bank;
    const int nfd = bank.n_fd();
    const EstimatorParams est_params = estimator_params(cfg);

    const bool any_detector = cfg.detectors.prior_filter || cfg.detectors.mab;
    if (any_detector) {
        const SteadyStateGain ss = steady_state_gain(bank, est_params);
        out.residual_model =
            build_residual_model(ss.K, bank, est_params, cfg.detectors.confidence);
        if (cfg.detectors.mab)
            out.posterior_model =
                build_posterior_model(ss.K, bank, out.residual_model->C_r, est_params);
    }

    // precomputed constants for the per-row bound column
    double bound_offset = 0.0;
    std::vector<double> bound_deltas;
    if (cfg.detectors.mab) {
        out.mab_attack_values = effective_l_attack(cfg);
        const PosteriorModel& pm = *out.posterior_model;
        uint32_t terminal = 0;
        for (const auto& inj : cfg.attacks.injections)
            if (inj.kind == SensorKind::L) terminal |= 1u << inj.index;
        std::vector<double> exp_cost(pm.subset_inv.size(), 0.0);
        double best_exp = std::numeric_limits<double>::infinity();
        for (uint32_t mask = 1; mask <= pm.full_mask(); ++mask) {
            std::vector<double> a;
            for (int i = 0; i < pm.n_l; ++i)
                if (mask >> i & 1u)
                    a.push_back((terminal >> i & 1u)
                                    ? out.mab_attack_values[static_cast<size_t>(i)]
                                    : 0.0);
            double quad = 0.0;
            const Mat& Ci = pm.subset_inv[mask];
            for (size_t r = 0; r < a.size(); ++r)
                for (size_t c = 0; c < a.size(); ++c)
                    quad += a[r] * Ci(static_cast<int>(r), static_cast<int>(c)) * a[c];
            const int sz = pm.subset_size(mask);
            exp_cost[mask] = pm.subset_cost[mask] * (sz + quad) / sz;
            best_exp = std::min(best_exp, exp_cost[mask]);
        }
        for (uint32_t mask = 1; mask <= pm.full_mask(); ++mask) {
            const double d = exp_cost[mask] - best_exp;
            if (d > 1e-15) {
                bound_deltas.push_back(d);
                bound_offset += (1.0 + M_PI * M_PI / 3.0) * d;
            }
        }
    }

    RngStream rng(cfg.seed, 0);
    PlantState x{cfg.v_f0, cfg.d0};
    EstimatorState est;
    double u_prev = 0.0;
    double vl_hat_prev = 0.0;
    std::vector<int> quarantine(static_cast<size_t>(nfd), 0);

    std::optional<BanditState> bandit;
    if (cfg.detectors.mab)
        bandit.emplace(bank.n_l(), cfg.detectors.mab_normalize);
    struct Pending {
        uint32_t arm = 0;
        double d_hat = 0.0;
        double vf_hat = 0.0;
        std::vector<double> z_l;
        double t = 0.0;
    };
    std::optional<Pending> pending;

    RunTrace& trace = out.trace;
    RunSummary& sum = trace.summary;
    sum.name = cfg.name;
    sum.seed = cfg.seed;
    sum.regret_window_start = cfg.regret_window_start;

    double attack_start = std::numeric_limits<double>::infinity();
    for (const auto& inj : cfg.attacks.injections) attack_start = std::min(attack_start, inj.start);

    std::vector<long long> arm_counts;
    if (cfg.detectors.mab) arm_counts.assign(static_cast<size_t>(1) << bank.n_l(), 0);

    double cum_regret = 0.0;
    double cum_cyber = 0.0;
    const int n = cfg.steps();
    if (cfg.output.record_trace) trace.rows.reserve(static_cast<size_t>(n));

    for (int step = 0; step < n; ++step) {
        const double t = step * plant.T;
        const double v_l = leader_speed(cfg.leader, t);
        const Truth truth{x.v_f, x.d, v_l};
        const ReadingFrame frame =
            apply_attack(sample_readings(t, truth, bank, rng), cfg.attacks, t);

        std::vector<bool> pass;
        uint32_t flags = 0;
        if (step == 0) {
            est = init_estimator(frame, bank);
        } else {
            // gate on the a-priori readings before the measurement update
            const Mat x_pred = plant_A(plant.T) * est.x_hat + u_prev * plant_B(plant.T) +
                               vl_hat_prev * plant_F(plant.T);
            std::vector<double> z_pred(static_cast<size_t>(nfd));
            for (int i = 0; i < nfd; ++i)
                z_pred[static_cast<size_t>(i)] = i < bank.n_f() ? x_pred(0, 0) : x_pred(1, 0);
            std::vector<bool> mask(static_cast<size_t>(nfd), true);
            if (cfg.detectors.prior_filter) {
                pass = detect(frame, z_pred, *out.residual_model);
                // Unanimous rejection of a whole kind means the prediction
                // itself is off (the threat model corrupts a subset), so the
                // kind is readmitted; otherwise the gate would starve the
                // update and the estimate could never recover.
                bool all_f = true, all_d = true;
                for (int i = 0; i < bank.n_f(); ++i) all_f = all_f && !pass[static_cast<size_t>(i)];
                for (int i = bank.n_f(); i < nfd; ++i) all_d = all_d && !pass[static_cast<size_t>(i)];
                for (int i = 0; i < nfd; ++i) {
                    auto idx = static_cast<size_t>(i);
                    const bool rescued = i < bank.n_f() ? all_f : all_d;
                    if (!pass[idx] && !rescued) {
                        mask[idx] = false;
                        quarantine[idx] = cfg.detectors.quarantine_steps;
                    } else if (quarantine[idx] > 0) {
                        mask[idx] = false;
                        --quarantine[idx];
                    }
                    if (!mask[idx]) flags |= 1u << i;
                }
            }
            est = kalman_step(est, u_prev, vl_hat_prev, frame, mask, bank, est_params);
        }

        // score the arm played last step, now that d_hat(t) exists
        double row_D = 0.0, row_xi = 0.0, row_xi_star = 0.0;
        if (bandit && pending) {
            const PosteriorModel& pm = *out.posterior_model;
            const PosteriorResidual pr = posterior_residual(
                est.d(), pending->d_hat, pending->vf_hat, pending->z_l, plant.T);
            const SmValue sm = mahalanobis_sd(pr.mu, pending->arm, pm);
            update_arm(*bandit, pending->arm, sm.D, pm);
            const uint32_t attacked = attacked_l_mask(cfg.attacks, pending->t);
            out.mab_records.push_back({pending->arm, pr.mu, attacked});
            row_D = sm.D;
            row_xi = pm.subset_cost[pending->arm] * sm.sd_sample;
            const uint32_t star = oracle_arm(attacked, pm);
            const SmValue sm_star = mahalanobis_sd(pr.mu, star, pm);
            row_xi_star = pm.subset_cost[star] * sm_star.sd_sample;
            cum_cyber += row_xi - row_xi_star;
        }

        // choose the L subset and estimate the leader speed from it
        uint32_t arm = 0;
        double vl_hat;
        if (bandit) {
            arm = ucb_select(*bandit, *out.posterior_model);
            arm_counts[arm] += 1;
            std::vector<bool> lmask(static_cast<size_t>(bank.n_l()), false);
            for (int i = 0; i < bank.n_l(); ++i) lmask[static_cast<size_t>(i)] = arm >> i & 1u;
            vl_hat = static_ls(frame.z_l, bank.l_var, lmask).value;
            if (sum.mab_clean_arm_s < 0.0 && t >= attack_start &&
                (arm & attacked_l_mask(cfg.attacks, t)) == 0)
                sum.mab_clean_arm_s = t;
        } else {
            vl_hat = static_ls(frame.z_l, bank.l_var).value;
        }

        if (cfg.detectors.prior_filter && sum.prior_first_flag_s < 0.0 && t >= attack_start &&
            (flags & attacked_fd_mask(cfg.attacks, t, bank.n_f())) != 0)
            sum.prior_first_flag_s = t;

        double u;
        switch (cfg.controller) {
            case ControllerKind::Optimal:
                u = optimal_controller(est.v_f(), est.d(), vl_hat, u_prev, plant).u;
                break;
            case ControllerKind::Gipps:
                u = gipps_controller(est.v_f(), est.d(), vl_hat, plant.T, cfg.gipps);
                break;
            case ControllerKind::Idm:
                u = std::max(idm_controller(est.v_f(), est.d(), vl_hat, cfg.idm),
                             -est.v_f() / plant.T);
                break;
        }

        StepResult sr = step_plant(x, u, v_l, plant);
        if (sr.collision) {
            sum.collisions += 1;
            sr.state.d = 0.0;  // record the event and continue against the bumper
        }
        const double regret = physical_regret(sr.state, plant.b_f);
        cum_regret += regret;
        if (t >= cfg.regret_window_start) sum.windowed_regret += regret;

        if (cfg.output.record_trace) {
            TraceRow row;
            row.t = t;
            row.v_f = truth.v_f;
            row.d = truth.d;
            row.v_l = v_l;
            row.vf_hat = est.v_f();
            row.d_hat = est.d();
            row.vl_hat = vl_hat;
            row.u = u;
            row.regret = regret;
            row.cum_regret = cum_regret;
            row.flags = flags;
            row.arm = arm;
            row.D = row_D;
            row.xi = row_xi;
            row.xi_star = row_xi_star;
            row.cum_cyber = cum_cyber;
            if (bandit && !out.mab_records.empty()) {
                double b = bound_offset;
                const double lt = std::log(static_cast<double>(out.mab_records.size()));
                for (double dlt : bound_deltas) b += 8.0 * lt / dlt;
                row.bound = b;
            }
            row.collision = sr.collision ? 1 : 0;
            trace.rows.push_back(row);
        }

        if (observer) {
            StepView view;
            view.step = step;
            view.t = t;
            view.truth = truth;
            view.frame = &frame;
            view.est = &est;
            view.pass_mask = (cfg.detectors.prior_filter && step > 0) ? &pass : nullptr;
            view.vl_hat = vl_hat;
            view.arm = arm;
            view.u = u;
            view.next_state = sr.state;
            view.collision = sr.collision;
            view.regret = regret;
            observer->on_step(view);
        }

        if (bandit)
            pending = Pending{arm, est.d(), est.v_f(), frame.z_l, t};
        x = sr.state;
        u_prev = u;
        vl_hat_prev = vl_hat;
    }

    sum.steps = n;
    sum.final_cum_regret = cum_regret;
    sum.final_cum_cyber = cum_cyber;
    if (bandit) {
        uint32_t modal = 0;
        long long best = -1;
        for (uint32_t mask = 1; mask < arm_counts.size(); ++mask)
            if (arm_counts[mask] > best) {
                best = arm_counts[mask];
                modal = mask;
            }
        sum.modal_arm = modal;
        sum.modal_arm_bits = arm_to_string(modal, bank.n_l());
        if (!out.mab_records.empty()) {
            double b = bound_offset;
            const double lt = std::log(static_cast<double>(out.mab_records.size()));
            for (double dlt : bound_deltas) b += 8.0 * lt / dlt;
            sum.final_bound = b;
        }
    }
    return out;
}

}  // namespace acv
