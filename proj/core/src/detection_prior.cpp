#include "acv/detection_prior.hpp"

#include <algorithm>
#include <cmath>

namespace acv {

double spectral_radius_2x2(const Mat& m) {
    if (m.rows() != 2 || m.cols() != 2)
        throw std::invalid_argument("spectral_radius_2x2: matrix must be 2x2");
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = tr * tr / 4.0 - det;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return std::max(std::abs(tr / 2.0 + s), std::abs(tr / 2.0 - s));
    }
    return std::sqrt(det);  // complex pair, modulus sqrt(det)
}

ResidualModel build_residual_model(const Mat& K_ss, const SensorBank& bank,
                                   const EstimatorParams& params, double confidence) {
    bank.validate();
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("build_residual_model: confidence outside (0,1)");
    if (params.vl_variance <= 0.0)
        throw std::invalid_argument("build_residual_model: vl_variance must be set");

    ResidualModel m;
    m.n_f = bank.n_f();
    m.n_d = bank.n_d();
    m.confidence = confidence;
    m.vl_variance = params.vl_variance;
    m.K = K_ss;

    const Mat A = plant_A(params.T);
    const Mat F = plant_F(params.T);
    const Mat H = output_H(bank);
    const Mat R = Mat::diag(measurement_variances(bank));
    const int nfd = bank.n_fd();
    const Mat I2 = Mat::identity(2);

    m.Q = I2 - m.K * H;
    const Mat QA = m.Q * A;
    const double radius = spectral_radius_2x2(QA);
    if (radius >= 1.0)
        throw ModelError("build_residual_model: filter not contractive, rho(QA) = " +
                         std::to_string(radius));

    m.C_rho = m.Q * F * params.vl_variance * F.transpose() * m.Q.transpose() +
              m.K * R * m.K.transpose();
    const Mat QAt = QA.transpose();
    FixedPointOptions opt;
    opt.tol = 1e-13;
    opt.max_iter = 200000;
    m.C_r = fixed_point_solve(
        [&](const Mat& x) { return QA * x * QAt + m.C_rho; }, Mat::zeros(2, 2), opt);

    m.C_mu = H * (A * m.C_r * A.transpose() + params.vl_variance * F * F.transpose()) *
                 H.transpose() +
             R;

    m.bias_gain = (I2 - QA).inverse() * m.K;
    m.Psi = Mat::identity(nfd) - H * A * m.bias_gain;

    const double z = normal_quantile(0.5 * (1.0 + confidence));
    m.eta.resize(static_cast<size_t>(nfd));
    for (int i = 0; i < nfd; ++i) m.eta[static_cast<size_t>(i)] = z * std::sqrt(m.C_mu(i, i));
    return m;
}

std::vector<bool> detect(const ReadingFrame& frame, const std::vector<double>& z_pred,
                         const ResidualModel& model) {
    const int nfd = model.n_f + model.n_d;
    if (static_cast<int>(z_pred.size()) != nfd)
        throw std::invalid_argument("detect: z_pred length mismatch");
    std::vector<bool> pass(static_cast<size_t>(nfd), true);
    for (int i = 0; i < nfd; ++i) {
        const double z = i < model.n_f ? frame.z_f[static_cast<size_t>(i)]
                                       : frame.z_d[static_cast<size_t>(i - model.n_f)];
        pass[static_cast<size_t>(i)] =
            std::abs(z - z_pred[static_cast<size_t>(i)]) < model.eta[static_cast<size_t>(i)];
    }
    return pass;
}

std::vector<double> stealth_probability(const std::vector<double>& attack,
                                        const ResidualModel& model) {
    const int nfd = model.n_f + model.n_d;
    if (static_cast<int>(attack.size()) != nfd)
        throw std::invalid_argument("stealth_probability: attack length mismatch");
    std::vector<double> p(static_cast<size_t>(nfd));
    for (int i = 0; i < nfd; ++i) {
        double mean = 0.0;
        for (int j = 0; j < nfd; ++j) mean += model.Psi(i, j) * attack[static_cast<size_t>(j)];
        const double var = model.C_mu(i, i);
        const double eta = model.eta[static_cast<size_t>(i)];
        p[static_cast<size_t>(i)] =
            gaussian_cdf(eta, mean, var) - gaussian_cdf(-eta, mean, var);
    }
    return p;
}

SteadyBias steady_bias_and_regret(const std::vector<double>& attack, const ResidualModel& model,
                                  const PlantParams& plant, double d_tilde) {
    const int nfd = model.n_f + model.n_d;
    if (static_cast<int>(attack.size()) != nfd)
        throw std::invalid_argument("steady_bias_and_regret: attack length mismatch");
    if (!(d_tilde > 0.0))
        throw std::invalid_argument("steady_bias_and_regret: d_tilde must be > 0");
    SteadyBias out;
    for (int r = 0; r < 2; ++r) {
        double s = 0.0;
        for (int j = 0; j < nfd; ++j) s += model.bias_gain(r, j) * attack[static_cast<size_t>(j)];
        out.r_bar(r, 0) = -s;
    }
    const double rf = out.r_bar(0, 0);
    const double rd = out.r_bar(1, 0);
    const double theta = rf * rf / (2.0 * plant.b_f) +
                         (std::sqrt(d_tilde) / plant.b_f + plant.T) * rf - rd;
    out.theta_bar = theta;
    out.objective = theta * theta;
    return out;
}

namespace {

bool feasible(const std::vector<double>& a, const std::vector<double>& p_min,
              const ResidualModel& model) {
    const auto p = stealth_probability(a, model);
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i] < p_min[i]) return false;
    return true;
}

double objective_of(const std::vector<double>& a, const ResidualModel& model,
                    const PlantParams& plant, double d_tilde) {
    return steady_bias_and_regret(a, model, plant, d_tilde).objective;
}

}  // namespace

AttackAssessment optimal_stealthy_attack(const std::vector<double>& p_min,
                                         const ResidualModel& model, const PlantParams& plant,
                                         double d_tilde, const std::vector<bool>& support,
                                         int restarts, uint64_t seed) {
    const int nfd = model.n_f + model.n_d;
    if (static_cast<int>(p_min.size()) != nfd)
        throw std::invalid_argument("optimal_stealthy_attack: p_min length mismatch");
    for (double p : p_min)
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("optimal_stealthy_attack: p_min outside (0,1)");
    std::vector<bool> sup = support;
    if (sup.empty()) sup.assign(static_cast<size_t>(nfd), true);

    std::vector<double> best(static_cast<size_t>(nfd), 0.0);
    double best_obj = 0.0;
    const std::vector<double> zero(static_cast<size_t>(nfd), 0.0);
    if (!feasible(zero, p_min, model)) {
        // p_min above the baseline confidence: nothing is stealthy enough
        AttackAssessment out;
        out.attack = zero;
        out.stealth = stealth_probability(zero, model);
        return out;
    }

    // natural per-coordinate scale: the threshold of the sensor itself
    std::vector<double> scale(model.eta);
    RngStream rng(seed, 77);

    for (int start = 0; start < restarts; ++start) {
        std::vector<double> a(static_cast<size_t>(nfd), 0.0);
        if (start > 0) {
            // random feasible start: random direction scaled into the feasible set
            std::vector<double> dir(static_cast<size_t>(nfd), 0.0);
            for (int i = 0; i < nfd; ++i)
                if (sup[static_cast<size_t>(i)])
                    dir[static_cast<size_t>(i)] = rng.normal() * scale[static_cast<size_t>(i)];
            double t_hi = 4.0;
            auto at = [&](double t) {
                std::vector<double> v(dir);
                for (auto& x : v) x *= t;
                return v;
            };
            while (t_hi > 1e-6 && !feasible(at(t_hi), p_min, model)) t_hi *= 0.5;
            a = at(0.8 * t_hi);
            if (!feasible(a, p_min, model)) a = zero;
        }
        double f_cur = objective_of(a, model, plant, d_tilde);

        std::vector<double> step(static_cast<size_t>(nfd));
        for (int i = 0; i < nfd; ++i) step[static_cast<size_t>(i)] = 0.5 * scale[static_cast<size_t>(i)];
        bool progress = true;
        int guard = 0;
        while (progress && guard++ < 400) {
            progress = false;
            for (int i = 0; i < nfd; ++i) {
                if (!sup[static_cast<size_t>(i)]) continue;
                double& si = step[static_cast<size_t>(i)];
                if (si < 1e-10 * scale[static_cast<size_t>(i)]) continue;
                bool moved = false;
                for (double sgn : {+1.0, -1.0}) {
                    std::vector<double> cand(a);
                    cand[static_cast<size_t>(i)] += sgn * si;
                    if (!feasible(cand, p_min, model)) continue;
                    const double f = objective_of(cand, model, plant, d_tilde);
                    if (f > f_cur + 1e-18) {
                        a = std::move(cand);
                        f_cur = f;
                        moved = true;
                        break;
                    }
                }
                if (moved) {
                    si *= 1.6;
                    progress = true;
                } else {
                    si *= 0.5;
                    if (si >= 1e-10 * scale[static_cast<size_t>(i)]) progress = true;
                }
            }
        }
        if (f_cur > best_obj) {
            best_obj = f_cur;
            best = a;
        }
    }

    AttackAssessment out;
    out.attack = best;
    out.stealth = stealth_probability(best, model);
    const SteadyBias sb = steady_bias_and_regret(best, model, plant, d_tilde);
    out.r_bar = sb.r_bar;
    out.theta_bar = sb.theta_bar;
    out.objective = sb.objective;
    return out;
}

}  // namespace acv
