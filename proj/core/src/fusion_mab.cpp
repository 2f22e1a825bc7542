#include "acv/fusion_mab.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace acv {

int PosteriorModel::subset_size(uint32_t mask) const {
    int n = 0;
    for (uint32_t m = mask; m; m >>= 1) n += static_cast<int>(m & 1u);
    return n;
}

PosteriorModel build_posterior_model(const Mat& K_ss, const SensorBank& bank, const Mat& C_r,
                                     const EstimatorParams& params) {
    bank.validate();
    PosteriorModel m;
    m.n_l = bank.n_l();
    m.l_var = bank.l_var;
    if (m.n_l > 16)
        throw std::invalid_argument("build_posterior_model: too many L sensors for subset enumeration");

    const Mat A = plant_A(params.T);
    const Mat F = plant_F(params.T);
    const Mat H = output_H(bank);
    const Mat R = Mat::diag(measurement_variances(bank));
    const int nfd = bank.n_fd();

    const Mat IKH_F = (Mat::identity(2) - K_ss * H) * F;
    const Mat KHF = K_ss * H * F;
    m.s1 = IKH_F(1, 0);
    m.s2 = KHF(1, 0);

    m.J.resize(static_cast<size_t>(nfd));
    for (int j = 0; j < nfd; ++j) m.J[static_cast<size_t>(j)] = K_ss(1, j) / params.T;

    const LsEstimate wl = static_ls(std::vector<double>(bank.l_var.size(), 0.0), bank.l_var);
    m.Upsilon = Mat(m.n_l, m.n_l, 0.0);
    for (int i = 0; i < m.n_l; ++i) {
        for (int j = 0; j < m.n_l; ++j) {
            m.Upsilon(i, j) = (m.s1 / params.T) * wl.weights[static_cast<size_t>(j)];
            if (i == j) m.Upsilon(i, j) -= 1.0;
        }
    }

    // scalar variance contributed by the spacing-correction term
    const Mat mid = H * A * C_r * A.transpose() * H.transpose() + R;
    double c_v = 0.0;
    for (int i = 0; i < nfd; ++i)
        for (int j = 0; j < nfd; ++j)
            c_v += m.J[static_cast<size_t>(i)] * mid(i, j) * m.J[static_cast<size_t>(j)];

    const Mat Rl = Mat::diag(bank.l_var);
    m.C_mul = m.Upsilon * Rl * m.Upsilon.transpose();
    for (int i = 0; i < m.n_l; ++i)
        for (int j = 0; j < m.n_l; ++j) m.C_mul(i, j) += c_v;

    const uint32_t n_masks = 1u << m.n_l;
    m.subset_inv.resize(n_masks);
    m.subset_cost.assign(n_masks, std::numeric_limits<double>::infinity());
    for (uint32_t mask = 1; mask < n_masks; ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < m.n_l; ++i)
            if (mask >> i & 1u) idx.push_back(i);
        Mat sub(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
        for (size_t a = 0; a < idx.size(); ++a)
            for (size_t b = 0; b < idx.size(); ++b)
                sub(static_cast<int>(a), static_cast<int>(b)) =
                    m.C_mul(idx[a], idx[b]);
        try {
            m.subset_inv[mask] = sub.inverse();
        } catch (const SingularMatrixError&) {
            throw ModelError("build_posterior_model: singular covariance for subset " +
                             arm_to_string(mask, m.n_l));
        }
        m.subset_cost[mask] = subset_cost(mask, bank.l_var);
    }
    return m;
}

PosteriorResidual posterior_residual(double d_hat_next, double d_hat, double vf_hat,
                                     const std::vector<double>& z_l, double T) {
    PosteriorResidual out;
    out.v_l_plus = (d_hat_next - d_hat) / T + vf_hat;
    out.mu.resize(z_l.size());
    for (size_t i = 0; i < z_l.size(); ++i) out.mu[i] = out.v_l_plus - z_l[i];
    return out;
}

SmValue mahalanobis_sd(const std::vector<double>& mu, uint32_t subset,
                       const PosteriorModel& model) {
    if (subset == 0 || subset > model.full_mask())
        throw std::invalid_argument("mahalanobis_sd: empty or out-of-range subset");
    std::vector<double> v;
    for (int i = 0; i < model.n_l; ++i)
        if (subset >> i & 1u) v.push_back(mu.at(static_cast<size_t>(i)));
    const Mat& Ci = model.subset_inv[subset];
    double D = 0.0;
    for (size_t a = 0; a < v.size(); ++a)
        for (size_t b = 0; b < v.size(); ++b)
            D += v[a] * Ci(static_cast<int>(a), static_cast<int>(b)) * v[b];
    SmValue out;
    out.D = D;
    out.sd_sample = D / static_cast<double>(v.size());
    return out;
}

double subset_cost(uint32_t subset, const std::vector<double>& variances) {
    if (subset == 0) throw std::invalid_argument("subset_cost: empty subset");
    double precision = 0.0;
    for (size_t i = 0; i < variances.size(); ++i)
        if (subset >> i & 1u) precision += 1.0 / variances[i];
    if (precision == 0.0) throw std::invalid_argument("subset_cost: subset out of range");
    return 1.0 / precision;
}

uint32_t ucb_select(const BanditState& b, const PosteriorModel& model) {
    const uint32_t full = model.full_mask();
    for (uint32_t mask = 1; mask <= full; ++mask)
        if (b.plays[mask] == 0) return mask;

    const double lt = std::log(static_cast<double>(std::max<long long>(b.total, 2)));
    double best_index = -std::numeric_limits<double>::infinity();
    uint32_t best = 1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (uint32_t mask = 1; mask <= full; ++mask) {
        const double mean_d = b.sums[mask] / static_cast<double>(b.plays[mask]);
        const int sz = model.subset_size(mask);
        const double cost = model.subset_cost[mask] * mean_d / sz;
        double exploit = -cost;
        if (b.normalize && b.cost_max > b.cost_min)
            exploit = -(cost - b.cost_min) / (b.cost_max - b.cost_min);
        const double index = exploit + std::sqrt(2.0 * lt / static_cast<double>(b.plays[mask]));
        const bool better =
            index > best_index ||
            (index == best_index && (model.subset_cost[mask] < best_cost ||
                                     (model.subset_cost[mask] == best_cost && mask < best)));
        if (better) {
            best_index = index;
            best = mask;
            best_cost = model.subset_cost[mask];
        }
    }
    return best;
}

void update_arm(BanditState& b, uint32_t arm, double D, const PosteriorModel& model) {
    if (arm == 0 || arm > model.full_mask())
        throw std::invalid_argument("update_arm: arm out of range");
    b.plays[arm] += 1;
    b.sums[arm] += D;
    b.total += 1;
    const double cost = model.subset_cost[arm] * D / model.subset_size(arm);
    b.cost_min = std::min(b.cost_min, cost);
    b.cost_max = std::max(b.cost_max, cost);
}

uint32_t oracle_arm(uint32_t attacked, const PosteriorModel& model) {
    const uint32_t full = model.full_mask();
    uint32_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (uint32_t mask = 1; mask <= full; ++mask) {
        if (mask & attacked) continue;
        if (model.subset_cost[mask] < best_cost) {
            best_cost = model.subset_cost[mask];
            best = mask;
        }
    }
    if (best == 0) {
        // every sensor compromised; least-cost arm is the least-bad option
        for (uint32_t mask = 1; mask <= full; ++mask)
            if (model.subset_cost[mask] < best_cost) {
                best_cost = model.subset_cost[mask];
                best = mask;
            }
    }
    return best;
}

CyberRegretTrace cyber_regret(const std::vector<MabStepRecord>& steps,
                              const std::vector<double>& attack_values,
                              const PosteriorModel& model) {
    if (static_cast<int>(attack_values.size()) != model.n_l)
        throw std::invalid_argument("cyber_regret: attack_values length mismatch");

    // model-based expected arm costs under the terminal attacked set, for the
    // logarithmic bound
    const uint32_t terminal = steps.empty() ? 0 : steps.back().attacked;
    std::vector<double> exp_cost(model.subset_inv.size(), 0.0);
    for (uint32_t mask = 1; mask <= model.full_mask(); ++mask) {
        std::vector<double> a;
        for (int i = 0; i < model.n_l; ++i)
            if (mask >> i & 1u)
                a.push_back((terminal >> i & 1u) ? attack_values[static_cast<size_t>(i)] : 0.0);
        const Mat& Ci = model.subset_inv[mask];
        double quad = 0.0;
        for (size_t r = 0; r < a.size(); ++r)
            for (size_t c = 0; c < a.size(); ++c)
                quad += a[r] * Ci(static_cast<int>(r), static_cast<int>(c)) * a[c];
        const int sz = model.subset_size(mask);
        exp_cost[mask] = model.subset_cost[mask] * (sz + quad) / sz;
    }
    double best_exp = std::numeric_limits<double>::infinity();
    for (uint32_t mask = 1; mask <= model.full_mask(); ++mask)
        best_exp = std::min(best_exp, exp_cost[mask]);
    double delta_sum = 0.0;
    std::vector<double> deltas;
    for (uint32_t mask = 1; mask <= model.full_mask(); ++mask) {
        const double d = exp_cost[mask] - best_exp;
        if (d > 1e-15) {
            deltas.push_back(d);
            delta_sum += d;
        }
    }

    CyberRegretTrace out;
    out.rows.reserve(steps.size());
    double cum = 0.0;
    long long t = 0;
    for (const auto& s : steps) {
        ++t;
        CyberRegretRow row;
        row.t = t;
        row.arm = s.arm;
        const SmValue sm = mahalanobis_sd(s.mu, s.arm, model);
        row.D = sm.D;
        row.xi = model.subset_cost[s.arm] * sm.sd_sample;
        const uint32_t star = oracle_arm(s.attacked, model);
        const SmValue sm_star = mahalanobis_sd(s.mu, star, model);
        row.xi_star = model.subset_cost[star] * sm_star.sd_sample;
        cum += row.xi - row.xi_star;
        row.cum_regret = cum;
        double bound = (1.0 + M_PI * M_PI / 3.0) * delta_sum;
        const double lt = std::log(static_cast<double>(t));
        for (double d : deltas) bound += 8.0 * lt / d;
        row.bound = bound;
        out.rows.push_back(row);
    }
    return out;
}

std::string arm_to_string(uint32_t mask, int n_l) {
    std::string s;
    for (int i = n_l - 1; i >= 0; --i) s += (mask >> i & 1u) ? '1' : '0';
    return s;
}

}  // namespace acv
