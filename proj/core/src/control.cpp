#include "acv/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acv {

double optimal_spacing(double v, double b_f) {
    if (v < 0.0) throw std::invalid_argument("optimal_spacing: v must be >= 0");
    if (b_f <= 0.0) throw std::invalid_argument("optimal_spacing: b_f must be > 0");
    return v * v / (2.0 * b_f);
}

double physical_regret(const PlantState& next, double b_f) {
    const double g = next.v_f * next.v_f / (2.0 * b_f) - next.d;
    return g * g;
}

ControlDecision optimal_controller(double vf_hat, double d_hat, double vl_hat, double u_prev,
                                   const PlantParams& p) {
    ControlDecision out;
    out.u_lo = std::max({-vf_hat / p.T, p.u_min, u_prev - p.du_max});
    out.u_hi = std::min({(p.v_free - vf_hat) / p.T, p.u_max, u_prev + p.du_max});

    double radicand = d_hat + p.T * vl_hat - p.T * vf_hat;
    if (radicand < 0.0) {
        radicand = 0.0;
        out.radicand_clamped = true;
    }
    const double root = (std::sqrt(2.0 * p.b_f * radicand) - vf_hat) / p.T;

    if (out.u_lo > out.u_hi) {
        out.infeasible_window = true;
        out.saturated = true;
        out.u = std::abs(root - out.u_lo) <= std::abs(root - out.u_hi) ? out.u_lo : out.u_hi;
        return out;
    }
    out.u = std::min(std::max(out.u_lo, root), out.u_hi);
    out.saturated = root < out.u_lo || root > out.u_hi;
    return out;
}

namespace {

struct OracleCtx {
    const std::vector<double>* vl = nullptr;
    const PlantParams* p = nullptr;
    double gamma = 1.0;
    int N = 1;
    int grid = 101;
    double best_cost = 0.0;
    double best_first = 0.0;
};

double step_regret(double v_f, double d, double v_l, double u, const PlantParams& p) {
    const double vn = v_f + p.T * u;
    const double g = vn * vn / (2.0 * p.b_f) - (d + p.T * v_l - p.T * v_f);
    return g * g;
}

// Depth-first enumeration of the control grid with exact cumulative costs.
// Per-step costs are nonnegative, so any partial sum already at or above the
// incumbent can be cut. Candidates are visited outward from the one-step
// clipped root, which finds a near-optimal incumbent almost immediately.
void oracle_dfs(OracleCtx& ctx, double v_f, double d, double u_prev, int depth, double partial,
                double first_action) {
    const PlantParams& p = *ctx.p;
    const double v_l = (*ctx.vl)[static_cast<size_t>(depth)];
    const double lo = std::max({-v_f / p.T, p.u_min, u_prev - p.du_max});
    const double hi = std::min({(p.v_free - v_f) / p.T, p.u_max, u_prev + p.du_max});

    std::vector<double> candidates;
    if (lo > hi) {
        const double rad = std::max(d + p.T * v_l - p.T * v_f, 0.0);
        const double root = (std::sqrt(2.0 * p.b_f * rad) - v_f) / p.T;
        candidates.push_back(std::abs(root - lo) <= std::abs(root - hi) ? lo : hi);
    } else {
        const double rad = std::max(d + p.T * v_l - p.T * v_f, 0.0);
        const double root = (std::sqrt(2.0 * p.b_f * rad) - v_f) / p.T;
        const double cell = (hi - lo) / (ctx.grid - 1);
        if (cell == 0.0) {
            candidates.push_back(lo);
        } else {
            int i0 = static_cast<int>(std::lround((root - lo) / cell));
            i0 = std::clamp(i0, 0, ctx.grid - 1);
            candidates.reserve(static_cast<size_t>(ctx.grid));
            candidates.push_back(lo + i0 * cell);
            for (int off = 1; off < ctx.grid; ++off) {
                if (i0 + off < ctx.grid) candidates.push_back(lo + (i0 + off) * cell);
                if (i0 - off >= 0) candidates.push_back(lo + (i0 - off) * cell);
            }
        }
    }

    const double w = std::pow(ctx.gamma, depth);
    for (double u : candidates) {
        const double cost = partial + w * step_regret(v_f, d, v_l, u, p);
        if (cost >= ctx.best_cost) continue;
        const double first = depth == 0 ? u : first_action;
        if (depth == ctx.N - 1) {
            ctx.best_cost = cost;
            ctx.best_first = first;
            continue;
        }
        oracle_dfs(ctx, v_f + p.T * u, d + p.T * v_l - p.T * v_f, u, depth + 1, cost, first);
    }
}

}  // namespace

double n_step_oracle(const PlantState& state, const std::vector<double>& vl_forecast,
                     const PlantParams& p, double gamma, int N, int grid, double u_prev) {
    if (N < 1) throw std::invalid_argument("n_step_oracle: N must be >= 1");
    if (grid < 101) throw std::invalid_argument("n_step_oracle: grid must be >= 101");
    if (static_cast<int>(vl_forecast.size()) < N)
        throw std::invalid_argument("n_step_oracle: forecast shorter than horizon");
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("n_step_oracle: gamma must be in [0,1]");

    OracleCtx ctx;
    ctx.vl = &vl_forecast;
    ctx.p = &p;
    ctx.gamma = gamma;
    ctx.N = gamma == 0.0 ? 1 : N;  // zero discount kills every future term
    ctx.grid = grid;
    ctx.best_cost = std::numeric_limits<double>::infinity();
    oracle_dfs(ctx, state.v_f, state.d, u_prev, 0, 0.0, 0.0);
    return ctx.best_first;
}

double gipps_controller(double v_f, double d, double v_l, double T, const GippsParams& gp) {
    const double tau = gp.reaction;
    const double v_acc =
        v_f + 2.5 * gp.accel * tau * (1.0 - v_f / gp.v_desired) * std::sqrt(0.025 + v_f / gp.v_desired);
    const double gap = std::max(d - gp.s0, 0.0);
    const double disc = gp.brake * gp.brake * tau * tau +
                        gp.brake * (2.0 * gap - v_f * tau + v_l * v_l / gp.brake_hat);
    const double v_safe = disc > 0.0 ? -gp.brake * tau + std::sqrt(disc) : 0.0;
    const double u = (std::min(v_acc, v_safe) - v_f) / T;
    return std::clamp(u, std::max(gp.u_min, -v_f / T), gp.u_max);
}

double idm_controller(double v_f, double d, double v_l, const IdmParams& ip) {
    const double dd = std::max(d, 0.1);  // singular at zero spacing
    const double s_star =
        ip.s0 + v_f * ip.headway + v_f * (v_f - v_l) / (2.0 * std::sqrt(ip.accel * ip.brake));
    const double u = ip.accel * (1.0 - std::pow(v_f / ip.v_desired, ip.delta) -
                                 (s_star / dd) * (s_star / dd));
    return std::clamp(u, ip.u_min, ip.u_max);
}

}  // namespace acv
