#include "acv/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace acv {

void PlantParams::validate() const {
    if (T <= 0.0) throw std::invalid_argument("PlantParams: T must be > 0");
    if (b_f <= 0.0) throw std::invalid_argument("PlantParams: b_f must be > 0");
    if (!(u_min < 0.0) || !(u_max > 0.0))
        throw std::invalid_argument("PlantParams: need u_min < 0 < u_max");
    if (!(du_max > 0.0)) throw std::invalid_argument("PlantParams: du_max must be > 0");
    if (v_free <= 0.0) throw std::invalid_argument("PlantParams: v_free must be > 0");
}

LeaderProfile LeaderProfile::constant(double v) {
    LeaderProfile p;
    p.kind = LeaderKind::Constant;
    p.base = v;
    return p;
}

LeaderProfile LeaderProfile::sinusoid(double base, double amplitude, double period) {
    LeaderProfile p;
    p.kind = LeaderKind::Sinusoid;
    p.base = base;
    p.amplitude = amplitude;
    p.period = period;
    return p;
}

LeaderProfile LeaderProfile::step_drop(double from, double to, double at) {
    LeaderProfile p;
    p.kind = LeaderKind::StepDrop;
    p.base = from;
    p.drop_to = to;
    p.drop_time = at;
    return p;
}

StepResult step_plant(const PlantState& s, double u_f, double v_l, const PlantParams& p) {
    StepResult out;
    out.state.v_f = s.v_f + p.T * u_f;
    out.state.d = s.d + p.T * v_l - p.T * s.v_f;
    out.collision = out.state.d <= 0.0;
    return out;
}

Controllability controllability_rank(double T) {
    if (T <= 0.0) throw std::invalid_argument("controllability_rank: T must be > 0");
    Controllability c;
    c.matrix = Mat{{T, T}, {0.0, -T * T}};
    // 2x2 rank by determinant against the scale of the entries
    const double det = c.matrix(0, 0) * c.matrix(1, 1) - c.matrix(0, 1) * c.matrix(1, 0);
    const double scale = c.matrix.frobenius_norm();
    if (scale == 0.0)
        c.rank = 0;
    else if (std::abs(det) > 1e-14 * scale * scale)
        c.rank = 2;
    else
        c.rank = 1;
    return c;
}

PlantState equilibrium(double v_l, double b_f) {
    if (v_l < 0.0) throw std::invalid_argument("equilibrium: v_l must be >= 0");
    if (b_f <= 0.0) throw std::invalid_argument("equilibrium: b_f must be > 0");
    return PlantState{v_l, v_l * v_l / (2.0 * b_f)};
}

double lyapunov_value(const PlantState& s, double b_f) {
    const double g = s.v_f * s.v_f / (2.0 * b_f) - s.d;
    return g * g;
}

PlantState closed_loop_step(const PlantState& s, double v_l, const PlantParams& p) {
    const double gap_next = s.d + p.T * v_l - p.T * s.v_f;
    if (gap_next < 0.0)
        throw std::domain_error("closed_loop_step: d + T v_l - T v_f must be >= 0");
    return PlantState{std::sqrt(2.0 * p.b_f * gap_next), gap_next};
}

double leader_speed(const LeaderProfile& profile, double t) {
    if (t < 0.0) throw std::invalid_argument("leader_speed: t must be >= 0");
    switch (profile.kind) {
        case LeaderKind::Constant:
            return profile.base;
        case LeaderKind::Sinusoid:
            return profile.base + profile.amplitude * std::sin(2.0 * M_PI * t / profile.period);
        case LeaderKind::StepDrop:
            return t < profile.drop_time ? profile.base : profile.drop_to;
        case LeaderKind::Trace: {
            if (profile.trace.empty())
                throw std::invalid_argument("leader_speed: empty trace profile");
            const auto idx = static_cast<size_t>(t / profile.trace_dt);
            return profile.trace[std::min(idx, profile.trace.size() - 1)];
        }
    }
    throw std::logic_error("leader_speed: unknown profile kind");
}

}  // namespace acv
