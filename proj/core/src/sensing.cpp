#include "acv/sensing.hpp"

#include <cmath>
#include <stdexcept>

namespace acv {

void SensorBank::validate() const {
    if (f_var.empty() || d_var.empty() || l_var.empty())
        throw std::invalid_argument("SensorBank: need at least one sensor of each kind");
    for (const auto& vars : {f_var, d_var, l_var})
        for (double v : vars)
            if (!(v > 0.0)) throw std::invalid_argument("SensorBank: variances must be > 0");
}

SensorBank SensorBank::defaults() {
    auto sq = [](double s) { return s * s; };
    SensorBank b;
    b.f_var = {sq(0.025), sq(0.0375), sq(0.050), sq(0.0625)};
    b.d_var = {sq(0.050), sq(0.075), sq(0.100), sq(0.125)};
    b.l_var = {sq(0.15), sq(0.25), sq(0.35), sq(0.45)};
    return b;
}

void AttackPlan::validate(const SensorBank& bank) const {
    for (const auto& inj : injections) {
        if (!(inj.start < inj.end))
            throw std::invalid_argument("AttackPlan: injection start must be < end");
        if (inj.mode == InjectionMode::MultiplicativeFactor && !(inj.magnitude > 0.0))
            throw std::invalid_argument("AttackPlan: multiplicative factor must be > 0");
        const int n = inj.kind == SensorKind::F   ? bank.n_f()
                      : inj.kind == SensorKind::D ? bank.n_d()
                                                  : bank.n_l();
        if (inj.index < 0 || inj.index >= n)
            throw std::invalid_argument("AttackPlan: injection targets unknown sensor " +
                                        sensor_name(inj.kind, inj.index));
    }
    // at most one active injection per sensor per instant
    for (size_t i = 0; i < injections.size(); ++i) {
        for (size_t j = i + 1; j < injections.size(); ++j) {
            const auto& a = injections[i];
            const auto& b = injections[j];
            if (a.kind == b.kind && a.index == b.index && a.start < b.end && b.start < a.end)
                throw std::invalid_argument("AttackPlan: overlapping injections on sensor " +
                                            sensor_name(a.kind, a.index));
        }
    }
}

ReadingFrame sample_readings(double t, const Truth& truth, const SensorBank& bank,
                             RngStream& rng) {
    ReadingFrame frame;
    frame.t = t;
    frame.truth = truth;
    frame.z_f.reserve(bank.f_var.size());
    frame.z_d.reserve(bank.d_var.size());
    frame.z_l.reserve(bank.l_var.size());
    for (double v : bank.f_var) frame.z_f.push_back(truth.v_f + std::sqrt(v) * rng.normal());
    for (double v : bank.d_var) frame.z_d.push_back(truth.d + std::sqrt(v) * rng.normal());
    for (double v : bank.l_var) frame.z_l.push_back(truth.v_l + std::sqrt(v) * rng.normal());
    return frame;
}

ReadingFrame apply_attack(ReadingFrame frame, const AttackPlan& plan, double t) {
    for (const auto& inj : plan.injections) {
        if (!inj.active_at(t)) continue;
        auto& z = inj.kind == SensorKind::F   ? frame.z_f
                  : inj.kind == SensorKind::D ? frame.z_d
                                              : frame.z_l;
        auto& r = z.at(static_cast<size_t>(inj.index));
        if (inj.mode == InjectionMode::AdditiveConstant)
            r += inj.magnitude;
        else
            r *= inj.magnitude;
    }
    return frame;
}

std::string sensor_name(SensorKind kind, int index) {
    const char prefix = kind == SensorKind::F ? 'f' : kind == SensorKind::D ? 'd' : 'l';
    return std::string(1, prefix) + std::to_string(index + 1);
}

}  // namespace acv
