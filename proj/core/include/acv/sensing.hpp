#pragma once

#include <string>
#include <vector>

#include "acv/mathkit.hpp"

namespace acv {

enum class SensorKind { F, D, L };  // measures v_f, d, v_l respectively

struct SensorSpec {
    SensorKind kind = SensorKind::F;
    double variance = 1.0;  // (m/s)^2 for F/L, m^2 for D
};

/// Ordered sensor lists per kind. The ordering is fixed for a run and defines
/// the row indices of H, R and the reading vectors (F block first, then D).
struct SensorBank {
    std::vector<double> f_var;
    std::vector<double> d_var;
    std::vector<double> l_var;

    int n_f() const { return static_cast<int>(f_var.size()); }
    int n_d() const { return static_cast<int>(d_var.size()); }
    int n_l() const { return static_cast<int>(l_var.size()); }
    int n_fd() const { return n_f() + n_d(); }

    void validate() const;

    /// Default bank used throughout: 4 sensors per kind with distinct noise
    /// levels so that LS weights and subset costs differ across subsets.
    static SensorBank defaults();
};

enum class InjectionMode { AdditiveConstant, MultiplicativeFactor };

struct Injection {
    SensorKind kind = SensorKind::L;
    int index = 0;  // 0-based within the kind
    double start = 0.0;
    double end = 0.0;
    InjectionMode mode = InjectionMode::AdditiveConstant;
    double magnitude = 0.0;  // additive offset, or multiplicative factor (> 0)

    bool active_at(double t) const { return t >= start && t < end; }
};

struct AttackPlan {
    std::vector<Injection> injections;

    bool empty() const { return injections.empty(); }
    void validate(const SensorBank& bank) const;
};

struct Truth {
    double v_f = 0.0;
    double d = 0.0;
    double v_l = 0.0;
};

/// One time step of sensor readings; truth is retained for oracle scoring.
struct ReadingFrame {
    double t = 0.0;
    std::vector<double> z_f;
    std::vector<double> z_d;
    std::vector<double> z_l;
    Truth truth;
};

ReadingFrame sample_readings(double t, const Truth& truth, const SensorBank& bank,
                             RngStream& rng);

/// Applies scheduled injections active at time t. Multiplicative injections
/// scale the current reading, i.e. they act as a time-varying additive term
/// (factor - 1) * z(t). Truth is never touched.
ReadingFrame apply_attack(ReadingFrame frame, const AttackPlan& plan, double t);

std::string sensor_name(SensorKind kind, int index);

}  // namespace acv
