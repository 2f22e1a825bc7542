#pragma once

#include <limits>
#include <vector>

#include "acv/mathkit.hpp"

namespace acv {

/// Follower speed (m/s) and spacing to the leader (m).
struct PlantState {
    double v_f = 0.0;
    double d = 0.0;
};

struct PlantParams {
    double T = 0.1;                                       // sampling period, s
    double b_f = 2.5;                                     // max braking deceleration, m/s^2
    double v_free = 120.0 / 3.6;                          // free-flow speed, m/s
    double u_min = -0.25;                                 // control bounds, m/s^2
    double u_max = 0.25;
    double du_max = std::numeric_limits<double>::infinity();  // slew limit per step

    void validate() const;
};

enum class LeaderKind { Constant, Sinusoid, StepDrop, Trace };

/// Leader speed profile v_l(t). All speeds m/s, times s.
struct LeaderProfile {
    LeaderKind kind = LeaderKind::Constant;
    double base = 20.0;          // constant value / sinusoid center / pre-drop speed
    double amplitude = 2.0;      // sinusoid
    double period = 60.0;        // sinusoid
    double drop_time = 100.0;    // step_drop
    double drop_to = 5.0 / 3.6;  // step_drop post-drop speed
    double trace_dt = 0.1;       // trace sample spacing
    std::vector<double> trace;   // sampled speeds; holds last value past the end

    static LeaderProfile constant(double v);
    static LeaderProfile sinusoid(double base, double amplitude, double period);
    static LeaderProfile step_drop(double from, double to, double at);
};

struct StepResult {
    PlantState state;
    bool collision = false;  // d' <= 0 this step
};

/// One discrete step of the plant: v' = v + T u, d' = d + T(v_l - v_f).
/// Saturation is the controller's job, not the plant's.
StepResult step_plant(const PlantState& s, double u_f, double v_l, const PlantParams& p);

struct Controllability {
    Mat matrix{2, 2};
    int rank = 0;
};

/// Controllability matrix [B | A B] for the sampling period T and its rank.
Controllability controllability_rank(double T);

/// Equilibrium of the unsaturated closed loop at constant leader speed:
/// v_f = v_l, d = v_l^2 / (2 b_f).
PlantState equilibrium(double v_l, double b_f);

/// L(x) = (v_f^2/(2 b_f) - d)^2; zero exactly on the equilibrium manifold.
double lyapunov_value(const PlantState& s, double b_f);

/// The unsaturated closed-loop map: v' = sqrt(2 b_f (d + T v_l - T v_f)),
/// d' = d + T v_l - T v_f. Requires d + T v_l - T v_f >= 0.
PlantState closed_loop_step(const PlantState& s, double v_l, const PlantParams& p);

double leader_speed(const LeaderProfile& profile, double t);

}  // namespace acv
