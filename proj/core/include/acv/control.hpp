#pragma once

#include <vector>

#include "acv/dynamics.hpp"

namespace acv {

struct ControlDecision {
    double u = 0.0;
    double u_lo = 0.0;
    double u_hi = 0.0;
    bool saturated = false;
    bool radicand_clamped = false;
    bool infeasible_window = false;  // u_lo > u_hi (only possible with a tight slew limit)
};

/// Stopping-distance spacing v^2 / (2 b_f).
double optimal_spacing(double v, double b_f);

/// Squared gap between the stopping-distance spacing and the actual spacing
/// of the next state.
double physical_regret(const PlantState& next, double b_f);

/// One-step spacing-tracking controller. The unconstrained root
/// (sqrt(2 b_f (d + T v_l - T v_f)) - v_f) / T is clipped into the window
/// [max{-v_f/T, u_min, u_prev - du}, min{(v_free - v_f)/T, u_max, u_prev + du}].
/// A negative radicand is clamped to zero (maximum admissible braking).
ControlDecision optimal_controller(double vf_hat, double d_hat, double vl_hat, double u_prev,
                                   const PlantParams& p);

/// Exhaustive search over discretized admissible control sequences of length
/// N (per-step grid of `grid` points over the admissible window, plant rolled
/// forward exactly), minimizing the discounted sum of per-step regret.
/// Returns the first action of the best sequence.
double n_step_oracle(const PlantState& state, const std::vector<double>& vl_forecast,
                     const PlantParams& p, double gamma, int N, int grid, double u_prev);

struct GippsParams {
    double accel = 1.7;        // m/s^2
    double brake = 3.0;        // own braking magnitude, m/s^2
    double brake_hat = 3.0;    // assumed leader braking magnitude
    double s0 = 2.0;           // standstill gap, m
    double reaction = 0.1;     // s; matched to the sampling period
    double v_desired = 120.0 / 3.6;
    double u_min = -9.0;
    double u_max = 1.7;
};

struct IdmParams {
    double accel = 0.73;       // m/s^2
    double brake = 1.67;       // comfortable braking, m/s^2
    double delta = 4.0;
    double s0 = 2.0;           // m
    double headway = 1.5;      // s
    double v_desired = 120.0 / 3.6;
    double u_min = -9.0;
    double u_max = 0.73;
};

double gipps_controller(double v_f, double d, double v_l, double T, const GippsParams& gp);
double idm_controller(double v_f, double d, double v_l, const IdmParams& ip);

}  // namespace acv
