#pragma once

#include <vector>

#include "acv/dynamics.hpp"
#include "acv/estimation.hpp"
#include "acv/mathkit.hpp"
#include "acv/sensing.hpp"

namespace acv {

/// Analytic statistics of the one-step-ahead reading residual
/// mu(t) = z(t) - H x_pred(t) of the converged filter, plus the per-sensor
/// detection thresholds derived from them.
struct ResidualModel {
    Mat K{2, 2};      // steady-state gain (2 x n_fd)
    Mat Q{2, 2};      // I - K H
    Mat C_rho{2, 2};  // driving-noise covariance of the estimation-error recursion
    Mat C_r{2, 2};    // steady estimation-error covariance (Riccati fixed point)
    Mat C_mu{2, 2};   // residual covariance, n_fd x n_fd
    Mat Psi{2, 2};    // steady residual bias per unit constant injection, n_fd x n_fd
    Mat bias_gain{2, 2};  // (I - QA)^-1 K, so that r_bar = -bias_gain * a
    std::vector<double> eta;
    double confidence = 0.997;
    double vl_variance = 0.0;
    int n_f = 0;
    int n_d = 0;
};

/// Builds the residual model from the converged gain. The estimation error
/// r(t) = x - x_hat follows r(t) = QA r(t-1) + QF r_l(t-1) - K e(t), giving
///   C_rho = QF sigma_l^2 F'Q' + K R K',
///   C_r   = QA C_r (QA)' + C_rho  (fixed point),
///   C_mu  = H (A C_r A' + sigma_l^2 F F') H' + R,
/// and eta_i = z(confidence) * sqrt(C_mu(i,i)).
ResidualModel build_residual_model(const Mat& K_ss, const SensorBank& bank,
                                   const EstimatorParams& params, double confidence);

/// Per-sensor gate: sensor i passes iff |z_i - z_pred_i| < eta_i. Returns the
/// pass mask over the F+D block; L sensors are never judged here.
std::vector<bool> detect(const ReadingFrame& frame, const std::vector<double>& z_pred,
                         const ResidualModel& model);

/// Probability that each residual stays inside its +-eta window under a
/// constant injection `attack` on the F+D sensors (steady-state mean Psi a).
std::vector<double> stealth_probability(const std::vector<double>& attack,
                                        const ResidualModel& model);

struct SteadyBias {
    Mat r_bar{2, 1};
    double theta_bar = 0.0;
    double objective = 0.0;  // theta_bar^2
};

/// Closed-form steady estimation bias under a constant injection and the
/// resulting steady regret objective. d_tilde is the average spacing the
/// regret is linearized around.
SteadyBias steady_bias_and_regret(const std::vector<double>& attack, const ResidualModel& model,
                                  const PlantParams& plant, double d_tilde);

struct AttackAssessment {
    std::vector<double> attack;
    std::vector<double> stealth;
    Mat r_bar{2, 1};
    double theta_bar = 0.0;
    double objective = 0.0;
};

/// Attacker's side: maximize the steady regret objective subject to every
/// sensor staying stealthy with probability at least p_min_i. Multi-start
/// projected coordinate ascent with step-halving; the zero attack is the
/// fallback whenever p_min is unattainable. `support` optionally restricts
/// the nonzero coordinates.
AttackAssessment optimal_stealthy_attack(const std::vector<double>& p_min,
                                         const ResidualModel& model, const PlantParams& plant,
                                         double d_tilde,
                                         const std::vector<bool>& support = {},
                                         int restarts = 32, uint64_t seed = 1234);

/// Spectral radius of a 2x2 matrix.
double spectral_radius_2x2(const Mat& m);

}  // namespace acv
