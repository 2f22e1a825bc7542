#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "acv/estimation.hpp"
#include "acv/mathkit.hpp"
#include "acv/sensing.hpp"

namespace acv {

/// Analytic statistics of the a-posteriori leader-speed residual
/// mu_l(t) = v_l_plus(t) - z_l(t), with per-subset inverse covariances and
/// subset costs precomputed for every non-empty subset of the L sensors.
/// Subsets are bitmasks with bit (i-1) set when sensor i is included.
struct PosteriorModel {
    Mat C_mul{1, 1};
    Mat Upsilon{1, 1};
    std::vector<double> J;  // (1/T) * spacing row of the steady gain
    double s1 = 0.0;
    double s2 = 0.0;
    int n_l = 0;
    std::vector<double> l_var;
    std::vector<Mat> subset_inv;      // indexed by bitmask; [0] unused
    std::vector<double> subset_cost;  // nu per bitmask; [0] = +inf

    uint32_t full_mask() const { return (1u << n_l) - 1u; }
    int subset_size(uint32_t mask) const;
};

/// Builds the posterior model from the converged gain and the estimation
/// error covariance C_r (see build_residual_model).
PosteriorModel build_posterior_model(const Mat& K_ss, const SensorBank& bank, const Mat& C_r,
                                     const EstimatorParams& params);

struct PosteriorResidual {
    double v_l_plus = 0.0;
    std::vector<double> mu;  // signed, per sensor
};

/// v_l_plus = (d_next - d)/T + v_f from consecutive filter outputs, and the
/// per-sensor residuals v_l_plus - z_l_i.
PosteriorResidual posterior_residual(double d_hat_next, double d_hat, double vf_hat,
                                     const std::vector<double>& z_l, double T);

struct SmValue {
    double D = 0.0;         // squared Mahalanobis distance of the subset residual
    double sd_sample = 0.0; // D / |subset|, the per-step security-divergence sample
};

SmValue mahalanobis_sd(const std::vector<double>& mu, uint32_t subset,
                       const PosteriorModel& model);

/// nu = 1 / sum_{i in subset} 1/sigma_i^2.
double subset_cost(uint32_t subset, const std::vector<double>& variances);

/// UCB bookkeeping over all non-empty subsets of the L sensors.
struct BanditState {
    int n_l = 0;
    bool normalize = false;  // min-max normalize the exploitation term
    std::vector<long long> plays;  // per bitmask
    std::vector<double> sums;      // sum of observed D per bitmask
    long long total = 0;
    double cost_min = std::numeric_limits<double>::infinity();
    double cost_max = -std::numeric_limits<double>::infinity();

    explicit BanditState(int n_l_, bool normalize_ = false)
        : n_l(n_l_), normalize(normalize_),
          plays(static_cast<size_t>(1) << n_l_, 0),
          sums(static_cast<size_t>(1) << n_l_, 0.0) {}
};

/// Plays each unplayed arm once (ascending bitmask), then the index argmax
///   -(nu/|L|) * mean(D) + sqrt(2 ln t / n_L),
/// ties broken by lowest cost, then lowest bitmask.
uint32_t ucb_select(const BanditState& b, const PosteriorModel& model);

void update_arm(BanditState& b, uint32_t arm, double D, const PosteriorModel& model);

struct MabStepRecord {
    uint32_t arm = 0;
    std::vector<double> mu;   // posterior residuals of the step
    uint32_t attacked = 0;    // ground-truth attacked sensors at the step
};

struct CyberRegretRow {
    long long t = 0;
    uint32_t arm = 0;
    double D = 0.0;
    double xi = 0.0;
    double xi_star = 0.0;
    double cum_regret = 0.0;
    double bound = 0.0;
};

struct CyberRegretTrace {
    std::vector<CyberRegretRow> rows;
};

/// Scores a recorded run against the per-step oracle: the cheapest subset
/// disjoint from the ground-truth attacked set, costed on the same step's
/// realized residuals. The analytic bound column uses the terminal attacked
/// set with model-based arm expectations (attack_values holds the additive
/// injection per sensor).
CyberRegretTrace cyber_regret(const std::vector<MabStepRecord>& steps,
                              const std::vector<double>& attack_values,
                              const PosteriorModel& model);

/// Cheapest subset disjoint from `attacked` (the full set when nothing is
/// attacked); falls back to the globally cheapest arm if every sensor is hit.
uint32_t oracle_arm(uint32_t attacked, const PosteriorModel& model);

std::string arm_to_string(uint32_t mask, int n_l);  // b_n ... b_1 order

}  // namespace acv
