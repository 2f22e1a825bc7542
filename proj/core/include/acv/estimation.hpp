#pragma once

#include <vector>

#include "acv/mathkit.hpp"
#include "acv/sensing.hpp"

namespace acv {

/// Inverse-variance weighted least-squares estimate of a scalar.
struct LsEstimate {
    double value = 0.0;
    std::vector<double> weights;  // full length; zero at excluded indices, sums to 1
    double variance = 0.0;        // 1 / sum(1/sigma_i^2) over the included subset
};

LsEstimate static_ls(const std::vector<double>& readings, const std::vector<double>& variances);
LsEstimate static_ls(const std::vector<double>& readings, const std::vector<double>& variances,
                     const std::vector<bool>& mask);

struct EstimatorParams {
    double T = 0.1;
    /// Small commanded-acceleration jitter the filter models on the speed
    /// channel. Keeps the covariance recursion strictly contractive so the
    /// gain settles to a fixed matrix instead of decaying harmonically.
    double accel_noise_std = 1.1e-3;  // m/s^2
    /// Variance of the leader-speed estimate that drives the spacing
    /// prediction; acts as process noise on the spacing channel.
    double vl_variance = 0.0;

    Mat process_noise() const;  // diag((accel_noise_std*T)^2, T^2 * vl_variance)
};

/// Kalman state over x = (v_f, d).
struct EstimatorState {
    Mat x_hat{2, 1};   // posterior estimate
    Mat P{2, 2};       // posterior covariance
    Mat x_pred{2, 1};  // a-priori estimate from the last step
    Mat K;             // 2 x (n_f+n_d); zero columns where the mask excluded a sensor
    std::vector<double> z_pred;  // a-priori readings H x_pred, full length

    double v_f() const { return x_hat(0, 0); }
    double d() const { return x_hat(1, 0); }
};

struct DegradedUpdateError : std::runtime_error {
    explicit DegradedUpdateError(const std::string& what) : std::runtime_error(what) {}
};

enum class MaskPolicy { FallbackToPrediction, Throw };

/// State-space matrices for the sampling period T.
Mat plant_A(double T);
Mat plant_B(double T);
Mat plant_F(double T);

/// Stacked output matrix H (F rows then D rows) and measurement covariance
/// diagonal for the masked subset of the bank; full bank when mask is empty.
Mat output_H(const SensorBank& bank);
std::vector<double> measurement_variances(const SensorBank& bank);

/// Initializes the filter from a single frame with the static estimators:
/// x_hat from LS on the F and D readings, P = diag of their LS variances.
EstimatorState init_estimator(const ReadingFrame& frame, const SensorBank& bank);

/// One predict/update cycle. `mask` has n_f + n_d entries (F block first);
/// excluded sensors are removed from H, R and z for this step only. If every
/// sensor of one kind is masked out the update is degraded: by default the
/// step falls back to the pure prediction, or throws under MaskPolicy::Throw.
EstimatorState kalman_step(const EstimatorState& est, double u_prev, double vl_hat_prev,
                           const ReadingFrame& frame, const std::vector<bool>& mask,
                           const SensorBank& bank, const EstimatorParams& params,
                           MaskPolicy policy = MaskPolicy::FallbackToPrediction);

struct SteadyStateGain {
    Mat K{2, 2};  // resized to 2 x (n_f+n_d)
    Mat P{2, 2};
    int iterations = 0;
};

/// Iterates the covariance recursion over the full bank to its fixed point
/// (tol 1e-12) and returns the limit gain and covariance.
SteadyStateGain steady_state_gain(const SensorBank& bank, const EstimatorParams& params,
                                  int max_iter = 200000);

}  // namespace acv
