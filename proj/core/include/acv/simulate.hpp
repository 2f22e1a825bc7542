#pragma once

#include <functional>
#include <optional>

#include "acv/detection_prior.hpp"
#include "acv/fusion_mab.hpp"
#include "acv/scenario.hpp"
#include "acv/trace.hpp"

namespace acv {

/// Read-only view of one completed simulation step, for custom collectors.
struct StepView {
    long long step = 0;
    double t = 0.0;
    Truth truth;                       // state and leader speed at the step
    const ReadingFrame* frame = nullptr;
    const EstimatorState* est = nullptr;
    const std::vector<bool>* pass_mask = nullptr;  // null when the prior filter is off
    double vl_hat = 0.0;
    uint32_t arm = 0;
    double u = 0.0;
    PlantState next_state;
    bool collision = false;
    double regret = 0.0;
};

class SimObserver {
  public:
    virtual ~SimObserver() = default;
    virtual void on_step(const StepView& view) = 0;
};

struct RunArtifacts {
    RunTrace trace;
    std::vector<MabStepRecord> mab_records;  // empty when the MAB detector is off
    std::optional<ResidualModel> residual_model;
    std::optional<PosteriorModel> posterior_model;
    std::vector<double> mab_attack_values;   // effective additive injection per L sensor
};

/// Runs one scenario end to end. Deterministic for a fixed seed. Per-step
/// order: leader speed, sample + attack readings, prior-filter gate, Kalman
/// update, MAB scoring and arm selection, static LS for the leader speed,
/// controller, plant step, regret accounting.
RunArtifacts run_scenario(const ScenarioConfig& cfg, SimObserver* observer = nullptr);

/// Variance of the full-bank LS leader-speed estimate, used as the process
/// noise of the spacing channel and as the sigma_l^2 of the residual model.
double full_bank_vl_variance(const SensorBank& bank);

EstimatorParams estimator_params(const ScenarioConfig& cfg);

}  // namespace acv
