#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "acv/control.hpp"
#include "acv/dynamics.hpp"
#include "acv/estimation.hpp"
#include "acv/sensing.hpp"

namespace acv {

enum class ControllerKind { Optimal, Gipps, Idm };

struct DetectorConfig {
    bool prior_filter = false;
    bool mab = false;
    bool mab_normalize = false;
    int quarantine_steps = 0;
    double confidence = 0.997;
};

struct OutputConfig {
    std::string trace_csv;
    std::string summary_json;
    std::string mab_csv;
    bool record_trace = true;
};

struct ScenarioConfig {
    std::string name = "scenario";
    double duration = 600.0;  // s
    uint64_t seed = 1;
    PlantParams plant;
    double v_f0 = 25.0;  // m/s
    double d0 = 100.0;   // m
    LeaderProfile leader = LeaderProfile::sinusoid(20.0, 2.0, 60.0);
    SensorBank bank = SensorBank::defaults();
    double accel_noise_std = 1.1e-3;
    ControllerKind controller = ControllerKind::Optimal;
    GippsParams gipps;
    IdmParams idm;
    DetectorConfig detectors;
    AttackPlan attacks;
    double regret_window_start = 0.0;  // summary accumulates regret from this time
    OutputConfig output;

    int steps() const { return static_cast<int>(duration / plant.T + 0.5); }
    void validate() const;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses a scenario from JSON text. Speed-valued fields carry explicit unit
/// suffixes and may be given either way (e.g. v_f0_kmh or v_f0_mps); all
/// values are stored internally in SI. Throws ConfigError with a field path
/// on any problem.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario_file(const std::string& path);

/// Preset lookup for the `reproduce` figures. Resolution order for the
/// directory: explicit argument, ACVSIM_PRESETS env var, compiled-in default.
std::string preset_dir();
std::string preset_path(const std::string& name, const std::string& dir = "");
ScenarioConfig load_preset(const std::string& name, const std::string& dir = "");

}  // namespace acv
