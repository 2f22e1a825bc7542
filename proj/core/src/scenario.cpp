#include "acv/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace acv {

using nlohmann::json;

namespace {

constexpr double kKmhToMps = 1000.0 / 3600.0;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("scenario: field '" + where + "': " + what);
}

double num(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key)) fail(ctx + "." + key, "missing");
    if (!j.at(key).is_number()) fail(ctx + "." + key, "not a number");
    return j.at(key).get<double>();
}

double num_or(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<double>();
}

/// Reads a speed given as either <base>_mps or <base>_kmh.
double speed(const json& j, const std::string& base, const std::string& ctx) {
    const bool has_mps = j.contains(base + "_mps");
    const bool has_kmh = j.contains(base + "_kmh");
    if (has_mps && has_kmh) fail(ctx + "." + base, "given in both m/s and km/h");
    if (has_mps) return j.at(base + "_mps").get<double>();
    if (has_kmh) return j.at(base + "_kmh").get<double>() * kKmhToMps;
    fail(ctx + "." + base, "missing (expected " + base + "_mps or " + base + "_kmh)");
}

std::vector<double> std_list_to_var(const json& j, const std::string& key,
                                    const std::string& ctx) {
    if (!j.contains(key) || !j.at(key).is_array()) fail(ctx + "." + key, "missing array");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        const double s = v.get<double>();
        if (!(s > 0.0)) fail(ctx + "." + key, "standard deviations must be > 0");
        out.push_back(s * s);
    }
    return out;
}

Injection parse_injection(const json& j, const SensorBank& bank, size_t idx) {
    const std::string ctx = "attacks[" + std::to_string(idx) + "]";
    Injection inj;
    const std::string sensor = j.value("sensor", std::string());
    if (sensor.size() < 2) fail(ctx + ".sensor", "expected e.g. \"l3\"");
    switch (sensor[0]) {
        case 'f': inj.kind = SensorKind::F; break;
        case 'd': inj.kind = SensorKind::D; break;
        case 'l': inj.kind = SensorKind::L; break;
        default: fail(ctx + ".sensor", "kind must be f, d or l");
    }
    inj.index = std::stoi(sensor.substr(1)) - 1;
    inj.start = num(j, "start_s", ctx);
    inj.end = num_or(j, "end_s", 1e300);
    const std::string mode = j.value("mode", "additive");
    if (mode == "additive")
        inj.mode = InjectionMode::AdditiveConstant;
    else if (mode == "multiplicative")
        inj.mode = InjectionMode::MultiplicativeFactor;
    else
        fail(ctx + ".mode", "must be additive or multiplicative");
    inj.magnitude = num(j, "magnitude", ctx);
    const int n = inj.kind == SensorKind::F   ? bank.n_f()
                  : inj.kind == SensorKind::D ? bank.n_d()
                                              : bank.n_l();
    if (inj.index < 0 || inj.index >= n) fail(ctx + ".sensor", "no such sensor: " + sensor);
    return inj;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (!(duration > 0.0)) throw ConfigError("scenario: duration must be > 0");
    plant.validate();
    bank.validate();
    attacks.validate(bank);
    if (detectors.mab && bank.n_l() > 12)
        throw ConfigError("scenario: refusing MAB with n_l > 12 (combinatorial arm set)");
    if (detectors.quarantine_steps < 0)
        throw ConfigError("scenario: quarantine_steps must be >= 0");
    if (!(detectors.confidence > 0.0 && detectors.confidence < 1.0))
        throw ConfigError("scenario: confidence must be in (0,1)");
    if (v_f0 < 0.0 || v_f0 > plant.v_free) throw ConfigError("scenario: v_f0 outside [0, v_free]");
    if (!(d0 > 0.0)) throw ConfigError("scenario: d0 must be > 0");
    // the leader profile must emit nonnegative speeds
    switch (leader.kind) {
        case LeaderKind::Constant:
            if (leader.base < 0.0) throw ConfigError("scenario: leader speed must be >= 0");
            break;
        case LeaderKind::Sinusoid:
            if (leader.base - std::abs(leader.amplitude) < 0.0)
                throw ConfigError("scenario: sinusoid dips below zero speed");
            if (!(leader.period > 0.0)) throw ConfigError("scenario: sinusoid period must be > 0");
            break;
        case LeaderKind::StepDrop:
            if (leader.base < 0.0 || leader.drop_to < 0.0)
                throw ConfigError("scenario: step_drop speeds must be >= 0");
            break;
        case LeaderKind::Trace:
            if (leader.trace.empty()) throw ConfigError("scenario: empty leader trace");
            for (double v : leader.trace)
                if (v < 0.0) throw ConfigError("scenario: leader trace speed must be >= 0");
            if (!(leader.trace_dt > 0.0)) throw ConfigError("scenario: trace dt must be > 0");
            break;
    }
}

namespace {
ScenarioConfig parse_scenario_checked(const json& j);
}

ScenarioConfig parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    try {
        return parse_scenario_checked(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: malformed field: ") + e.what());
    }
}

namespace {

ScenarioConfig parse_scenario_checked(const json& j) {
    ScenarioConfig cfg;
    cfg.name = j.value("name", cfg.name);
    cfg.duration = num(j, "duration_s", "");
    cfg.seed = j.value("seed", cfg.seed);

    if (j.contains("plant")) {
        const auto& p = j.at("plant");
        cfg.plant.T = num_or(p, "T_s", cfg.plant.T);
        cfg.plant.b_f = num_or(p, "b_f_mps2", cfg.plant.b_f);
        if (p.contains("v_free_mps") || p.contains("v_free_kmh"))
            cfg.plant.v_free = speed(p, "v_free", "plant");
        cfg.plant.u_min = num_or(p, "u_min_mps2", cfg.plant.u_min);
        cfg.plant.u_max = num_or(p, "u_max_mps2", cfg.plant.u_max);
        cfg.plant.du_max = num_or(p, "du_max_mps2", cfg.plant.du_max);
    }
    if (j.contains("init")) {
        const auto& p = j.at("init");
        cfg.v_f0 = speed(p, "v_f0", "init");
        cfg.d0 = num(p, "d0_m", "init");
    }
    if (j.contains("leader")) {
        const auto& p = j.at("leader");
        const std::string kind = p.value("kind", "constant");
        if (kind == "constant") {
            cfg.leader = LeaderProfile::constant(speed(p, "v", "leader"));
        } else if (kind == "sinusoid") {
            cfg.leader = LeaderProfile::sinusoid(speed(p, "base", "leader"),
                                                 speed(p, "amplitude", "leader"),
                                                 num(p, "period_s", "leader"));
        } else if (kind == "step_drop") {
            cfg.leader = LeaderProfile::step_drop(speed(p, "from", "leader"),
                                                  speed(p, "to", "leader"),
                                                  num(p, "at_s", "leader"));
        } else if (kind == "trace") {
            LeaderProfile t;
            t.kind = LeaderKind::Trace;
            t.trace_dt = num(p, "dt_s", "leader");
            if (!p.contains("speeds_mps")) fail("leader.speeds_mps", "missing");
            t.trace = p.at("speeds_mps").get<std::vector<double>>();
            cfg.leader = t;
        } else {
            fail("leader.kind", "unknown kind " + kind);
        }
    }
    if (j.contains("sensors")) {
        const auto& p = j.at("sensors");
        cfg.bank.f_var = std_list_to_var(p, "f_std_mps", "sensors");
        cfg.bank.d_var = std_list_to_var(p, "d_std_m", "sensors");
        cfg.bank.l_var = std_list_to_var(p, "l_std_mps", "sensors");
    }
    if (j.contains("estimator")) {
        const auto& p = j.at("estimator");
        cfg.accel_noise_std = num_or(p, "accel_noise_std_mps2", cfg.accel_noise_std);
        cfg.detectors.quarantine_steps =
            p.value("quarantine_steps", cfg.detectors.quarantine_steps);
        cfg.detectors.confidence = num_or(p, "confidence", cfg.detectors.confidence);
    }
    if (j.contains("controller")) {
        const std::string kind = j.at("controller").value("kind", "optimal");
        if (kind == "optimal")
            cfg.controller = ControllerKind::Optimal;
        else if (kind == "gipps")
            cfg.controller = ControllerKind::Gipps;
        else if (kind == "idm")
            cfg.controller = ControllerKind::Idm;
        else
            fail("controller.kind", "unknown kind " + kind);
        cfg.gipps.v_desired = cfg.plant.v_free;
        cfg.idm.v_desired = cfg.plant.v_free;
    }
    if (j.contains("detectors")) {
        const auto& p = j.at("detectors");
        cfg.detectors.prior_filter = p.value("prior_filter", false);
        cfg.detectors.mab = p.value("mab", false);
        cfg.detectors.mab_normalize = p.value("mab_normalize", false);
    }
    if (j.contains("attacks")) {
        size_t i = 0;
        for (const auto& a : j.at("attacks"))
            cfg.attacks.injections.push_back(parse_injection(a, cfg.bank, i++));
    }
    if (j.contains("metrics"))
        cfg.regret_window_start = num_or(j.at("metrics"), "regret_window_start_s", 0.0);
    if (j.contains("output")) {
        const auto& p = j.at("output");
        cfg.output.trace_csv = p.value("trace_csv", "");
        cfg.output.summary_json = p.value("summary_json", "");
        cfg.output.mab_csv = p.value("mab_csv", "");
        cfg.output.record_trace = p.value("record_trace", true);
    }
    cfg.validate();
    return cfg;
}

}  // namespace

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario: cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_scenario(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(e.what()) + " (in " + path + ")");
    }
}

std::string preset_dir() {
    if (const char* env = std::getenv("ACVSIM_PRESETS")) return env;
#ifdef ACVSIM_PRESET_DIR
    return ACVSIM_PRESET_DIR;
#else
    return "presets";
#endif
}

std::string preset_path(const std::string& name, const std::string& dir) {
    const std::string base = dir.empty() ? preset_dir() : dir;
    return base + "/" + name + ".json";
}

ScenarioConfig load_preset(const std::string& name, const std::string& dir) {
    return load_scenario_file(preset_path(name, dir));
}

}  // namespace acv
