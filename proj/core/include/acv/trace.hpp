#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acv/fusion_mab.hpp"

namespace acv {

struct TraceRow {
    double t = 0.0;
    double v_f = 0.0, d = 0.0, v_l = 0.0;  // truth
    double vf_hat = 0.0, d_hat = 0.0, vl_hat = 0.0;
    double u = 0.0;
    double regret = 0.0;
    double cum_regret = 0.0;
    uint32_t flags = 0;  // bit per F+D sensor the prior filter excluded this step
    uint32_t arm = 0;    // chosen L subset; 0 when the MAB detector is off
    double D = 0.0;      // SM of the arm scored this step (one-step look-back)
    double xi = 0.0;
    double xi_star = 0.0;
    double cum_cyber = 0.0;
    double bound = 0.0;
    int collision = 0;
};

struct RunSummary {
    std::string name;
    uint64_t seed = 0;
    long long steps = 0;
    double final_cum_regret = 0.0;
    double windowed_regret = 0.0;  // regret accumulated for t >= regret_window_start
    double regret_window_start = 0.0;
    long long collisions = 0;
    double prior_first_flag_s = -1.0;   // first flag of a truly attacked F/D sensor
    double mab_clean_arm_s = -1.0;      // first post-attack step with an uncontaminated arm
    uint32_t modal_arm = 0;
    std::string modal_arm_bits;
    double final_cum_cyber = 0.0;
    double final_bound = 0.0;
};

struct RunTrace {
    std::vector<TraceRow> rows;  // empty when record_trace was off
    RunSummary summary;
};

void write_trace_csv(const RunTrace& trace, const std::string& path);
void write_summary_json(const RunSummary& summary, const std::string& path);
std::string summary_to_json(const RunSummary& summary);

/// Columns: t, arm_bitmask, D, xi, xi_star, cum_regret, bound.
void write_mab_csv(const CyberRegretTrace& trace, int n_l, const std::string& path);

/// Shortest round-trip-exact decimal rendering used by every writer, so that
/// equal seeds give byte-identical files.
std::string format_double(double v);

}  // namespace acv
