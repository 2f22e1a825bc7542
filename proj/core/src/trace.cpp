#include "acv/trace.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace acv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

}  // namespace

void write_trace_csv(const RunTrace& trace, const std::string& path) {
    auto out = open_or_throw(path);
    out << "t_s,v_f_mps,d_m,v_l_mps,vf_hat_mps,d_hat_m,vl_hat_mps,u_mps2,"
           "regret_m2,cum_regret_m2,flags,arm_bitmask,D,xi,xi_star,cum_cyber_regret,"
           "bound,collision\n";
    for (const auto& r : trace.rows) {
        out << format_double(r.t) << ',' << format_double(r.v_f) << ',' << format_double(r.d)
            << ',' << format_double(r.v_l) << ',' << format_double(r.vf_hat) << ','
            << format_double(r.d_hat) << ',' << format_double(r.vl_hat) << ','
            << format_double(r.u) << ',' << format_double(r.regret) << ','
            << format_double(r.cum_regret) << ',' << r.flags << ',' << r.arm << ','
            << format_double(r.D) << ',' << format_double(r.xi) << ','
            << format_double(r.xi_star) << ',' << format_double(r.cum_cyber) << ','
            << format_double(r.bound) << ',' << r.collision << '\n';
    }
}

std::string summary_to_json(const RunSummary& s) {
    std::string j = "{\n";
    j += "  \"name\": \"" + s.name + "\",\n";
    j += "  \"seed\": " + std::to_string(s.seed) + ",\n";
    j += "  \"steps\": " + std::to_string(s.steps) + ",\n";
    j += "  \"final_cum_regret_m2\": " + format_double(s.final_cum_regret) + ",\n";
    j += "  \"windowed_regret_m2\": " + format_double(s.windowed_regret) + ",\n";
    j += "  \"regret_window_start_s\": " + format_double(s.regret_window_start) + ",\n";
    j += "  \"collisions\": " + std::to_string(s.collisions) + ",\n";
    j += "  \"prior_first_flag_s\": " + format_double(s.prior_first_flag_s) + ",\n";
    j += "  \"mab_clean_arm_s\": " + format_double(s.mab_clean_arm_s) + ",\n";
    j += "  \"modal_arm\": " + std::to_string(s.modal_arm) + ",\n";
    j += "  \"modal_arm_bits\": \"" + s.modal_arm_bits + "\",\n";
    j += "  \"final_cum_cyber_regret\": " + format_double(s.final_cum_cyber) + ",\n";
    j += "  \"final_bound\": " + format_double(s.final_bound) + "\n";
    j += "}\n";
    return j;
}

void write_summary_json(const RunSummary& summary, const std::string& path) {
    auto out = open_or_throw(path);
    out << summary_to_json(summary);
}

void write_mab_csv(const CyberRegretTrace& trace, int n_l, const std::string& path) {
    auto out = open_or_throw(path);
    out << "t,arm_bitmask,D,xi,xi_star,cum_regret,bound\n";
    for (const auto& r : trace.rows) {
        out << r.t << ',' << arm_to_string(r.arm, n_l) << ',' << format_double(r.D) << ','
            << format_double(r.xi) << ',' << format_double(r.xi_star) << ','
            << format_double(r.cum_regret) << ',' << format_double(r.bound) << '\n';
    }
}

}  // namespace acv
