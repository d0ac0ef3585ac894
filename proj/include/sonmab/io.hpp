#ifndef SONMAB_IO_HPP
#define SONMAB_IO_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sonmab/fit.hpp"
#include "sonmab/sim.hpp"

namespace sonmab {

// Fixed shortest-roundtrip-style formatting so output files are
// byte-identical across platforms for the same (config, seed).
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return j.get<RunConfig>();
}

inline void write_text(const std::filesystem::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + p.string());
    out << body;
}

namespace detail {

inline double tail_mean(const std::vector<MetricPoint>& pts,
                        double (*get)(const PhysicalMetrics&)) {
    if (pts.empty()) return 0.0;
    const std::size_t start = pts.size() - std::max<std::size_t>(pts.size() / 10, 1);
    double s = 0.0;
    for (std::size_t i = start; i < pts.size(); ++i) s += get(pts[i].metrics);
    return s / static_cast<double>(pts.size() - start);
}

}  // namespace detail

struct TailMetrics {
    double sum_rate_bps = 0.0;
    double total_power_w = 0.0;
    double energy_efficiency = 0.0;
};

// Mean of the last 10% of recorded metric points.
inline TailMetrics tail_metrics(const RunResult& r) {
    return {detail::tail_mean(r.metrics, [](const PhysicalMetrics& m) { return m.sum_rate_bps; }),
            detail::tail_mean(r.metrics, [](const PhysicalMetrics& m) { return m.total_power_w; }),
            detail::tail_mean(r.metrics,
                              [](const PhysicalMetrics& m) { return m.energy_efficiency; })};
}

inline nlohmann::json run_summary(const RunResult& r, const RunConfig& cfg) {
    nlohmann::json j;
    j["seed"] = r.seed;
    j["method"] = cfg.method;
    j["config_hash"] = fnv1a(nlohmann::json(cfg).dump());
    j["infeasible"] = r.infeasible;
    if (r.infeasible) j["infeasible_reason"] = r.infeasible_reason;
    j["channel_oracle"] = {{"j1", r.channel_oracle.j1},
                           {"j2", r.channel_oracle.j2},
                           {"delta_m", r.channel_oracle.delta},
                           {"degenerate", r.channel_oracle.degenerate},
                           {"optimal_occupancy", r.channel_oracle.optimal_occupancy}};
    nlohmann::json pw = nlohmann::json::array();
    for (std::size_t m = 0; m < r.power_oracle.size(); ++m)
        if (r.power_oracle[m])
            pw.push_back({{"channel", m},
                          {"j1", r.power_oracle[m]->j1},
                          {"j2", r.power_oracle[m]->j2},
                          {"delta_p", r.power_oracle[m]->delta},
                          {"degenerate", r.power_oracle[m]->degenerate}});
    j["power_oracle"] = pw;
    j["t_c0"] = r.t_c0_used;
    j["t_p0"] = r.t_p0_used;
    j["final_channels"] = r.final_channels;
    j["final_levels"] = r.final_levels;
    j["exploit_optimal_by_epoch"] = r.exploit_optimal_by_epoch;
    j["power_exploit_optimal_by_epoch"] = r.power_exploit_optimal_by_epoch;
    j["converged_to_oracle"] =
        !r.exploit_optimal_by_epoch.empty() && r.exploit_optimal_by_epoch.back();
    if (!r.channel_regret.empty()) j["channel_regret_final"] = r.channel_regret.back().value;
    if (!r.power_regret.empty()) j["power_regret_final"] = r.power_regret.back().value;
    const TailMetrics tm = tail_metrics(r);
    j["tail_metrics"] = {{"sum_rate_bps", tm.sum_rate_bps},
                         {"total_power_w", tm.total_power_w},
                         {"energy_efficiency", tm.energy_efficiency}};
    j["clamp_warnings"] = r.clamp_warnings;
    return j;
}

// Writes config.json, scenario.json, regret.csv, metrics.csv, trace.csv and
// summary.json under dir (created if missing).
inline void write_run_outputs(const RunResult& r, const RunConfig& cfg,
                              const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_text(dir / "config.json", nlohmann::json(cfg).dump(2) + "\n");
    write_text(dir / "scenario.json", scenario_to_json(r.scenario).dump(2) + "\n");

    std::string csv = "stage,t,cumulative_regret\n";
    for (const auto& p : r.channel_regret)
        csv += "channel," + fmt(p.t) + "," + fmt(p.value) + "\n";
    for (const auto& p : r.power_regret)
        csv += "power," + fmt(p.t) + "," + fmt(p.value) + "\n";
    write_text(dir / "regret.csv", csv);

    csv = "t,sum_rate_bps,total_power_w,energy_efficiency\n";
    for (const auto& p : r.metrics)
        csv += std::to_string(p.t) + "," + fmt(p.metrics.sum_rate_bps) + "," +
               fmt(p.metrics.total_power_w) + "," + fmt(p.metrics.energy_efficiency) + "\n";
    write_text(dir / "metrics.csv", csv);

    csv = "t,stage,epoch,phase,actions,expected_reward\n";
    for (const auto& row : r.trace)
        csv += std::to_string(row.t) + "," + row.stage + "," + std::to_string(row.epoch) + "," +
               row.phase + "," + row.actions + "," + fmt(row.expected_reward) + "\n";
    write_text(dir / "trace.csv", csv);

    write_text(dir / "summary.json", run_summary(r, cfg).dump(2) + "\n");
}

struct RegretCurveFile {
    std::vector<CurvePoint> channel;
    std::vector<CurvePoint> power;
};

inline RegretCurveFile read_regret_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open regret file: " + path.string());
    RegretCurveFile out;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::runtime_error("malformed regret row: " + line);
        const std::string stage = line.substr(0, c1);
        const CurvePoint p{std::stod(line.substr(c1 + 1, c2 - c1 - 1)),
                           std::stod(line.substr(c2 + 1))};
        if (stage == "channel")
            out.channel.push_back(p);
        else if (stage == "power")
            out.power.push_back(p);
        else
            throw std::runtime_error("unknown stage in regret row: " + stage);
    }
    return out;
}

}  // namespace sonmab

#endif
