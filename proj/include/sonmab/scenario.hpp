#ifndef SONMAB_SCENARIO_HPP
#define SONMAB_SCENARIO_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sonmab/noma.hpp"
#include "sonmab/rng.hpp"

namespace sonmab {

// 3GPP-style distance dependent path loss, d in km.
inline double path_loss_db(double d_km) { return 128.1 + 37.6 * std::log10(d_km); }

struct ScenarioConfig {
    int num_aps = 4;                        // K
    int num_channels = 4;                   // M
    std::vector<int> plays_per_ap;          // N_k; empty means uniform `plays`
    int plays = 2;                          // N
    int beta = 2;                           // NOMA cap per channel
    std::vector<double> sinr_db = {24.0, 4.77};
    bool allow_non_strict_ladder = false;
    double cell_radius_m = 150.0;
    double min_distance_m = 10.0;
    double bandwidth_hz = 2.5e6;            // B_c
    double noise_psd_mw_per_hz = 4e-18;     // Table-1 units; converted to W below
    std::vector<double> budgets_w = {1.0, 1.0, 2.0, 2.0};  // per AP, per channel
    double shadowing_sigma_db = 4.0;        // 0 disables
    double w1 = 0.5;                        // SINR weight in the power reward
    double reward_halfwidth_max = 0.05;     // w_max of the uniform reward noise

    int n_k(int k) const {
        return plays_per_ap.empty() ? plays : plays_per_ap[static_cast<std::size_t>(k)];
    }
    int sum_plays() const {
        int s = 0;
        for (int k = 0; k < num_aps; ++k) s += n_k(k);
        return s;
    }
};

struct ApPosition {
    double x = 0.0;
    double y = 0.0;
};

// Full ground truth of one network instance. Agents never see this struct;
// they only observe Feedback values produced by the env step functions.
struct NetworkScenario {
    ScenarioConfig config;
    std::uint64_t seed = 0;
    SinrLadder ladder;
    PowerLevelSet level_set;
    double noise_power_w = 0.0;  // N0 * Bc
    std::vector<ApPosition> positions;
    std::vector<double> distances_m;
    std::vector<std::vector<double>> gains;      // amplitude gain h[k][m]
    std::vector<std::vector<double>> budgets_w;  // P[k][m]

    int K() const { return config.num_aps; }
    int M() const { return config.num_channels; }
    int L() const { return static_cast<int>(ladder.size()); }
    int beta() const { return config.beta; }
    int n_k(int k) const { return config.n_k(k); }
};

inline NetworkScenario generate_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
    if (cfg.num_aps < 1 || cfg.num_channels < 1 || cfg.beta < 1)
        throw std::invalid_argument("generate_scenario: non-positive dimension");
    for (int k = 0; k < cfg.num_aps; ++k)
        if (cfg.n_k(k) < 1 || cfg.n_k(k) > cfg.num_channels)
            throw std::invalid_argument("generate_scenario: N_k out of range");
    if (cfg.beta * cfg.num_channels < cfg.sum_plays())
        throw std::invalid_argument("generate_scenario: beta*M < sum N_k");
    if (static_cast<int>(cfg.sinr_db.size()) < cfg.beta)
        throw std::invalid_argument("generate_scenario: L < beta");
    if (static_cast<int>(cfg.budgets_w.size()) != cfg.num_aps)
        throw std::invalid_argument("generate_scenario: budgets size != K");

    const double noise_w = cfg.noise_psd_mw_per_hz * 1e-3 * cfg.bandwidth_hz;
    SinrLadder ladder = SinrLadder::from_db(cfg.sinr_db, cfg.allow_non_strict_ladder);

    NetworkScenario sc{cfg, seed, ladder, power_levels(ladder, noise_w), noise_w,
                       {}, {}, {}, {}};

    Rng rng(seed);
    Rng pos_rng = rng.split();
    Rng shadow_rng = rng.split();

    sc.positions.resize(static_cast<std::size_t>(cfg.num_aps));
    sc.distances_m.resize(static_cast<std::size_t>(cfg.num_aps));
    sc.gains.assign(static_cast<std::size_t>(cfg.num_aps),
                    std::vector<double>(static_cast<std::size_t>(cfg.num_channels), 0.0));
    sc.budgets_w.assign(static_cast<std::size_t>(cfg.num_aps),
                        std::vector<double>(static_cast<std::size_t>(cfg.num_channels), 0.0));

    for (int k = 0; k < cfg.num_aps; ++k) {
        // Uniform over the disk, clamped away from the MBS at the origin.
        const double r = cfg.cell_radius_m * std::sqrt(pos_rng.next_double());
        const double phi = 2.0 * M_PI * pos_rng.next_double();
        const double d = std::max(r, cfg.min_distance_m);
        sc.positions[static_cast<std::size_t>(k)] = {d * std::cos(phi), d * std::sin(phi)};
        sc.distances_m[static_cast<std::size_t>(k)] = d;
        const double pl_db = path_loss_db(d / 1000.0);
        for (int m = 0; m < cfg.num_channels; ++m) {
            double loss_db = pl_db;
            if (cfg.shadowing_sigma_db > 0.0) {
                // Box-Muller; per-(k,m) lognormal shadowing makes the gains
                // differ across channels for a fixed AP.
                const double u1 = std::max(shadow_rng.next_double(), 1e-300);
                const double u2 = shadow_rng.next_double();
                const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
                loss_db += cfg.shadowing_sigma_db * z;
            }
            const double power_gain = std::pow(10.0, -loss_db / 10.0);
            sc.gains[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] =
                std::sqrt(power_gain);
            sc.budgets_w[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] =
                cfg.budgets_w[static_cast<std::size_t>(k)];
        }
    }
    return sc;
}

inline void to_json(nlohmann::json& j, const ApPosition& p) { j = {{"x", p.x}, {"y", p.y}}; }
inline void from_json(const nlohmann::json& j, ApPosition& p) {
    j.at("x").get_to(p.x);
    j.at("y").get_to(p.y);
}

inline void to_json(nlohmann::json& j, const ScenarioConfig& c) {
    j = nlohmann::json{{"num_aps", c.num_aps},
                       {"num_channels", c.num_channels},
                       {"plays_per_ap", c.plays_per_ap},
                       {"plays", c.plays},
                       {"beta", c.beta},
                       {"sinr_db", c.sinr_db},
                       {"allow_non_strict_ladder", c.allow_non_strict_ladder},
                       {"cell_radius_m", c.cell_radius_m},
                       {"min_distance_m", c.min_distance_m},
                       {"bandwidth_hz", c.bandwidth_hz},
                       {"noise_psd_mw_per_hz", c.noise_psd_mw_per_hz},
                       {"budgets_w", c.budgets_w},
                       {"shadowing_sigma_db", c.shadowing_sigma_db},
                       {"w1", c.w1},
                       {"reward_halfwidth_max", c.reward_halfwidth_max}};
}

inline void from_json(const nlohmann::json& j, ScenarioConfig& c) {
    ScenarioConfig d;
    c.num_aps = j.value("num_aps", d.num_aps);
    c.num_channels = j.value("num_channels", d.num_channels);
    c.plays_per_ap = j.value("plays_per_ap", d.plays_per_ap);
    c.plays = j.value("plays", d.plays);
    c.beta = j.value("beta", d.beta);
    c.sinr_db = j.value("sinr_db", d.sinr_db);
    c.allow_non_strict_ladder = j.value("allow_non_strict_ladder", d.allow_non_strict_ladder);
    c.cell_radius_m = j.value("cell_radius_m", d.cell_radius_m);
    c.min_distance_m = j.value("min_distance_m", d.min_distance_m);
    c.bandwidth_hz = j.value("bandwidth_hz", d.bandwidth_hz);
    c.noise_psd_mw_per_hz = j.value("noise_psd_mw_per_hz", d.noise_psd_mw_per_hz);
    c.budgets_w = j.value("budgets_w", d.budgets_w);
    c.shadowing_sigma_db = j.value("shadowing_sigma_db", d.shadowing_sigma_db);
    c.w1 = j.value("w1", d.w1);
    c.reward_halfwidth_max = j.value("reward_halfwidth_max", d.reward_halfwidth_max);
}

// Full ground-truth snapshot, for reproducibility records.
inline nlohmann::json scenario_to_json(const NetworkScenario& sc) {
    nlohmann::json j;
    j["config"] = sc.config;
    j["seed"] = sc.seed;
    j["gammas_linear"] = sc.ladder.gammas;
    j["power_levels_w"] = sc.level_set.levels;
    j["noise_power_w"] = sc.noise_power_w;
    j["positions"] = sc.positions;
    j["distances_m"] = sc.distances_m;
    j["gains"] = sc.gains;
    j["budgets_w"] = sc.budgets_w;
    return j;
}

inline NetworkScenario scenario_from_json(const nlohmann::json& j) {
    const ScenarioConfig cfg = j.at("config").get<ScenarioConfig>();
    const double noise_w = j.at("noise_power_w").get<double>();
    SinrLadder ladder(j.at("gammas_linear").get<std::vector<double>>(),
                      cfg.allow_non_strict_ladder);
    NetworkScenario sc{cfg, j.at("seed").get<std::uint64_t>(), ladder,
                       power_levels(ladder, noise_w), noise_w,
                       j.at("positions").get<std::vector<ApPosition>>(),
                       j.at("distances_m").get<std::vector<double>>(),
                       j.at("gains").get<std::vector<std::vector<double>>>(),
                       j.at("budgets_w").get<std::vector<std::vector<double>>>()};
    return sc;
}

}  // namespace sonmab

#endif
