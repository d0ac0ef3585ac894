#ifndef SONMAB_SIM_HPP
#define SONMAB_SIM_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sonmab/channel_agent.hpp"
#include "sonmab/env.hpp"
#include "sonmab/fit.hpp"
#include "sonmab/oracle.hpp"
#include "sonmab/power_agent.hpp"
#include "sonmab/scenario.hpp"
#include "sonmab/ucb.hpp"

namespace sonmab {

struct RunConfig {
    ScenarioConfig scenario;
    // When unset, the run seed also seeds the scenario; pinning it keeps one
    // network instance fixed while reward-noise seeds vary.
    std::optional<std::uint64_t> scenario_seed;
    std::int64_t t_c = 600'000;  // channel-stage horizon
    std::int64_t t_p = 400'000;  // power-stage horizon
    std::optional<std::int64_t> t_c0_override;
    std::optional<std::int64_t> t_p0_override;
    double c1 = 3000.0;
    std::int64_t c2 = 5000;
    double delta = 0.0;
    double epsilon = 5e-5;
    double eta = 0.05;  // error budget for the K-estimation length
    ExploreMode explore_mode = ExploreMode::Constant;
    double ucb_alpha = 2.0;
    std::int64_t trace_stride = 1000;
    std::string method = "proposed";  // proposed | ucb
};

inline void to_json(nlohmann::json& j, const RunConfig& c) {
    j = nlohmann::json{{"scenario", c.scenario},
                       {"t_c", c.t_c},
                       {"t_p", c.t_p},
                       {"c1", c.c1},
                       {"c2", c.c2},
                       {"delta", c.delta},
                       {"epsilon", c.epsilon},
                       {"eta", c.eta},
                       {"explore_mode",
                        c.explore_mode == ExploreMode::Constant ? "constant" : "decreasing"},
                       {"ucb_alpha", c.ucb_alpha},
                       {"trace_stride", c.trace_stride},
                       {"method", c.method}};
    if (c.scenario_seed) j["scenario_seed"] = *c.scenario_seed;
    if (c.t_c0_override) j["t_c0"] = *c.t_c0_override;
    if (c.t_p0_override) j["t_p0"] = *c.t_p0_override;
}

inline void from_json(const nlohmann::json& j, RunConfig& c) {
    RunConfig d;
    c.scenario = j.value("scenario", d.scenario);
    if (j.contains("scenario_seed")) c.scenario_seed = j.at("scenario_seed").get<std::uint64_t>();
    c.t_c = j.value("t_c", d.t_c);
    c.t_p = j.value("t_p", d.t_p);
    if (j.contains("t_c0")) c.t_c0_override = j.at("t_c0").get<std::int64_t>();
    if (j.contains("t_p0")) c.t_p0_override = j.at("t_p0").get<std::int64_t>();
    c.c1 = j.value("c1", d.c1);
    c.c2 = j.value("c2", d.c2);
    c.delta = j.value("delta", d.delta);
    c.epsilon = j.value("epsilon", d.epsilon);
    c.eta = j.value("eta", d.eta);
    const std::string mode = j.value("explore_mode", std::string("constant"));
    if (mode != "constant" && mode != "decreasing")
        throw std::invalid_argument("RunConfig: bad explore_mode");
    c.explore_mode = mode == "constant" ? ExploreMode::Constant : ExploreMode::Decreasing;
    c.ucb_alpha = j.value("ucb_alpha", d.ucb_alpha);
    c.trace_stride = j.value("trace_stride", d.trace_stride);
    c.method = j.value("method", d.method);
    if (c.method != "proposed" && c.method != "ucb")
        throw std::invalid_argument("RunConfig: bad method");
}

struct TraceRow {
    std::int64_t t = 0;  // 1-based within its stage
    std::string stage;   // "channel" | "power" | "ucb"
    int epoch = 0;
    std::string phase;   // "explore" | "matching" | "exploit"
    std::string actions;
    double expected_reward = 0.0;
};

struct MetricPoint {
    std::int64_t t = 0;  // global timeslot
    PhysicalMetrics metrics;
};

struct RunResult {
    std::uint64_t seed = 0;
    NetworkScenario scenario;
    ChannelRewardTable channel_table;
    ChannelOracleSolution channel_oracle;
    std::vector<std::optional<PowerOracleSolution>> power_oracle;  // per channel
    double power_j1_total = 0.0;  // sum over occupied channels of J1P_m
    std::int64_t t_c0_used = 0;
    std::int64_t t_p0_used = 0;
    std::vector<CurvePoint> channel_regret;  // cumulative, stage-local t
    std::vector<CurvePoint> power_regret;
    std::vector<MetricPoint> metrics;  // power stage (proposed) / whole run (ucb)
    std::vector<TraceRow> trace;
    std::vector<std::vector<int>> final_channels;          // per AP
    std::vector<std::vector<std::size_t>> final_levels;    // per AP, aligned
    std::vector<bool> exploit_optimal_by_epoch;            // channel stage
    std::vector<bool> power_exploit_optimal_by_epoch;
    bool infeasible = false;
    std::string infeasible_reason;
    std::int64_t clamp_warnings = 0;
};

namespace detail {

inline std::string action_string(const std::vector<std::vector<int>>& joint) {
    std::string s;
    for (std::size_t k = 0; k < joint.size(); ++k) {
        if (k) s += '|';
        for (std::size_t i = 0; i < joint[k].size(); ++i) {
            if (i) s += '+';
            s += std::to_string(joint[k][i]);
        }
    }
    return s;
}

// Appends cumulative-curve points for a phase advanced slot by slot.
class CurveRecorder {
  public:
    CurveRecorder(std::vector<CurvePoint>& curve, std::int64_t stride, std::int64_t t0,
                  double base)
        : curve_(curve), stride_(stride), t_(t0), cum_(base) {}

    void add_slot(double value) {
        ++t_;
        cum_ += value;
        if (t_ % stride_ == 0) curve_.push_back({static_cast<double>(t_), cum_});
    }

    // Fast-forward `slots` timeslots of constant per-slot `value`, keeping
    // the same sampling grid.
    void add_constant(std::int64_t slots, double value) {
        const std::int64_t end = t_ + slots;
        std::int64_t next = (t_ / stride_ + 1) * stride_;
        while (next <= end) {
            curve_.push_back({static_cast<double>(next),
                              cum_ + value * static_cast<double>(next - t_)});
            next += stride_;
        }
        cum_ += value * static_cast<double>(slots);
        t_ = end;
    }

    std::int64_t t() const { return t_; }
    double cum() const { return cum_; }

  private:
    std::vector<CurvePoint>& curve_;
    std::int64_t stride_;
    std::int64_t t_;
    double cum_;
};

}  // namespace detail

// Channel-stage + power-stage simulation of the proposed method for one seed.
inline RunResult run_proposed(const RunConfig& cfg, std::uint64_t seed) {
    const std::uint64_t scen_seed = cfg.scenario_seed.value_or(seed);
    NetworkScenario sc = generate_scenario(cfg.scenario, scen_seed);
    ChannelRewardTable table = build_channel_rewards(sc);
    ChannelOracleSolution ch_oracle =
        solve_channel(table, sc.K(), sc.M(), [&] {
            std::vector<int> n;
            for (int k = 0; k < sc.K(); ++k) n.push_back(sc.n_k(k));
            return n;
        }());

    RunResult res{seed, sc, table, ch_oracle, {}, 0.0, 0, 0, {}, {}, {}, {}, {}, {}, {}, {},
                  false, "", 0};

    std::int64_t t_c0 = 0;
    if (cfg.t_c0_override) {
        t_c0 = *cfg.t_c0_override;
    } else {
        if (ch_oracle.degenerate || !(ch_oracle.delta > 0.0))
            throw std::runtime_error("run_proposed: degenerate channel gap; set t_c0 explicitly");
        t_c0 = phase_length_bounds(sc.K(), sc.M(), sc.beta(), sc.L(), ch_oracle.delta,
                                   1.0, cfg.eta).t_c0;
    }
    res.t_c0_used = t_c0;

    Rng rng(seed ^ 0x5a75f8f1b2c3d4e5ULL);

    // ---- Channel allocation stage ----
    ChannelAgentConfig acfg{sc.M(), sc.config.plays, sc.beta(), cfg.epsilon};
    std::vector<ChannelAgent> agents;
    for (int k = 0; k < sc.K(); ++k) {
        ChannelAgentConfig c = acfg;
        c.plays = sc.n_k(k);
        agents.emplace_back(c);
    }

    EpochParams ep{t_c0, cfg.c1, cfg.c2, cfg.delta, cfg.explore_mode};
    detail::CurveRecorder regret(res.channel_regret, cfg.trace_stride, 0, 0.0);
    const double j1 = ch_oracle.j1;
    std::int64_t remaining = cfg.t_c;
    std::vector<std::vector<int>> joint(static_cast<std::size_t>(sc.K()));
    const auto trace_point = [&](const char* stage, int epoch, const char* phase,
                                 std::int64_t t, double er) {
        if (t % cfg.trace_stride == 0 || t == 1)
            res.trace.push_back({t, stage, epoch, phase, detail::action_string(joint), er});
    };

    for (int l = 1; remaining > 0; ++l) {
        const EpochSchedule sched = epoch_schedule(l, ep);

        // Exploration: one uniform channel per AP per slot.
        for (auto& a : agents) a.begin_explore();
        const std::int64_t explore_slots = std::min(sched.explore_len, remaining);
        for (std::int64_t i = 0; i < explore_slots; ++i) {
            for (int k = 0; k < sc.K(); ++k)
                joint[static_cast<std::size_t>(k)] = {agents[static_cast<std::size_t>(k)].explore_step(rng)};
            const auto fb = step_channel(sc, table, joint, rng);
            for (int k = 0; k < sc.K(); ++k)
                agents[static_cast<std::size_t>(k)].explore_update(fb[static_cast<std::size_t>(k)][0]);
            const double er = expected_sum_reward(table, sc.M(), joint);
            regret.add_slot(j1 - er);
            trace_point("channel", l, "explore", regret.t(), er);
        }
        remaining -= explore_slots;
        for (auto& a : agents) a.finalize_exploration();
        if (remaining <= 0) break;

        // Matching: trial-and-error dynamics, one frame per timeslot.
        for (auto& a : agents) a.begin_matching();
        const std::int64_t match_slots = std::min(sched.match_len, remaining);
        std::vector<std::size_t> chosen(static_cast<std::size_t>(sc.K()));
        for (std::int64_t i = 0; i < match_slots; ++i) {
            for (int k = 0; k < sc.K(); ++k) {
                chosen[static_cast<std::size_t>(k)] =
                    agents[static_cast<std::size_t>(k)].matching_choose(rng);
                joint[static_cast<std::size_t>(k)] =
                    agents[static_cast<std::size_t>(k)].actions()[chosen[static_cast<std::size_t>(k)]];
            }
            std::vector<int> occ(static_cast<std::size_t>(sc.M()), 0);
            for (const auto& chs : joint)
                for (const int m : chs) ++occ[static_cast<std::size_t>(m)];
            for (int k = 0; k < sc.K(); ++k) {
                std::vector<ChannelFeedback> fbs;
                for (const int m : joint[static_cast<std::size_t>(k)])
                    fbs.push_back({m, 0.0, occ[static_cast<std::size_t>(m)]});
                auto& agent = agents[static_cast<std::size_t>(k)];
                agent.matching_transition(chosen[static_cast<std::size_t>(k)],
                                          agent.utilities_from_feedback(fbs), rng);
            }
            const double er = expected_sum_reward(table, sc.M(), joint);
            regret.add_slot(j1 - er);
            trace_point("channel", l, "matching", regret.t(), er);
        }
        remaining -= match_slots;
        if (remaining <= 0) break;

        // Exploitation: constant joint action, advanced analytically.
        for (int k = 0; k < sc.K(); ++k) {
            agents[static_cast<std::size_t>(k)].begin_exploit();
            joint[static_cast<std::size_t>(k)] =
                agents[static_cast<std::size_t>(k)]
                    .actions()[agents[static_cast<std::size_t>(k)].exploit_action()];
        }
        const double er = expected_sum_reward(table, sc.M(), joint);
        res.exploit_optimal_by_epoch.push_back(er >= j1 - 1e-9);
        const std::int64_t exploit_slots = std::min(sched.exploit_len, remaining);
        regret.add_constant(exploit_slots, j1 - er);
        res.trace.push_back({regret.t(), "channel", l, "exploit",
                             detail::action_string(joint), er});
        remaining -= exploit_slots;
    }

    // Final assignment: the current exploitation choice of every AP.
    for (int k = 0; k < sc.K(); ++k) {
        auto& a = agents[static_cast<std::size_t>(k)];
        res.final_channels.push_back(a.actions()[a.exploit_action()]);
        res.clamp_warnings += a.clamp_warnings();
    }

    // ---- Handoff: gain estimates and per-channel occupancy ----
    std::vector<std::vector<double>> gain_est(
        static_cast<std::size_t>(sc.K()),
        std::vector<double>(static_cast<std::size_t>(sc.M()), 0.0));
    for (int k = 0; k < sc.K(); ++k)
        for (int m = 0; m < sc.M(); ++m)
            gain_est[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] =
                agents[static_cast<std::size_t>(k)].mu_hat(m, 1) * table.mu_max;

    std::vector<std::vector<int>> channel_players(static_cast<std::size_t>(sc.M()));
    for (int k = 0; k < sc.K(); ++k)
        for (const int m : res.final_channels[static_cast<std::size_t>(k)])
            channel_players[static_cast<std::size_t>(m)].push_back(k);

    const PowerRewardTable pw_table = build_power_rewards(sc, gain_est);

    // ---- Power allocation stage (per-channel games in lockstep) ----
    res.power_oracle.assign(static_cast<std::size_t>(sc.M()), std::nullopt);
    double j1p_total = 0.0;
    std::int64_t t_p0 = cfg.t_p0_override.value_or(0);
    bool need_bound = !cfg.t_p0_override.has_value();
    for (int m = 0; m < sc.M(); ++m) {
        const auto& players = channel_players[static_cast<std::size_t>(m)];
        if (players.empty()) continue;
        for (const int k : players)
            if (pw_table.feasible[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)].empty()) {
                res.infeasible = true;
                res.infeasible_reason = "AP " + std::to_string(k) +
                                        " has no feasible power level on channel " +
                                        std::to_string(m);
            }
        if (res.infeasible) break;
        auto sol = solve_power(pw_table, m, players, sc.L());
        j1p_total += sol.j1;
        if (need_bound) {
            if (sol.degenerate || !(sol.delta > 0.0))
                throw std::runtime_error("run_proposed: degenerate power gap; set t_p0 explicitly");
            t_p0 = std::max(t_p0, phase_length_bounds(sc.K(), sc.M(), sc.beta(), sc.L(), 1.0,
                                                      sol.delta, cfg.eta).t_p0);
        }
        res.power_oracle[static_cast<std::size_t>(m)] = std::move(sol);
    }
    res.power_j1_total = j1p_total;
    res.t_p0_used = t_p0;
    if (res.infeasible) return res;

    std::vector<std::vector<PowerAgent>> pw_agents(static_cast<std::size_t>(sc.M()));
    for (int m = 0; m < sc.M(); ++m)
        for (const int k : channel_players[static_cast<std::size_t>(m)])
            pw_agents[static_cast<std::size_t>(m)].emplace_back(PowerAgentConfig{
                m, pw_table.feasible[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)],
                static_cast<int>(channel_players[static_cast<std::size_t>(m)].size()),
                cfg.epsilon});

    // Allocation skeleton reused for the per-slot physical metrics.
    std::vector<ApAllocation> alloc(static_cast<std::size_t>(sc.K()));
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> slot_of(
        static_cast<std::size_t>(sc.M()));  // (AP index, position in its channel list)
    for (int k = 0; k < sc.K(); ++k) {
        alloc[static_cast<std::size_t>(k)].channels = res.final_channels[static_cast<std::size_t>(k)];
        alloc[static_cast<std::size_t>(k)].levels.resize(
            alloc[static_cast<std::size_t>(k)].channels.size());
    }
    for (int m = 0; m < sc.M(); ++m)
        for (const int k : channel_players[static_cast<std::size_t>(m)]) {
            const auto& chs = alloc[static_cast<std::size_t>(k)].channels;
            for (std::size_t c = 0; c < chs.size(); ++c)
                if (chs[c] == m)
                    slot_of[static_cast<std::size_t>(m)].push_back({static_cast<std::size_t>(k), c});
        }
    const auto set_level = [&](int m, std::size_t i, std::size_t level) {
        const auto [k, c] = slot_of[static_cast<std::size_t>(m)][i];
        alloc[k].levels[c] = level;
    };

    EpochParams pep{std::max<std::int64_t>(t_p0, 1), cfg.c1, cfg.c2, cfg.delta, cfg.explore_mode};
    detail::CurveRecorder pregret(res.power_regret, cfg.trace_stride, 0, 0.0);
    std::int64_t premaining = cfg.t_p;
    const std::int64_t metrics_base_t = cfg.t_c;  // global time offset for metrics

    const auto expected_power_reward = [&](int m, const std::vector<std::size_t>& levels) {
        const auto& players = channel_players[static_cast<std::size_t>(m)];
        std::vector<int> count(static_cast<std::size_t>(sc.L()), 0);
        for (const std::size_t l : levels) ++count[l];
        for (const int c : count)
            if (c > 1) return 0.0;
        double s = 0.0;
        for (std::size_t i = 0; i < players.size(); ++i)
            s += pw_table.mu[static_cast<std::size_t>(players[i])][static_cast<std::size_t>(m)]
                            [levels[i]];
        return s;
    };

    std::vector<std::vector<std::size_t>> levels_now(static_cast<std::size_t>(sc.M()));
    for (int m = 0; m < sc.M(); ++m)
        levels_now[static_cast<std::size_t>(m)].resize(
            channel_players[static_cast<std::size_t>(m)].size());

    const auto record_metrics = [&](std::int64_t stage_t) {
        if (stage_t % cfg.trace_stride == 0 || stage_t == 1)
            res.metrics.push_back({metrics_base_t + stage_t, physical_metrics(sc, alloc)});
    };

    for (int l = 1; premaining > 0; ++l) {
        const EpochSchedule sched = epoch_schedule(l, pep);

        for (auto& chan : pw_agents)
            for (auto& a : chan) a.begin_explore();
        const std::int64_t explore_slots = std::min(sched.explore_len, premaining);
        for (std::int64_t i = 0; i < explore_slots; ++i) {
            double slot_reward = 0.0;
            for (int m = 0; m < sc.M(); ++m) {
                auto& chan = pw_agents[static_cast<std::size_t>(m)];
                if (chan.empty()) continue;
                std::vector<std::size_t> arms(chan.size());
                for (std::size_t a = 0; a < chan.size(); ++a) {
                    arms[a] = chan[a].power_explore_step(rng);
                    levels_now[static_cast<std::size_t>(m)][a] = chan[a].level_of_arm(arms[a]);
                    set_level(m, a, levels_now[static_cast<std::size_t>(m)][a]);
                }
                const auto fb = step_power(sc, pw_table, m,
                                           channel_players[static_cast<std::size_t>(m)],
                                           levels_now[static_cast<std::size_t>(m)], rng);
                for (std::size_t a = 0; a < chan.size(); ++a)
                    chan[a].power_explore_update(arms[a], fb[a].reward.value_or(0.0));
                slot_reward += expected_power_reward(m, levels_now[static_cast<std::size_t>(m)]);
            }
            pregret.add_slot(j1p_total - slot_reward);
            record_metrics(pregret.t());
        }
        premaining -= explore_slots;
        for (auto& chan : pw_agents)
            for (auto& a : chan) a.finalize_exploration();
        if (premaining <= 0) break;

        for (auto& chan : pw_agents)
            for (auto& a : chan) a.begin_matching();
        const std::int64_t match_slots = std::min(sched.match_len, premaining);
        for (std::int64_t i = 0; i < match_slots; ++i) {
            double slot_reward = 0.0;
            for (int m = 0; m < sc.M(); ++m) {
                auto& chan = pw_agents[static_cast<std::size_t>(m)];
                if (chan.empty()) continue;
                std::vector<std::size_t> arms(chan.size());
                std::vector<int> count(static_cast<std::size_t>(sc.L()), 0);
                for (std::size_t a = 0; a < chan.size(); ++a) {
                    arms[a] = chan[a].matching_choose(rng);
                    levels_now[static_cast<std::size_t>(m)][a] = chan[a].level_of_arm(arms[a]);
                    set_level(m, a, levels_now[static_cast<std::size_t>(m)][a]);
                    ++count[levels_now[static_cast<std::size_t>(m)][a]];
                }
                bool collision = false;
                for (const int c : count) collision = collision || c > 1;
                for (std::size_t a = 0; a < chan.size(); ++a)
                    chan[a].matching_transition(arms[a], collision, rng);
                slot_reward += expected_power_reward(m, levels_now[static_cast<std::size_t>(m)]);
            }
            pregret.add_slot(j1p_total - slot_reward);
            record_metrics(pregret.t());
        }
        premaining -= match_slots;
        if (premaining <= 0) break;

        double exploit_reward = 0.0;
        bool all_optimal = true;
        for (int m = 0; m < sc.M(); ++m) {
            auto& chan = pw_agents[static_cast<std::size_t>(m)];
            if (chan.empty()) continue;
            for (std::size_t a = 0; a < chan.size(); ++a) {
                chan[a].begin_exploit();
                levels_now[static_cast<std::size_t>(m)][a] =
                    chan[a].level_of_arm(chan[a].power_exploit_action());
                set_level(m, a, levels_now[static_cast<std::size_t>(m)][a]);
            }
            const double r = expected_power_reward(m, levels_now[static_cast<std::size_t>(m)]);
            exploit_reward += r;
            all_optimal = all_optimal &&
                          r >= res.power_oracle[static_cast<std::size_t>(m)]->j1 - 1e-9;
        }
        res.power_exploit_optimal_by_epoch.push_back(all_optimal);
        const std::int64_t exploit_slots = std::min(sched.exploit_len, premaining);
        const std::int64_t t_before = pregret.t();
        pregret.add_constant(exploit_slots, j1p_total - exploit_reward);
        const PhysicalMetrics pm = physical_metrics(sc, alloc);
        for (std::int64_t t = (t_before / cfg.trace_stride + 1) * cfg.trace_stride;
             t <= t_before + exploit_slots; t += cfg.trace_stride)
            res.metrics.push_back({metrics_base_t + t, pm});
        premaining -= exploit_slots;
    }

    for (int k = 0; k < sc.K(); ++k)
        res.final_levels.push_back(alloc[static_cast<std::size_t>(k)].levels);
    return res;
}

// Two-Dimensional UCB baseline run: joint channel+level arms from slot one.
inline RunResult run_ucb(const RunConfig& cfg, std::uint64_t seed) {
    const std::uint64_t scen_seed = cfg.scenario_seed.value_or(seed);
    NetworkScenario sc = generate_scenario(cfg.scenario, scen_seed);
    ChannelRewardTable table = build_channel_rewards(sc);
    ChannelOracleSolution ch_oracle =
        solve_channel(table, sc.K(), sc.M(), [&] {
            std::vector<int> n;
            for (int k = 0; k < sc.K(); ++k) n.push_back(sc.n_k(k));
            return n;
        }());
    RunResult res{seed, sc, table, ch_oracle, {}, 0.0, 0, 0, {}, {}, {}, {}, {}, {}, {}, {},
                  false, "", 0};

    const PowerRewardTable pw_table = build_power_rewards(sc, sc.gains);
    Rng rng(seed ^ 0x9d3c1a2b4e5f6071ULL);

    std::vector<UcbAgent> agents;
    for (int k = 0; k < sc.K(); ++k)
        agents.emplace_back(sc.M(), sc.n_k(k), sc.L(), cfg.ucb_alpha);

    const std::int64_t horizon = cfg.t_c + cfg.t_p;
    std::vector<ApAllocation> alloc(static_cast<std::size_t>(sc.K()));
    std::vector<std::size_t> arms(static_cast<std::size_t>(sc.K()));
    for (std::int64_t t = 1; t <= horizon; ++t) {
        for (int k = 0; k < sc.K(); ++k) {
            arms[static_cast<std::size_t>(k)] = agents[static_cast<std::size_t>(k)].select(rng);
            alloc[static_cast<std::size_t>(k)] =
                agents[static_cast<std::size_t>(k)].arm_allocation(arms[static_cast<std::size_t>(k)]);
        }
        const auto rewards = ucb_joint_rewards(sc, table, pw_table, alloc, rng);
        for (int k = 0; k < sc.K(); ++k)
            agents[static_cast<std::size_t>(k)].update(arms[static_cast<std::size_t>(k)],
                                                       rewards[static_cast<std::size_t>(k)]);
        if (t % cfg.trace_stride == 0 || t == 1) {
            res.metrics.push_back({t, physical_metrics(sc, alloc)});
            std::vector<std::vector<int>> joint;
            for (const auto& a : alloc) joint.push_back(a.channels);
            res.trace.push_back({t, "ucb", 0, "ucb", detail::action_string(joint),
                                 expected_sum_reward(table, sc.M(), joint)});
        }
    }
    for (int k = 0; k < sc.K(); ++k) {
        res.final_channels.push_back(alloc[static_cast<std::size_t>(k)].channels);
        res.final_levels.push_back(alloc[static_cast<std::size_t>(k)].levels);
    }
    return res;
}

inline RunResult run(const RunConfig& cfg, std::uint64_t seed) {
    return cfg.method == "ucb" ? run_ucb(cfg, seed) : run_proposed(cfg, seed);
}

// Exploration-phase-only simulation used to study estimation accuracy: runs
// epochs of pure exploration until `target_samples` cumulative slots, and
// reports the worst-entry estimation error (on the normalized reward scale)
// at each epoch boundary.
struct EstimationPoint {
    int epoch = 0;
    std::int64_t cumulative_slots = 0;
    double max_abs_error = 0.0;  // max_{k,m,k_m} |mu_hat - mu|
    bool k_hat_correct = false;
};

inline std::vector<EstimationPoint> run_estimation_experiment(
    const NetworkScenario& sc, const ChannelRewardTable& table, std::int64_t t_c0,
    ExploreMode mode, std::int64_t target_samples, std::uint64_t seed) {
    Rng rng(seed ^ 0x1f2e3d4c5b6a7988ULL);
    std::vector<ChannelAgent> agents;
    for (int k = 0; k < sc.K(); ++k)
        agents.emplace_back(ChannelAgentConfig{sc.M(), sc.n_k(k), sc.beta(), 5e-5});
    std::vector<EstimationPoint> out;
    std::int64_t cum = 0;
    std::vector<std::vector<int>> joint(static_cast<std::size_t>(sc.K()));
    for (int l = 1; cum < target_samples; ++l) {
        const std::int64_t len =
            mode == ExploreMode::Constant ? t_c0 : std::max<std::int64_t>((t_c0 + l - 1) / l, 1);
        for (auto& a : agents) a.begin_explore();
        for (std::int64_t i = 0; i < len; ++i) {
            for (int k = 0; k < sc.K(); ++k)
                joint[static_cast<std::size_t>(k)] = {agents[static_cast<std::size_t>(k)].explore_step(rng)};
            const auto fb = step_channel(sc, table, joint, rng);
            for (int k = 0; k < sc.K(); ++k)
                agents[static_cast<std::size_t>(k)].explore_update(fb[static_cast<std::size_t>(k)][0]);
        }
        cum += len;
        for (auto& a : agents) a.finalize_exploration();
        EstimationPoint p;
        p.epoch = l;
        p.cumulative_slots = cum;
        p.k_hat_correct = true;
        for (int k = 0; k < sc.K(); ++k) {
            p.k_hat_correct = p.k_hat_correct && agents[static_cast<std::size_t>(k)].k_hat() == sc.K();
            for (int m = 0; m < sc.M(); ++m)
                for (int s = 1; s <= sc.beta(); ++s)
                    p.max_abs_error = std::max(
                        p.max_abs_error,
                        std::abs(agents[static_cast<std::size_t>(k)].mu_hat(m, s) -
                                 table.mean(k, m, s)));
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace sonmab

#endif
