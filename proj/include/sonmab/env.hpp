#ifndef SONMAB_ENV_HPP
#define SONMAB_ENV_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sonmab/noma.hpp"
#include "sonmab/rng.hpp"
#include "sonmab/scenario.hpp"

namespace sonmab {

// Mean channel rewards mu[k][m][k_m-1] for k_m in 1..beta; zero beyond beta.
struct ChannelRewardTable {
    std::vector<std::vector<std::vector<double>>> mu;
    double mu_max = 0.0;  // normalizer, max_{k,m} h_{k,m}
    int beta = 0;

    double mean(int k, int m, int occupancy) const {
        if (occupancy < 1) throw std::invalid_argument("mean: occupancy < 1");
        if (occupancy > beta) return 0.0;
        return mu[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)]
                 [static_cast<std::size_t>(occupancy - 1)];
    }
};

inline ChannelRewardTable build_channel_rewards(const NetworkScenario& sc) {
    ChannelRewardTable t;
    t.beta = sc.beta();
    t.mu_max = 0.0;
    for (const auto& row : sc.gains)
        for (const double h : row) t.mu_max = std::max(t.mu_max, h);
    t.mu.assign(static_cast<std::size_t>(sc.K()),
                std::vector<std::vector<double>>(
                    static_cast<std::size_t>(sc.M()),
                    std::vector<double>(static_cast<std::size_t>(sc.beta()), 0.0)));
    for (int k = 0; k < sc.K(); ++k)
        for (int m = 0; m < sc.M(); ++m) {
            const double base = sc.gains[static_cast<std::size_t>(k)]
                                        [static_cast<std::size_t>(m)] / t.mu_max;
            for (int s = 1; s <= sc.beta(); ++s)
                t.mu[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)]
                    [static_cast<std::size_t>(s - 1)] = base / s;
        }
    return t;
}

// Mean power-level rewards muP[k][m][l] (Eq. 13 trade-off) over feasible
// levels only; infeasible entries are 0 and absent from `feasible`.
struct PowerRewardTable {
    std::vector<std::vector<std::vector<double>>> mu;           // [k][m][l]
    std::vector<std::vector<std::vector<std::size_t>>> feasible;  // level indices
    std::vector<std::vector<std::vector<double>>> tx_power_w;   // p_{k,m,l}
    double inv_power_max = 0.0;  // max over feasible (k,m,l) of 1/p
};

// `gain_estimates[k][m]` are the gains the APs derived from exploration;
// pass sc.gains for the genie table the oracle scores against.
inline PowerRewardTable build_power_rewards(const NetworkScenario& sc,
                                            const std::vector<std::vector<double>>& gain_estimates) {
    const int K = sc.K(), M = sc.M(), L = sc.L();
    PowerRewardTable t;
    t.mu.assign(static_cast<std::size_t>(K),
                std::vector<std::vector<double>>(static_cast<std::size_t>(M),
                                                 std::vector<double>(static_cast<std::size_t>(L), 0.0)));
    t.tx_power_w = t.mu;
    t.feasible.assign(static_cast<std::size_t>(K),
                      std::vector<std::vector<std::size_t>>(static_cast<std::size_t>(M)));
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m) {
            const double h = gain_estimates[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
            if (!(h > 0.0)) continue;
            for (int l = 0; l < L; ++l) {
                const double p = transmit_power(sc.level_set.levels[static_cast<std::size_t>(l)], h);
                t.tx_power_w[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)]
                            [static_cast<std::size_t>(l)] = p;
                if (p <= sc.budgets_w[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)]) {
                    t.feasible[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)]
                        .push_back(static_cast<std::size_t>(l));
                    t.inv_power_max = std::max(t.inv_power_max, 1.0 / p);
                }
            }
        }
    const double gamma_max = sc.ladder.gamma_max();
    const double w1 = sc.config.w1, w2 = 1.0 - sc.config.w1;
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m)
            for (const std::size_t l : t.feasible[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)]) {
                const double p = t.tx_power_w[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)][l];
                t.mu[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)][l] =
                    w1 * sc.ladder.gammas[l] / gamma_max +
                    w2 * (1.0 / p) / t.inv_power_max;
            }
    return t;
}

// One AP's view of one chosen channel for one timeslot.
struct ChannelFeedback {
    int channel = 0;
    double reward = 0.0;
    int occupancy = 0;  // k_m, total APs on `channel` this slot
};

// Uniform[mu-w, mu+w] with w = min(mu, 1-mu, w_max); support stays in [0,1]
// and the mean is exact. mu = 0 maps to 0 deterministically.
inline double sample_reward(double mu, double w_max, Rng& rng) {
    if (mu <= 0.0) return 0.0;
    const double w = std::min({mu, 1.0 - mu, w_max});
    return rng.uniform(mu - w, mu + w);
}

// Joint channel step: every AP k names the channels it pulls; each gets a
// reward sample and the true occupancy of each of its channels.
inline std::vector<std::vector<ChannelFeedback>> step_channel(
    const NetworkScenario& sc, const ChannelRewardTable& table,
    const std::vector<std::vector<int>>& joint_action, Rng& rng) {
    const int K = sc.K(), M = sc.M();
    if (static_cast<int>(joint_action.size()) != K)
        throw std::invalid_argument("step_channel: wrong player count");
    std::vector<int> occupancy(static_cast<std::size_t>(M), 0);
    for (const auto& channels : joint_action)
        for (const int m : channels) {
            if (m < 0 || m >= M) throw std::invalid_argument("step_channel: bad channel");
            ++occupancy[static_cast<std::size_t>(m)];
        }
    std::vector<std::vector<ChannelFeedback>> out(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
        for (const int m : joint_action[static_cast<std::size_t>(k)]) {
            const int km = occupancy[static_cast<std::size_t>(m)];
            const double mu = table.mean(k, m, km);
            out[static_cast<std::size_t>(k)].push_back(
                {m, sample_reward(mu, sc.config.reward_halfwidth_max, rng), km});
        }
    return out;
}

// Power-level feedback: silence (nullopt) on collision, a reward sample
// otherwise. Agents decode silence as reward 0.
struct PowerFeedback {
    std::optional<double> reward;
};

// One power-game step on channel m. `choices[i]` is the level index picked by
// the i-th participant in `players`.
inline std::vector<PowerFeedback> step_power(const NetworkScenario& sc,
                                             const PowerRewardTable& table, int m,
                                             const std::vector<int>& players,
                                             const std::vector<std::size_t>& choices,
                                             Rng& rng) {
    if (players.size() != choices.size())
        throw std::invalid_argument("step_power: size mismatch");
    std::vector<int> level_count(static_cast<std::size_t>(sc.L()), 0);
    for (const std::size_t l : choices) ++level_count[l];
    bool collision = false;
    for (const int c : level_count) collision = collision || c > 1;
    std::vector<PowerFeedback> out(players.size());
    if (collision) return out;  // SIC failed; MBS stays silent
    for (std::size_t i = 0; i < players.size(); ++i) {
        const double mu = table.mu[static_cast<std::size_t>(players[i])]
                                  [static_cast<std::size_t>(m)][choices[i]];
        out[i].reward = sample_reward(mu, sc.config.reward_halfwidth_max, rng);
    }
    return out;
}

struct PhysicalMetrics {
    double sum_rate_bps = 0.0;
    double total_power_w = 0.0;
    double energy_efficiency = 0.0;  // bit/J; 0 when no power is spent
};

// Complete allocation of one AP: chosen channels plus the level used on each.
struct ApAllocation {
    std::vector<int> channels;
    std::vector<std::size_t> levels;  // aligned with channels
};

// Rate/power/EE of a joint allocation, computed with true gains. A channel is
// decodable iff its occupancy is within beta and all levels on it are
// distinct; transmit power is spent whether or not decoding succeeds.
// Transmissions over budget are suppressed (no power, no rate).
inline PhysicalMetrics physical_metrics(const NetworkScenario& sc,
                                        const std::vector<ApAllocation>& alloc) {
    const int M = sc.M(), L = sc.L();
    std::vector<int> occupancy(static_cast<std::size_t>(M), 0);
    std::vector<std::vector<int>> level_count(
        static_cast<std::size_t>(M), std::vector<int>(static_cast<std::size_t>(L), 0));
    for (std::size_t k = 0; k < alloc.size(); ++k) {
        if (alloc[k].channels.size() != alloc[k].levels.size())
            throw std::invalid_argument("physical_metrics: ragged allocation");
        for (std::size_t i = 0; i < alloc[k].channels.size(); ++i) {
            const int m = alloc[k].channels[i];
            const double h = sc.gains[k][static_cast<std::size_t>(m)];
            const double p = transmit_power(
                sc.level_set.levels[alloc[k].levels[i]], h);
            if (p > sc.budgets_w[k][static_cast<std::size_t>(m)]) continue;
            ++occupancy[static_cast<std::size_t>(m)];
            ++level_count[static_cast<std::size_t>(m)][alloc[k].levels[i]];
        }
    }
    std::vector<bool> decodable(static_cast<std::size_t>(M), true);
    for (int m = 0; m < M; ++m) {
        if (occupancy[static_cast<std::size_t>(m)] > sc.beta())
            decodable[static_cast<std::size_t>(m)] = false;
        for (const int c : level_count[static_cast<std::size_t>(m)])
            if (c > 1) decodable[static_cast<std::size_t>(m)] = false;
    }
    PhysicalMetrics out;
    for (std::size_t k = 0; k < alloc.size(); ++k)
        for (std::size_t i = 0; i < alloc[k].channels.size(); ++i) {
            const int m = alloc[k].channels[i];
            const std::size_t l = alloc[k].levels[i];
            const double h = sc.gains[k][static_cast<std::size_t>(m)];
            const double p = transmit_power(sc.level_set.levels[l], h);
            if (p > sc.budgets_w[k][static_cast<std::size_t>(m)]) continue;
            out.total_power_w += p;
            if (decodable[static_cast<std::size_t>(m)])
                out.sum_rate_bps += rate_for_sinr(sc.ladder.gammas[l], sc.config.bandwidth_hz);
        }
    out.energy_efficiency =
        out.total_power_w > 0.0 ? out.sum_rate_bps / out.total_power_w : 0.0;
    return out;
}

}  // namespace sonmab

#endif
