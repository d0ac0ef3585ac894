#ifndef SONMAB_ORACLE_HPP
#define SONMAB_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sonmab/combinatorics.hpp"
#include "sonmab/env.hpp"

namespace sonmab {

// Expected sum reward of a joint channel action (lists of channels per AP)
// under the true means.
inline double expected_sum_reward(const ChannelRewardTable& table, int num_channels,
                                  const std::vector<std::vector<int>>& joint_action) {
    std::vector<int> occ(static_cast<std::size_t>(num_channels), 0);
    for (const auto& chs : joint_action)
        for (const int m : chs) ++occ[static_cast<std::size_t>(m)];
    double s = 0.0;
    for (std::size_t k = 0; k < joint_action.size(); ++k)
        for (const int m : joint_action[k])
            s += table.mean(static_cast<int>(k), m, occ[static_cast<std::size_t>(m)]);
    return s;
}

struct ChannelOracleSolution {
    std::vector<std::size_t> best_action;  // per-AP index into k_subsets(M, N_k)
    std::vector<std::vector<int>> best_channels;
    std::vector<int> optimal_occupancy;  // k*_m
    double j1 = 0.0;
    double j2 = 0.0;   // largest sum strictly below j1
    double delta = 0.0;  // (J1 - J2) / (2 * sum N_k)
    bool degenerate = false;  // no profile scores strictly below j1
};

// Exhaustive search over the product action space. `profile_cap` bounds the
// number of enumerated profiles; exceeding it is a hard error, never an
// approximation.
inline ChannelOracleSolution solve_channel(const ChannelRewardTable& table, int K, int M,
                                           const std::vector<int>& plays_per_ap,
                                           std::uint64_t profile_cap = 10'000'000) {
    if (static_cast<int>(plays_per_ap.size()) != K)
        throw std::invalid_argument("solve_channel: plays size");
    std::vector<std::vector<std::vector<int>>> action_sets;
    std::vector<std::size_t> radices;
    std::uint64_t total = 1;
    int sum_n = 0;
    for (int k = 0; k < K; ++k) {
        action_sets.push_back(k_subsets(M, plays_per_ap[static_cast<std::size_t>(k)]));
        radices.push_back(action_sets.back().size());
        sum_n += plays_per_ap[static_cast<std::size_t>(k)];
        if (total > profile_cap / radices.back() + 1) total = profile_cap + 1;
        else total *= radices.back();
        if (total > profile_cap)
            throw std::runtime_error("solve_channel: enumeration cap exceeded");
    }

    ChannelOracleSolution sol;
    sol.j1 = -1.0;
    sol.j2 = -1.0;
    std::vector<int> occ(static_cast<std::size_t>(M), 0);
    for_each_tuple(radices, [&](const std::vector<std::size_t>& digits) {
        std::fill(occ.begin(), occ.end(), 0);
        for (std::size_t k = 0; k < digits.size(); ++k)
            for (const int m : action_sets[k][digits[k]]) ++occ[static_cast<std::size_t>(m)];
        double s = 0.0;
        for (std::size_t k = 0; k < digits.size(); ++k)
            for (const int m : action_sets[k][digits[k]])
                s += table.mean(static_cast<int>(k), m, occ[static_cast<std::size_t>(m)]);
        if (s > sol.j1) {
            sol.j2 = sol.j1;
            sol.j1 = s;
            sol.best_action = digits;
        } else if (s < sol.j1 && s > sol.j2) {
            sol.j2 = s;
        }
    });
    sol.degenerate = sol.j2 < 0.0;
    if (sol.degenerate) sol.j2 = sol.j1;
    sol.delta = (sol.j1 - sol.j2) / (2.0 * sum_n);
    sol.best_channels.clear();
    sol.optimal_occupancy.assign(static_cast<std::size_t>(M), 0);
    for (std::size_t k = 0; k < sol.best_action.size(); ++k) {
        sol.best_channels.push_back(action_sets[k][sol.best_action[k]]);
        for (const int m : sol.best_channels.back()) ++sol.optimal_occupancy[static_cast<std::size_t>(m)];
    }
    return sol;
}

struct PowerOracleSolution {
    std::vector<std::size_t> best_levels;  // per participant, level index
    double j1 = 0.0;
    double j2 = 0.0;
    double delta = 0.0;  // (J1P - J2P) / (2 * K_m)
    bool degenerate = false;
};

// Exhaustive search over level profiles on one channel; colliding profiles
// score zero.
inline PowerOracleSolution solve_power(const PowerRewardTable& table, int m,
                                       const std::vector<int>& players, int L,
                                       std::uint64_t profile_cap = 10'000'000) {
    std::vector<std::size_t> radices;
    std::uint64_t total = 1;
    for (const int k : players) {
        const auto& feas = table.feasible[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
        if (feas.empty()) throw std::runtime_error("solve_power: player with empty feasible set");
        radices.push_back(feas.size());
        total *= radices.back();
        if (total > profile_cap)
            throw std::runtime_error("solve_power: enumeration cap exceeded");
    }
    PowerOracleSolution sol;
    sol.j1 = -1.0;
    sol.j2 = -1.0;
    std::vector<int> level_count(static_cast<std::size_t>(L), 0);
    for_each_tuple(radices, [&](const std::vector<std::size_t>& digits) {
        std::fill(level_count.begin(), level_count.end(), 0);
        bool collision = false;
        double s = 0.0;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            const int k = players[i];
            const std::size_t l =
                table.feasible[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)][digits[i]];
            if (++level_count[l] > 1) collision = true;
            s += table.mu[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)][l];
        }
        if (collision) s = 0.0;
        if (s > sol.j1) {
            sol.j2 = sol.j1;
            sol.j1 = s;
            sol.best_levels.clear();
            for (std::size_t i = 0; i < digits.size(); ++i)
                sol.best_levels.push_back(
                    table.feasible[static_cast<std::size_t>(players[i])]
                                  [static_cast<std::size_t>(m)][digits[i]]);
        } else if (s < sol.j1 && s > sol.j2) {
            sol.j2 = s;
        }
    });
    sol.degenerate = sol.j2 < 0.0;
    if (sol.degenerate) sol.j2 = sol.j1;
    sol.delta = players.empty() ? 0.0
                                : (sol.j1 - sol.j2) / (2.0 * static_cast<double>(players.size()));
    return sol;
}

struct PhaseLengthBounds {
    std::int64_t t_mu_hat = 0;  // per-epoch channel exploration length
    std::int64_t t_p0 = 0;      // per-epoch power exploration length
    std::int64_t t_k_hat = 0;   // length ensuring K_hat = K w.p. >= 1 - eta
    std::int64_t t_c0 = 0;      // max(t_mu_hat, t_k_hat)
};

// Closed-form exploration lengths. Undefined for M = 1 or L = 1 (the
// exponents divide by M-1 and L-1).
inline PhaseLengthBounds phase_length_bounds(int K, int M, int beta, int L, double delta_m,
                                             double delta_p, double eta) {
    if (M <= 1 || L <= 1) throw std::invalid_argument("phase_length_bounds: M and L must exceed 1");
    if (!(delta_m > 0.0) || !(delta_p > 0.0))
        throw std::invalid_argument("phase_length_bounds: deltas must be positive");
    if (!(eta > 0.0)) throw std::invalid_argument("phase_length_bounds: eta must be positive");
    PhaseLengthBounds b;
    const double Md = M, Ld = L;
    b.t_mu_hat = static_cast<std::int64_t>(std::ceil(
        2.0 * Md * std::exp((K - 1.0) / (Md - 1.0)) /
        (delta_m * delta_m * std::pow(Md - 1.0, 1.0 - beta))));
    b.t_p0 = static_cast<std::int64_t>(std::ceil(
        2.0 * Ld * std::exp((beta - 1.0) / (Ld - 1.0)) / (delta_p * delta_p)));
    const double log_term = std::log(2.0 / eta);
    b.t_k_hat = static_cast<std::int64_t>(std::ceil(
        2.08 * std::max(log_term, 0.0) * Md * Md *
        std::exp(2.0 * (Md * beta - 1.0) / (Md - 1.0))));
    b.t_c0 = std::max(b.t_mu_hat, b.t_k_hat);
    return b;
}

// Cumulative exploration horizon T_h that makes every estimate accurate at
// once with probability >= 1 - gamma_e; reference value, not used by the
// per-epoch scheduling.
inline double cumulative_exploration_horizon(int K, int M, int beta, double delta_m,
                                             double gamma_e) {
    if (M <= 1) throw std::invalid_argument("cumulative_exploration_horizon: M must exceed 1");
    return 2.0 * M * std::exp((K - 1.0) / (M - 1.0)) /
           (delta_m * delta_m * std::pow(static_cast<double>(M) - 1.0, 1.0 - beta)) *
           std::log(4.0 * K * M * beta / gamma_e);
}

struct RegretBoundParams {
    int K = 4;
    int N = 2;
    std::int64_t t_c0 = 0;
    std::int64_t t_p0 = 0;
    double c1 = 3000.0;
    double c2 = 5000.0;
    double delta = 0.0;
};

struct RegretBounds {
    double r_c1 = 0.0;  // channel exploration
    double r_c2 = 0.0;  // channel matching
    double r_p1 = 0.0;  // power exploration
    double r_p2 = 0.0;  // power matching
    // r_c3 / r_p3 are finite constants with unknown value (A_3); they are
    // deliberately not numbers here.
    const char* r_c3 = "constant (unknown A_3)";
    const char* r_p3 = "constant (unknown A_3)";
};

inline RegretBounds regret_bound_curves(const RegretBoundParams& p, double t_c, double t_p) {
    RegretBounds b;
    const double log_c = std::log(t_c / p.c2 + 2.0);
    const double log_p = std::log(t_p / p.c2 + 2.0);
    b.r_c1 = p.K * p.N * static_cast<double>(p.t_c0) * log_c;
    b.r_c2 = p.K * p.N * p.c1 * std::pow(log_c, 2.0 + p.delta);
    b.r_p1 = p.K * static_cast<double>(p.t_p0) * log_p;
    b.r_p2 = p.K * p.c1 * std::pow(log_p, 2.0 + p.delta);
    return b;
}

}  // namespace sonmab

#endif
