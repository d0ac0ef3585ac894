#ifndef SONMAB_UCB_HPP
#define SONMAB_UCB_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sonmab/combinatorics.hpp"
#include "sonmab/env.hpp"

namespace sonmab {

// Two-Dimensional UCB baseline: each AP independently runs UCB1 over
// composite arms = channel N-subset x power-level tuple.
class UcbAgent {
  public:
    UcbAgent(int num_channels, int plays, int levels, double alpha = 2.0)
        : levels_(levels), plays_(plays), alpha_(alpha),
          subsets_(k_subsets(num_channels, plays)) {
        std::uint64_t tuples = 1;
        for (int i = 0; i < plays; ++i) tuples *= static_cast<std::uint64_t>(levels);
        num_arms_ = subsets_.size() * static_cast<std::size_t>(tuples);
        counts_.assign(num_arms_, 0);
        means_.assign(num_arms_, 0.0);
    }

    std::size_t num_arms() const { return num_arms_; }
    std::int64_t t() const { return t_; }

    ApAllocation arm_allocation(std::size_t arm) const {
        std::uint64_t tuples = num_arms_ / subsets_.size();
        const std::size_t subset = arm / tuples;
        std::uint64_t tuple = arm % tuples;
        ApAllocation a;
        a.channels = subsets_[subset];
        a.levels.assign(a.channels.size(), 0);
        for (std::size_t i = a.channels.size(); i-- > 0;) {
            a.levels[i] = static_cast<std::size_t>(tuple % static_cast<std::uint64_t>(levels_));
            tuple /= static_cast<std::uint64_t>(levels_);
        }
        return a;
    }

    // First sweep plays every arm once; then argmax of mean + sqrt(alpha
    // log(t) / n). Exact index ties are broken uniformly at random: with a
    // deterministic tie rule every agent leaves the all-collision sweep with
    // identical statistics and the whole population locks onto one arm,
    // colliding forever at zero rate.
    std::size_t select(Rng& rng) const {
        if (t_ < static_cast<std::int64_t>(num_arms_)) return static_cast<std::size_t>(t_);
        double best = -1.0;
        std::vector<std::size_t> args;
        const double log_t = std::log(static_cast<double>(t_));
        for (std::size_t a = 0; a < num_arms_; ++a) {
            const double idx = means_[a] + std::sqrt(alpha_ * log_t / static_cast<double>(counts_[a]));
            if (idx > best) {
                best = idx;
                args.assign(1, a);
            } else if (idx == best) {
                args.push_back(a);
            }
        }
        if (args.size() == 1) return args.front();
        return args[static_cast<std::size_t>(rng.next_below(args.size()))];
    }

    void update(std::size_t arm, double reward) {
        ++t_;
        ++counts_[arm];
        means_[arm] += (reward - means_[arm]) / static_cast<double>(counts_[arm]);
    }

    std::int64_t count(std::size_t arm) const { return counts_[arm]; }
    double mean(std::size_t arm) const { return means_[arm]; }

  private:
    int levels_;
    int plays_;
    double alpha_;
    std::vector<std::vector<int>> subsets_;
    std::size_t num_arms_ = 0;
    std::vector<std::int64_t> counts_;
    std::vector<double> means_;
    std::int64_t t_ = 0;
};

// Reward signal for the baseline: per chosen channel, the sampled channel
// reward gated by decodability, scaled by a sampled power-level reward.
// Physical metrics are computed by physical_metrics() on the same
// decodability rule, so the Fig.-2 comparison axis is method-agnostic.
inline std::vector<double> ucb_joint_rewards(const NetworkScenario& sc,
                                             const ChannelRewardTable& ch_table,
                                             const PowerRewardTable& pw_table,
                                             const std::vector<ApAllocation>& alloc,
                                             Rng& rng) {
    const int M = sc.M(), L = sc.L();
    std::vector<int> occupancy(static_cast<std::size_t>(M), 0);
    std::vector<std::vector<int>> level_count(
        static_cast<std::size_t>(M), std::vector<int>(static_cast<std::size_t>(L), 0));
    for (const auto& a : alloc)
        for (std::size_t i = 0; i < a.channels.size(); ++i) {
            ++occupancy[static_cast<std::size_t>(a.channels[i])];
            ++level_count[static_cast<std::size_t>(a.channels[i])][a.levels[i]];
        }
    std::vector<bool> decodable(static_cast<std::size_t>(M), true);
    for (int m = 0; m < M; ++m) {
        if (occupancy[static_cast<std::size_t>(m)] > sc.beta())
            decodable[static_cast<std::size_t>(m)] = false;
        for (const int c : level_count[static_cast<std::size_t>(m)])
            if (c > 1) decodable[static_cast<std::size_t>(m)] = false;
    }
    std::vector<double> rewards(alloc.size(), 0.0);
    for (std::size_t k = 0; k < alloc.size(); ++k)
        for (std::size_t i = 0; i < alloc[k].channels.size(); ++i) {
            const int m = alloc[k].channels[i];
            const std::size_t l = alloc[k].levels[i];
            const int km = occupancy[static_cast<std::size_t>(m)];
            const double x = sample_reward(ch_table.mean(static_cast<int>(k), m, km),
                                           sc.config.reward_halfwidth_max, rng);
            const double y = sample_reward(
                pw_table.mu[k][static_cast<std::size_t>(m)][l],
                sc.config.reward_halfwidth_max, rng);
            if (decodable[static_cast<std::size_t>(m)]) rewards[k] += x * y;
        }
    return rewards;
}

}  // namespace sonmab

#endif
