#ifndef SONMAB_CHANNEL_AGENT_HPP
#define SONMAB_CHANNEL_AGENT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "sonmab/combinatorics.hpp"
#include "sonmab/env.hpp"
#include "sonmab/rng.hpp"

namespace sonmab {

enum class ExploreMode { Constant, Decreasing };
enum class Mood { Content, Discontent };
enum class Phase { Idle, Explore, Matching, Exploit };

struct EpochParams {
    std::int64_t explore_len_base = 0;  // T_C^0 (or T_P^0)
    double c1 = 3000.0;
    std::int64_t c2 = 5000;
    double delta = 0.0;
    ExploreMode explore_mode = ExploreMode::Constant;
};

struct EpochSchedule {
    std::int64_t explore_len = 0;
    std::int64_t match_len = 0;
    std::int64_t exploit_len = 0;
    bool exploit_saturated = false;
};

// Phase lengths of epoch l >= 1: exploration is constant (or divided by the
// epoch index), matching grows as c1*l^(1+delta), exploitation doubles.
inline EpochSchedule epoch_schedule(int l, const EpochParams& p) {
    if (l < 1) throw std::invalid_argument("epoch_schedule: l < 1");
    if (p.explore_len_base < 1 || p.c1 <= 0.0 || p.c2 < 1)
        throw std::invalid_argument("epoch_schedule: non-positive constants");
    EpochSchedule s;
    s.explore_len = p.explore_mode == ExploreMode::Constant
                        ? p.explore_len_base
                        : (p.explore_len_base + l - 1) / l;
    s.match_len = static_cast<std::int64_t>(
        std::ceil(p.c1 * std::pow(static_cast<double>(l), 1.0 + p.delta)));
    if (l >= 62 || p.c2 > (std::int64_t{1} << 62) / (std::int64_t{1} << l)) {
        s.exploit_len = std::numeric_limits<std::int64_t>::max();
        s.exploit_saturated = true;
    } else {
        s.exploit_len = p.c2 * (std::int64_t{1} << l);
    }
    return s;
}

struct ChannelAgentConfig {
    int num_channels = 4;  // M
    int plays = 2;         // N
    int beta = 2;
    double epsilon = 5e-5;
};

// One AP's private channel-stage state: reward statistics accumulated over
// all exploration phases, the mood machine of the matching dynamics, and the
// per-epoch content counters the exploitation phase reads.
class ChannelAgent {
  public:
    explicit ChannelAgent(const ChannelAgentConfig& cfg)
        : cfg_(cfg), actions_(k_subsets(cfg.num_channels, cfg.plays)) {
        const std::size_t M = static_cast<std::size_t>(cfg.num_channels);
        const std::size_t B = static_cast<std::size_t>(cfg.beta);
        sums_.assign(M, std::vector<double>(B, 0.0));
        counts_.assign(M, std::vector<std::int64_t>(B, 0));
        mu_hat_.assign(M, std::vector<double>(B, 0.0));
        f_counter_.assign(actions_.size(), 0);
    }

    const std::vector<std::vector<int>>& actions() const { return actions_; }
    Phase phase() const { return phase_; }
    Mood mood() const { return mood_; }
    int k_hat() const { return k_hat_; }
    double mu_hat(int m, int occupancy) const {
        return mu_hat_[static_cast<std::size_t>(m)][static_cast<std::size_t>(occupancy - 1)];
    }
    std::int64_t clamp_warnings() const { return clamp_warnings_; }

    void begin_explore() { phase_ = Phase::Explore; }
    void begin_matching() {
        phase_ = Phase::Matching;
        std::fill(f_counter_.begin(), f_counter_.end(), 0);
    }
    void begin_exploit() { phase_ = Phase::Exploit; }

    // Exploration pulls a single channel uniformly even when N > 1.
    int explore_step(Rng& rng) {
        if (phase_ != Phase::Explore) throw std::logic_error("explore_step: wrong phase");
        return static_cast<int>(rng.next_below(static_cast<std::size_t>(cfg_.num_channels)));
    }

    void explore_update(const ChannelFeedback& fb) {
        if (phase_ != Phase::Explore) throw std::logic_error("explore_update: wrong phase");
        ++explored_slots_;
        if (fb.occupancy > 1) ++collision_slots_;
        if (fb.occupancy >= 1 && fb.occupancy <= cfg_.beta) {
            sums_[static_cast<std::size_t>(fb.channel)][static_cast<std::size_t>(fb.occupancy - 1)] +=
                fb.reward;
            ++counts_[static_cast<std::size_t>(fb.channel)][static_cast<std::size_t>(fb.occupancy - 1)];
        }
    }

    // Refreshes mu_hat from the cumulative sums and re-estimates K from the
    // cumulative collision fraction.
    void finalize_exploration() {
        for (std::size_t m = 0; m < mu_hat_.size(); ++m)
            for (std::size_t s = 0; s < mu_hat_[m].size(); ++s)
                if (counts_[m][s] > 0) mu_hat_[m][s] = sums_[m][s] / static_cast<double>(counts_[m][s]);
        const double T = static_cast<double>(explored_slots_);
        const double b = static_cast<double>(collision_slots_);
        const int k_cap = cfg_.beta * cfg_.num_channels;
        if (explored_slots_ == 0 || collision_slots_ == 0) {
            k_hat_ = explored_slots_ == 0 ? k_hat_ : 1;
        } else if (collision_slots_ == explored_slots_ || cfg_.num_channels == 1) {
            k_hat_ = k_cap;
        } else {
            const double est = std::log((T - b) / T) /
                                   std::log(1.0 - 1.0 / cfg_.num_channels) + 1.0;
            k_hat_ = std::min(static_cast<int>(std::lround(est)), k_cap);
            k_hat_ = std::max(k_hat_, 1);
        }
    }

    // Highest sum reward the AP believes achievable, evaluated at the
    // occupancy a uniform spread of the K_hat estimated APs would produce.
    // Keeps the acceptance exponent u_max - sum(u) near zero at equilibrium.
    double u_max() const {
        const int k_bar = typical_occupancy();
        std::vector<double> best;
        for (std::size_t m = 0; m < mu_hat_.size(); ++m)
            best.push_back(mu_hat_[m][static_cast<std::size_t>(k_bar - 1)]);
        std::sort(best.begin(), best.end(), std::greater<>());
        double s = 0.0;
        for (int i = 0; i < cfg_.plays; ++i) s += best[static_cast<std::size_t>(i)];
        return s;
    }

    // Eq. (16): utilities are the estimated means at the observed occupancy.
    std::vector<double> utilities_from_feedback(const std::vector<ChannelFeedback>& fbs) const {
        std::vector<double> u;
        for (const auto& fb : fbs)
            u.push_back(fb.occupancy > cfg_.beta
                            ? 0.0
                            : mu_hat_[static_cast<std::size_t>(fb.channel)]
                                     [static_cast<std::size_t>(fb.occupancy - 1)]);
        return u;
    }

    // Content: baseline w.p. 1-eps^c, any other action w.p. eps^c/(|A|-1).
    // Discontent: uniform.
    std::size_t matching_choose(Rng& rng) {
        if (phase_ != Phase::Matching) throw std::logic_error("matching_choose: wrong phase");
        const std::size_t n_actions = actions_.size();
        if (mood_ == Mood::Discontent || n_actions == 1) return rng.next_below(n_actions);
        const double experiment_prob = std::pow(cfg_.epsilon, experiment_exponent());
        if (rng.next_double() >= experiment_prob) return baseline_action_;
        std::size_t pick = rng.next_below(n_actions - 1);
        if (pick >= baseline_action_) ++pick;
        return pick;
    }

    // Mood update after playing `action` and deriving `utilities` from own
    // feedback. Returns the resulting mood.
    Mood matching_transition(std::size_t action, const std::vector<double>& utilities, Rng& rng) {
        if (phase_ != Phase::Matching) throw std::logic_error("matching_transition: wrong phase");
        bool any_zero = false;
        double sum_u = 0.0;
        for (const double u : utilities) {
            any_zero = any_zero || u == 0.0;
            sum_u += u;
        }
        if (any_zero) {
            mood_ = Mood::Discontent;
            return mood_;
        }
        if (mood_ == Mood::Content && action == baseline_action_ && utilities == baseline_util_) {
            ++f_counter_[action];
            return mood_;
        }
        double exponent = u_max() - sum_u;
        if (exponent < 0.0) {  // estimation error pushed sum(u) past u_max
            ++clamp_warnings_;
            exponent = 0.0;
        }
        if (rng.next_double() < std::pow(cfg_.epsilon, exponent)) {
            mood_ = Mood::Content;
            baseline_action_ = action;
            baseline_util_ = utilities;
            ++f_counter_[action];
        } else {
            mood_ = Mood::Discontent;
        }
        return mood_;
    }

    // Most content-inducing action of the last matching phase; lowest index
    // (lexicographically smallest subset) wins ties. An all-zero counter
    // falls back to the N channels with the best sole-occupancy estimates.
    std::size_t exploit_action() const {
        std::int64_t best = 0;
        std::size_t arg = 0;
        bool any = false;
        for (std::size_t a = 0; a < f_counter_.size(); ++a) {
            if (f_counter_[a] > best) {
                best = f_counter_[a];
                arg = a;
            }
            any = any || f_counter_[a] > 0;
        }
        if (any) return arg;
        double best_sum = -1.0;
        for (std::size_t a = 0; a < actions_.size(); ++a) {
            double s = 0.0;
            for (const int m : actions_[a]) s += mu_hat_[static_cast<std::size_t>(m)][0];
            if (s > best_sum) {
                best_sum = s;
                arg = a;
            }
        }
        return arg;
    }

    // Effective c of Eq. (17); at least K*N with K taken from the estimate.
    double experiment_exponent() const {
        return static_cast<double>(std::max(k_hat_, 1) * cfg_.plays);
    }

    int typical_occupancy() const {
        const double spread = static_cast<double>(std::max(k_hat_, 1) * cfg_.plays) /
                              static_cast<double>(cfg_.num_channels);
        return std::clamp(static_cast<int>(std::lround(spread)), 1, cfg_.beta);
    }

    std::int64_t explored_slots() const { return explored_slots_; }
    std::int64_t collision_slots() const { return collision_slots_; }
    std::int64_t f_count(std::size_t a) const { return f_counter_[a]; }

    nlohmann::json snapshot() const {
        nlohmann::json j;
        j["mu_hat"] = mu_hat_;
        j["counts"] = counts_;
        j["explored_slots"] = explored_slots_;
        j["collision_slots"] = collision_slots_;
        j["k_hat"] = k_hat_;
        j["mood"] = mood_ == Mood::Content ? "content" : "discontent";
        j["baseline_action"] = baseline_action_;
        j["baseline_utilities"] = baseline_util_;
        j["f_counter"] = f_counter_;
        return j;
    }

  private:
    ChannelAgentConfig cfg_;
    std::vector<std::vector<int>> actions_;
    Phase phase_ = Phase::Idle;

    std::vector<std::vector<double>> sums_;          // W[m][k_m-1]
    std::vector<std::vector<std::int64_t>> counts_;  // co[m][k_m-1]
    std::vector<std::vector<double>> mu_hat_;
    std::int64_t explored_slots_ = 0;
    std::int64_t collision_slots_ = 0;  // b
    int k_hat_ = 1;

    Mood mood_ = Mood::Discontent;
    std::size_t baseline_action_ = 0;
    std::vector<double> baseline_util_;
    std::vector<std::int64_t> f_counter_;
    std::int64_t clamp_warnings_ = 0;
};

}  // namespace sonmab

#endif
