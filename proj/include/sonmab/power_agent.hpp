#ifndef SONMAB_POWER_AGENT_HPP
#define SONMAB_POWER_AGENT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sonmab/channel_agent.hpp"  // Phase, Mood, ExploreMode
#include "sonmab/rng.hpp"

namespace sonmab {

struct PowerAgentConfig {
    int channel = 0;                     // m this game runs on
    std::vector<std::size_t> feasible;   // level indices the AP can afford
    int occupants = 1;                   // K_m, learned at channel-stage handoff
    double epsilon = 5e-5;
};

// Per-channel power-level game agent: the simplified three-phase dynamics
// over arms = feasible power levels, single play, zero reward on collision.
class PowerAgent {
  public:
    explicit PowerAgent(const PowerAgentConfig& cfg) : cfg_(cfg) {
        sums_.assign(cfg_.feasible.size(), 0.0);
        counts_.assign(cfg_.feasible.size(), 0);
        mu_hat_.assign(cfg_.feasible.size(), 0.0);
        f_counter_.assign(cfg_.feasible.size(), 0);
    }

    bool can_participate() const { return !cfg_.feasible.empty(); }
    const std::vector<std::size_t>& feasible() const { return cfg_.feasible; }
    Phase phase() const { return phase_; }
    Mood mood() const { return mood_; }
    double mu_hat(std::size_t arm) const { return mu_hat_[arm]; }

    void begin_explore() { phase_ = Phase::Explore; }
    void begin_matching() {
        phase_ = Phase::Matching;
        std::fill(f_counter_.begin(), f_counter_.end(), 0);
    }
    void begin_exploit() { phase_ = Phase::Exploit; }

    // Arm index into feasible(); uniform during exploration.
    std::size_t power_explore_step(Rng& rng) {
        if (phase_ != Phase::Explore) throw std::logic_error("power_explore_step: wrong phase");
        if (cfg_.feasible.empty()) throw std::logic_error("power_explore_step: empty arm set");
        return rng.next_below(cfg_.feasible.size());
    }

    // `reward` is the sampled reward, or 0 when the MBS stayed silent.
    void power_explore_update(std::size_t arm, double reward) {
        if (phase_ != Phase::Explore) throw std::logic_error("power_explore_update: wrong phase");
        sums_[arm] += reward;
        ++counts_[arm];
    }

    void finalize_exploration() {
        for (std::size_t a = 0; a < mu_hat_.size(); ++a)
            if (counts_[a] > 0) mu_hat_[a] = sums_[a] / static_cast<double>(counts_[a]);
    }

    double u_max() const {
        double m = 0.0;
        for (const double v : mu_hat_) m = std::max(m, v);
        return m;
    }

    std::int64_t f_count(std::size_t arm) const { return f_counter_[arm]; }

    std::size_t matching_choose(Rng& rng) {
        if (phase_ != Phase::Matching) throw std::logic_error("matching_choose: wrong phase");
        const std::size_t n = cfg_.feasible.size();
        if (mood_ == Mood::Discontent || n == 1) return rng.next_below(n);
        const double experiment_prob =
            std::pow(cfg_.epsilon, static_cast<double>(cfg_.occupants));
        if (rng.next_double() >= experiment_prob) return baseline_arm_;
        std::size_t pick = rng.next_below(n - 1);
        if (pick >= baseline_arm_) ++pick;
        return pick;
    }

    // Utility is mu_hat on success and 0 on collision (silence).
    Mood matching_transition(std::size_t arm, bool collided, Rng& rng) {
        if (phase_ != Phase::Matching) throw std::logic_error("matching_transition: wrong phase");
        const double u = collided ? 0.0 : mu_hat_[arm];
        if (u == 0.0) {
            mood_ = Mood::Discontent;
            return mood_;
        }
        if (mood_ == Mood::Content && arm == baseline_arm_ && u == baseline_util_) {
            ++f_counter_[arm];
            return mood_;
        }
        const double exponent = std::max(u_max() - u, 0.0);
        if (rng.next_double() < std::pow(cfg_.epsilon, exponent)) {
            mood_ = Mood::Content;
            baseline_arm_ = arm;
            baseline_util_ = u;
            ++f_counter_[arm];
        } else {
            mood_ = Mood::Discontent;
        }
        return mood_;
    }

    // Lowest arm index wins ties, i.e. the higher power level.
    std::size_t power_exploit_action() const {
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
        double best_mu = -1.0;
        for (std::size_t a = 0; a < mu_hat_.size(); ++a)
            if (mu_hat_[a] > best_mu) {
                best_mu = mu_hat_[a];
                arg = a;
            }
        return arg;
    }

    std::size_t level_of_arm(std::size_t arm) const { return cfg_.feasible[arm]; }

  private:
    PowerAgentConfig cfg_;
    Phase phase_ = Phase::Idle;
    std::vector<double> sums_;
    std::vector<std::int64_t> counts_;
    std::vector<double> mu_hat_;
    Mood mood_ = Mood::Discontent;
    std::size_t baseline_arm_ = 0;
    double baseline_util_ = 0.0;
    std::vector<std::int64_t> f_counter_;
};

}  // namespace sonmab

#endif
