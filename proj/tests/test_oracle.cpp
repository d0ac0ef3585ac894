#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sonmab/combinatorics.hpp"
#include "sonmab/env.hpp"
#include "sonmab/oracle.hpp"
#include "sonmab/scenario.hpp"

using namespace sonmab;

namespace {

// K=2, M=2, N=1, beta=2 table with hand-set means.
ChannelRewardTable hand_table() {
    ChannelRewardTable t;
    t.beta = 2;
    t.mu_max = 1.0;
    // mu[k][m][occ-1]
    t.mu = {{{0.8, 0.4}, {0.6, 0.3}},   // AP 0
            {{0.5, 0.25}, {0.9, 0.45}}};  // AP 1
    return t;
}

NetworkScenario tiny_scenario() {
    ScenarioConfig cfg;
    cfg.num_aps = 2;
    cfg.num_channels = 2;
    cfg.plays = 1;
    cfg.beta = 2;
    cfg.budgets_w = {1.0, 1.0};
    cfg.shadowing_sigma_db = 0.0;
    NetworkScenario sc = generate_scenario(cfg, 1);
    sc.gains = {{2e-5, 1e-5}, {0.5e-5, 4e-5}};
    return sc;
}

}  // namespace

TEST_CASE("combinatorics primitives") {
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(10, 0) == 1);
    CHECK(binomial(10, 10) == 1);
    const auto s = k_subsets(4, 2);
    REQUIRE(s.size() == 6);
    CHECK(s.front() == std::vector<int>{0, 1});
    CHECK(s.back() == std::vector<int>{2, 3});
    // Lexicographic order throughout.
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i - 1] < s[i]);

    std::vector<std::vector<std::size_t>> tuples;
    for_each_tuple({2, 3}, [&](const std::vector<std::size_t>& d) { tuples.push_back(d); });
    REQUIRE(tuples.size() == 6);
    CHECK(tuples.front() == std::vector<std::size_t>{0, 0});
    CHECK(tuples.back() == std::vector<std::size_t>{1, 2});
}

TEST_CASE("expected sum reward matches a hand computation") {
    const ChannelRewardTable t = hand_table();
    // Both APs on channel 0: occupancy 2.
    CHECK(expected_sum_reward(t, 2, {{0}, {0}}) == doctest::Approx(0.4 + 0.25));
    // Split: sole occupancy each.
    CHECK(expected_sum_reward(t, 2, {{0}, {1}}) == doctest::Approx(0.8 + 0.9));
    CHECK(expected_sum_reward(t, 2, {{1}, {0}}) == doctest::Approx(0.6 + 0.5));
}

TEST_CASE("channel oracle finds the hand-checkable optimum") {
    const ChannelRewardTable t = hand_table();
    const auto sol = solve_channel(t, 2, 2, {1, 1});
    // Profiles: (0,0)=0.65, (0,1)=1.7, (1,0)=1.1, (1,1)=0.75.
    CHECK(sol.j1 == doctest::Approx(1.7));
    CHECK(sol.j2 == doctest::Approx(1.1));
    CHECK(sol.delta == doctest::Approx((1.7 - 1.1) / 4.0));
    CHECK_FALSE(sol.degenerate);
    CHECK(sol.best_channels == std::vector<std::vector<int>>{{0}, {1}});
    CHECK(sol.optimal_occupancy == std::vector<int>{1, 1});
}

TEST_CASE("channel oracle: perturbing a suboptimal entry below the gap keeps a*") {
    ChannelRewardTable t = hand_table();
    const auto base = solve_channel(t, 2, 2, {1, 1});
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        ChannelRewardTable p = t;
        // Perturb every entry by less than half the minimum profile gap.
        for (auto& k : p.mu)
            for (auto& m : k)
                for (auto& v : m) v += rng.uniform(-0.02, 0.02);
        const auto sol = solve_channel(p, 2, 2, {1, 1});
        CHECK(sol.best_channels == base.best_channels);
    }
}

TEST_CASE("channel oracle flags degenerate instances") {
    ChannelRewardTable t;
    t.beta = 2;
    t.mu_max = 1.0;
    // Identical means at every occupancy: all four profiles sum to 1.0.
    t.mu = {{{0.5, 0.5}, {0.5, 0.5}}, {{0.5, 0.5}, {0.5, 0.5}}};
    const auto sol = solve_channel(t, 2, 2, {1, 1});
    CHECK(sol.degenerate);
    CHECK(sol.delta == 0.0);
    CHECK(sol.j1 == sol.j2);
}

TEST_CASE("channel oracle respects the enumeration cap") {
    const ChannelRewardTable t = hand_table();
    CHECK_THROWS_AS(solve_channel(t, 2, 2, {1, 1}, 3), std::runtime_error);
}

TEST_CASE("power oracle on a genie table") {
    const NetworkScenario sc = tiny_scenario();
    const PowerRewardTable t = build_power_rewards(sc, sc.gains);
    const std::vector<int> players = {0, 1};
    const auto sol = solve_power(t, 0, players, sc.L());
    CHECK_FALSE(sol.degenerate);
    REQUIRE(sol.best_levels.size() == 2);
    // Non-colliding optimum: the two distinct levels ordered to maximize the
    // sum; verify against direct enumeration of both orderings.
    const double a = t.mu[0][0][0] + t.mu[1][0][1];
    const double b = t.mu[0][0][1] + t.mu[1][0][0];
    CHECK(sol.j1 == doctest::Approx(std::max(a, b)));
    CHECK(sol.j2 == doctest::Approx(std::min(a, b)));
    CHECK(sol.delta == doctest::Approx((sol.j1 - sol.j2) / 4.0));
    CHECK(sol.best_levels[0] != sol.best_levels[1]);

    // A lone player takes its best feasible level; the runner-up defines J2.
    const auto solo = solve_power(t, 1, {1}, sc.L());
    CHECK(solo.j1 == doctest::Approx(std::max(t.mu[1][1][0], t.mu[1][1][1])));
    CHECK(solo.j2 == doctest::Approx(std::min(t.mu[1][1][0], t.mu[1][1][1])));
}

TEST_CASE("power oracle perturbation invariance") {
    const NetworkScenario sc = tiny_scenario();
    PowerRewardTable t = build_power_rewards(sc, sc.gains);
    const auto base = solve_power(t, 0, {0, 1}, sc.L());
    const double safe = (base.j1 - base.j2) / 2.0 * 0.9;
    Rng rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        PowerRewardTable p = t;
        for (auto& k : p.mu)
            for (auto& m : k)
                for (auto& v : m)
                    if (v > 0.0) v += rng.uniform(-safe / 2.0, safe / 2.0);
        CHECK(solve_power(p, 0, {0, 1}, sc.L()).best_levels == base.best_levels);
    }
}

TEST_CASE("phase length bounds: frozen reference values") {
    const auto b = phase_length_bounds(4, 4, 2, 2, 0.5, 0.5, 0.05);
    CHECK(b.t_mu_hat == 261);
    CHECK(b.t_p0 == 44);
    CHECK(b.t_k_hat == 13056);
    CHECK(b.t_c0 == 13056);  // max of the two

    // Scaling sanity: quartering the gap multiplies the length by 16.
    const auto b2 = phase_length_bounds(4, 4, 2, 2, 0.125, 0.125, 0.05);
    CHECK(b2.t_mu_hat == doctest::Approx(16.0 * 260.9).epsilon(1e-2));
    CHECK(b2.t_p0 == doctest::Approx(16.0 * 43.5).epsilon(1e-2));

    CHECK_THROWS_AS(phase_length_bounds(4, 1, 2, 2, 0.5, 0.5, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(phase_length_bounds(4, 4, 2, 1, 0.5, 0.5, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(phase_length_bounds(4, 4, 2, 2, 0.0, 0.5, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(phase_length_bounds(4, 4, 2, 2, 0.5, 0.5, 0.0), std::invalid_argument);

    CHECK(cumulative_exploration_horizon(4, 4, 2, 0.5, 0.05) ==
          doctest::Approx(260.9553 * std::log(4.0 * 4 * 4 * 2 / 0.05)).epsilon(1e-3));
}

TEST_CASE("regret bound curves") {
    RegretBoundParams p;
    p.K = 4;
    p.N = 2;
    p.t_c0 = 1000;
    p.t_p0 = 100;
    p.c1 = 3000.0;
    p.c2 = 5000.0;
    p.delta = 0.0;
    const auto b = regret_bound_curves(p, 6e5, 4e5);
    const double log_c = std::log(6e5 / 5000.0 + 2.0);
    CHECK(b.r_c1 == doctest::Approx(8.0 * 1000.0 * log_c));
    CHECK(b.r_c2 == doctest::Approx(8.0 * 3000.0 * log_c * log_c));
    CHECK(std::string(b.r_c3) == "constant (unknown A_3)");
    CHECK(std::string(b.r_p3) == "constant (unknown A_3)");
    const double log_p = std::log(4e5 / 5000.0 + 2.0);
    CHECK(b.r_p1 == doctest::Approx(4.0 * 100.0 * log_p));
    CHECK(b.r_p2 == doctest::Approx(4.0 * 3000.0 * log_p * log_p));
}
