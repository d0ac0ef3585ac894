#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "sonmab/env.hpp"
#include "sonmab/scenario.hpp"
#include "sonmab/ucb.hpp"

using namespace sonmab;

namespace {

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

TEST_CASE("composite arm space has C(M,N) * L^N arms") {
    CHECK(UcbAgent(4, 2, 2).num_arms() == 24);  // the reference configuration
    CHECK(UcbAgent(2, 1, 2).num_arms() == 4);
    CHECK(UcbAgent(5, 3, 3).num_arms() == 10 * 27);
}

TEST_CASE("arm decoding covers every (subset, level-tuple) pair exactly once") {
    UcbAgent a(4, 2, 2);
    std::set<std::vector<int>> seen;
    for (std::size_t arm = 0; arm < a.num_arms(); ++arm) {
        const ApAllocation al = a.arm_allocation(arm);
        REQUIRE(al.channels.size() == 2);
        REQUIRE(al.levels.size() == 2);
        CHECK(al.channels[0] < al.channels[1]);
        std::vector<int> key = al.channels;
        for (const std::size_t l : al.levels) key.push_back(static_cast<int>(l));
        seen.insert(key);
    }
    CHECK(seen.size() == 24);
    // Level tuple is the base-L suffix, most significant first.
    CHECK(a.arm_allocation(0).levels == std::vector<std::size_t>{0, 0});
    CHECK(a.arm_allocation(1).levels == std::vector<std::size_t>{0, 1});
    CHECK(a.arm_allocation(2).levels == std::vector<std::size_t>{1, 0});
    CHECK(a.arm_allocation(3).channels == a.arm_allocation(0).channels);
    CHECK(a.arm_allocation(4).channels != a.arm_allocation(3).channels);
}

TEST_CASE("initial sweep plays every arm once, then picks by index") {
    Rng rng(7);
    UcbAgent a(2, 1, 2, /*alpha=*/2.0);
    REQUIRE(a.num_arms() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(a.select(rng) == i);
        a.update(i, i == 2 ? 1.0 : 0.1);
    }
    // After the sweep the empirically best arm leads.
    CHECK(a.select(rng) == 2);
    a.update(2, 1.0);
    CHECK(a.count(2) == 2);
    CHECK(a.mean(2) == doctest::Approx(1.0));

    // A starved arm's bonus eventually overtakes a mediocre leader.
    UcbAgent b(2, 1, 2, 2.0);
    for (std::size_t i = 0; i < 4; ++i) b.update(i, i == 0 ? 0.3 : 0.25);
    for (int t = 0; t < 2000; ++t) {
        const std::size_t arm = b.select(rng);
        b.update(arm, arm == 0 ? 0.3 : 0.25);
    }
    for (std::size_t i = 0; i < 4; ++i) CHECK(b.count(i) > 1);
}

TEST_CASE("UCB converges to the best arm on a deterministic bandit") {
    Rng rng(31);
    UcbAgent a(4, 2, 2, 2.0);
    // Arm means: arm 7 is best.
    std::vector<double> mu(a.num_arms(), 0.2);
    mu[7] = 0.8;
    for (int t = 0; t < 20000; ++t) {
        const std::size_t arm = a.select(rng);
        a.update(arm, mu[arm] + rng.uniform(-0.05, 0.05));
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < a.num_arms(); ++i)
        if (a.count(i) > a.count(best)) best = i;
    CHECK(best == 7);
    CHECK(a.count(7) > 18000);
}

TEST_CASE("exact index ties are broken uniformly, not by arm order") {
    // All-zero means and equal counts (the post-sweep state when every slot
    // collided) must not pin every agent to the same arm.
    Rng rng(5);
    UcbAgent a(2, 1, 2, 2.0);
    for (std::size_t i = 0; i < 4; ++i) {
        a.select(rng);
        a.update(i, 0.0);
    }
    std::vector<int> picks(4, 0);
    for (int t = 0; t < 4000; ++t) ++picks[a.select(rng)];
    for (const int n : picks) {
        CHECK(n > 800);
        CHECK(n < 1200);
    }
}

TEST_CASE("joint rewards: collision gating and support") {
    const NetworkScenario sc = tiny_scenario();
    const ChannelRewardTable ch = build_channel_rewards(sc);
    const PowerRewardTable pw = build_power_rewards(sc, sc.gains);
    Rng rng(32);

    SUBCASE("same channel, duplicate level: zero for both") {
        const std::vector<ApAllocation> alloc = {{{0}, {1}}, {{0}, {1}}};
        const auto r = ucb_joint_rewards(sc, ch, pw, alloc, rng);
        CHECK(r == std::vector<double>{0.0, 0.0});
    }
    SUBCASE("same channel, distinct levels: positive, bounded by the means") {
        const std::vector<ApAllocation> alloc = {{{0}, {0}}, {{0}, {1}}};
        for (int i = 0; i < 200; ++i) {
            const auto r = ucb_joint_rewards(sc, ch, pw, alloc, rng);
            CHECK(r[0] > 0.0);
            CHECK(r[0] <= (ch.mean(0, 0, 2) + 0.05) * (pw.mu[0][0][0] + 0.05));
            CHECK(r[1] > 0.0);
        }
    }
    SUBCASE("disjoint channels: independent sole-occupancy rewards") {
        const std::vector<ApAllocation> alloc = {{{0}, {1}}, {{1}, {1}}};
        double acc0 = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) acc0 += ucb_joint_rewards(sc, ch, pw, alloc, rng)[0];
        // E[x*y] = E[x]E[y] for independent samples.
        const double expect = ch.mean(0, 0, 1) * pw.mu[0][0][1];
        CHECK(acc0 / n == doctest::Approx(expect).epsilon(0.02));
    }
    SUBCASE("RNG stream is consumed even when non-decodable") {
        // Two colliding allocations then one clean one must give the same
        // clean-slot value as consuming the stream manually.
        Rng r1(99), r2(99);
        const std::vector<ApAllocation> bad = {{{0}, {1}}, {{0}, {1}}};
        const std::vector<ApAllocation> good = {{{0}, {0}}, {{1}, {1}}};
        ucb_joint_rewards(sc, ch, pw, bad, r1);
        const auto v1 = ucb_joint_rewards(sc, ch, pw, good, r1);
        // Manually consume the four samples of the bad slot.
        for (int i = 0; i < 4; ++i) r2.next_double();
        const auto v2 = ucb_joint_rewards(sc, ch, pw, good, r2);
        CHECK(v1[0] == doctest::Approx(v2[0]));
        CHECK(v1[1] == doctest::Approx(v2[1]));
    }
}
