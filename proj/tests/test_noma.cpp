#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sonmab/noma.hpp"
#include "sonmab/rng.hpp"

using namespace sonmab;

TEST_CASE("dB conversions round-trip") {
    CHECK(db_to_linear(24.0) == doctest::Approx(251.18864315095797).epsilon(1e-12));
    CHECK(db_to_linear(4.77) == doctest::Approx(2.9991625189876507).epsilon(1e-12));
    CHECK(db_to_linear(0.0) == doctest::Approx(1.0));
    for (const double db : {-10.0, 0.0, 3.0, 24.0, 40.0})
        CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
}

TEST_CASE("rate for the two reference SINR targets") {
    const double bc = 2.5e6;
    // 24 dB over 2.5 MHz lands within 0.5% of 20 Mbit/s.
    const double r1 = rate_for_sinr(db_to_linear(24.0), bc);
    CHECK(std::abs(r1 - 20e6) / 20e6 < 0.005);
    CHECK(r1 == doctest::Approx(bc * std::log2(1.0 + db_to_linear(24.0))));
    // 4.77 dB lands within 0.5% of 5 Mbit/s.
    const double r2 = rate_for_sinr(db_to_linear(4.77), bc);
    CHECK(std::abs(r2 - 5e6) / 5e6 < 0.005);
    CHECK(rate_for_sinr(0.0, bc) == 0.0);
    CHECK_THROWS_AS(rate_for_sinr(-0.1, bc), std::domain_error);
    CHECK_THROWS_AS(rate_for_sinr(1.0, 0.0), std::domain_error);
}

TEST_CASE("ladder construction rejects non-descending targets") {
    CHECK_NOTHROW(SinrLadder({251.0, 3.0}));
    CHECK_THROWS_AS(SinrLadder({3.0, 251.0}), std::invalid_argument);
    CHECK_THROWS_AS(SinrLadder({3.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(SinrLadder({}), std::invalid_argument);
    CHECK_THROWS_AS(SinrLadder({3.0, 0.0}), std::invalid_argument);
    CHECK_NOTHROW(SinrLadder({3.0, 251.0}, /*allow_non_strict=*/true));
    const SinrLadder db = SinrLadder::from_db({24.0, 4.77});
    CHECK(db.gammas[0] == doctest::Approx(251.18864315095797));
    CHECK(db.gamma_max() == db.gammas[0]);
}

TEST_CASE("power levels satisfy the closed form and recover the targets") {
    const double noise = 1e-14;  // N0 * Bc for the reference configuration
    const SinrLadder ladder = SinrLadder::from_db({24.0, 4.77});
    const PowerLevelSet set = power_levels(ladder, noise);
    const double g1 = ladder.gammas[0], g2 = ladder.gammas[1];
    // Base level: v_L = Gamma_L * N0 * Bc.
    CHECK(set.levels[1] == doctest::Approx(g2 * noise).epsilon(1e-12));
    CHECK(set.levels[1] == doctest::Approx(2.9991625190e-14).epsilon(1e-9));
    // v_1 = Gamma_1 * N0 * Bc * (Gamma_2 + 1).
    CHECK(set.levels[0] == doctest::Approx(g1 * noise * (g2 + 1.0)).epsilon(1e-12));
    CHECK(set.levels[0] == doctest::Approx(1.0045442069e-11).epsilon(1e-6));

    // Decoding each level against the interference of the levels below it
    // recovers the SINR target exactly.
    for (std::size_t l = 0; l < set.size(); ++l)
        CHECK(set.sinr_of_level(l) == doctest::Approx(ladder.gammas[l]).epsilon(1e-9));

    // Three-level ladder, independent recursion check.
    const SinrLadder l3({10.0, 5.0, 2.0});
    const PowerLevelSet s3 = power_levels(l3, 2.0);
    CHECK(s3.levels[2] == doctest::Approx(2.0 * 2.0));
    CHECK(s3.levels[1] == doctest::Approx(5.0 * 2.0 * 3.0));
    CHECK(s3.levels[0] == doctest::Approx(10.0 * 2.0 * 6.0 * 3.0));
    for (std::size_t l = 0; l < 3; ++l)
        CHECK(s3.sinr_of_level(l) == doctest::Approx(l3.gammas[l]).epsilon(1e-9));
    CHECK(s3.interference_below(2) == 0.0);
    CHECK(s3.interference_below(0) == doctest::Approx(s3.levels[1] + s3.levels[2]));

    CHECK_THROWS_AS(power_levels(ladder, 0.0), std::invalid_argument);
}

TEST_CASE("SINR round-trip property on randomized ladders") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int L = 2 + static_cast<int>(rng.next_below(3));
        std::vector<double> g(static_cast<std::size_t>(L));
        double v = rng.uniform(0.5, 3.0);
        for (int l = L; l-- > 0;) {
            g[static_cast<std::size_t>(l)] = v;
            v *= rng.uniform(1.5, 30.0);
        }
        const PowerLevelSet set = power_levels(SinrLadder(g), rng.uniform(1e-15, 1.0));
        for (std::size_t l = 0; l < set.size(); ++l)
            CHECK(set.sinr_of_level(l) ==
                  doctest::Approx(g[l]).epsilon(1e-9));
    }
}

TEST_CASE("SIC stability") {
    SUBCASE("reference ladder is stable") {
        const auto rep = check_sic_stability(SinrLadder::from_db({24.0, 4.77}), 1e-14);
        CHECK(rep.stable);
        REQUIRE(rep.margins.size() == 1);
        CHECK(rep.margins[0].gamma_ok);
        CHECK(rep.margins[0].power_ok);
        // L = 2 condition: Gamma_1 > Gamma_2 / (Gamma_2 + 1).
        CHECK(rep.margins[0].gamma_rhs ==
              doctest::Approx(db_to_linear(4.77) / (db_to_linear(4.77) + 1.0)));
    }
    SUBCASE("boundary ladder fails") {
        const double g2 = 3.0;
        const SinrLadder boundary({g2 / (g2 + 1.0), g2}, /*allow_non_strict=*/true);
        CHECK_FALSE(check_sic_stability(boundary).stable);
    }
    SUBCASE("just above the boundary passes") {
        const double g2 = 3.0;
        const SinrLadder above({g2 / (g2 + 1.0) * 1.001, g2}, /*allow_non_strict=*/true);
        CHECK(check_sic_stability(above).stable);
    }
    SUBCASE("single level is vacuously stable") {
        CHECK(check_sic_stability(SinrLadder({3.0})).stable);
    }
}

TEST_CASE("transmit power and feasibility") {
    const double v1 = 1.0045442069e-11;
    const double h2 = std::pow(10.0, -9.05);  // squared amplitude gain
    CHECK(transmit_power(v1, std::sqrt(h2)) == doctest::Approx(v1 / h2).epsilon(1e-12));
    CHECK(transmit_power(v1, std::sqrt(h2)) == doctest::Approx(0.011272).epsilon(1e-3));
    CHECK(std::isinf(transmit_power(v1, 0.0)));
    CHECK_THROWS_AS(transmit_power(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(transmit_power(1.0, -1.0), std::invalid_argument);

    const PowerLevelSet set = power_levels(SinrLadder::from_db({24.0, 4.77}), 1e-14);
    const double h = std::sqrt(h2);
    const double p0 = transmit_power(set.levels[0], h);
    const double p1 = transmit_power(set.levels[1], h);
    CHECK(p1 < p0);
    // Budget between the two power needs admits only the weaker level.
    CHECK(feasible_power_levels(set, h, (p0 + p1) / 2.0) == std::vector<std::size_t>{1});
    CHECK(feasible_power_levels(set, h, p0 * 2.0) == std::vector<std::size_t>{0, 1});
    CHECK(feasible_power_levels(set, h, p1 / 2.0).empty());
    CHECK_THROWS_AS(feasible_power_levels(set, h, -1.0), std::invalid_argument);
}
