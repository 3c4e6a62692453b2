#include "sparesim/closed_form.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace sparesim;

namespace {

// Direct enumeration of fatal k-patterns across m groups of n disks, using
// only the threshold definition.
Rational enumerated_fatal_fraction(int m, int n, int limit, int k) {
    std::uint64_t fatal = 0;
    oracles::for_each_subset(m * n, k, [&](const std::vector<int>& subset) {
        if (!oracles::group_recoverable(n, limit, subset)) ++fatal;
    });
    return Rational(fatal, binomial(m * n, k));
}

}  // namespace

TEST_CASE("frozen RAID-6 fractions") {
    CHECK(raid6_fatal_fraction(2, 12, 3) == Rational(440, 2024));
    CHECK(raid6_fatal_fraction(2, 4, 4) == Rational(34, 70));
    // one group: every pattern of k >= 3 failures is fatal
    for (int k : {3, 4, 5}) CHECK(raid6_fatal_fraction(1, 8, k) == 1);
}

TEST_CASE("frozen triple-parity fractions") {
    CHECK(triple_parity_fatal_fraction(2, 5, 4) == Rational(10, 210));
    CHECK(triple_parity_fatal_fraction(3, 15, 4) ==
          Rational(3 * binomial(15, 4), binomial(45, 4)));
    for (int k : {4, 5, 6}) CHECK(triple_parity_fatal_fraction(1, 15, k) == 1);
}

TEST_CASE("closed forms equal exhaustive enumeration exactly") {
    for (int m = 1; m <= 3; ++m) {
        for (int n = 3; n <= 6; ++n) {
            for (int k = 3; k <= 5; ++k) {
                if (m * n < k) continue;
                CHECK(raid6_fatal_fraction(m, n, k) == enumerated_fatal_fraction(m, n, 2, k));
            }
        }
        for (int n = 4; n <= 6; ++n) {
            for (int k = 4; k <= 6; ++k) {
                if (m * n < k) continue;
                CHECK(triple_parity_fatal_fraction(m, n, k) ==
                      enumerated_fatal_fraction(m, n, 3, k));
            }
        }
    }
}

TEST_CASE("fatal fraction grows with the failure count") {
    for (int m : {2, 3}) {
        for (int n : {6, 9}) {
            CHECK(raid6_fatal_fraction(m, n, 3) <= raid6_fatal_fraction(m, n, 4));
            CHECK(raid6_fatal_fraction(m, n, 4) <= raid6_fatal_fraction(m, n, 5));
            CHECK(triple_parity_fatal_fraction(m, n, 4) <= triple_parity_fatal_fraction(m, n, 5));
            CHECK(triple_parity_fatal_fraction(m, n, 5) <= triple_parity_fatal_fraction(m, n, 6));
        }
    }
}

TEST_CASE("fractions stay within [0,1]") {
    for (int m = 1; m <= 4; ++m)
        for (int n = 3; n <= 12; ++n)
            for (int k = 3; k <= 5; ++k) {
                if (m * n < k) continue;
                Rational f = raid6_fatal_fraction(m, n, k);
                CHECK(f >= 0);
                CHECK(f <= 1);
            }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(raid6_fatal_fraction(2, 12, 6), std::invalid_argument);
    CHECK_THROWS_AS(raid6_fatal_fraction(2, 12, 2), std::invalid_argument);
    CHECK_THROWS_AS(raid6_fatal_fraction(0, 12, 3), std::invalid_argument);
    CHECK_THROWS_AS(raid6_fatal_fraction(2, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(raid6_fatal_fraction(1, 3, 4), std::invalid_argument);  // mn < k
    CHECK_THROWS_AS(triple_parity_fatal_fraction(2, 15, 3), std::invalid_argument);
    CHECK_THROWS_AS(triple_parity_fatal_fraction(2, 3, 4), std::invalid_argument);
    CHECK_THROWS_AS(profile_from_closed_form(2, 12, 4), std::invalid_argument);
}

TEST_CASE("closed-form profile matches the enumeration route") {
    SurvivalProfile one_group = profile_from_closed_form(1, 12, 2);
    CHECK(one_group.survivable[0] == 0);
    CHECK(one_group.survivable[1] == 0);
    CHECK(one_group.survivable[2] == 0);

    SurvivalProfile two_groups = profile_from_closed_form(2, 12, 2);
    CHECK(two_groups.survivable[0] == Rational(1) - Rational(440, 2024));

    SurvivalProfile tp = profile_from_closed_form(2, 15, 3);
    CHECK(tp.survivable[0] == Rational(1) - Rational(2 * binomial(15, 4), binomial(30, 4)));

    // the two routes (group-threshold enumeration vs closed form) agree
    for (auto [m, n, pe] : {std::tuple{2, 6, 2}, std::tuple{3, 5, 2}, std::tuple{2, 5, 3}}) {
        ArrayScheme scheme = pe == 2 ? ArrayScheme::raid6_groups(m, n)
                                     : ArrayScheme::triple_parity_groups(m, n);
        SurvivalProfile enumerated = survival_profile(scheme);
        SurvivalProfile closed = profile_from_closed_form(m, n, pe);
        for (int j = 0; j < 3; ++j) CHECK(enumerated.survivable[j] == closed.survivable[j]);
    }
}
