#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>
#include <cmath>
#include "qfiso/densities.hpp"
#include "qfiso/kovaleva.hpp"

using namespace qfiso;

TEST_CASE("kovaleva_prob spot values") {
    CHECK(kovaleva_prob(InvariantCell{3, SquareClass{3, 1}, 1}, 3) == BigRational(237, 640));
    // rank 2, p-valuation classes are c-independent:
    // 1/4 * p/(p+1) * (p^2-1)/(p^3-1) at p=5 -> 5/124... times (p^{2k}-1)/(p^{2k+1}-1)
    BigRational expected = BigRational(1, 4) * BigRational(5, 6) * BigRational(24, 124);
    CHECK(kovaleva_prob(InvariantCell{2, SquareClass{5, 5}, 1}, 5) == expected);
    CHECK(kovaleva_prob(InvariantCell{2, SquareClass{5, 5}, -1}, 5) == expected);
    CHECK_THROWS_AS(kovaleva_prob(InvariantCell{3, SquareClass{2, 1}, 1}, 2),
                    std::invalid_argument);
}

TEST_CASE("cell probabilities sum to one") {
    for (long p : {3L, 5L, 7L})
        for (long n = 1; n <= 6; ++n) {
            BigRational total(0);
            for (const SquareClass& d : square_class_representatives(p))
                for (int c : {1, -1}) total += kovaleva_prob(InvariantCell{n, d, c}, p);
            CHECK(total == 1);
        }
}

TEST_CASE("rho via invariants cross-checks the closed form") {
    CHECK(rho_via_invariants(1, 3, 3) == rho_closed(1, 3).eval(3));
    CHECK(rho_via_invariants(2, 4, 5) == rho_closed(2, 4).eval(5));
    CHECK(rho_via_invariants(1, 6, 7) == 1);
    for (long p : {3L, 5L, 7L, 11L, 13L})
        for (long k = 1; k <= 3; ++k)
            for (long n = 2 * k; n <= 2 * k + 2; ++n) {
                INFO("p=", p, " k=", k, " n=", n);
                CHECK(rho_via_invariants(k, n, p) == rho_closed(k, n).eval(p));
            }
    CHECK_THROWS_AS(rho_via_invariants(1, 3, 2), std::invalid_argument);
}

TEST_CASE("invariant frequencies track the formulas") {
    const unsigned long long samples = 20000;
    omp_set_num_threads(3);
    InvariantFrequencyResult mc = invariant_frequency_mc(3, 3, 8, samples, 99);
    omp_set_num_threads(1);
    InvariantFrequencyResult serial = invariant_frequency_mc_serial(3, 3, 8, samples, 99);
    CHECK(mc.counts == serial.counts);
    CHECK(mc.singular == serial.singular);

    unsigned long long regular = samples - mc.singular;
    unsigned long long cell_total = 0;
    for (const auto& [cell, cnt] : mc.counts) cell_total += cnt;
    CHECK(cell_total == regular);

    InvariantCell cell{3, SquareClass{3, 1}, 1};
    double expected = BigRational(237, 640).get_d();
    double freq = static_cast<double>(mc.counts[cell]) / static_cast<double>(samples);
    double se = std::sqrt(expected * (1 - expected) / static_cast<double>(samples));
    CHECK(std::abs(freq - expected) < 5 * se);
}
