#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>
#include <random>
#include "oracles.hpp"
#include "qfiso/qp.hpp"

using namespace qfiso;
using namespace qfiso::testing;

namespace {

ZForm zf(long n, std::vector<long> c) {
    std::vector<BigInt> coeffs;
    for (long v : c) coeffs.emplace_back(v);
    return ZForm(n, std::move(coeffs));
}

BigRational random_nonzero_rational(std::mt19937_64& gen, long p) {
    std::uniform_int_distribution<long> unit(1, 200), val(0, 1), sign(0, 1);
    BigInt num(unit(gen));
    while (num % p == 0) num = unit(gen);
    BigInt den(unit(gen));
    while (den % p == 0) den = unit(gen);
    BigRational a = make_rational(num, den);
    if (val(gen)) a *= p;
    if (sign(gen)) a = -a;
    return a;
}

}  // namespace

TEST_CASE("square classes") {
    CHECK(square_class(9, 5) == SquareClass{5, 1});
    CHECK(square_class(3, 3) == SquareClass{3, 3});
    CHECK(square_class(-1, 2) == SquareClass{2, -1});
    CHECK(square_class(BigRational(18), 3) == SquareClass{3, 2});  // 18 = 2 * 3^2
    CHECK(square_class(BigRational(1, 2), 2) == SquareClass{2, 2});  // odd valuation
    CHECK(square_class(BigRational(7), 2) == SquareClass{2, -1});
    CHECK_THROWS_AS(square_class(BigRational(0), 3), std::invalid_argument);
    CHECK(square_class_representatives(3).size() == 4);
    CHECK(square_class_representatives(2).size() == 8);
    // representatives are pairwise inequivalent and self-consistent
    for (long p : {2L, 3L, 5L, 7L}) {
        auto reps = square_class_representatives(p);
        for (const auto& r : reps) CHECK(square_class(BigRational(r.rep), p) == r);
        for (size_t i = 0; i < reps.size(); ++i)
            for (size_t j = i + 1; j < reps.size(); ++j)
                CHECK(square_class(BigRational(reps[i].rep), p) !=
                      square_class(BigRational(reps[j].rep), p));
    }
}

TEST_CASE("hilbert symbol basics") {
    for (long p : {2L, 3L, 5L, 7L})
        for (long b : {1L, 2L, 3L, 5L, 7L, 11L}) CHECK(hilbert_symbol(1, b, p) == 1);
    CHECK(hilbert_symbol(2, 3, 3) == -1);
    CHECK(hilbert_symbol(-1, -1, 2) == -1);
    // symmetry
    std::mt19937_64 gen(11);
    for (long p : {2L, 3L, 5L}) {
        for (int t = 0; t < 100; ++t) {
            BigRational a = random_nonzero_rational(gen, p);
            BigRational b = random_nonzero_rational(gen, p);
            CHECK(hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p));
        }
    }
}

TEST_CASE("hilbert symbol is bimultiplicative") {
    std::mt19937_64 gen(17);
    for (long p : {2L, 3L, 5L, 7L}) {
        for (int t = 0; t < 500; ++t) {
            BigRational a = random_nonzero_rational(gen, p);
            BigRational b1 = random_nonzero_rational(gen, p);
            BigRational b2 = random_nonzero_rational(gen, p);
            CHECK(hilbert_symbol(a, b1 * b2, p) ==
                  hilbert_symbol(a, b1, p) * hilbert_symbol(a, b2, p));
        }
    }
}

TEST_CASE("hilbert symbol agrees with exhaustive primitive-zero search") {
    for (long p : {2L, 3L, 5L}) {
        auto reps = square_class_representatives(p);
        for (size_t i = 0; i < reps.size(); ++i)
            for (size_t j = i; j < reps.size(); ++j) {
                BigRational a(reps[i].rep), b(reps[j].rep);
                INFO("p=", p, " a=", reps[i].rep, " b=", reps[j].rep);
                CHECK(hilbert_symbol(a, b, p) == hilbert_symbol_by_search(a, b, p));
            }
    }
    // a few random small pairs per prime
    std::mt19937_64 gen(23);
    std::uniform_int_distribution<long> unit(1, 30), val(0, 1);
    for (long p : {2L, 3L, 5L}) {
        for (int t = 0; t < 12; ++t) {
            long ua = unit(gen), ub = unit(gen);
            if (ua % p == 0 || ub % p == 0) continue;
            BigRational a(ua * (val(gen) ? p : 1)), b(ub * (val(gen) ? p : 1));
            CHECK(hilbert_symbol(a, b, p) == hilbert_symbol_by_search(a, b, p));
        }
    }
}

TEST_CASE("diagonalize") {
    // x1 x2 -> (1, -1/4) up to squares, radical 0
    Diagonalization d1 = diagonalize(zf(2, {0, 1, 0}));
    CHECK(d1.radical_dim == 0);
    REQUIRE(d1.diag.size() == 2);
    CHECK(square_class(d1.diag[0] * d1.diag[1], 5) == square_class(-1, 5));

    Diagonalization d2 = diagonalize(zf(2, {0, 0, 0}));
    CHECK(d2.radical_dim == 2);
    CHECK(d2.diag.empty());

    // x1^2 + 2 x1 x2 + x2^2 = (x1 + x2)^2: rank 1
    Diagonalization d3 = diagonalize(zf(2, {1, 2, 1}));
    CHECK(d3.radical_dim == 1);
    REQUIRE(d3.diag.size() == 1);
    CHECK(d3.diag[0] > 0);
}

TEST_CASE("hasse invariant") {
    for (long p : {2L, 3L, 5L})
        CHECK(hasse_invariant({BigRational(1), BigRational(1), BigRational(1)}, p) == 1);
    // diag(1, -u, p, -up) at p=3, u=2
    CHECK(hasse_invariant({BigRational(1), BigRational(-2), BigRational(3), BigRational(-6)},
                          3) == -1);
    // square-class invariance
    std::vector<BigRational> d = {BigRational(3), BigRational(-5), BigRational(7)};
    std::vector<BigRational> d4 = {BigRational(12), BigRational(-5), BigRational(7)};
    for (long p : {2L, 3L, 5L, 7L}) CHECK(hasse_invariant(d, p) == hasse_invariant(d4, p));
}

TEST_CASE("invariants are diagonalization-path independent") {
    std::mt19937_64 gen(31);
    std::uniform_int_distribution<long> coef(-9, 9);
    for (int t = 0; t < 100; ++t) {
        long n = 2 + static_cast<long>(t % 3);
        std::vector<long> c(static_cast<size_t>(n * (n + 1) / 2));
        for (auto& x : c) x = coef(gen);
        ZForm q = zf(n, c);
        ZForm moved = substitute_z(q, random_unimodular(n, gen));
        for (long p : {2L, 3L, 5L}) {
            Diagonalization da = diagonalize(q), db = diagonalize(moved);
            REQUIRE(da.radical_dim == db.radical_dim);
            if (da.diag.empty()) continue;
            QpInvariants ia = invariants_from_diagonal(da.diag, p);
            QpInvariants ib = invariants_from_diagonal(db.diag, p);
            CHECK(ia.rank == ib.rank);
            CHECK(ia.det_class == ib.det_class);
            CHECK(ia.hasse == ib.hasse);
        }
    }
}

TEST_CASE("witt index") {
    for (long p : {2L, 3L, 5L}) {
        QpInvariants inv = invariants_from_diagonal(
            {BigRational(1), BigRational(-1), BigRational(1), BigRational(-1)}, p);
        CHECK(witt_index(inv, p) == 2);
    }
    std::vector<BigRational> ones = {BigRational(1), BigRational(1), BigRational(1),
                                     BigRational(1)};
    CHECK(witt_index(invariants_from_diagonal(ones, 2), 2) == 0);
    CHECK(witt_index(invariants_from_diagonal(ones, 3), 3) == 2);
}

TEST_CASE("anisotropic residues after peeling") {
    std::mt19937_64 gen(37);
    for (long p : {2L, 3L, 5L}) {
        for (int t = 0; t < 100; ++t) {
            long rank = 1 + static_cast<long>(t % 6);
            std::vector<BigRational> diag;
            for (long i = 0; i < rank; ++i) diag.push_back(random_nonzero_rational(gen, p));
            QpInvariants inv = invariants_from_diagonal(diag, p);
            long w = witt_index(inv, p);
            long residual = rank - 2 * w;
            CHECK(residual <= 4);
            // peel w planes and confirm the residue is anisotropic
            SquareClass d = inv.det_class;
            int c = inv.hasse;
            for (long s = 0; s < w; ++s) {
                d = square_class(BigRational(-d.rep), p);
                c *= hilbert_symbol(BigRational(-1), BigRational(d.rep), p);
            }
            QpInvariants res{residual, d, c};
            CHECK(witt_index(res, p) == 0);
        }
    }
}

TEST_CASE("k_isotropic examples") {
    ZForm planes = zf(4, {0, 1, 0, 0, 0, 0, 0, 1, 0, 0});  // x1x2 + x3x4
    for (long p : {2L, 3L, 5L}) {
        CHECK(k_isotropic(planes, p, 0));
        CHECK(k_isotropic(planes, p, 2));
        CHECK_FALSE(k_isotropic(planes, p, 3));
    }
    ZForm sum_sq = zf(4, {1, 0, 0, 0, 1, 0, 0, 1, 0, 1});  // x1^2+...+x4^2
    CHECK_FALSE(k_isotropic(sum_sq, 2, 1));
    CHECK(k_isotropic(sum_sq, 3, 1));
}

TEST_CASE("k_isotropic agrees with the subspace search oracle") {
    std::mt19937_64 gen(41);
    int corpus = 0;
    while (corpus < 200) {
        long p = (corpus % 2 == 0) ? 2 : 3;
        long n = 2 + static_cast<long>(gen() % 3);  // 2..4
        std::uniform_int_distribution<long> coef(0, static_cast<long>(p * p - 1));
        std::vector<long> c(static_cast<size_t>(n * (n + 1) / 2));
        for (auto& x : c) x = coef(gen);
        ZForm q = zf(n, c);
        for (long k = 1; k <= std::min<long>(2, n); ++k) {
            SubspaceSearchOracle oracle(q, p, 14);
            INFO("p=", p, " form=", q.to_literal(), " k=", k);
            CHECK(k_isotropic(q, p, k) == oracle.k_isotropic(k));
        }
        ++corpus;
    }
}

TEST_CASE("mc_rho is deterministic and worker-layout independent") {
    McRhoResult serial = mc_rho_serial(3, 1, 3, 6, 4000, 12345);
    for (int workers : {1, 2, 5}) {
        omp_set_num_threads(workers);
        McRhoResult par = mc_rho(3, 1, 3, 6, 4000, 12345);
        CHECK(par.hits == serial.hits);
        CHECK(par.estimate == serial.estimate);
    }
    omp_set_num_threads(1);
    McRhoResult c = mc_rho(3, 1, 3, 6, 4000, 54321);
    CHECK(c.hits != serial.hits);  // different seed, different stream
}

TEST_CASE("mc_rho matches the closed form within noise") {
    // rho_2(1,3) = 8/9
    McRhoResult r = mc_rho(2, 1, 3, 8, 20000, 2024);
    CHECK(std::abs(r.estimate - 8.0 / 9.0) < 5 * std::max(r.stderr_, 1e-4));
    // certain isotropy for n >= 2k+3, at any precision
    McRhoResult one = mc_rho(3, 2, 7, 4, 2000, 7);
    CHECK(one.estimate == 1.0);
    // n <= 2k-1: the density is 0; at finite precision the only hits would be
    // the p^{-N}-rare singular samples, absent at this depth and seed
    McRhoResult zero = mc_rho(5, 2, 3, 8, 10000, 7);
    CHECK(zero.estimate == 0.0);
}

TEST_CASE("zform literal round trip") {
    ZForm q = zf(2, {1, -4, 2});
    CHECK(q.to_literal() == "n=2; [1,-4,2]");
    CHECK(parse_zform_literal(q.to_literal()).coeffs() == q.coeffs());
    CHECK_THROWS_AS(parse_zform_literal("p=2; n=2; [1,2,3]"), std::invalid_argument);
}
