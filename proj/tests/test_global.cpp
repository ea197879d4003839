#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>
#include <cmath>
#include <random>
#include "oracles.hpp"
#include "qfiso/densities.hpp"
#include "qfiso/global_density.hpp"

using namespace qfiso;

namespace {

// characteristic polynomial by Faddeev-LeVerrier, exact over Q
Polynomial charpoly(const std::vector<std::vector<BigRational>>& a) {
    const long n = static_cast<long>(a.size());
    std::vector<std::vector<BigRational>> m(static_cast<size_t>(n),
                                            std::vector<BigRational>(static_cast<size_t>(n)));
    std::vector<BigRational> c(static_cast<size_t>(n) + 1);
    c[static_cast<size_t>(n)] = 1;
    // m starts as A
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) m[i][j] = a[i][j];
    for (long k = 1; k <= n; ++k) {
        if (k > 1) {
            // m = A * (m_prev + c_{n-k+1} I)
            std::vector<std::vector<BigRational>> t(
                static_cast<size_t>(n), std::vector<BigRational>(static_cast<size_t>(n)));
            for (long i = 0; i < n; ++i) m[i][i] += c[static_cast<size_t>(n - k + 1)];
            for (long i = 0; i < n; ++i)
                for (long j = 0; j < n; ++j) {
                    BigRational acc(0);
                    for (long l = 0; l < n; ++l) acc += a[i][l] * m[l][j];
                    t[i][j] = acc;
                }
            m = std::move(t);
        }
        BigRational tr(0);
        for (long i = 0; i < n; ++i) tr += m[i][i];
        c[static_cast<size_t>(n - k)] = -tr / k;
    }
    return Polynomial(std::move(c));
}

Polynomial derivative(const Polynomial& f) {
    std::vector<BigRational> d;
    for (long i = 1; i <= f.degree(); ++i)
        d.push_back(f.coeff(static_cast<unsigned long>(i)) * i);
    return Polynomial(std::move(d));
}

int sign_at_infinity(const Polynomial& f, bool positive) {
    if (f.is_zero()) return 0;
    int s = sgn(f.leading());
    if (!positive && f.degree() % 2 == 1) s = -s;
    return s;
}

// Counts distinct real roots in (0, inf) and (-inf, 0) by Sturm chains;
// requires a squarefree polynomial with nonzero constant term.
std::pair<long, long> sturm_root_counts(const Polynomial& f) {
    std::vector<Polynomial> chain = {f, derivative(f)};
    while (!chain.back().is_zero()) {
        Polynomial q, r;
        Polynomial::divrem(chain[chain.size() - 2], chain.back(), q, r);
        chain.push_back(-r);
    }
    chain.pop_back();
    auto variations = [&](auto sign_of) {
        int last = 0;
        long v = 0;
        for (const Polynomial& g : chain) {
            int s = sign_of(g);
            if (s == 0) continue;
            if (last != 0 && s != last) ++v;
            last = s;
        }
        return v;
    };
    long v_minus = variations([&](const Polynomial& g) { return sign_at_infinity(g, false); });
    long v_zero = variations([&](const Polynomial& g) {
        BigRational c = g.eval(0);
        return sgn(c);
    });
    long v_plus = variations([&](const Polynomial& g) { return sign_at_infinity(g, true); });
    return {v_zero - v_plus, v_minus - v_zero};  // (positive roots, negative roots)
}

}  // namespace

TEST_CASE("euler product structure") {
    EulerProductResult zero = euler_product(2, 5, 1000);
    CHECK(zero.degenerate_zero);
    CHECK(zero.partial_product == 0);

    EulerProductResult one = euler_product(1, 5, 1000);
    CHECK_FALSE(one.degenerate_zero);
    CHECK(one.partial_product == 1);  // n >= 2k+3: every factor is 1

    EulerProductResult a = euler_product(1, 4, 200);
    EulerProductResult b = euler_product(1, 4, 2000);
    CHECK(b.partial_product < a.partial_product);
    // bracket from the smaller bound contains the refined value
    CHECK(b.partial_product >= a.partial_product * a.tail_lower_bound);
    CHECK(b.partial_product <= a.partial_product);
    CHECK(a.tail_lower_bound > 0);
    CHECK(a.tail_lower_bound < 1);
}

TEST_CASE("tail constant sweep: p^3 (1 - rho_p(k,2k+2)) <= 1/2") {
    const BigRational c_bound(1, 2);
    for (long k = 1; k <= 5; ++k) {
        RationalFunction rho = rho_closed(k, 2 * k + 2);
        for (unsigned long p : primes_up_to(500)) {
            BigRational defect = BigRational(1) - rho.eval(static_cast<long>(p));
            CHECK(defect * pow_int(static_cast<long>(p), 3) <= c_bound);
        }
        // 20 larger primes past the default bound
        long q = 10007;
        for (int found = 0; found < 20; ++q) {
            if (!is_prime(q)) continue;
            ++found;
            BigRational defect = BigRational(1) - rho.eval(q);
            CHECK(defect * pow_int(q, 3) <= c_bound);
        }
        // asymptotically the defect is 1/(4 p^3)
        auto tail = (RationalFunction(1) - rho).laurent_at_infinity(3);
        CHECK(tail[3] == BigRational(1, 4));
    }
}

TEST_CASE("decimal rounding") {
    CHECK(decimal_string(BigRational(1, 3), 8) == "0.33333333");
    CHECK(decimal_string(BigRational(2, 3), 4) == "0.6667");
    CHECK(decimal_string(BigRational(98743625, 100000000), 8) == "0.98743625");
    CHECK(decimal_string(BigRational(-1, 8), 2) == "-0.13");
    CHECK(decimal_string(BigRational(5), 3) == "5.000");
}

TEST_CASE("inertia: small exact cases") {
    using M = std::vector<std::vector<BigRational>>;
    M hyper = {{BigRational(1), BigRational(0)}, {BigRational(0), BigRational(-1)}};
    Inertia i1 = inertia_of_gram(hyper);
    CHECK(i1.pos == 1);
    CHECK(i1.neg == 1);
    CHECK(i1.zero == 0);

    M zero2 = {{BigRational(0), BigRational(0)}, {BigRational(0), BigRational(0)}};
    Inertia i2 = inertia_of_gram(zero2);
    CHECK(i2.zero == 2);

    // all-zero diagonal forces the off-diagonal pivot fix in the fallback
    M offdiag = {{BigRational(0), BigRational(1)}, {BigRational(1), BigRational(0)}};
    Inertia i3 = inertia_of_gram(offdiag);
    CHECK(i3.pos == 1);
    CHECK(i3.neg == 1);
}

TEST_CASE("fast inertia equals the rational reference") {
    std::mt19937_64 gen(2718);
    std::uniform_int_distribution<long> coef(-20, 20);
    for (int t = 0; t < 200; ++t) {
        long n = 2 + static_cast<long>(t % 5);
        std::vector<std::vector<BigRational>> g(static_cast<size_t>(n),
                                                std::vector<BigRational>(static_cast<size_t>(n)));
        for (long i = 0; i < n; ++i)
            for (long j = i; j < n; ++j) {
                g[i][j] = BigRational(coef(gen));
                g[j][i] = g[i][j];
            }
        Inertia fast = inertia_of_gram(g);
        Inertia ref = inertia_of_gram_reference(g);
        CHECK(fast.pos == ref.pos);
        CHECK(fast.neg == ref.neg);
        CHECK(fast.zero == ref.zero);
    }
}

TEST_CASE("inertia agrees with eigenvalue sign counts via Sturm chains") {
    std::mt19937_64 gen(314159);
    std::uniform_int_distribution<long> coef(-9, 9);
    int done = 0;
    while (done < 50) {
        long n = 2 + static_cast<long>(gen() % 4);  // 2..5
        std::vector<std::vector<BigRational>> g(static_cast<size_t>(n),
                                                std::vector<BigRational>(static_cast<size_t>(n)));
        for (long i = 0; i < n; ++i)
            for (long j = i; j < n; ++j) {
                g[i][j] = BigRational(coef(gen));
                g[j][i] = g[i][j];
            }
        Polynomial f = charpoly(g);
        long zero_mult = 0;
        while (f.coeff(static_cast<unsigned long>(zero_mult)) == 0) ++zero_mult;
        if (zero_mult > 0) {
            std::vector<BigRational> shifted(f.coeffs().begin() + zero_mult, f.coeffs().end());
            f = Polynomial(std::move(shifted));
        }
        if (Polynomial::gcd(f, derivative(f)).degree() > 0) continue;  // not squarefree
        auto [pos_roots, neg_roots] = sturm_root_counts(f);
        Inertia in = inertia_of_gram(g);
        CHECK(in.pos == pos_roots);
        CHECK(in.neg == neg_roots);
        CHECK(in.zero == zero_mult);
        ++done;
    }
}

TEST_CASE("real k-isotropy criterion with explicit subspace construction") {
    // definite form: not 1-isotropic
    CHECK_FALSE(real_k_isotropic(Inertia{2, 0, 0}, 1));
    CHECK(real_k_isotropic(Inertia{1, 1, 0}, 1));
    CHECK(real_k_isotropic(Inertia{0, 0, 3}, 3));

    std::mt19937_64 gen(1618);
    std::uniform_int_distribution<long> coef(1, 9);
    std::uniform_int_distribution<int> signd(0, 1);
    for (int t = 0; t < 100; ++t) {
        long n = 2 + static_cast<long>(gen() % 4);
        std::vector<double> diag(static_cast<size_t>(n));
        Inertia in;
        for (auto& d : diag) {
            d = static_cast<double>(coef(gen));
            if (signd(gen)) {
                d = -d;
                ++in.neg;
            } else {
                ++in.pos;
            }
        }
        long w = std::min(in.pos, in.neg);
        for (long k = 1; k <= w; ++k) {
            // pair positive entry i with negative entry j: the vector
            // sqrt(-d_j) e_i + sqrt(d_i) e_j is isotropic, and distinct pairs
            // are orthogonal, spanning a k-dimensional totally isotropic space
            std::vector<long> pos_idx, neg_idx;
            for (long i = 0; i < n; ++i)
                (diag[static_cast<size_t>(i)] > 0 ? pos_idx : neg_idx).push_back(i);
            for (long s = 0; s < k; ++s) {
                double di = diag[static_cast<size_t>(pos_idx[static_cast<size_t>(s)])];
                double dj = diag[static_cast<size_t>(neg_idx[static_cast<size_t>(s)])];
                double x = std::sqrt(-dj), y = std::sqrt(di);
                double q = di * x * x + dj * y * y;
                CHECK(std::abs(q) < 1e-9);
            }
            CHECK(real_k_isotropic(in, k));
        }
        CHECK_FALSE(real_k_isotropic(in, w + 1));  // no radical here
    }
}

TEST_CASE("rho_infinity_mc determinism and plausibility") {
    RhoInfinityResult b = rho_infinity_mc_serial(1, 4, 20000, 31415);
    for (int workers : {1, 4}) {
        omp_set_num_threads(workers);
        RhoInfinityResult a = rho_infinity_mc(1, 4, 20000, 31415);
        CHECK(a.hits == b.hits);
    }
    omp_set_num_threads(1);
    // the reference-scale value is about 0.9823
    CHECK(std::abs(b.estimate - 0.9823) < 0.01);
}

TEST_CASE("rho_global structure") {
    GlobalDensityResult zero = rho_global(2, 5, 100, 10, 1);
    CHECK(zero.exact_zero);
    CHECK(zero.estimate == 0.0);

    GlobalDensityResult g = rho_global(1, 5, 100, 5000, 2);
    CHECK(g.euler.partial_product == 1);  // n = 2k+3: local product is 1
    CHECK(g.estimate == doctest::Approx(g.real_place.estimate));

    // reference-scale value for (k,n) = (1,4) is about 0.9699
    GlobalDensityResult smoke = rho_global(1, 4, 2000, 40000, 3);
    CHECK(std::abs(smoke.estimate - 0.9699) < 0.005);
    CHECK(smoke.stat_halfwidth < 0.01);
    CHECK(smoke.tail_defect < 1e-6);
}
