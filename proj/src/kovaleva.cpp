#include "qfiso/kovaleva.hpp"

#include <omp.h>
#include <stdexcept>
#include "qfiso/rng.hpp"

namespace qfiso {

namespace {

void require_odd_prime(long p) {
    if (p == 2 || !is_prime(p))
        throw std::invalid_argument("Kovaleva formulas apply to odd primes only");
}

// prod_{i=1}^{t} (p^{2i-1} - 1)/(p^{2i} - 1) at the given prime
BigRational odd_even_product_at(long t, long p) {
    BigRational acc(1);
    for (long i = 1; i <= t; ++i) {
        acc *= make_rational(pow_int(p, static_cast<unsigned long>(2 * i - 1)) - 1,
                             pow_int(p, static_cast<unsigned long>(2 * i)) - 1);
    }
    return acc;
}

}  // namespace

BigRational kovaleva_prob(const InvariantCell& cell, long p) {
    require_odd_prime(p);
    if (cell.n < 1) throw std::invalid_argument("kovaleva_prob: need rank >= 1");
    if (cell.c != 1 && cell.c != -1) throw std::invalid_argument("c must be +-1");
    const long eps = legendre(BigInt(-1), p);
    const bool unit_class = cell.d.rep == 1 || cell.d.rep == least_nonresidue(p);
    const BigRational quarter(1, 4);
    if (cell.n % 2 == 1) {
        const long k = (cell.n - 1) / 2;
        BigRational prod = odd_even_product_at(k + 1, p);
        if (unit_class)
            return quarter * make_rational(BigInt(p), BigInt(p + 1)) +
                   quarter * cell.c * BigRational(pow_int(p, static_cast<unsigned long>(k + 1))) *
                       prod;
        long eps_k = k % 2 == 0 ? 1 : eps;
        return quarter * make_rational(BigInt(1), BigInt(p + 1)) +
               quarter * cell.c * eps_k * prod;
    }
    const long k = cell.n / 2;
    if (!unit_class) {
        return quarter * make_rational(BigInt(p), BigInt(p + 1)) *
               make_rational(pow_int(p, static_cast<unsigned long>(2 * k)) - 1,
                             pow_int(p, static_cast<unsigned long>(2 * k + 1)) - 1);
    }
    const long s = cell.d.rep == 1 ? 1 : -1;
    long s_eps_k = s * (k % 2 == 0 ? 1 : eps);
    BigInt pk = pow_int(p, static_cast<unsigned long>(k));
    BigInt pk2 = pow_int(p, static_cast<unsigned long>(k + 2));
    BigRational frac = make_rational(
        pk2 - s_eps_k, BigInt(p + 1) * (pow_int(p, static_cast<unsigned long>(2 * k + 1)) - 1));
    return quarter * BigRational(pk + s_eps_k) * (frac + cell.c * odd_even_product_at(k, p));
}

BigRational rho_via_invariants(long k, long n, long p) {
    require_odd_prime(p);
    if (k <= 0) return BigRational(1);
    if (n <= 2 * k - 1) return BigRational(0);
    if (n >= 2 * k + 3) return BigRational(1);
    auto sign_class = [&](long exponent, long extra_rep) {
        // class of (-1)^exponent * extra_rep
        long v = exponent % 2 == 0 ? 1 : -1;
        return square_class(BigRational(v * extra_rep), p);
    };
    if (n == 2 * k)
        return kovaleva_prob(InvariantCell{n, sign_class(k, 1), 1}, p);
    if (n == 2 * k + 1) {
        BigRational acc(0);
        for (const SquareClass& a : square_class_representatives(p)) {
            int sym = hilbert_symbol(BigRational(-1), BigRational(a.rep), p);
            int c = k % 2 == 0 ? 1 : sym;
            acc += kovaleva_prob(InvariantCell{n, sign_class(k, a.rep), c}, p);
        }
        return acc;
    }
    // n == 2k + 2
    return BigRational(1) - kovaleva_prob(InvariantCell{n, sign_class(k - 1, 1), -1}, p);
}

namespace {

struct CellTally {
    std::map<InvariantCell, unsigned long long> counts;
    unsigned long long singular = 0;
};

CellTally tally_range(long n, long p, uint64_t bound, uint64_t seed, unsigned long long lo,
                      unsigned long long hi) {
    CellTally t;
    const long d = n * (n + 1) / 2;
    for (unsigned long long i = lo; i < hi; ++i) {
        SampleRng rng(seed, i);
        std::vector<BigInt> coeffs(static_cast<size_t>(d));
        for (long c = 0; c < d; ++c)
            coeffs[static_cast<size_t>(c)] = BigInt(static_cast<unsigned long>(rng.bounded(bound)));
        ZForm form(n, std::move(coeffs));
        Diagonalization dz = diagonalize(form);
        if (dz.radical_dim > 0) {
            ++t.singular;
            continue;
        }
        QpInvariants inv = invariants_from_diagonal(dz.diag, p);
        ++t.counts[InvariantCell{n, inv.det_class, inv.hasse}];
    }
    return t;
}

uint64_t sampling_bound(long p, long digits) {
    unsigned long long r = 1;
    for (long i = 0; i < digits; ++i) {
        if (r > (1ULL << 62) / static_cast<unsigned long long>(p))
            throw std::invalid_argument("p^digits too large for sampling");
        r *= static_cast<unsigned long long>(p);
    }
    return r;
}

InvariantFrequencyResult run_invariant_mc(long n, long p, long digits,
                                          unsigned long long samples, uint64_t seed,
                                          bool parallel) {
    require_odd_prime(p);
    if (samples < 1) throw std::invalid_argument("need samples >= 1");
    uint64_t bound = sampling_bound(p, digits);
    InvariantFrequencyResult out;
    out.n = n;
    out.p = p;
    out.digits = digits;
    out.samples = samples;
    out.seed = seed;
    if (!parallel) {
        CellTally t = tally_range(n, p, bound, seed, 0, samples);
        out.counts = std::move(t.counts);
        out.singular = t.singular;
        return out;
    }
    #pragma omp parallel
    {
        int workers = omp_get_num_threads();
        int me = omp_get_thread_num();
        unsigned long long chunk = (samples + workers - 1) / workers;
        unsigned long long lo = std::min<unsigned long long>(samples, chunk * me);
        unsigned long long hi = std::min<unsigned long long>(samples, lo + chunk);
        CellTally local = tally_range(n, p, bound, seed, lo, hi);
        #pragma omp critical
        {
            for (const auto& [cell, cnt] : local.counts) out.counts[cell] += cnt;
            out.singular += local.singular;
        }
    }
    return out;
}

}  // namespace

InvariantFrequencyResult invariant_frequency_mc(long n, long p, long digits,
                                                unsigned long long samples, uint64_t seed) {
    return run_invariant_mc(n, p, digits, samples, seed, true);
}

InvariantFrequencyResult invariant_frequency_mc_serial(long n, long p, long digits,
                                                       unsigned long long samples,
                                                       uint64_t seed) {
    return run_invariant_mc(n, p, digits, samples, seed, false);
}

}  // namespace qfiso
