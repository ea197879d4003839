#include "qfiso/global_density.hpp"

#include <omp.h>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include "qfiso/densities.hpp"
#include "qfiso/rng.hpp"

namespace qfiso {

std::vector<unsigned long> primes_up_to(unsigned long bound) {
    std::vector<bool> sieve(bound + 1, true);
    std::vector<unsigned long> primes;
    for (unsigned long i = 2; i <= bound; ++i) {
        if (!sieve[i]) continue;
        primes.push_back(i);
        for (unsigned long j = i * i; j <= bound; j += i) sieve[j] = false;
    }
    return primes;
}

EulerProductResult euler_product(long k, long n, unsigned long prime_bound) {
    if (k < 1) throw std::invalid_argument("euler_product: need k >= 1");
    if (prime_bound < 2) throw std::invalid_argument("euler_product: need prime_bound >= 2");
    EulerProductResult out;
    out.k = k;
    out.n = n;
    out.prime_bound = prime_bound;
    if (n <= 2 * k + 1) {
        out.degenerate_zero = true;
        out.partial_product = 0;
        out.tail_lower_bound = 0;
        return out;
    }
    if (n >= 2 * k + 3) return out;  // every factor is 1
    RationalFunction rho = rho_closed(k, n);
    std::vector<unsigned long> primes = primes_up_to(prime_bound);
    BigInt num(1), den(1);
    #pragma omp parallel
    {
        BigInt local_num(1), local_den(1);
        #pragma omp for schedule(static) nowait
        for (long i = 0; i < static_cast<long>(primes.size()); ++i) {
            BigRational v = rho.eval(BigRational(static_cast<long>(primes[static_cast<size_t>(i)])));
            local_num *= v.get_num();
            local_den *= v.get_den();
        }
        #pragma omp critical
        {
            num *= local_num;
            den *= local_den;
        }
    }
    out.partial_product = make_rational(num, den);
    // tail: prod_{p > B} (1 - 1/2 p^{-3}) >= 1 - 1/2 sum_{m > B} m^{-3}
    //       >= 1 - 1/(4 B^2)
    BigInt b2 = BigInt(static_cast<long>(prime_bound)) * static_cast<long>(prime_bound);
    out.tail_lower_bound = BigRational(1) - make_rational(BigInt(1), 4 * b2);
    return out;
}

std::string decimal_string(const BigRational& v, int places) {
    bool negative = v < 0;
    BigRational a = negative ? BigRational(-v) : v;
    BigInt scale = pow_int(10, static_cast<unsigned long>(places));
    BigRational scaled = a * BigRational(scale);
    // round half away from zero
    BigInt whole = scaled.get_num() / scaled.get_den();
    BigRational frac = scaled - BigRational(whole);
    if (frac * 2 >= 1) whole += 1;
    BigInt int_part = whole / scale;
    BigInt frac_part = whole % scale;
    std::string fp = frac_part.get_str();
    fp.insert(fp.begin(), static_cast<size_t>(places) - fp.size(), '0');
    std::string r = int_part.get_str() + "." + fp;
    if (negative) r.insert(r.begin(), '-');
    return r;
}

Inertia inertia_of_gram_reference(const std::vector<std::vector<BigRational>>& gram) {
    // exact congruence diagonalization mirroring the qp module, kept here as
    // the serial reference and as the fallback for degenerate pivots
    std::vector<std::vector<BigRational>> g = gram;
    const long n = static_cast<long>(g.size());
    Inertia out;
    for (long t = 0; t < n; ++t) {
        if (g[t][t] == 0) {
            long pivot = -1;
            for (long j = t + 1; j < n; ++j)
                if (g[j][j] != 0) { pivot = j; break; }
            if (pivot >= 0) {
                std::swap(g[t], g[pivot]);
                for (long r = 0; r < n; ++r) std::swap(g[r][t], g[r][pivot]);
            } else {
                long pi2 = -1, pj = -1;
                for (long i = t; i < n && pj < 0; ++i)
                    for (long j = i + 1; j < n; ++j)
                        if (g[i][j] != 0) { pi2 = i; pj = j; break; }
                if (pj < 0) {
                    out.zero += n - t;
                    return out;
                }
                if (pi2 != t) {
                    std::swap(g[t], g[pi2]);
                    for (long r = 0; r < n; ++r) std::swap(g[r][t], g[r][pi2]);
                }
                for (long r = 0; r < n; ++r) g[t][r] += g[pj][r];
                for (long r = 0; r < n; ++r) g[r][t] += g[r][pj];
            }
        }
        const BigRational d = g[t][t];
        if (d > 0) ++out.pos; else ++out.neg;
        for (long i = t + 1; i < n; ++i) {
            if (g[i][t] == 0) continue;
            BigRational f = g[i][t] / d;
            for (long j = t; j < n; ++j) g[i][j] -= f * g[t][j];
            for (long j = t; j < n; ++j) g[j][i] = g[i][j];
        }
    }
    return out;
}

namespace {

// Fraction-free symmetric Bareiss elimination on an integer matrix; the
// pivot sequence equals the leading principal minors of the (symmetrically
// permuted) matrix, so inertia reads off the sign changes. Returns false for
// the rare pivot patterns it does not handle; caller falls back.
bool bareiss_inertia(std::vector<std::vector<BigInt>>& a, Inertia& out) {
    const long n = static_cast<long>(a.size());
    BigInt prev(1);
    int prev_sign = 1;
    BigInt tmp, prod;
    for (long t = 0; t < n; ++t) {
        if (a[t][t] == 0) {
            long pivot = -1;
            for (long j = t + 1; j < n; ++j)
                if (a[j][j] != 0) { pivot = j; break; }
            if (pivot < 0) {
                bool all_zero = true;
                for (long i = t; i < n && all_zero; ++i)
                    for (long j = i; j < n; ++j)
                        if (a[i][j] != 0) { all_zero = false; break; }
                if (all_zero) {
                    out.zero += n - t;
                    return true;
                }
                return false;  // zero diagonal with nonzero block
            }
            std::swap(a[t], a[pivot]);
            for (long r = 0; r < n; ++r) std::swap(a[r][t], a[r][pivot]);
        }
        const BigInt& d = a[t][t];
        int d_sign = sgn(d);
        if (d_sign == prev_sign) ++out.pos; else ++out.neg;
        prev_sign = d_sign;
        for (long i = t + 1; i < n; ++i) {
            for (long j = i; j < n; ++j) {
                tmp = d * a[i][j];
                prod = a[i][t] * a[t][j];
                tmp -= prod;
                mpz_divexact(tmp.get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
                a[i][j] = tmp;
                a[j][i] = a[i][j];
            }
        }
        prev = d;
    }
    return true;
}

}  // namespace

Inertia inertia_of_gram(const std::vector<std::vector<BigRational>>& gram) {
    const long n = static_cast<long>(gram.size());
    // scale rows to integers (common denominator) -- inertia is invariant
    // under positive scaling of the whole matrix
    BigInt lcm(1);
    for (const auto& row : gram)
        for (const auto& e : row)
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), e.get_den().get_mpz_t());
    std::vector<std::vector<BigInt>> a(static_cast<size_t>(n),
                                       std::vector<BigInt>(static_cast<size_t>(n)));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            BigRational v = gram[static_cast<size_t>(i)][static_cast<size_t>(j)] * BigRational(lcm);
            if (v.get_den() != 1) throw std::logic_error("scaling failed");
            a[static_cast<size_t>(i)][static_cast<size_t>(j)] = v.get_num();
        }
    Inertia out;
    if (bareiss_inertia(a, out)) return out;
    return inertia_of_gram_reference(gram);
}

bool real_k_isotropic(const Inertia& inertia, long k) {
    return std::min(inertia.pos, inertia.neg) + inertia.zero >= k;
}

namespace {

constexpr long kGridBits = 53;

void fill_scaled_gram(long n, uint64_t seed, uint64_t index,
                      std::vector<std::vector<BigInt>>& m) {
    SampleRng rng(seed, index);
    // integer matrix 2^{kGridBits+1} * Gram for coefficients a_ij = m_ij / 2^kGridBits
    for (long i = 0; i < n; ++i) {
        for (long j = i; j < n; ++j) {
            uint64_t raw = rng.next() >> (63 - kGridBits);  // kGridBits+1 bits
            long v = static_cast<long>(static_cast<long long>(raw) - (1LL << kGridBits));
            if (i == j) {
                m[static_cast<size_t>(i)][static_cast<size_t>(i)] = 2 * v;
            } else {
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
                m[static_cast<size_t>(j)][static_cast<size_t>(i)] = v;
            }
        }
    }
}

bool sample_real_k_isotropic(long k, long n, uint64_t seed, uint64_t index,
                             std::vector<std::vector<BigInt>>& work) {
    fill_scaled_gram(n, seed, index, work);
    Inertia inertia;
    if (!bareiss_inertia(work, inertia)) {
        fill_scaled_gram(n, seed, index, work);  // streams are replayable
        std::vector<std::vector<BigRational>> gram(static_cast<size_t>(n),
                                                   std::vector<BigRational>(static_cast<size_t>(n)));
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j)
                gram[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    BigRational(work[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        inertia = inertia_of_gram_reference(gram);
    }
    return real_k_isotropic(inertia, k);
}

RhoInfinityResult finalize_inf(long k, long n, unsigned long long samples, uint64_t seed,
                               unsigned long long hits) {
    RhoInfinityResult r;
    r.k = k;
    r.n = n;
    r.samples = samples;
    r.seed = seed;
    r.hits = hits;
    r.estimate = static_cast<double>(hits) / static_cast<double>(samples);
    r.stderr_ = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(samples));
    return r;
}

}  // namespace

RhoInfinityResult rho_infinity_mc_serial(long k, long n, unsigned long long samples,
                                         uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("need samples >= 1");
    std::vector<std::vector<BigInt>> scratch(static_cast<size_t>(n),
                                             std::vector<BigInt>(static_cast<size_t>(n)));
    unsigned long long hits = 0;
    for (unsigned long long i = 0; i < samples; ++i)
        if (sample_real_k_isotropic(k, n, seed, i, scratch)) ++hits;
    return finalize_inf(k, n, samples, seed, hits);
}

RhoInfinityResult rho_infinity_mc(long k, long n, unsigned long long samples, uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("need samples >= 1");
    unsigned long long hits = 0;
    #pragma omp parallel
    {
        std::vector<std::vector<BigInt>> scratch(static_cast<size_t>(n),
                                                 std::vector<BigInt>(static_cast<size_t>(n)));
        unsigned long long local = 0;
        #pragma omp for schedule(static) nowait
        for (long long i = 0; i < static_cast<long long>(samples); ++i)
            if (sample_real_k_isotropic(k, n, seed, static_cast<uint64_t>(i), scratch)) ++local;
        #pragma omp atomic
        hits += local;
    }
    return finalize_inf(k, n, samples, seed, hits);
}

GlobalDensityResult rho_global(long k, long n, unsigned long prime_bound,
                               unsigned long long samples, uint64_t seed) {
    GlobalDensityResult out;
    out.k = k;
    out.n = n;
    if (n <= 2 * k + 1) {
        out.exact_zero = true;
        return out;
    }
    out.euler = euler_product(k, n, prime_bound);
    out.real_place = rho_infinity_mc(k, n, samples, seed);
    double partial = out.euler.partial_product.get_d();
    out.estimate = partial * out.real_place.estimate;
    out.stat_halfwidth = partial * 4.0 * out.real_place.stderr_;
    out.tail_defect = partial * (1.0 - out.euler.tail_lower_bound.get_d());
    return out;
}

}  // namespace qfiso
