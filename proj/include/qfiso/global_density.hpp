#pragma once

#include <cstdint>
#include <string>
#include <vector>
#include "qfiso/rational.hpp"

namespace qfiso {

struct EulerProductResult {
    long k = 0, n = 0;
    unsigned long prime_bound = 0;
    bool degenerate_zero = false;  // n <= 2k+1: the product over primes is 0
    BigRational partial_product = 1;
    BigRational tail_lower_bound = 1;
};

/// Exact partial Euler product prod_{p <= B} rho_p(k,n) with a rigorous
/// lower bound for the omitted tail: every omitted factor is >= 1 - C p^{-3}
/// with the certified constant C = 1/2, so the tail is >= 1 - 1/(4 B^2).
EulerProductResult euler_product(long k, long n, unsigned long prime_bound);

// Certified tail constant: p^3 (1 - rho_p(k,2k+2)) <= 1/2 for all p.
inline constexpr long kTailConstantNum = 1;
inline constexpr long kTailConstantDen = 2;

std::vector<unsigned long> primes_up_to(unsigned long bound);

/// Rounds an exact rational to the given number of decimal places
/// (round half away from zero) and formats it.
std::string decimal_string(const BigRational& v, int places);

struct Inertia {
    long pos = 0, neg = 0, zero = 0;
};

/// Exact inertia of a symmetric rational matrix (fraction-free integer
/// elimination with a rational-elimination fallback for degenerate pivots).
Inertia inertia_of_gram(const std::vector<std::vector<BigRational>>& gram);

/// Reference implementation: exact rational congruence diagonalization.
Inertia inertia_of_gram_reference(const std::vector<std::vector<BigRational>>& gram);

/// A real form is k-isotropic iff min(n+, n-) + n0 >= k.
bool real_k_isotropic(const Inertia& inertia, long k);

struct RhoInfinityResult {
    long k = 0, n = 0;
    unsigned long long samples = 0;
    uint64_t seed = 0;
    unsigned long long hits = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
};

/// Monte Carlo estimate of the k-isotropy probability over R: coefficients
/// uniform on a 2^53-resolution rational grid in [-1,1], inertia computed
/// exactly per sample.
RhoInfinityResult rho_infinity_mc(long k, long n, unsigned long long samples, uint64_t seed);
RhoInfinityResult rho_infinity_mc_serial(long k, long n, unsigned long long samples,
                                         uint64_t seed);

struct GlobalDensityResult {
    long k = 0, n = 0;
    bool exact_zero = false;  // n <= 2k+1
    EulerProductResult euler;
    RhoInfinityResult real_place;
    double estimate = 0.0;
    double stat_halfwidth = 0.0;  // 4 standard errors from the real place
    double tail_defect = 0.0;     // partial * (1 - tail lower bound)
};

GlobalDensityResult rho_global(long k, long n, unsigned long prime_bound,
                               unsigned long long samples, uint64_t seed);

}  // namespace qfiso
