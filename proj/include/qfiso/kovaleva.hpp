#pragma once

#include <map>
#include <string>
#include <vector>
#include "qfiso/qp.hpp"

namespace qfiso {

/// Equivalence-class cell of a regular form over Q_p: rank, determinant
/// square class and Hasse-Minkowski invariant.
struct InvariantCell {
    long n = 0;
    SquareClass d;
    int c = 1;

    bool operator<(const InvariantCell& o) const {
        if (n != o.n) return n < o.n;
        if (d.rep != o.d.rep) return d.rep < o.d.rep;
        return c < o.c;
    }
    bool operator==(const InvariantCell& o) const {
        return n == o.n && d == o.d && c == o.c;
    }
};

/// Probability that a random p-adic integral form of rank n has determinant
/// class d and Hasse-Minkowski invariant c; odd p only. Exact rational.
BigRational kovaleva_prob(const InvariantCell& cell, long p);

/// Reassembles rho_p(k,n) from the invariant-distribution probabilities;
/// odd p only. Exact rational.
BigRational rho_via_invariants(long k, long n, long p);

struct InvariantFrequencyResult {
    long n = 0, p = 0, digits = 0;
    unsigned long long samples = 0;
    uint64_t seed = 0;
    std::map<InvariantCell, unsigned long long> counts;
    unsigned long long singular = 0;
};

/// Samples random forms and tabulates the observed (d, c) frequencies;
/// singular samples are tabulated separately.
InvariantFrequencyResult invariant_frequency_mc(long n, long p, long digits,
                                                unsigned long long samples, uint64_t seed);
InvariantFrequencyResult invariant_frequency_mc_serial(long n, long p, long digits,
                                                       unsigned long long samples,
                                                       uint64_t seed);

}  // namespace qfiso
