#pragma once

#include <map>
#include <string>
#include <vector>
#include "qfiso/rational_function.hpp"

namespace qfiso {

/// Probability that a random n-variable form over F_p lies in the class
/// [l,m,n], as a rational function of p. The index i selects the
/// conditioning: i=0 none, i=1 given a_11 != 0, i=2 given the leading
/// binary block is regular anisotropic. Total: impossible classes give 0.
RationalFunction pi(int i, long l, long m, long n);

/// Probability that a random n x n symmetric matrix over F_p has rank r.
RationalFunction lambda_rank(long r, long n);

// Closed-form building blocks; require i,j in {0,1,2} and n >= i+j.
RationalFunction phi(int i, int j, long n);
RationalFunction psi(int i, int j, long n);

/// Closed form for delta_i(k; 0, j, n): the five-case combination of
/// 1, phi and psi.
RationalFunction delta_closed(int i, int j, long k, long n);

/// Probability that a random p-adic integral form in n variables is
/// k-isotropic over Q_p, directly from the five-case main formula.
/// Equals delta_closed(0,0,k,n); the two constructions are kept separate
/// so they can cross-check each other.
RationalFunction rho_closed(long k, long n);

struct DeltaKey {
    int i = 0;
    long k = 0;
    long l = 0;
    long m = 0;
    long n = 0;

    bool operator<(const DeltaKey& o) const {
        if (i != o.i) return i < o.i;
        if (k != o.k) return k < o.k;
        if (l != o.l) return l < o.l;
        if (m != o.m) return m < o.m;
        return n < o.n;
    }
};

/// Memoised solver state for the coupled recursion. Append-only; stored
/// values are checked to lie in [0,1] at sampled primes. Confine one table
/// to a single thread, or guard it externally (values are deterministic,
/// so last-write-wins merging is sound).
class DensityTable {
public:
    RationalFunction delta(const DeltaKey& key);
    size_t size() const { return memo_.size(); }

private:
    RationalFunction delta_zero_l(int i, long k, int j, long n);
    void solve_level(long k, long n);
    const RationalFunction& pi_cached(int i, long l, long m, long n);
    void store(const DeltaKey& key, RationalFunction value);

    std::map<DeltaKey, RationalFunction> memo_;
    std::map<std::tuple<int, long, long, long>, RationalFunction> pi_;
};

/// Solves the recursion system for delta_i(k; l, m, n).
RationalFunction delta_recursive(const DeltaKey& key, DensityTable& table);

struct CheckResult {
    std::string name;
    std::string params;
    bool ok = false;
};

enum class AppendixIdentity { id1, os, id2, twoid, phipsi };

AppendixIdentity appendix_identity_from_name(const std::string& name);

/// Verifies one appendix identity as an exact rational-function identity
/// for all admissible parameters up to n_max. Identities with free real
/// parameters are checked on a spanning set, which suffices by linearity.
std::vector<CheckResult> verify_appendix_identity(AppendixIdentity which, long n_max);

/// Checks that substituting p -> 1/p exchanges delta_closed(i,j,k,n) and
/// delta_closed(j,i,k,n) for all i,j and i+j <= n <= n_max.
std::vector<CheckResult> verify_symmetry(long k, long n_max);

}  // namespace qfiso
