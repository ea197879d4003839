#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>
#include "qfiso/rational.hpp"

namespace qfiso {

/// Witt-equivalence invariant of a form over F_p: l hyperbolic planes, a
/// regular anisotropic part of dimension m in {0,1,2}, total dimension n.
/// The radical has dimension n - 2l - m.
struct WittClass {
    long l = 0;
    long m = 0;
    long n = 0;

    long radical_dim() const { return n - 2 * l - m; }
    bool operator==(const WittClass& o) const { return l == o.l && m == o.m && n == o.n; }
    bool operator<(const WittClass& o) const {
        if (l != o.l) return l < o.l;
        if (m != o.m) return m < o.m;
        return n < o.n;
    }
};

/// Quadratic form over F_p in n variables, stored as the upper-triangular
/// coefficient list a_ij (1 <= i <= j <= n) in row-major order, reduced mod p.
class FpForm {
public:
    FpForm(long p, long n, std::vector<uint32_t> coeffs);

    long p() const { return p_; }
    long n() const { return n_; }
    const std::vector<uint32_t>& coeffs() const { return coeffs_; }
    uint32_t coeff(long i, long j) const { return coeffs_[index(i, j)]; }

    // 0-based upper-triangular index
    size_t index(long i, long j) const;

    uint32_t value(const std::vector<uint32_t>& x) const;

    std::string to_literal() const;

private:
    long p_, n_;
    std::vector<uint32_t> coeffs_;
};

FpForm parse_fpform_literal(const std::string& text);

// phi(x,y) = Q(x+y) - Q(x) - Q(y)
uint32_t bilinear_value(const FpForm& q, const std::vector<uint32_t>& x,
                        const std::vector<uint32_t>& y);

// Basis of { x : phi(x,.) = 0 }, additionally intersected with { Q(x) = 0 }
// when p = 2.
std::vector<std::vector<uint32_t>> radical(const FpForm& q);

WittClass witt_class(const FpForm& q);

// #{ x in F_p^n : Q(x) = 0 }, via hyperbolic-plane splitting:
// N(Q) = (2p-1) N(Q') + (p-1)(p^{n-2} - N(Q')), base case N = p^{n-m}.
BigInt count_zeros(const FpForm& q);

// Order of the stabiliser in GL_n(F_p) of a regular form of class [l,m,n],
// n = 2l + m. Halved for p = 2, m = 1.
BigInt orthogonal_order(long m, long n, long p);

// Gaussian binomial: number of r-dimensional subspaces of F_p^n.
BigInt subspace_count(long r, long n, long p);

BigInt gl_order(long n, long p);

// Coefficient substitution Q(Tx) for T an n x n matrix over F_p (row-major).
FpForm substitute(const FpForm& q, const std::vector<uint32_t>& t);

/// Conditioning for a census, mirroring the three coefficient distributions:
/// all forms; forms with a_11 != 0; forms whose leading binary block
/// a_11 x1^2 + a_12 x1 x2 + a_22 x2^2 is regular anisotropic.
enum class CensusCondition { all = 0, first_coeff_nonzero = 1, leading_binary_anisotropic = 2 };

using Census = std::map<WittClass, unsigned long long>;

inline constexpr unsigned long long kCensusBudget = 10'000'000ULL;

// Exhaustive census over all p^{n(n+1)/2} forms (subject to the budget);
// serial reference implementation.
Census enumerate_class_census_serial(long p, long n,
                                     CensusCondition cond = CensusCondition::all);

// OpenMP-sharded census; results are independent of the shard count and
// identical to the serial reference.
Census enumerate_class_census(long p, long n, CensusCondition cond = CensusCondition::all);

// Number of forms satisfying the conditioning (the census denominator).
BigInt census_population(long p, long n, CensusCondition cond);

std::string census_to_csv(const Census& census);

}  // namespace qfiso
