#pragma once

#include <cstdint>
#include <string>
#include <vector>
#include "qfiso/rational.hpp"

namespace qfiso {

/// Quadratic form with exact integer coefficients, upper-triangular order.
class ZForm {
public:
    ZForm(long n, std::vector<BigInt> coeffs);

    long n() const { return n_; }
    const std::vector<BigInt>& coeffs() const { return coeffs_; }
    const BigInt& coeff(long i, long j) const { return coeffs_[index(i, j)]; }
    size_t index(long i, long j) const {
        return static_cast<size_t>(i * n_ - i * (i - 1) / 2 + (j - i));
    }

    std::string to_literal() const;

private:
    long n_;
    std::vector<BigInt> coeffs_;
};

ZForm parse_zform_literal(const std::string& text);

/// Canonical square class of Q_p^*/(Q_p^*)^2: representatives {1,u,p,up}
/// for odd p (u the least positive non-residue) and {+-1,+-2,+-5,+-10}
/// for p = 2.
struct SquareClass {
    long p = 0;
    long rep = 1;

    bool operator==(const SquareClass& o) const { return p == o.p && rep == o.rep; }
    bool operator!=(const SquareClass& o) const { return !(*this == o); }
    bool operator<(const SquareClass& o) const { return rep < o.rep; }
    std::string to_string() const;
};

long least_nonresidue(long p);

SquareClass square_class(const BigRational& a, long p);
inline SquareClass square_class(long a, long p) { return square_class(BigRational(a), p); }

/// All square-class representatives for the prime p (4 or 8 of them).
std::vector<SquareClass> square_class_representatives(long p);

/// Norm-residue symbol: +1 iff ax^2 + by^2 - z^2 has a nontrivial zero over
/// Q_p. Valuation/residue formula for odd p, mod-8 exponent formula for p=2.
int hilbert_symbol(const BigRational& a, const BigRational& b, long p);
inline int hilbert_symbol(long a, long b, long p) {
    return hilbert_symbol(BigRational(a), BigRational(b), p);
}

/// Independent oracle: exhaustive primitive-zero search of ax^2+by^2=z^2
/// mod p^(2v+3). Only usable when the search space is small.
int hilbert_symbol_by_search(const BigRational& a, const BigRational& b, long p);

struct Diagonalization {
    std::vector<BigRational> diag;  // nonzero entries of the regular part
    long radical_dim = 0;
};

/// Rational congruence diagonalization of the form (symmetric elimination
/// with the x_i <- x_i + x_j pivot fix).
Diagonalization diagonalize(const ZForm& q);
Diagonalization diagonalize_gram(std::vector<std::vector<BigRational>> gram);

/// Hasse-Minkowski invariant c = prod_{i<j} (a_i, a_j) of a diagonal form.
int hasse_invariant(const std::vector<BigRational>& diag, long p);

struct QpInvariants {
    long rank = 0;
    SquareClass det_class;
    int hasse = 1;
};

QpInvariants qp_invariants(const ZForm& q, long p);
QpInvariants invariants_from_diagonal(const std::vector<BigRational>& diag, long p);

/// Witt index of a regular form over Q_p with the given invariants, by
/// repeated isotropy testing and hyperbolic-plane peeling.
long witt_index(const QpInvariants& inv, long p);

/// True iff Q has a k-dimensional totally isotropic subspace over Q_p,
/// decided exactly as radical_dim + witt_index >= k.
bool k_isotropic(const ZForm& q, long p, long k);

long default_digits(long p);

struct McRhoResult {
    long p = 0, k = 0, n = 0, digits = 0;
    unsigned long long samples = 0;
    uint64_t seed = 0;
    unsigned long long hits = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;

    std::string to_csv_row() const;
};

/// Monte Carlo estimate of the k-isotropy probability: coefficients drawn
/// uniformly from [0, p^digits), each sample decided exactly. Results are
/// independent of the worker layout for a fixed seed.
McRhoResult mc_rho(long p, long k, long n, long digits, unsigned long long samples,
                   uint64_t seed);
McRhoResult mc_rho_serial(long p, long k, long n, long digits, unsigned long long samples,
                          uint64_t seed);

}  // namespace qfiso
