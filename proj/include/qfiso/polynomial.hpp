#pragma once

#include <vector>
#include <string>
#include "qfiso/rational.hpp"

namespace qfiso {

/// Univariate polynomial in the formal variable p with exact rational
/// coefficients, indexed by degree. The zero polynomial has an empty
/// coefficient vector.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(const BigRational& c) { if (c != 0) coeffs_.push_back(c); }
    explicit Polynomial(long c) : Polynomial(BigRational(c)) {}
    explicit Polynomial(std::vector<BigRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static Polynomial variable() { return monomial(BigRational(1), 1); }
    static Polynomial monomial(const BigRational& c, unsigned long k);

    bool is_zero() const { return coeffs_.empty(); }
    // Degree of the zero polynomial is -1 by convention.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    const BigRational& leading() const;
    BigRational coeff(unsigned long k) const {
        return k < coeffs_.size() ? coeffs_[k] : BigRational(0);
    }
    const std::vector<BigRational>& coeffs() const { return coeffs_; }

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(const BigRational& s) const;
    bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // Field division with remainder; divisor must be nonzero.
    static void divrem(const Polynomial& a, const Polynomial& b,
                       Polynomial& quot, Polynomial& rem);
    // Division known to be exact (throws if a remainder is left over).
    static Polynomial divexact(const Polynomial& a, const Polynomial& b);

    // Monic gcd over Q[p]; gcd(0,0) = 0.
    static Polynomial gcd(const Polynomial& a, const Polynomial& b);

    BigRational eval(const BigRational& x) const;

    // Splits into content * primitive where primitive has coprime integer
    // coefficients and positive leading coefficient. Zero -> (0, zero).
    void split_content(BigRational& content, Polynomial& primitive) const;

    std::string to_string() const;

private:
    void trim();
    std::vector<BigRational> coeffs_;
};

Polynomial parse_polynomial(const std::string& text);

}  // namespace qfiso
