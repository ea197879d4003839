#pragma once

#include <string>
#include <vector>
#include "qfiso/polynomial.hpp"

namespace qfiso {

/// Rational function in the formal variable p, kept in a canonical form:
/// numerator and denominator have integer coefficients with coprime
/// contents, no common polynomial factor, and the denominator has positive
/// leading coefficient. Equality is structural. Values are immutable and
/// safe to share across threads.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(Polynomial(1)) {}
    explicit RationalFunction(long value) : RationalFunction(BigRational(value)) {}
    explicit RationalFunction(const BigRational& value);
    explicit RationalFunction(const Polynomial& num) : RationalFunction(num, Polynomial(1)) {}
    RationalFunction(const Polynomial& num, const Polynomial& den);

    static RationalFunction p_power(long k);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RationalFunction operator-() const;
    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const;
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }
    bool operator==(const RationalFunction& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    // Exact value at x; throws on a pole.
    BigRational eval(const BigRational& x) const;

    // Canonical form of f(1/p); involutive.
    RationalFunction recip_subst() const;

    // Coefficients c_0..c_order of f = sum c_i p^{-i}; requires
    // deg num <= deg den (f bounded at infinity).
    std::vector<BigRational> laurent_at_infinity(unsigned long order) const;

    std::string to_string() const;

private:
    void canonicalize();
    Polynomial num_, den_;
};

RationalFunction parse_rational_function(const std::string& text);

}  // namespace qfiso
