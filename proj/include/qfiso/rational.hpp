#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace qfiso {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigInt pow_int(const BigInt& base, unsigned long exp) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline BigInt pow_int(long base, unsigned long exp) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), exp);
    return r;
}

// p^k for k of either sign, as an exact rational.
inline BigRational pow_rational(long base, long exp) {
    if (exp >= 0) return BigRational(pow_int(base, static_cast<unsigned long>(exp)));
    return BigRational(1) / BigRational(pow_int(base, static_cast<unsigned long>(-exp)));
}

inline BigRational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

// Multiplicity of the prime p in a nonzero integer.
inline long valuation(const BigInt& a, long p) {
    if (a == 0) throw std::invalid_argument("valuation of zero");
    BigInt unit;
    return static_cast<long>(mpz_remove(unit.get_mpz_t(), a.get_mpz_t(), BigInt(p).get_mpz_t()));
}

// Valuation together with the cofactor a / p^v.
inline long remove_prime(const BigInt& a, long p, BigInt& unit_out) {
    if (a == 0) throw std::invalid_argument("valuation of zero");
    return static_cast<long>(
        mpz_remove(unit_out.get_mpz_t(), a.get_mpz_t(), BigInt(p).get_mpz_t()));
}

// Legendre symbol (a/p) for odd prime p.
inline int legendre(const BigInt& a, long p) {
    return mpz_legendre(a.get_mpz_t(), BigInt(p).get_mpz_t());
}

inline bool is_prime(long p) {
    if (p < 2) return false;
    return mpz_probab_prime_p(BigInt(p).get_mpz_t(), 32) != 0;
}

inline std::string to_string(const BigRational& q) {
    return q.get_str();
}

inline BigRational parse_rational(const std::string& s) {
    BigRational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

}  // namespace qfiso
