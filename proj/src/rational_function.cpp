#include "qfiso/rational_function.hpp"

#include <stdexcept>

namespace qfiso {

RationalFunction::RationalFunction(const BigRational& value)
    : num_(Polynomial(BigRational(value.get_num()))),
      den_(Polynomial(BigRational(value.get_den()))) {}

RationalFunction::RationalFunction(const Polynomial& num, const Polynomial& den)
    : num_(num), den_(den) {
    canonicalize();
}

RationalFunction RationalFunction::p_power(long k) {
    if (k >= 0)
        return RationalFunction(Polynomial::monomial(BigRational(1), static_cast<unsigned long>(k)));
    return RationalFunction(Polynomial(1),
                            Polynomial::monomial(BigRational(1), static_cast<unsigned long>(-k)));
}

void RationalFunction::canonicalize() {
    if (den_.is_zero()) throw std::invalid_argument("rational function with zero denominator");
    if (num_.is_zero()) {
        den_ = Polynomial(1);
        return;
    }
    BigRational cn, cd;
    Polynomial pn, pd;
    num_.split_content(cn, pn);
    den_.split_content(cd, pd);
    Polynomial g = Polynomial::gcd(pn, pd);
    if (g.degree() > 0) {
        pn = Polynomial::divexact(pn, g);
        pd = Polynomial::divexact(pd, g);
        // divexact of primitive by primitive keeps integer coefficients, but
        // re-extract contents in case of sign/unit drift
        BigRational tmp;
        pn.split_content(tmp, pn);
        cn *= tmp;
        pd.split_content(tmp, pd);
        cd *= tmp;
    }
    BigRational scale = cn / cd;  // canonical: coprime, positive denominator
    num_ = pn * BigRational(scale.get_num());
    den_ = pd * BigRational(scale.get_den());
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    return RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    if (o.is_zero()) throw std::domain_error("division by the zero rational function");
    return RationalFunction(num_ * o.den_, den_ * o.num_);
}

BigRational RationalFunction::eval(const BigRational& x) const {
    BigRational d = den_.eval(x);
    if (d == 0) throw std::domain_error("pole at " + x.get_str());
    return num_.eval(x) / d;
}

namespace {

Polynomial reversed(const Polynomial& p) {
    if (p.is_zero()) return p;
    const auto& c = p.coeffs();
    std::vector<BigRational> rev(c.rbegin(), c.rend());
    return Polynomial(std::move(rev));
}

}  // namespace

RationalFunction RationalFunction::recip_subst() const {
    if (is_zero()) return RationalFunction();
    long a = num_.degree(), b = den_.degree();
    Polynomial rn = reversed(num_), rd = reversed(den_);
    if (b >= a)
        return RationalFunction(rn * Polynomial::monomial(BigRational(1),
                                                          static_cast<unsigned long>(b - a)),
                                rd);
    return RationalFunction(rn, rd * Polynomial::monomial(BigRational(1),
                                                          static_cast<unsigned long>(a - b)));
}

std::vector<BigRational> RationalFunction::laurent_at_infinity(unsigned long order) const {
    if (order < 1) throw std::invalid_argument("laurent expansion needs order >= 1");
    std::vector<BigRational> out(order + 1, BigRational(0));
    if (is_zero()) return out;
    long a = num_.degree(), b = den_.degree();
    if (a > b) throw std::domain_error("rational function unbounded at infinity");
    // In q = 1/p: f = (sum_i n_i q^{b-i}) / (sum_i d_i q^{b-i}); the
    // denominator has nonzero constant term, so synthetic division applies.
    std::vector<BigRational> nq(order + 1, BigRational(0)), dq(order + 1, BigRational(0));
    for (long i = 0; i <= a; ++i) {
        unsigned long e = static_cast<unsigned long>(b - i);
        if (e <= order) nq[e] = num_.coeff(static_cast<unsigned long>(i));
    }
    for (long i = 0; i <= b; ++i) {
        unsigned long e = static_cast<unsigned long>(b - i);
        if (e <= order) dq[e] = den_.coeff(static_cast<unsigned long>(i));
    }
    for (unsigned long t = 0; t <= order; ++t) {
        BigRational acc = nq[t];
        for (unsigned long s = 0; s < t; ++s) acc -= out[s] * dq[t - s];
        out[t] = acc / dq[0];
    }
    return out;
}

namespace {

bool is_single_term(const Polynomial& p) {
    if (p.is_zero()) return true;
    int nonzero = 0;
    for (const auto& c : p.coeffs())
        if (c != 0) ++nonzero;
    return nonzero == 1;
}

// A side is rendered without parentheses only when it is a bare integer or a
// bare power of p; anything else is wrapped so the printed form re-parses
// unambiguously.
std::string render_side(const Polynomial& p, bool is_den) {
    std::string s = p.to_string();
    if (!is_single_term(p)) return "(" + s + ")";
    if (is_den) {
        bool atomic = p.degree() == 0 || (p.degree() > 0 && p.leading() == 1);
        if (!atomic) return "(" + s + ")";
    }
    return s;
}

}  // namespace

std::string RationalFunction::to_string() const {
    if (den_ == Polynomial(1)) return num_.to_string();
    return render_side(num_, false) + "/" + render_side(den_, true);
}

RationalFunction parse_rational_function(const std::string& text) {
    // split at the single top-level '/'
    int depth = 0;
    long slash = -1;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        else if (c == '/' && depth == 0) {
            if (slash >= 0) throw std::invalid_argument("multiple top-level '/' in: " + text);
            slash = static_cast<long>(i);
        }
    }
    if (slash < 0) return RationalFunction(parse_polynomial(text));
    Polynomial num = parse_polynomial(text.substr(0, static_cast<size_t>(slash)));
    Polynomial den = parse_polynomial(text.substr(static_cast<size_t>(slash) + 1));
    return RationalFunction(num, den);
}

}  // namespace qfiso
