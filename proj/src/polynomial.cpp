#include "qfiso/polynomial.hpp"

#include <cctype>
#include <sstream>

namespace qfiso {

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Polynomial Polynomial::monomial(const BigRational& c, unsigned long k) {
    Polynomial r;
    if (c == 0) return r;
    r.coeffs_.assign(k + 1, BigRational(0));
    r.coeffs_[k] = c;
    return r;
}

const BigRational& Polynomial::leading() const {
    if (coeffs_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
    return coeffs_.back();
}

Polynomial Polynomial::operator-() const {
    Polynomial r(*this);
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r;
    r.coeffs_.resize(std::max(coeffs_.size(), o.coeffs_.size()), BigRational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = coeffs_[i];
    for (size_t i = 0; i < o.coeffs_.size(); ++i) r.coeffs_[i] += o.coeffs_[i];
    r.trim();
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + (-o);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r;
    if (is_zero() || o.is_zero()) return r;
    r.coeffs_.assign(coeffs_.size() + o.coeffs_.size() - 1, BigRational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        for (size_t j = 0; j < o.coeffs_.size(); ++j) {
            if (o.coeffs_[j] == 0) continue;
            r.coeffs_[i + j] += coeffs_[i] * o.coeffs_[j];
        }
    }
    r.trim();
    return r;
}

Polynomial Polynomial::operator*(const BigRational& s) const {
    Polynomial r;
    if (s == 0 || is_zero()) return r;
    r.coeffs_ = coeffs_;
    for (auto& c : r.coeffs_) c *= s;
    return r;
}

void Polynomial::divrem(const Polynomial& a, const Polynomial& b,
                        Polynomial& quot, Polynomial& rem) {
    if (b.is_zero()) throw std::invalid_argument("polynomial division by zero");
    rem = a;
    quot = Polynomial();
    if (a.degree() < b.degree()) return;
    quot.coeffs_.assign(a.degree() - b.degree() + 1, BigRational(0));
    const BigRational& lb = b.leading();
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        long shift = rem.degree() - b.degree();
        BigRational f = rem.leading() / lb;
        quot.coeffs_[shift] = f;
        for (size_t i = 0; i < b.coeffs_.size(); ++i)
            rem.coeffs_[i + shift] -= f * b.coeffs_[i];
        rem.trim();
    }
    quot.trim();
}

Polynomial Polynomial::divexact(const Polynomial& a, const Polynomial& b) {
    Polynomial q, r;
    divrem(a, b, q, r);
    if (!r.is_zero()) throw std::logic_error("divexact: division not exact");
    return q;
}

void Polynomial::split_content(BigRational& content, Polynomial& primitive) const {
    if (is_zero()) {
        content = 0;
        primitive = Polynomial();
        return;
    }
    BigInt den_lcm(1);
    for (const auto& c : coeffs_)
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    BigInt num_gcd(0);
    for (const auto& c : coeffs_) {
        BigInt scaled = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
    }
    bool negate = sgn(leading()) < 0;
    content = make_rational(negate ? BigInt(-num_gcd) : num_gcd, den_lcm);
    Polynomial result;  // aliasing: primitive may be *this
    result.coeffs_.reserve(coeffs_.size());
    BigRational inv = BigRational(1) / content;
    for (const auto& c : coeffs_) result.coeffs_.push_back(c * inv);
    primitive = std::move(result);
}

namespace {

// Primitive pseudo-remainder sequence over the integer coefficients; keeps
// intermediate growth in check for the degree ~100 operands produced by the
// density formulas.
std::vector<BigInt> int_primitive(const std::vector<BigInt>& v) {
    BigInt g(0);
    for (const auto& c : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 0) return v;
    if (sgn(v.back()) < 0) g = -g;
    std::vector<BigInt> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) mpz_divexact(r[i].get_mpz_t(), v[i].get_mpz_t(), g.get_mpz_t());
    return r;
}

void int_trim(std::vector<BigInt>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

// Pseudo-remainder of a by b (deg a >= deg b, b nonzero).
std::vector<BigInt> pseudo_rem(std::vector<BigInt> a, const std::vector<BigInt>& b) {
    const BigInt& lb = b.back();
    long db = static_cast<long>(b.size()) - 1;
    while (static_cast<long>(a.size()) - 1 >= db && !a.empty()) {
        BigInt la = a.back();
        long shift = static_cast<long>(a.size()) - 1 - db;
        for (auto& c : a) c *= lb;
        for (long i = 0; i <= db; ++i) a[i + shift] -= la * b[i];
        int_trim(a);
    }
    return a;
}

}  // namespace

Polynomial Polynomial::gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() && b.is_zero()) return Polynomial();
    if (a.is_zero()) return gcd(b, a);
    if (b.is_zero()) {
        BigRational c;
        Polynomial prim;
        a.split_content(c, prim);
        BigRational lead = prim.leading();
        return prim * (BigRational(1) / lead);
    }
    auto to_int = [](const Polynomial& p) {
        BigRational c;
        Polynomial prim;
        p.split_content(c, prim);
        std::vector<BigInt> v;
        v.reserve(prim.coeffs_.size());
        for (const auto& q : prim.coeffs_) v.push_back(q.get_num());
        return v;
    };
    std::vector<BigInt> u = to_int(a), v = to_int(b);
    if (u.size() < v.size()) std::swap(u, v);
    while (!v.empty()) {
        std::vector<BigInt> r = pseudo_rem(u, v);
        u = std::move(v);
        v = int_primitive(r);
    }
    Polynomial g;
    g.coeffs_.reserve(u.size());
    BigRational inv = make_rational(BigInt(1), u.back());
    for (const auto& c : u) g.coeffs_.push_back(BigRational(c) * inv);
    return g;
}

BigRational Polynomial::eval(const BigRational& x) const {
    BigRational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc *= x;
        acc += *it;
    }
    return acc;
}

std::string Polynomial::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (long k = degree(); k >= 0; --k) {
        const BigRational c = coeff(static_cast<unsigned long>(k));
        if (c == 0) continue;
        BigRational abs_c = c < 0 ? BigRational(-c) : c;
        if (first) {
            if (c < 0) out << "-";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        if (k == 0) {
            out << abs_c.get_str();
        } else {
            if (abs_c != 1) out << abs_c.get_str() << "*";
            out << "p";
            if (k > 1) out << "^" << k;
        }
    }
    return out.str();
}

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() { while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos; }
    bool eof() { skip_ws(); return pos >= s.size(); }
    char peek() { skip_ws(); return pos < s.size() ? s[pos] : '\0'; }
    bool accept(char c) {
        if (peek() == c) { ++pos; return true; }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw std::invalid_argument("polynomial parse error at position " +
                                                    std::to_string(pos) + " in: " + s);
    }

    BigInt parse_integer() {
        skip_ws();
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw std::invalid_argument("expected integer in: " + s);
        return BigInt(s.substr(start, pos - start));
    }

    // term := '(' sum ')' | [integer ['*']] ['p' ['^' integer]]
    Polynomial parse_term(int sign) {
        if (accept('(')) {
            Polynomial inner = parse_sum();
            expect(')');
            return sign < 0 ? -inner : inner;
        }
        skip_ws();
        BigRational coeff(sign);
        bool have_coeff = false;
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            coeff *= BigRational(parse_integer());
            have_coeff = true;
            accept('*');
        }
        if (accept('p')) {
            unsigned long k = 1;
            if (accept('^')) {
                BigInt e = parse_integer();
                if (e < 0) throw std::invalid_argument("negative exponent in polynomial: " + s);
                k = e.get_ui();
            }
            return Polynomial::monomial(coeff, k);
        }
        if (!have_coeff) throw std::invalid_argument("expected term in: " + s);
        return Polynomial(coeff);
    }

    // sum := ['-'] term (('+'|'-') term)*
    Polynomial parse_sum() {
        int sign = 1;
        if (accept('-')) sign = -1;
        else accept('+');
        Polynomial acc = parse_term(sign);
        while (true) {
            char c = peek();
            if (c == '+') { ++pos; acc = acc + parse_term(1); }
            else if (c == '-') { ++pos; acc = acc + parse_term(-1); }
            else break;
        }
        return acc;
    }

};

}  // namespace

Polynomial parse_polynomial(const std::string& text) {
    Parser p(text);
    Polynomial r = p.parse_sum();
    if (!p.eof()) throw std::invalid_argument("trailing characters in polynomial: " + text);
    return r;
}

}  // namespace qfiso
