#include "qfiso/densities.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace qfiso {

namespace {

// p^a - p^b as a polynomial
Polynomial p_pow_diff(long a, long b) {
    return Polynomial::monomial(BigRational(1), static_cast<unsigned long>(a)) +
           Polynomial::monomial(BigRational(-1), static_cast<unsigned long>(b));
}

Polynomial p_pow(long a) {
    return Polynomial::monomial(BigRational(1), static_cast<unsigned long>(a));
}

RationalFunction pi0(long l, long m, long n) {
    if (n < 0 || l < 0 || m < 0 || m > 2) return RationalFunction();
    if (l == 0 && m == 0)
        return RationalFunction(Polynomial(1), p_pow(n * (n + 1) / 2));
    const long r = n - 2 * l - m;
    if (r < 0) return RationalFunction();
    Polynomial num(1), den = p_pow(n * (n + 1) / 2);
    for (long i = 0; i < r; ++i) {
        num = num * p_pow_diff(n, i);
        den = den * p_pow_diff(r, i);
    }
    if (m == 0) {
        for (long i = 0; i < 2 * l; ++i) num = num * p_pow_diff(2 * l, i);
        den = den * (p_pow(l * (l - 1)) * BigRational(2));
        den = den * (p_pow(l) - Polynomial(1));
        for (long i = 1; i <= l - 1; ++i) den = den * p_pow_diff(2 * i, 0);
    } else if (m == 1) {
        for (long i = 0; i <= 2 * l; ++i) num = num * p_pow_diff(2 * l + 1, i);
        den = den * p_pow(l * l);
        for (long i = 1; i <= l; ++i) den = den * p_pow_diff(2 * i, 0);
    } else {
        for (long i = 0; i <= 2 * l + 1; ++i) num = num * p_pow_diff(2 * l + 2, i);
        den = den * (p_pow(l * (l + 1)) * BigRational(2));
        den = den * (p_pow(l + 1) + Polynomial(1));
        for (long i = 1; i <= l; ++i) den = den * p_pow_diff(2 * i, 0);
    }
    return RationalFunction(num, den);
}

const RationalFunction kHalf{BigRational(1, 2)};

}  // namespace

RationalFunction pi(int i, long l, long m, long n) {
    switch (i) {
        case 0:
            return pi0(l, m, n);
        case 1:
            if (m == 0) return pi0(l - 1, 1, n - 1) * kHalf;
            if (m == 1) return pi0(l, 0, n - 1) + pi0(l - 1, 2, n - 1);
            if (m == 2) return pi0(l, 1, n - 1) * kHalf;
            return RationalFunction();
        case 2:
            if (m == 0) return pi0(l - 2, 2, n - 2);
            if (m == 1) return pi0(l - 1, 1, n - 2);
            if (m == 2) return pi0(l, 0, n - 2);
            return RationalFunction();
        default:
            throw std::invalid_argument("pi: index must be 0, 1 or 2");
    }
}

RationalFunction lambda_rank(long r, long n) {
    if (r < 0 || r > n) throw std::invalid_argument("lambda_rank: need 0 <= r <= n");
    if (r % 2 == 0) return pi0(r / 2, 0, n) + pi0(r / 2 - 1, 2, n);
    return pi0((r - 1) / 2, 1, n);
}

namespace {

void require_phi_domain(int i, int j, long n) {
    if (i < 0 || i > 2 || j < 0 || j > 2)
        throw std::invalid_argument("indices must lie in {0,1,2}");
    if (n < i + j) throw std::invalid_argument("need n >= i + j");
}

// prod_{r=1}^{d} (p^{2r-1} - 1)/(p^{2r} - 1)
void odd_even_product(long d, Polynomial& num, Polynomial& den) {
    num = Polynomial(1);
    den = Polynomial(1);
    for (long r = 1; r <= d; ++r) {
        num = num * p_pow_diff(2 * r - 1, 0);
        den = den * p_pow_diff(2 * r, 0);
    }
}

}  // namespace

RationalFunction phi(int i, int j, long n) {
    require_phi_domain(i, j, n);
    const long d = (n + 1 - i - j) / 2;
    Polynomial lead = Polynomial::monomial(BigRational(j - 1), static_cast<unsigned long>(d)) +
                      Polynomial(BigRational(i - 1));
    Polynomial num, den;
    odd_even_product(d, num, den);
    return RationalFunction(lead * num, den);
}

RationalFunction psi(int i, int j, long n) {
    require_phi_domain(i, j, n);
    const long d = (n + 1 - i - j) / 2;
    Polynomial a = Polynomial::monomial(BigRational(j - 1), static_cast<unsigned long>(d)) +
                   Polynomial(BigRational(i - 1));
    Polynomial b = Polynomial::monomial(BigRational(j - 1), static_cast<unsigned long>(d + 2)) +
                   Polynomial(BigRational(-(i - 1)));
    Polynomial num = a * b;
    if (i == 1) num = num - p_pow(1);
    if (j == 1) num = num + p_pow(2 * d + 1);
    Polynomial den = (p_pow(1) + Polynomial(1)) * p_pow_diff(2 * d + 1, 0);
    return RationalFunction(num, den);
}

RationalFunction delta_closed(int i, int j, long k, long n) {
    require_phi_domain(i, j, n);
    if (k < 0) throw std::invalid_argument("delta_closed: k must be >= 0");
    const RationalFunction one(1);
    const RationalFunction quarter{BigRational(1, 4)};
    if (n <= 2 * k - 1) return RationalFunction();
    if (n == 2 * k) return quarter * (-phi(i, j, n) + psi(i, j, n));
    if (n == 2 * k + 1) return kHalf * (one - phi(i, j, n));
    if (n == 2 * k + 2) return one - quarter * (phi(i, j, n) + psi(i, j, n));
    return one;
}

RationalFunction rho_closed(long k, long n) {
    if (k < 0 || n < 0) throw std::invalid_argument("rho_closed: need k, n >= 0");
    if (k == 0) return RationalFunction(1);
    const RationalFunction one(1);
    if (n <= 2 * k - 1) return RationalFunction();
    if (n >= 2 * k + 3) return one;
    if (n == 2 * k + 1) {
        Polynomial num, den;
        odd_even_product(k + 1, num, den);
        RationalFunction prod(num, den);
        RationalFunction lead(p_pow(k + 1) + Polynomial(1));
        return kHalf + kHalf * lead * prod;
    }
    if (n == 2 * k) {
        Polynomial num, den;
        odd_even_product(k, num, den);
        RationalFunction prod(num, den);
        RationalFunction frac(p_pow_diff(k + 2, 0),
                              (p_pow(1) + Polynomial(1)) * p_pow_diff(2 * k + 1, 0));
        RationalFunction lead(p_pow(k) + Polynomial(1));
        return RationalFunction{BigRational(1, 4)} * lead * (frac + prod);
    }
    // n == 2k + 2
    Polynomial num, den;
    odd_even_product(k + 1, num, den);
    RationalFunction prod(num, den);
    RationalFunction frac(p_pow_diff(k + 3, 0),
                          (p_pow(1) + Polynomial(1)) * p_pow_diff(2 * k + 3, 0));
    RationalFunction lead(p_pow(k + 1) + Polynomial(1));
    return one - RationalFunction{BigRational(1, 4)} * lead * (frac - prod);
}

const RationalFunction& DensityTable::pi_cached(int i, long l, long m, long n) {
    auto key = std::make_tuple(i, l, m, n);
    auto it = pi_.find(key);
    if (it == pi_.end()) it = pi_.emplace(key, pi(i, l, m, n)).first;
    return it->second;
}

void DensityTable::store(const DeltaKey& key, RationalFunction value) {
    for (long q : {2, 3, 5, 7, 11}) {
        BigRational v = value.eval(BigRational(q));
        if (v < 0 || v > 1)
            throw std::logic_error("density table value escapes [0,1] at p=" + std::to_string(q));
    }
    memo_[key] = std::move(value);
}

RationalFunction DensityTable::delta_zero_l(int i, long k, int j, long n) {
    if (n < i + j) throw std::invalid_argument("delta: need n >= i + j");
    if (k == 0) return RationalFunction(1);
    DeltaKey key{i, k, 0, j, n};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    if (n == i + j) {
        RationalFunction zero;
        store(key, zero);
        return zero;
    }
    solve_level(k, n);
    return memo_.at(key);
}

void DensityTable::solve_level(long k, long n) {
    // Unknowns x_{i,j} = delta_i(k; 0, j, n) for i+j <= min(4, n), resolved
    // in decreasing order of i+j: the only coupling at each stage is between
    // x_{i,j} and its partner x_{j,i}.
    auto rhs_known = [&](int i, int j) {
        RationalFunction acc;
        const long nu = n - j;
        for (long l = 1; 2 * l <= nu; ++l) {
            for (long m = 0; m <= 2; ++m) {
                const RationalFunction& coef = pi_cached(i, l, m, nu);
                if (coef.is_zero()) continue;
                if (k <= l) {
                    acc += coef;
                } else {
                    acc += coef * delta_zero_l(j, k - l, static_cast<int>(m), n - 2 * l);
                }
            }
        }
        for (long m = 0; m <= 2; ++m) {
            if (m == i) continue;  // partner term handled by the solver
            const RationalFunction& coef = pi_cached(i, 0, m, nu);
            if (coef.is_zero()) continue;
            auto it = memo_.find(DeltaKey{j, k, 0, m, n});
            if (it == memo_.end())
                throw std::logic_error("delta solve order violated");
            acc += coef * it->second;
        }
        return acc;
    };

    for (int s = 4; s >= 0; --s) {
        for (int i = std::max(0, s - 2); i <= 2 && i <= s; ++i) {
            int j = s - i;
            if (i + j > n) continue;
            DeltaKey key{i, k, 0, j, n};
            if (memo_.count(key)) continue;
            if (n == s) {
                store(key, RationalFunction());  // k >= 1 here
                continue;
            }
            if (i == j) {
                RationalFunction c = pi_cached(i, 0, i, n - j);
                RationalFunction denom = RationalFunction(1) - c;
                if (denom.is_zero()) throw std::logic_error("singular 1x1 delta system");
                store(key, rhs_known(i, j) / denom);
            } else if (i < j) {
                DeltaKey key_ji{j, k, 0, i, n};
                RationalFunction c_ij = pi_cached(i, 0, i, n - j);
                RationalFunction c_ji = pi_cached(j, 0, j, n - i);
                RationalFunction det = RationalFunction(1) - c_ij * c_ji;
                if (det.is_zero()) throw std::logic_error("singular 2x2 delta system");
                RationalFunction r_ij = rhs_known(i, j);
                RationalFunction r_ji = rhs_known(j, i);
                store(key, (r_ij + c_ij * r_ji) / det);
                store(key_ji, (r_ji + c_ji * r_ij) / det);
            }
        }
    }
}

RationalFunction DensityTable::delta(const DeltaKey& key) {
    if (key.i < 0 || key.i > 2 || key.m < 0 || key.m > 2 || key.l < 0 || key.k < 0 ||
        2 * key.l + key.m > key.n)
        throw std::invalid_argument("invalid delta key");
    if (key.n - 2 * key.l < key.i + key.m)
        throw std::invalid_argument("delta key conditions on an empty event");
    if (key.k <= key.l) return RationalFunction(1);
    return delta_zero_l(key.i, key.k - key.l, static_cast<int>(key.m), key.n - 2 * key.l);
}

RationalFunction delta_recursive(const DeltaKey& key, DensityTable& table) {
    return table.delta(key);
}

namespace {

// pi_n = prod_{i=1}^n (1 - p^{-i}) as a rational function
RationalFunction unit_euler(long n) {
    Polynomial num(1), den(1);
    for (long i = 1; i <= n; ++i) {
        num = num * p_pow_diff(i, 0);
        den = den * p_pow(i);
    }
    return RationalFunction(num, den);
}

// A(n) = prod (p^{2i} - p)/(p^{2i} - 1), B(n) = prod (p^{2i-1} - 1)/(p^{2i} - 1)
RationalFunction big_a(long n) {
    Polynomial num(1), den(1);
    for (long i = 1; i <= (n + 1) / 2; ++i) {
        num = num * p_pow_diff(2 * i, 1);
        den = den * p_pow_diff(2 * i, 0);
    }
    return RationalFunction(num, den);
}

RationalFunction big_b(long n) {
    Polynomial num(1), den(1);
    for (long i = 1; i <= (n + 1) / 2; ++i) {
        num = num * p_pow_diff(2 * i - 1, 0);
        den = den * p_pow_diff(2 * i, 0);
    }
    return RationalFunction(num, den);
}

std::string format_params(std::initializer_list<std::pair<const char*, long>> kv) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [k, v] : kv) {
        if (!first) out << " ";
        out << k << "=" << v;
        first = false;
    }
    return out.str();
}

// lhs of the rank-weighted identity, as a function of the substituted x
RationalFunction id1_lhs(long n, const RationalFunction& x) {
    RationalFunction acc;
    for (long r = 0; r <= n; ++r) {
        RationalFunction lam = lambda_rank(r, n);
        if ((n - r) % 2 == 0) {
            RationalFunction frac =
                (x - RationalFunction::p_power(r)) /
                (RationalFunction::p_power(n + 1) - RationalFunction::p_power(r));
            acc += lam * frac;
        } else {
            acc += lam;
        }
    }
    return acc;
}

RationalFunction id1_rhs(long n, const RationalFunction& x) {
    if (n % 2 == 0)
        return (x - RationalFunction(1)) /
               (RationalFunction::p_power(n + 1) - RationalFunction(1));
    return x / RationalFunction::p_power(n + 1);
}

RationalFunction id2_lhs(long n, const RationalFunction& x, const RationalFunction& y,
                         const RationalFunction& z) {
    RationalFunction acc;
    for (long r = 0; r <= n; ++r) {
        RationalFunction lam = lambda_rank(r, n);
        RationalFunction b = big_b(n - r);
        if ((n - r) % 2 == 0)
            acc += lam * b * (x + y * RationalFunction::p_power(n - r));
        else
            acc += lam * b * (x + z * RationalFunction::p_power(n + 1 - r));
    }
    return acc;
}

RationalFunction id2_rhs(long n, const RationalFunction& x, const RationalFunction& y,
                         const RationalFunction& z) {
    const RationalFunction one(1);
    if (n % 2 == 0)
        return (x + y + (one - RationalFunction::p_power(-n)) * z) * big_a(n);
    return (x + (one - RationalFunction::p_power(-(n + 1))) * y + z) * big_a(n);
}

}  // namespace

AppendixIdentity appendix_identity_from_name(const std::string& name) {
    if (name == "id1") return AppendixIdentity::id1;
    if (name == "os") return AppendixIdentity::os;
    if (name == "id2") return AppendixIdentity::id2;
    if (name == "twoid") return AppendixIdentity::twoid;
    if (name == "phipsi") return AppendixIdentity::phipsi;
    throw std::invalid_argument("unknown identity: " + name);
}

std::vector<CheckResult> verify_appendix_identity(AppendixIdentity which, long n_max) {
    std::vector<CheckResult> results;
    switch (which) {
        case AppendixIdentity::id1:
            for (long n = 1; n <= n_max; ++n) {
                // both sides are affine-linear in x, so two distinct
                // substitutions pin the identity
                bool ok = true;
                for (const RationalFunction& x :
                     {RationalFunction::p_power(n + 1), RationalFunction(1)}) {
                    ok = ok && id1_lhs(n, x) == id1_rhs(n, x);
                }
                results.push_back({"id1", format_params({{"n", n}}), ok});
            }
            break;
        case AppendixIdentity::os:
            for (long m = 0; m <= n_max; ++m)
                for (long n = m; n <= n_max; ++n) {
                    RationalFunction acc;
                    for (long r = 0; r <= std::min(m, n); ++r) {
                        RationalFunction term = unit_euler(m) * unit_euler(n) /
                                                (RationalFunction::p_power((m - r) * (n - r)) *
                                                 unit_euler(r) * unit_euler(m - r) *
                                                 unit_euler(n - r));
                        acc += term;
                    }
                    results.push_back(
                        {"os", format_params({{"m", m}, {"n", n}}), acc == RationalFunction(1)});
                }
            break;
        case AppendixIdentity::id2:
            for (long n = 1; n <= n_max; ++n) {
                const RationalFunction one(1), zero, minus(-1);
                const std::array<std::array<RationalFunction, 3>, 5> span = {{
                    {one, zero, zero},
                    {zero, one, zero},
                    {zero, zero, one},
                    {one, minus, zero},
                    {one, zero, minus},
                }};
                bool ok = true;
                for (const auto& [x, y, z] : span)
                    ok = ok && id2_lhs(n, x, y, z) == id2_rhs(n, x, y, z);
                results.push_back({"id2", format_params({{"n", n}}), ok});
            }
            break;
        case AppendixIdentity::twoid:
            for (long n = 0; n <= n_max; ++n) {
                RationalFunction even_sum, odd_sum;
                for (long ell = 0; ell <= n; ++ell) {
                    RationalFunction term = lambda_rank(n - ell, n) * big_b(ell);
                    if (ell % 2 == 0)
                        even_sum += term * RationalFunction::p_power(ell);
                    else
                        odd_sum += term * RationalFunction::p_power(ell + 1);
                }
                const RationalFunction one(1);
                RationalFunction a = big_a(n);
                RationalFunction even_rhs =
                    n % 2 == 0 ? a : (one - RationalFunction::p_power(-(n + 1))) * a;
                RationalFunction odd_rhs =
                    n % 2 == 0 ? (one - RationalFunction::p_power(-n)) * a : a;
                results.push_back({"twoid", format_params({{"n", n}, {"parity", 0}}),
                                   even_sum == even_rhs});
                results.push_back({"twoid", format_params({{"n", n}, {"parity", 1}}),
                                   odd_sum == odd_rhs});
            }
            break;
        case AppendixIdentity::phipsi:
            for (int i = 0; i <= 2; ++i)
                for (int j = 0; j <= 2; ++j)
                    for (long n = i + j; n <= n_max; ++n) {
                        RationalFunction phi_sum, psi_sum;
                        for (long ell = 0; 2 * ell <= n - j; ++ell)
                            for (long m = 0; m <= 2; ++m) {
                                RationalFunction coef = pi(i, ell, m, n - j);
                                if (coef.is_zero()) continue;
                                phi_sum += coef * phi(j, static_cast<int>(m), n - 2 * ell);
                                psi_sum += coef * psi(j, static_cast<int>(m), n - 2 * ell);
                            }
                        bool ok = phi_sum == phi(i, j, n);
                        if (n % 2 == 0) ok = ok && psi_sum == psi(i, j, n);
                        results.push_back(
                            {"phipsi", format_params({{"i", i}, {"j", j}, {"n", n}}), ok});
                    }
            break;
    }
    return results;
}

std::vector<CheckResult> verify_symmetry(long k, long n_max) {
    std::vector<CheckResult> results;
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 2; ++j)
            for (long n = i + j; n <= n_max; ++n) {
                bool ok = delta_closed(i, j, k, n).recip_subst() == delta_closed(j, i, k, n);
                results.push_back(
                    {"symmetry", format_params({{"i", i}, {"j", j}, {"k", k}, {"n", n}}), ok});
            }
    return results;
}

}  // namespace qfiso
