#include "qfiso/qp.hpp"

#include <omp.h>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include "qfiso/rng.hpp"

namespace qfiso {

ZForm::ZForm(long n, std::vector<BigInt> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
    if (n < 0) throw std::invalid_argument("ZForm: negative dimension");
    if (coeffs_.size() != static_cast<size_t>(n * (n + 1) / 2))
        throw std::invalid_argument("ZForm: expected n(n+1)/2 coefficients");
}

std::string ZForm::to_literal() const {
    std::ostringstream out;
    out << "n=" << n_ << "; [";
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out << ",";
        out << coeffs_[i].get_str();
    }
    out << "]";
    return out.str();
}

namespace {

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

}  // namespace

ZForm parse_zform_literal(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) parts.push_back(strip(item));
    if (parts.size() != 2 || parts[0].rfind("n=", 0) != 0)
        throw std::invalid_argument("form literal must be 'n=<dim>; [a11,...]'");
    long n = std::stol(parts[0].substr(2));
    std::string list = parts[1];
    if (list.empty() || list.front() != '[' || list.back() != ']')
        throw std::invalid_argument("form literal coefficients must be bracketed");
    std::vector<BigInt> coeffs;
    std::stringstream cs(list.substr(1, list.size() - 2));
    while (std::getline(cs, item, ',')) {
        item = strip(item);
        if (item.empty()) continue;
        coeffs.emplace_back(item);
    }
    return ZForm(n, std::move(coeffs));
}

long least_nonresidue(long p) {
    for (long u = 2; u < p; ++u)
        if (legendre(BigInt(u), p) == -1) return u;
    throw std::invalid_argument("least_nonresidue: p must be an odd prime");
}

std::string SquareClass::to_string() const {
    if (p == 2) return std::to_string(rep);
    long u = least_nonresidue(p);
    if (rep == 1) return "1";
    if (rep == u) return "u";
    if (rep == p) return "p";
    return "u*p";
}

SquareClass square_class(const BigRational& a, long p) {
    if (a == 0) throw std::invalid_argument("square_class of zero");
    if (!is_prime(p)) throw std::invalid_argument("square_class: p must be prime");
    BigInt nu, du;
    long v = remove_prime(a.get_num(), p, nu) - remove_prime(a.get_den(), p, du);
    bool odd_val = (v % 2 + 2) % 2 == 1;
    if (p == 2) {
        // the unit part mod 8; an odd number is its own inverse mod 8
        long unit = static_cast<long>(mpz_fdiv_ui(nu.get_mpz_t(), 8) *
                                      mpz_fdiv_ui(du.get_mpz_t(), 8) % 8);
        long rep;
        switch (unit) {
            case 1: rep = 1; break;
            case 3: rep = -5; break;
            case 5: rep = 5; break;
            case 7: rep = -1; break;
            default: throw std::logic_error("even unit part");
        }
        if (odd_val) rep *= 2;
        return SquareClass{2, rep};
    }
    int leg = legendre(nu, p) * legendre(du, p);
    long rep = leg == 1 ? 1 : least_nonresidue(p);
    if (odd_val) rep *= p;
    return SquareClass{p, rep};
}

std::vector<SquareClass> square_class_representatives(long p) {
    std::vector<SquareClass> out;
    if (p == 2) {
        for (long r : {1, -1, 5, -5, 2, -2, 10, -10}) out.push_back(SquareClass{2, r});
    } else {
        long u = least_nonresidue(p);
        for (long r : {1L, u, p, u * p}) out.push_back(SquareClass{p, r});
    }
    return out;
}

int hilbert_symbol(const BigRational& a, const BigRational& b, long p) {
    if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol of zero");
    if (!is_prime(p)) throw std::invalid_argument("hilbert_symbol: p must be prime");
    BigInt ua_num, ua_den, ub_num, ub_den;
    long alpha = remove_prime(a.get_num(), p, ua_num) - remove_prime(a.get_den(), p, ua_den);
    long beta = remove_prime(b.get_num(), p, ub_num) - remove_prime(b.get_den(), p, ub_den);
    bool ao = (alpha % 2 + 2) % 2 == 1;
    bool bo = (beta % 2 + 2) % 2 == 1;
    if (p == 2) {
        auto unit8 = [](const BigInt& num, const BigInt& den) {
            return static_cast<long>(mpz_fdiv_ui(num.get_mpz_t(), 8) *
                                     mpz_fdiv_ui(den.get_mpz_t(), 8) % 8);
        };
        long u = unit8(ua_num, ua_den), w = unit8(ub_num, ub_den);
        auto eps = [](long x) { return ((x - 1) / 2) % 2; };    // (x-1)/2 mod 2
        auto omega = [](long x) { return (x * x - 1) / 8 % 2; };  // (x^2-1)/8 mod 2
        long e = eps(u) * eps(w) + (ao ? omega(w) : 0) + (bo ? omega(u) : 0);
        return e % 2 == 0 ? 1 : -1;
    }
    int leg_u = legendre(ua_num, p) * legendre(ua_den, p);
    int leg_w = legendre(ub_num, p) * legendre(ub_den, p);
    int sym = 1;
    if (ao && bo) sym *= legendre(BigInt(-1), p);
    if (bo) sym *= leg_u;
    if (ao) sym *= leg_w;
    return sym;
}

int hilbert_symbol_by_search(const BigRational& a, const BigRational& b, long p) {
    if (a == 0 || b == 0) throw std::invalid_argument("hilbert search of zero");
    // clear denominators by squares; solvability is unchanged
    BigInt ai = a.get_num() * a.get_den();
    BigInt bi = b.get_num() * b.get_den();
    long v = std::max(valuation(ai, p), valuation(bi, p));
    long e = 2 * v + 3;
    BigInt modulus = pow_int(p, static_cast<unsigned long>(e));
    if (modulus > 20000)
        throw std::invalid_argument("hilbert search modulus too large: p^" + std::to_string(e));
    const long M = static_cast<long>(modulus.get_si());
    auto reduce = [&](const BigInt& x) {
        return static_cast<long>(mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(M)));
    };
    const long ra = reduce(ai), rb = reduce(bi);
    std::vector<bool> is_square(static_cast<size_t>(M), false);
    for (long z = 0; z < M; ++z)
        is_square[static_cast<size_t>(z * z % M)] = true;
    std::vector<long> ax2(static_cast<size_t>(M)), by2(static_cast<size_t>(M));
    for (long x = 0; x < M; ++x) {
        ax2[static_cast<size_t>(x)] = static_cast<long>(
            static_cast<unsigned long long>(ra) * static_cast<unsigned long long>(x * x % M) % M);
        by2[static_cast<size_t>(x)] = static_cast<long>(
            static_cast<unsigned long long>(rb) * static_cast<unsigned long long>(x * x % M) % M);
    }
    // a primitive zero needs x or y to be a unit: if both are divisible by p,
    // z^2 = ax^2 + by^2 vanishes mod p^2, forcing p | z
    for (long x = 0; x < M; ++x) {
        bool x_unit = x % p != 0;
        for (long y = 0; y < M; ++y) {
            if (!x_unit && y % p == 0) continue;
            long t = ax2[static_cast<size_t>(x)] + by2[static_cast<size_t>(y)];
            if (t >= M) t -= M;
            if (is_square[static_cast<size_t>(t)]) return 1;
        }
    }
    return -1;
}

Diagonalization diagonalize_gram(std::vector<std::vector<BigRational>> g) {
    const long n = static_cast<long>(g.size());
    Diagonalization out;
    for (long t = 0; t < n; ++t) {
        if (g[t][t] == 0) {
            long pivot = -1;
            for (long j = t + 1; j < n; ++j)
                if (g[j][j] != 0) { pivot = j; break; }
            if (pivot >= 0) {
                std::swap(g[t], g[pivot]);
                for (long r = 0; r < n; ++r) std::swap(g[r][t], g[r][pivot]);
            } else {
                // all remaining diagonal entries vanish; use an off-diagonal
                // partner via x_t <- x_t + x_j
                long pj = -1, pi2 = -1;
                for (long i = t; i < n && pj < 0; ++i)
                    for (long j = i + 1; j < n; ++j)
                        if (g[i][j] != 0) { pi2 = i; pj = j; break; }
                if (pj < 0) {
                    out.radical_dim = n - t;
                    return out;
                }
                if (pi2 != t) {
                    std::swap(g[t], g[pi2]);
                    for (long r = 0; r < n; ++r) std::swap(g[r][t], g[r][pi2]);
                }
                for (long r = 0; r < n; ++r) g[t][r] += g[pj][r];
                for (long r = 0; r < n; ++r) g[r][t] += g[r][pj];
            }
        }
        const BigRational d = g[t][t];
        for (long i = t + 1; i < n; ++i) {
            if (g[i][t] == 0) continue;
            BigRational f = g[i][t] / d;
            for (long j = t; j < n; ++j) g[i][j] -= f * g[t][j];
            for (long j = t; j < n; ++j) g[j][i] = g[i][j];
        }
        out.diag.push_back(d);
    }
    return out;
}

Diagonalization diagonalize(const ZForm& q) {
    const long n = q.n();
    std::vector<std::vector<BigRational>> g(static_cast<size_t>(n),
                                            std::vector<BigRational>(static_cast<size_t>(n)));
    const BigRational half(1, 2);
    for (long i = 0; i < n; ++i) {
        g[i][i] = BigRational(q.coeff(i, i));
        for (long j = i + 1; j < n; ++j) g[i][j] = g[j][i] = BigRational(q.coeff(i, j)) * half;
    }
    return diagonalize_gram(std::move(g));
}

int hasse_invariant(const std::vector<BigRational>& diag, long p) {
    for (const auto& d : diag)
        if (d == 0) throw std::invalid_argument("hasse_invariant: zero diagonal entry");
    int c = 1;
    for (size_t i = 0; i < diag.size(); ++i)
        for (size_t j = i + 1; j < diag.size(); ++j) c *= hilbert_symbol(diag[i], diag[j], p);
    return c;
}

QpInvariants invariants_from_diagonal(const std::vector<BigRational>& diag, long p) {
    QpInvariants inv;
    inv.rank = static_cast<long>(diag.size());
    BigRational det(1);
    for (const auto& d : diag) det *= d;
    inv.det_class = inv.rank > 0 ? square_class(det, p) : SquareClass{p, 1};
    inv.hasse = hasse_invariant(diag, p);
    return inv;
}

QpInvariants qp_invariants(const ZForm& q, long p) {
    return invariants_from_diagonal(diagonalize(q).diag, p);
}

namespace {

bool isotropic_from_invariants(long rank, const SquareClass& d, int c, long p) {
    if (rank <= 1) return false;
    if (rank >= 5) return true;
    if (rank == 2) return d == square_class(-1, p);
    if (rank == 3) return c == hilbert_symbol(BigRational(-1), BigRational(-d.rep), p);
    // rank 4: anisotropic exactly when d ~ 1 and c = -(-1,-1)
    return !(d == SquareClass{p, 1} && c == -hilbert_symbol(-1, -1, p));
}

}  // namespace

long witt_index(const QpInvariants& inv, long p) {
    long rank = inv.rank;
    SquareClass d = inv.det_class;
    int c = inv.hasse;
    long w = 0;
    while (rank >= 2 && isotropic_from_invariants(rank, d, c, p)) {
        // peel a hyperbolic plane: det' = -det, c' = c * (-1, det')
        d = square_class(BigRational(-d.rep), p);
        c *= hilbert_symbol(BigRational(-1), BigRational(d.rep), p);
        rank -= 2;
        ++w;
    }
    return w;
}

bool k_isotropic(const ZForm& q, long p, long k) {
    if (k <= 0) return true;
    if (k > q.n()) return false;
    Diagonalization dz = diagonalize(q);
    if (dz.radical_dim >= k) return true;
    QpInvariants inv = invariants_from_diagonal(dz.diag, p);
    return dz.radical_dim + witt_index(inv, p) >= k;
}

long default_digits(long p) { return p <= 3 ? 8 : 5; }

std::string McRhoResult::to_csv_row() const {
    std::ostringstream out;
    out << p << "," << k << "," << n << "," << digits << "," << samples << "," << seed << ","
        << estimate << "," << stderr_;
    return out.str();
}

namespace {

uint64_t checked_pow_u64(long p, long e) {
    unsigned long long r = 1;
    for (long i = 0; i < e; ++i) {
        if (r > (1ULL << 62) / static_cast<unsigned long long>(p))
            throw std::invalid_argument("p^digits too large for sampling");
        r *= static_cast<unsigned long long>(p);
    }
    return r;
}

bool sample_is_k_isotropic(long p, long k, long n, uint64_t bound, uint64_t seed,
                           uint64_t index) {
    SampleRng rng(seed, index);
    const long d = n * (n + 1) / 2;
    std::vector<BigInt> coeffs(static_cast<size_t>(d));
    for (long i = 0; i < d; ++i)
        coeffs[static_cast<size_t>(i)] = BigInt(static_cast<unsigned long>(rng.bounded(bound)));
    return k_isotropic(ZForm(n, std::move(coeffs)), p, k);
}

McRhoResult finalize_mc(long p, long k, long n, long digits, unsigned long long samples,
                        uint64_t seed, unsigned long long hits) {
    McRhoResult r;
    r.p = p;
    r.k = k;
    r.n = n;
    r.digits = digits;
    r.samples = samples;
    r.seed = seed;
    r.hits = hits;
    r.estimate = static_cast<double>(hits) / static_cast<double>(samples);
    r.stderr_ = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(samples));
    return r;
}

}  // namespace

McRhoResult mc_rho_serial(long p, long k, long n, long digits, unsigned long long samples,
                          uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("mc_rho: need samples >= 1");
    if (digits < 2) throw std::invalid_argument("mc_rho: need digits >= 2");
    uint64_t bound = checked_pow_u64(p, digits);
    unsigned long long hits = 0;
    for (unsigned long long i = 0; i < samples; ++i)
        if (sample_is_k_isotropic(p, k, n, bound, seed, i)) ++hits;
    return finalize_mc(p, k, n, digits, samples, seed, hits);
}

McRhoResult mc_rho(long p, long k, long n, long digits, unsigned long long samples,
                   uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("mc_rho: need samples >= 1");
    if (digits < 2) throw std::invalid_argument("mc_rho: need digits >= 2");
    uint64_t bound = checked_pow_u64(p, digits);
    unsigned long long hits = 0;
    #pragma omp parallel for schedule(static) reduction(+ : hits)
    for (long long i = 0; i < static_cast<long long>(samples); ++i)
        if (sample_is_k_isotropic(p, k, n, bound, seed, static_cast<uint64_t>(i))) ++hits;
    return finalize_mc(p, k, n, digits, samples, seed, hits);
}

}  // namespace qfiso
