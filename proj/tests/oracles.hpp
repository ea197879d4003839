#pragma once

// Test-only oracles, independent of the library implementation paths they
// cross-check.

#include <random>
#include <set>
#include <vector>
#include "qfiso/fpforms.hpp"
#include "qfiso/qp.hpp"
#include "qfiso/rational.hpp"

namespace qfiso::testing {

// #zeros by direct enumeration of all p^n vectors
inline BigInt naive_count_zeros(const FpForm& q) {
    const long p = q.p(), n = q.n();
    std::vector<uint32_t> x(static_cast<size_t>(n), 0);
    BigInt count(0);
    while (true) {
        if (q.value(x) == 0) ++count;
        long i = 0;
        while (i < n && ++x[static_cast<size_t>(i)] == static_cast<uint32_t>(p)) {
            x[static_cast<size_t>(i)] = 0;
            ++i;
        }
        if (i == n) break;
    }
    return count;
}

inline uint32_t det_mod_p(std::vector<std::vector<uint32_t>> m, long p) {
    const size_t n = m.size();
    auto inv = [&](uint32_t a) {
        uint32_t r = 1;
        for (long e = p - 2; e > 0; e >>= 1) {
            if (e & 1) r = static_cast<uint32_t>(1ULL * r * a % p);
            a = static_cast<uint32_t>(1ULL * a * a % p);
        }
        return r;
    };
    unsigned long long det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = det * (p - 1) % p;
        }
        det = det * m[c][c] % p;
        uint32_t ic = inv(m[c][c]);
        for (size_t r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            uint32_t f = static_cast<uint32_t>(1ULL * m[r][c] * ic % p);
            for (size_t j = c; j < n; ++j)
                m[r][j] = static_cast<uint32_t>((m[r][j] + 1ULL * (p - f) * m[c][j]) % p);
        }
    }
    return static_cast<uint32_t>(det);
}

inline std::vector<uint32_t> random_gl_matrix(long n, long p, std::mt19937_64& gen) {
    std::uniform_int_distribution<uint32_t> dist(0, static_cast<uint32_t>(p - 1));
    while (true) {
        std::vector<uint32_t> t(static_cast<size_t>(n * n));
        for (auto& e : t) e = dist(gen);
        std::vector<std::vector<uint32_t>> m(static_cast<size_t>(n),
                                             std::vector<uint32_t>(static_cast<size_t>(n)));
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j)
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    t[static_cast<size_t>(i * n + j)];
        if (det_mod_p(m, p) != 0) return t;
    }
}

// stabiliser order of Q in GL_n(F_p) by brute force over all matrices
inline BigInt brute_stabilizer_order(const FpForm& q) {
    const long n = q.n(), p = q.p();
    const long cells = n * n;
    std::vector<uint32_t> t(static_cast<size_t>(cells), 0);
    BigInt count(0);
    while (true) {
        std::vector<std::vector<uint32_t>> m(static_cast<size_t>(n),
                                             std::vector<uint32_t>(static_cast<size_t>(n)));
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j)
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    t[static_cast<size_t>(i * n + j)];
        if (det_mod_p(m, p) != 0 && substitute(q, t).coeffs() == q.coeffs()) ++count;
        long i = 0;
        while (i < cells && ++t[static_cast<size_t>(i)] == static_cast<uint32_t>(p)) {
            t[static_cast<size_t>(i)] = 0;
            ++i;
        }
        if (i == cells) break;
    }
    return count;
}

// number of r-dimensional subspaces of F_p^n by enumerating all r x n
// matrices and deduplicating their reduced row-echelon forms
inline long brute_subspace_count(long r, long n, long p) {
    const long cells = r * n;
    std::vector<uint32_t> entries(static_cast<size_t>(cells), 0);
    std::set<std::vector<uint32_t>> canon;
    auto inv = [&](uint32_t a) {
        uint32_t res = 1;
        for (long e = p - 2; e > 0; e >>= 1) {
            if (e & 1) res = static_cast<uint32_t>(1ULL * res * a % p);
            a = static_cast<uint32_t>(1ULL * a * a % p);
        }
        return res;
    };
    while (true) {
        std::vector<std::vector<uint32_t>> m(static_cast<size_t>(r),
                                             std::vector<uint32_t>(static_cast<size_t>(n)));
        for (long i = 0; i < r; ++i)
            for (long j = 0; j < n; ++j)
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    entries[static_cast<size_t>(i * n + j)];
        // row reduce
        size_t row = 0;
        for (long col = 0; col < n && row < m.size(); ++col) {
            size_t sel = row;
            while (sel < m.size() && m[sel][static_cast<size_t>(col)] == 0) ++sel;
            if (sel == m.size()) continue;
            std::swap(m[row], m[sel]);
            uint32_t ic = inv(m[row][static_cast<size_t>(col)]);
            for (long j = 0; j < n; ++j)
                m[row][static_cast<size_t>(j)] =
                    static_cast<uint32_t>(1ULL * m[row][static_cast<size_t>(j)] * ic % p);
            for (size_t i2 = 0; i2 < m.size(); ++i2) {
                if (i2 == row || m[i2][static_cast<size_t>(col)] == 0) continue;
                uint32_t f = m[i2][static_cast<size_t>(col)];
                for (long j = 0; j < n; ++j)
                    m[i2][static_cast<size_t>(j)] = static_cast<uint32_t>(
                        (m[i2][static_cast<size_t>(j)] +
                         1ULL * (p - f) * m[row][static_cast<size_t>(j)]) % p);
            }
            ++row;
        }
        if (row == static_cast<size_t>(r)) {
            std::vector<uint32_t> flat;
            for (const auto& rw : m) flat.insert(flat.end(), rw.begin(), rw.end());
            canon.insert(flat);
        }
        long i = 0;
        while (i < cells && ++entries[static_cast<size_t>(i)] == static_cast<uint32_t>(p)) {
            entries[static_cast<size_t>(i)] = 0;
            ++i;
        }
        if (i == cells) break;
    }
    return static_cast<long>(canon.size());
}

// Q(Tx) for an integer substitution matrix T (row-major n x n).
inline ZForm substitute_z(const ZForm& q, const std::vector<BigInt>& t) {
    const long n = q.n();
    std::vector<BigInt> out(q.coeffs().size(), BigInt(0));
    auto tm = [&](long i, long j) -> const BigInt& { return t[static_cast<size_t>(i * n + j)]; };
    for (long i = 0; i < n; ++i)
        for (long j = i; j < n; ++j) {
            const BigInt& a = q.coeff(i, j);
            if (a == 0) continue;
            for (long kk = 0; kk < n; ++kk) {
                out[q.index(kk, kk)] += a * tm(i, kk) * tm(j, kk);
                for (long ll = kk + 1; ll < n; ++ll)
                    out[q.index(kk, ll)] += a * (tm(i, kk) * tm(j, ll) + tm(i, ll) * tm(j, kk));
            }
        }
    return ZForm(n, std::move(out));
}

inline std::vector<BigInt> random_unimodular(long n, std::mt19937_64& gen) {
    std::vector<BigInt> t(static_cast<size_t>(n * n), BigInt(0));
    for (long i = 0; i < n; ++i) t[static_cast<size_t>(i * n + i)] = 1;
    std::uniform_int_distribution<long> row(0, n - 1), shear(-2, 2), op(0, 3);
    for (int step = 0; step < 12; ++step) {
        long i = row(gen), j = row(gen);
        switch (op(gen)) {
            case 0:
                if (i != j) {
                    BigInt c(shear(gen));
                    for (long col = 0; col < n; ++col)
                        t[static_cast<size_t>(i * n + col)] += c * t[static_cast<size_t>(j * n + col)];
                }
                break;
            case 1:
                if (i != j)
                    for (long col = 0; col < n; ++col)
                        std::swap(t[static_cast<size_t>(i * n + col)],
                                  t[static_cast<size_t>(j * n + col)]);
                break;
            default:
                for (long col = 0; col < n; ++col)
                    t[static_cast<size_t>(i * n + col)] = -t[static_cast<size_t>(i * n + col)];
                break;
        }
    }
    return t;
}

/// Direct search for a k-dimensional totally isotropic subspace over Z/p^N.
/// A saturated rank-k sublattice of Z_p^n has a column-pivot basis: for some
/// pivot row set the basis matrix restricted to those rows is the identity.
/// The free entries are explored digit by digit; a branch survives level t
/// only if Q and the polarization vanish mod p^{t+1} on the span, and the
/// subspace is accepted once every level up to N is passed. Independent of
/// the invariant-based classification chain.
class SubspaceSearchOracle {
public:
    SubspaceSearchOracle(const ZForm& q, long p, long depth)
        : q_(q), p_(p), depth_(depth), n_(q.n()) {}

    bool k_isotropic(long k) {
        if (k <= 0) return true;
        if (k > n_) return false;
        k_ = k;
        std::vector<long> pivots;
        return choose_pivots(pivots, 0);
    }

private:
    bool choose_pivots(std::vector<long>& pivots, long from) {
        if (static_cast<long>(pivots.size()) == k_) {
            basis_.assign(static_cast<size_t>(n_ * k_), BigInt(0));
            for (long b = 0; b < k_; ++b)
                basis_[static_cast<size_t>(pivots[static_cast<size_t>(b)] * k_ + b)] = 1;
            free_slots_.clear();
            for (long r = 0; r < n_; ++r) {
                bool is_pivot = false;
                for (long x : pivots) is_pivot = is_pivot || x == r;
                if (is_pivot) continue;
                for (long b = 0; b < k_; ++b)
                    free_slots_.push_back(static_cast<size_t>(r * k_ + b));
            }
            return extend(0, BigInt(1));
        }
        for (long r = from; r < n_; ++r) {
            pivots.push_back(r);
            if (choose_pivots(pivots, r + 1)) return true;
            pivots.pop_back();
        }
        return false;
    }

    bool constraints_hold(const BigInt& modulus) {
        for (long a = 0; a < k_; ++a) {
            if (value_on_basis(a, a) % modulus != 0) return false;
            for (long b = a + 1; b < k_; ++b)
                if (polar_on_basis(a, b) % modulus != 0) return false;
        }
        return true;
    }

    BigInt value_on_basis(long a, long) {
        BigInt acc(0);
        for (long i = 0; i < n_; ++i)
            for (long j = i; j < n_; ++j)
                acc += q_.coeff(i, j) * basis_[static_cast<size_t>(i * k_ + a)] *
                       basis_[static_cast<size_t>(j * k_ + a)];
        return acc;
    }

    BigInt polar_on_basis(long a, long b) {
        BigInt acc(0);
        for (long i = 0; i < n_; ++i)
            for (long j = i; j < n_; ++j) {
                const BigInt& c = q_.coeff(i, j);
                if (c == 0) continue;
                acc += c * (basis_[static_cast<size_t>(i * k_ + a)] *
                                basis_[static_cast<size_t>(j * k_ + b)] +
                            basis_[static_cast<size_t>(i * k_ + b)] *
                                basis_[static_cast<size_t>(j * k_ + a)]);
            }
        return acc;
    }

    bool extend(long level, const BigInt& p_level) {
        if (++nodes_ > 20'000'000) throw std::runtime_error("subspace search budget exceeded");
        BigInt modulus = p_level * p_;
        if (level == depth_) return constraints_hold(p_level);
        // assign the level-th digit of every free entry
        const size_t nfree = free_slots_.size();
        std::vector<uint32_t> digits(nfree, 0);
        while (true) {
            if (constraints_hold(modulus) && extend(level + 1, modulus)) return true;
            size_t s = 0;
            while (s < nfree) {
                size_t slot = free_slots_[s];
                if (++digits[s] < static_cast<uint32_t>(p_)) {
                    basis_[slot] += p_level;
                    break;
                }
                basis_[slot] -= BigInt(p_ - 1) * p_level;
                digits[s] = 0;
                ++s;
            }
            if (s == nfree) break;
        }
        return false;
    }

    ZForm q_;
    long p_, depth_, n_, k_ = 0;
    std::vector<BigInt> basis_;
    std::vector<size_t> free_slots_;
    unsigned long long nodes_ = 0;
};

}  // namespace qfiso::testing
