#include "qfiso/fpforms.hpp"

#include <omp.h>
#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace qfiso {

namespace {

uint32_t mod_inverse(uint32_t a, long p) {
    // p is prime and a != 0 mod p
    long t = 0, new_t = 1;
    long r = p, new_r = a % p;
    while (new_r != 0) {
        long q = r / new_r;
        long tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    return static_cast<uint32_t>(t < 0 ? t + p : t);
}

}  // namespace

FpForm::FpForm(long p, long n, std::vector<uint32_t> coeffs)
    : p_(p), n_(n), coeffs_(std::move(coeffs)) {
    if (!is_prime(p)) throw std::invalid_argument("FpForm: p must be prime");
    if (n < 0) throw std::invalid_argument("FpForm: negative dimension");
    if (coeffs_.size() != static_cast<size_t>(n * (n + 1) / 2))
        throw std::invalid_argument("FpForm: expected n(n+1)/2 coefficients");
    for (auto& c : coeffs_) c %= static_cast<uint32_t>(p);
}

size_t FpForm::index(long i, long j) const {
    // 0-based, i <= j
    return static_cast<size_t>(i * n_ - i * (i - 1) / 2 + (j - i));
}

uint32_t FpForm::value(const std::vector<uint32_t>& x) const {
    if (x.size() != static_cast<size_t>(n_))
        throw std::invalid_argument("vector dimension mismatch");
    unsigned long long acc = 0;
    size_t idx = 0;
    const auto up = static_cast<unsigned long long>(p_);
    for (long i = 0; i < n_; ++i) {
        for (long j = i; j < n_; ++j, ++idx) {
            acc += static_cast<unsigned long long>(coeffs_[idx]) * x[i] % up * x[j];
        }
        acc %= up;
    }
    return static_cast<uint32_t>(acc % up);
}

std::string FpForm::to_literal() const {
    std::ostringstream out;
    out << "p=" << p_ << "; n=" << n_ << "; [";
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out << ",";
        out << coeffs_[i];
    }
    out << "]";
    return out.str();
}

uint32_t bilinear_value(const FpForm& q, const std::vector<uint32_t>& x,
                        const std::vector<uint32_t>& y) {
    if (x.size() != static_cast<size_t>(q.n()) || y.size() != static_cast<size_t>(q.n()))
        throw std::invalid_argument("vector dimension mismatch");
    const auto p = static_cast<uint32_t>(q.p());
    std::vector<uint32_t> sum(x.size());
    for (size_t i = 0; i < x.size(); ++i) sum[i] = (x[i] + y[i]) % p;
    uint32_t v = q.value(sum) + 2 * p - q.value(x) - q.value(y);
    return v % p;
}

namespace {

// Row-reduce an r x c matrix mod p in place; returns pivot columns.
std::vector<long> rref(std::vector<std::vector<uint32_t>>& m, long p) {
    std::vector<long> pivots;
    size_t row = 0;
    size_t cols = m.empty() ? 0 : m[0].size();
    for (size_t col = 0; col < cols && row < m.size(); ++col) {
        size_t sel = row;
        while (sel < m.size() && m[sel][col] == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[row], m[sel]);
        uint32_t inv = mod_inverse(m[row][col], p);
        for (size_t j = col; j < cols; ++j)
            m[row][j] = static_cast<uint32_t>(static_cast<unsigned long long>(m[row][j]) * inv % p);
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == row || m[i][col] == 0) continue;
            uint32_t f = m[i][col];
            for (size_t j = col; j < cols; ++j) {
                unsigned long long sub =
                    static_cast<unsigned long long>(f) * m[row][j] % static_cast<unsigned long long>(p);
                m[i][j] = static_cast<uint32_t>((m[i][j] + p - sub) % p);
            }
        }
        pivots.push_back(static_cast<long>(col));
        ++row;
    }
    m.resize(row);
    return pivots;
}

// Kernel basis of the linear map given by rows of m (as functionals on F_p^c).
std::vector<std::vector<uint32_t>> kernel_basis(std::vector<std::vector<uint32_t>> m, long p,
                                                size_t cols) {
    std::vector<long> pivots = rref(m, p);
    std::vector<bool> is_pivot(cols, false);
    for (long c : pivots) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<std::vector<uint32_t>> basis;
    for (size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<uint32_t> v(cols, 0);
        v[free_col] = 1;
        for (size_t r = 0; r < m.size(); ++r) {
            long pc = pivots[r];
            uint32_t coef = m[r][free_col];
            v[static_cast<size_t>(pc)] = coef == 0 ? 0 : static_cast<uint32_t>(p - coef);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<uint32_t> combine(const std::vector<std::vector<uint32_t>>& basis,
                              const std::vector<uint32_t>& coefs, long p, long ambient) {
    std::vector<uint32_t> v(static_cast<size_t>(ambient), 0);
    for (size_t b = 0; b < basis.size(); ++b) {
        if (coefs[b] == 0) continue;
        for (size_t i = 0; i < v.size(); ++i) {
            v[i] = static_cast<uint32_t>(
                (v[i] + static_cast<unsigned long long>(coefs[b]) * basis[b][i]) %
                static_cast<unsigned long long>(p));
        }
    }
    return v;
}

}  // namespace

std::vector<std::vector<uint32_t>> radical(const FpForm& q) {
    const long n = q.n(), p = q.p();
    std::vector<std::vector<uint32_t>> gram(static_cast<size_t>(n),
                                            std::vector<uint32_t>(static_cast<size_t>(n)));
    for (long i = 0; i < n; ++i) {
        gram[i][i] = static_cast<uint32_t>(2ULL * q.coeff(i, i) % static_cast<unsigned long long>(p));
        for (long j = i + 1; j < n; ++j) gram[i][j] = gram[j][i] = q.coeff(i, j);
    }
    auto ker = kernel_basis(std::move(gram), p, static_cast<size_t>(n));
    if (p != 2 || ker.empty()) return ker;
    // char 2: Q is linear on the bilinear kernel; cut by Q(x) = 0
    std::vector<std::vector<uint32_t>> values(1, std::vector<uint32_t>(ker.size()));
    for (size_t b = 0; b < ker.size(); ++b) values[0][b] = q.value(ker[b]);
    auto coef_kernel = kernel_basis(std::move(values), p, ker.size());
    std::vector<std::vector<uint32_t>> rad;
    for (const auto& coefs : coef_kernel) rad.push_back(combine(ker, coefs, p, n));
    return rad;
}

namespace {

// Decomposition of the regular restriction of Q to the span of `basis`.
// Returns (l, m) by repeatedly splitting hyperbolic planes.
std::pair<long, long> split_regular(const FpForm& q, std::vector<std::vector<uint32_t>> basis) {
    const long p = q.p();
    const long n = q.n();
    long l = 0;
    while (true) {
        const long d = static_cast<long>(basis.size());
        if (d == 0) return {l, 0};
        // projective search for an isotropic vector in the span
        std::vector<uint32_t> coefs(static_cast<size_t>(d), 0);
        std::vector<uint32_t> iso;
        for (long lead = d - 1; lead >= 0 && iso.empty(); --lead) {
            std::fill(coefs.begin(), coefs.end(), 0);
            coefs[static_cast<size_t>(lead)] = 1;
            while (true) {
                auto v = combine(basis, coefs, p, n);
                if (q.value(v) == 0) {
                    iso = std::move(v);
                    break;
                }
                long carry = lead + 1;
                while (carry < d) {
                    if (++coefs[static_cast<size_t>(carry)] < static_cast<uint32_t>(p)) break;
                    coefs[static_cast<size_t>(carry)] = 0;
                    ++carry;
                }
                if (carry == d) break;
            }
        }
        if (iso.empty()) {
            if (d > 2) throw std::logic_error("anisotropic dimension exceeds 2 over F_p");
            return {l, d};
        }
        // complete to a hyperbolic pair: pick y with phi(x,y) != 0, scale to 1,
        // then y' = y - Q(y) x so Q(y') = 0 and phi(x,y') = 1
        std::vector<uint32_t> y;
        for (const auto& w : basis) {
            if (bilinear_value(q, iso, w) != 0) {
                y = w;
                break;
            }
        }
        if (y.empty()) throw std::logic_error("regular part has a null vector");
        uint32_t c = bilinear_value(q, iso, y);
        uint32_t cinv = mod_inverse(c, p);
        for (auto& e : y)
            e = static_cast<uint32_t>(static_cast<unsigned long long>(e) * cinv %
                                      static_cast<unsigned long long>(p));
        uint32_t qy = q.value(y);
        if (qy != 0) {
            uint32_t f = static_cast<uint32_t>(p - static_cast<long>(qy));
            for (size_t i = 0; i < y.size(); ++i)
                y[i] = static_cast<uint32_t>(
                    (y[i] + static_cast<unsigned long long>(f) * iso[i]) %
                    static_cast<unsigned long long>(p));
        }
        // orthogonal complement of span{x, y'} inside the current span
        std::vector<std::vector<uint32_t>> rows(2, std::vector<uint32_t>(static_cast<size_t>(d)));
        for (long b = 0; b < d; ++b) {
            rows[0][static_cast<size_t>(b)] = bilinear_value(q, iso, basis[static_cast<size_t>(b)]);
            rows[1][static_cast<size_t>(b)] = bilinear_value(q, y, basis[static_cast<size_t>(b)]);
        }
        auto coef_kernel = kernel_basis(std::move(rows), p, static_cast<size_t>(d));
        std::vector<std::vector<uint32_t>> next;
        next.reserve(coef_kernel.size());
        for (const auto& k : coef_kernel) next.push_back(combine(basis, k, p, n));
        if (next.size() != static_cast<size_t>(d - 2))
            throw std::logic_error("hyperbolic split: wrong complement dimension");
        basis = std::move(next);
        ++l;
    }
}

}  // namespace

WittClass witt_class(const FpForm& q) {
    const long n = q.n(), p = q.p();
    auto rad = radical(q);
    const long r = static_cast<long>(rad.size());
    // complement of the radical: standard basis vectors away from the pivot
    // columns of the radical's row-echelon form
    std::vector<std::vector<uint32_t>> rows = rad;
    std::vector<long> pivots = rref(rows, p);
    std::vector<bool> is_pivot(static_cast<size_t>(n), false);
    for (long c : pivots) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<std::vector<uint32_t>> complement;
    for (long i = 0; i < n; ++i) {
        if (is_pivot[static_cast<size_t>(i)]) continue;
        std::vector<uint32_t> e(static_cast<size_t>(n), 0);
        e[static_cast<size_t>(i)] = 1;
        complement.push_back(std::move(e));
    }
    if (complement.size() != static_cast<size_t>(n - r))
        throw std::logic_error("radical complement has wrong dimension");
    auto [l, m] = split_regular(q, std::move(complement));
    return WittClass{l, m, n};
}

BigInt count_zeros(const FpForm& q) {
    WittClass c = witt_class(q);
    const long p = q.p();
    BigInt count = pow_int(p, static_cast<unsigned long>(c.n - 2 * c.l - c.m));  // l = 0 base case
    long dim = c.n - 2 * c.l;
    for (long step = 0; step < c.l; ++step) {
        dim += 2;
        BigInt ambient = pow_int(p, static_cast<unsigned long>(dim - 2));
        count = BigInt(2 * p - 1) * count + BigInt(p - 1) * (ambient - count);
    }
    return count;
}

BigInt orthogonal_order(long m, long n, long p) {
    if (m < 0 || m > 2 || n < m || (n - m) % 2 != 0)
        throw std::invalid_argument("orthogonal_order: need n = 2l + m with m in {0,1,2}");
    const long k = (n - m) / 2;
    if (n == 0) return BigInt(1);
    BigInt r;
    if (m == 0) {
        r = 2 * pow_int(p, static_cast<unsigned long>(k * (k - 1))) *
            (pow_int(p, static_cast<unsigned long>(k)) - 1);
        for (long i = 1; i <= k - 1; ++i)
            r *= pow_int(p, static_cast<unsigned long>(2 * i)) - 1;
    } else if (m == 1) {
        r = pow_int(p, static_cast<unsigned long>(k * k));
        if (p != 2) r *= 2;
        for (long i = 1; i <= k; ++i)
            r *= pow_int(p, static_cast<unsigned long>(2 * i)) - 1;
    } else {
        // here k = (n-2)/2, so the class is [k, 2, n] with n = 2(k+1)
        r = 2 * pow_int(p, static_cast<unsigned long>(k * (k + 1))) *
            (pow_int(p, static_cast<unsigned long>(k + 1)) + 1);
        for (long i = 1; i <= k; ++i)
            r *= pow_int(p, static_cast<unsigned long>(2 * i)) - 1;
    }
    return r;
}

BigInt subspace_count(long r, long n, long p) {
    if (r < 0 || r > n) throw std::invalid_argument("subspace_count: need 0 <= r <= n");
    BigRational acc(1);
    for (long i = 0; i < r; ++i) {
        BigInt num = pow_int(p, static_cast<unsigned long>(n)) - pow_int(p, static_cast<unsigned long>(i));
        BigInt den = pow_int(p, static_cast<unsigned long>(r)) - pow_int(p, static_cast<unsigned long>(i));
        acc *= make_rational(num, den);
    }
    if (acc.get_den() != 1) throw std::logic_error("Gaussian binomial not integral");
    return acc.get_num();
}

BigInt gl_order(long n, long p) {
    BigInt r(1);
    BigInt pn = pow_int(p, static_cast<unsigned long>(n));
    for (long i = 0; i < n; ++i) r *= pn - pow_int(p, static_cast<unsigned long>(i));
    return r;
}

FpForm substitute(const FpForm& q, const std::vector<uint32_t>& t) {
    const long n = q.n(), p = q.p();
    if (t.size() != static_cast<size_t>(n * n))
        throw std::invalid_argument("substitute: matrix must be n x n");
    auto tm = [&](long i, long j) { return static_cast<unsigned long long>(t[i * n + j]); };
    std::vector<uint32_t> out(q.coeffs().size(), 0);
    size_t idx = 0;
    const auto up = static_cast<unsigned long long>(p);
    for (long i = 0; i < n; ++i) {
        for (long j = i; j < n; ++j, ++idx) {
            unsigned long long a = q.coeffs()[idx];
            if (a == 0) continue;
            // a * (T x)_i (T x)_j contributes to x_k x_l coefficients
            for (long k = 0; k < n; ++k) {
                unsigned long long tik = tm(i, k), tjk = tm(j, k);
                unsigned long long diag = a * (tik * tjk % up) % up;
                size_t kk = static_cast<size_t>(k * n - k * (k - 1) / 2);
                out[kk] = static_cast<uint32_t>((out[kk] + diag) % up);
                for (long l = k + 1; l < n; ++l) {
                    unsigned long long cross = (tik * tm(j, l) + tm(i, l) * tjk) % up;
                    size_t kl = kk + static_cast<size_t>(l - k);
                    out[kl] = static_cast<uint32_t>((out[kl] + a * cross) % up);
                }
            }
        }
    }
    return FpForm(p, n, std::move(out));
}

namespace {

unsigned long long pow_u64_checked(long p, long e) {
    unsigned long long r = 1;
    for (long i = 0; i < e; ++i) {
        if (r > kCensusBudget) return r;  // caller validates against the budget
        r *= static_cast<unsigned long long>(p);
    }
    return r;
}

// precomputed predicate for the leading-binary-anisotropic condition
std::vector<bool> anisotropic_triples(long p) {
    std::vector<bool> table(static_cast<size_t>(p) * p * p, false);
    for (long a = 0; a < p; ++a)
        for (long b = 0; b < p; ++b)
            for (long c = 0; c < p; ++c) {
                FpForm f(p, 2, {static_cast<uint32_t>(a), static_cast<uint32_t>(b),
                                static_cast<uint32_t>(c)});
                WittClass w = witt_class(f);
                table[static_cast<size_t>((a * p + b) * p + c)] = (w.l == 0 && w.m == 2);
            }
    return table;
}

Census census_range(long p, long n, CensusCondition cond, unsigned long long lo,
                    unsigned long long hi, const std::vector<bool>& aniso) {
    const long dcount = n * (n + 1) / 2;
    std::vector<uint32_t> coeffs(static_cast<size_t>(dcount), 0);
    unsigned long long v = lo;
    for (long i = 0; i < dcount; ++i) {
        coeffs[static_cast<size_t>(i)] = static_cast<uint32_t>(v % static_cast<unsigned long long>(p));
        v /= static_cast<unsigned long long>(p);
    }
    Census out;
    size_t a11 = 0, a12 = 1, a22 = static_cast<size_t>(n);
    for (unsigned long long idx = lo; idx < hi; ++idx) {
        bool keep = true;
        if (cond == CensusCondition::first_coeff_nonzero) {
            keep = coeffs[a11] != 0;
        } else if (cond == CensusCondition::leading_binary_anisotropic) {
            keep = aniso[static_cast<size_t>(
                (static_cast<long>(coeffs[a11]) * p + coeffs[a12]) * p + coeffs[a22])];
        }
        if (keep) {
            FpForm f(p, n, coeffs);
            ++out[witt_class(f)];
        }
        // odometer increment
        for (long i = 0; i < dcount; ++i) {
            if (++coeffs[static_cast<size_t>(i)] < static_cast<uint32_t>(p)) break;
            coeffs[static_cast<size_t>(i)] = 0;
        }
    }
    return out;
}

unsigned long long census_total(long p, long n, CensusCondition cond) {
    const long dcount = n * (n + 1) / 2;
    unsigned long long total = pow_u64_checked(p, dcount);
    if (total > kCensusBudget)
        throw std::invalid_argument("census budget exceeded: p^(n(n+1)/2) > 10^7");
    if (cond != CensusCondition::all && n < 2)
        throw std::invalid_argument("conditioned census needs n >= 2");
    return total;
}

}  // namespace

BigInt census_population(long p, long n, CensusCondition cond) {
    const long dcount = n * (n + 1) / 2;
    BigInt total = pow_int(p, static_cast<unsigned long>(dcount));
    switch (cond) {
        case CensusCondition::all:
            return total;
        case CensusCondition::first_coeff_nonzero:
            return total / p * (p - 1);
        case CensusCondition::leading_binary_anisotropic: {
            // p(p-1)^2/2 anisotropic binary triples
            BigInt aniso = BigInt(p) * (p - 1) * (p - 1) / 2;
            return total / (BigInt(p) * p * p) * aniso;
        }
    }
    throw std::logic_error("unreachable");
}

Census enumerate_class_census_serial(long p, long n, CensusCondition cond) {
    unsigned long long total = census_total(p, n, cond);
    std::vector<bool> aniso;
    if (cond == CensusCondition::leading_binary_anisotropic) aniso = anisotropic_triples(p);
    return census_range(p, n, cond, 0, total, aniso);
}

Census enumerate_class_census(long p, long n, CensusCondition cond) {
    unsigned long long total = census_total(p, n, cond);
    std::vector<bool> aniso;
    if (cond == CensusCondition::leading_binary_anisotropic) aniso = anisotropic_triples(p);
    Census merged;
    #pragma omp parallel
    {
        int workers = omp_get_num_threads();
        int me = omp_get_thread_num();
        unsigned long long chunk = (total + workers - 1) / workers;
        unsigned long long lo = std::min<unsigned long long>(total, chunk * me);
        unsigned long long hi = std::min<unsigned long long>(total, lo + chunk);
        Census local = census_range(p, n, cond, lo, hi, aniso);
        #pragma omp critical
        {
            for (const auto& [cls, cnt] : local) merged[cls] += cnt;
        }
    }
    return merged;
}

std::string census_to_csv(const Census& census) {
    std::ostringstream out;
    out << "l,m,n,count\n";
    for (const auto& [cls, cnt] : census)
        out << cls.l << "," << cls.m << "," << cls.n << "," << cnt << "\n";
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

FpForm parse_fpform_literal(const std::string& text) {
    // p=<prime>; n=<dim>; [a11,a12,...]
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) parts.push_back(strip(item));
    if (parts.size() != 3 || parts[0].rfind("p=", 0) != 0 || parts[1].rfind("n=", 0) != 0)
        throw std::invalid_argument("form literal must be 'p=<prime>; n=<dim>; [a11,...]'");
    long p = std::stol(parts[0].substr(2));
    long n = std::stol(parts[1].substr(2));
    std::string list = parts[2];
    if (list.empty() || list.front() != '[' || list.back() != ']')
        throw std::invalid_argument("form literal coefficients must be bracketed");
    std::vector<uint32_t> coeffs;
    std::stringstream cs(list.substr(1, list.size() - 2));
    while (std::getline(cs, item, ',')) {
        item = strip(item);
        if (item.empty()) continue;
        long v = std::stol(item);
        long r = v % p;
        if (r < 0) r += p;
        coeffs.push_back(static_cast<uint32_t>(r));
    }
    return FpForm(p, n, std::move(coeffs));
}

}  // namespace qfiso
