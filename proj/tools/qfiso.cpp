#include <omp.h>
#include <CLI11.hpp>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "qfiso/densities.hpp"
#include "qfiso/fpforms.hpp"
#include "qfiso/global_density.hpp"
#include "qfiso/kovaleva.hpp"
#include "qfiso/qp.hpp"

using namespace qfiso;

namespace {

enum class Format { plain, csv, jsonl };

struct RowSink {
    Format format = Format::plain;
    bool header_done = false;

    void row(const std::vector<std::pair<std::string, std::string>>& fields) {
        switch (format) {
            case Format::plain: {
                bool first = true;
                for (const auto& [k, v] : fields) {
                    if (!first) std::cout << "  ";
                    std::cout << k << "=" << v;
                    first = false;
                }
                std::cout << "\n";
                break;
            }
            case Format::csv: {
                if (!header_done) {
                    for (size_t i = 0; i < fields.size(); ++i)
                        std::cout << (i ? "," : "") << fields[i].first;
                    std::cout << "\n";
                    header_done = true;
                }
                for (size_t i = 0; i < fields.size(); ++i)
                    std::cout << (i ? "," : "") << fields[i].second;
                std::cout << "\n";
                break;
            }
            case Format::jsonl: {
                nlohmann::json j;
                for (const auto& [k, v] : fields) j[k] = v;
                std::cout << j.dump() << "\n";
                break;
            }
        }
    }
};

std::string fixed6(double v) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(6) << v;
    return o.str();
}

void require_prime(long p) {
    if (!is_prime(p)) throw CLI::ValidationError("--p", "not a prime: " + std::to_string(p));
}

// prints the rational function and optional exact evaluations
int run_function_command(const RationalFunction& f, const std::string& name,
                         const std::vector<long>& at, Format format) {
    RowSink sink{format};
    if (format == Format::plain) {
        std::cout << f.to_string() << "\n";
        for (long p : at) {
            require_prime(p);
            std::cout << "p=" << p << ": " << to_string(f.eval(BigRational(p))) << "\n";
        }
        return 0;
    }
    sink.row({{"name", name}, {"p", ""}, {"value", f.to_string()}});
    for (long p : at) {
        require_prime(p);
        sink.row({{"name", name}, {"p", std::to_string(p)},
                  {"value", to_string(f.eval(BigRational(p)))}});
    }
    return 0;
}

int emit_checks(const std::vector<CheckResult>& results, const std::string& label,
                const char* pass_word, const char* fail_word) {
    bool all_ok = true;
    for (const CheckResult& r : results) {
        std::cout << label << " " << r.name << " " << r.params << " "
                  << (r.ok ? pass_word : fail_word) << "\n";
        all_ok = all_ok && r.ok;
    }
    return all_ok ? 0 : 1;
}

int verify_census_cmd(bool full) {
    struct Cell { long p, n; };
    std::vector<Cell> grid = {{2, 2}, {2, 3}, {3, 2}, {3, 3}, {5, 2}, {7, 2}};
    if (full) {
        grid.push_back({2, 4});
        grid.push_back({3, 4});
        grid.push_back({5, 3});
    }
    bool all_ok = true;
    for (const Cell& cell : grid) {
        for (int i = 0; i <= 2; ++i) {
            if (cell.n < 2 && i > 0) continue;
            Census census = enumerate_class_census(cell.p, cell.n,
                                                   static_cast<CensusCondition>(i));
            BigInt population = census_population(cell.p, cell.n,
                                                  static_cast<CensusCondition>(i));
            bool ok = true;
            for (long l = 0; 2 * l <= cell.n; ++l)
                for (long m = 0; m <= 2 && 2 * l + m <= cell.n; ++m) {
                    unsigned long long count = 0;
                    auto it = census.find(WittClass{l, m, cell.n});
                    if (it != census.end()) count = it->second;
                    BigRational freq =
                        make_rational(BigInt(static_cast<unsigned long>(count)), population);
                    ok = ok && freq == pi(i, l, m, cell.n).eval(cell.p);
                }
            std::cout << "CENSUS p=" << cell.p << " n=" << cell.n << " cond=" << i << " "
                      << (ok ? "PASS" : "FAIL") << "\n";
            all_ok = all_ok && ok;
        }
    }
    return all_ok ? 0 : 1;
}

int verify_hilbert_cmd(bool full) {
    bool all_ok = true;
    for (long p : {2L, 3L, 5L, 7L}) {
        auto reps = square_class_representatives(p);
        bool ok = true;
        long pairs = 0;
        for (size_t i = 0; i < reps.size(); ++i)
            for (size_t j = i; j < reps.size(); ++j) {
                BigRational a(reps[i].rep), b(reps[j].rep);
                ok = ok && hilbert_symbol(a, b, p) == hilbert_symbol_by_search(a, b, p);
                ++pairs;
            }
        if (full) {
            std::mt19937_64 gen(1000 + static_cast<uint64_t>(p));
            std::uniform_int_distribution<long> unit(1, 50), val(0, 1);
            for (int t = 0; t < 50;) {
                long ua = unit(gen), ub = unit(gen);
                if (ua % p == 0 || ub % p == 0) continue;
                BigRational a(ua * (val(gen) ? p : 1)), b(ub * (val(gen) ? p : 1));
                ok = ok && hilbert_symbol(a, b, p) == hilbert_symbol_by_search(a, b, p);
                ++pairs;
                ++t;
            }
        }
        std::cout << "HILBERT p=" << p << " pairs=" << pairs << " " << (ok ? "PASS" : "FAIL")
                  << "\n";
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}

int verify_solver_cmd(bool full) {
    const long k_max = full ? 4 : 2;
    const long n_max = full ? 12 : 8;
    DensityTable table;
    bool all_ok = true;
    for (long k = 1; k <= k_max; ++k)
        for (int i = 0; i <= 2; ++i)
            for (int j = 0; j <= 2; ++j)
                for (long n = i + j; n <= n_max; ++n) {
                    bool ok = delta_recursive(DeltaKey{i, k, 0, j, n}, table) ==
                              delta_closed(i, j, k, n);
                    std::cout << "SOLVER i=" << i << " j=" << j << " k=" << k << " n=" << n
                              << " " << (ok ? "PASS" : "FAIL") << "\n";
                    all_ok = all_ok && ok;
                }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact k-isotropy densities of random quadratic forms over Q_p, R and Q"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format_name = "plain";
    app.add_option("--format", format_name, "output format")
        ->check(CLI::IsMember({"plain", "csv", "json-lines"}));
    long threads = 0;
    app.add_option("--threads", threads, "worker thread count (default: QFISO_THREADS or OpenMP)");

    auto format = [&]() {
        if (format_name == "csv") return Format::csv;
        if (format_name == "json-lines") return Format::jsonl;
        return Format::plain;
    };

    // ---- rho-p ----
    auto* rho_cmd = app.add_subcommand("rho-p", "closed form of rho_p(k,n)");
    long rk = 1, rn = 1;
    std::vector<long> rho_at;
    rho_cmd->add_option("--k", rk, "isotropy dimension")->required()->check(CLI::PositiveNumber);
    rho_cmd->add_option("--n", rn, "form dimension")->required()->check(CLI::PositiveNumber);
    rho_cmd->add_option("--at", rho_at, "primes to evaluate at");

    // ---- delta ----
    auto* delta_cmd = app.add_subcommand("delta", "closed form of delta_i(k;0,j,n)");
    long di = 0, dj = 0, dk = 1, dn = 0;
    std::vector<long> delta_at;
    delta_cmd->add_option("--i", di)->required()->check(CLI::Range(0, 2));
    delta_cmd->add_option("--j", dj)->required()->check(CLI::Range(0, 2));
    delta_cmd->add_option("--k", dk)->required()->check(CLI::NonNegativeNumber);
    delta_cmd->add_option("--n", dn)->required()->check(CLI::NonNegativeNumber);
    delta_cmd->add_option("--at", delta_at, "primes to evaluate at");

    // ---- pi ----
    auto* pi_cmd = app.add_subcommand("pi", "class probability pi_i(l,m,n) over F_p");
    long pii = 0, pil = 0, pim = 0, pin = 0;
    std::vector<long> pi_at;
    pi_cmd->add_option("--i", pii)->required()->check(CLI::Range(0, 2));
    pi_cmd->add_option("--l", pil)->required()->check(CLI::NonNegativeNumber);
    pi_cmd->add_option("--m", pim)->required()->check(CLI::NonNegativeNumber);
    pi_cmd->add_option("--n", pin)->required()->check(CLI::NonNegativeNumber);
    pi_cmd->add_option("--at", pi_at, "primes to evaluate at");

    // ---- witt-class ----
    auto* witt_cmd = app.add_subcommand("witt-class", "Witt class of a form over F_p");
    std::string witt_literal;
    witt_cmd->add_option("literal", witt_literal, "form literal 'p=..; n=..; [a11,...]'")
        ->required();

    // ---- qp-invariants ----
    auto* inv_cmd = app.add_subcommand("qp-invariants", "rank, determinant class, Hasse invariant");
    std::string inv_literal;
    long inv_p = 0;
    inv_cmd->add_option("literal", inv_literal, "form literal 'n=..; [a11,...]'")->required();
    inv_cmd->add_option("--p", inv_p, "prime")->required();

    // ---- k-isotropic ----
    auto* iso_cmd = app.add_subcommand("k-isotropic", "decide k-isotropy over Q_p");
    std::string iso_literal;
    long iso_p = 0, iso_k = 0;
    iso_cmd->add_option("literal", iso_literal)->required();
    iso_cmd->add_option("--p", iso_p, "prime")->required();
    iso_cmd->add_option("--k", iso_k, "subspace dimension")->required();

    // ---- mc-rho ----
    auto* mc_cmd = app.add_subcommand("mc-rho", "Monte Carlo estimate of rho_p(k,n)");
    long mc_p = 2, mc_k = 1, mc_n = 3, mc_digits = 0;
    unsigned long long mc_samples = 100000;
    uint64_t mc_seed = 1;
    bool mc_serial = false;
    mc_cmd->add_option("--p", mc_p)->required();
    mc_cmd->add_option("--k", mc_k)->required();
    mc_cmd->add_option("--n", mc_n)->required();
    mc_cmd->add_option("--digits", mc_digits,
                       "p-adic digits per coefficient (default 8 for p<=3, else 5)");
    mc_cmd->add_option("--samples", mc_samples);
    mc_cmd->add_option("--seed", mc_seed);
    mc_cmd->add_flag("--serial", mc_serial, "use the serial reference path");

    // ---- kovaleva ----
    auto* kov_cmd = app.add_subcommand("kovaleva", "invariant distribution at an odd prime");
    long kov_n = 2, kov_p = 3, kov_digits = 0;
    unsigned long long kov_samples = 0;
    uint64_t kov_seed = 1;
    kov_cmd->add_option("--n", kov_n)->required();
    kov_cmd->add_option("--p", kov_p)->required();
    kov_cmd->add_option("--samples", kov_samples, "empirical sample count (0: formulas only)");
    kov_cmd->add_option("--seed", kov_seed);
    kov_cmd->add_option("--digits", kov_digits);

    // ---- verify ----
    auto* verify_cmd = app.add_subcommand("verify", "verification suites");
    std::string suite, tier = "quick";
    long sym_k = 2, sym_n_max = 10;
    verify_cmd->add_option("suite", suite, "identities|symmetry|census|hilbert|solver")
        ->required()
        ->check(CLI::IsMember({"identities", "symmetry", "census", "hilbert", "solver"}));
    verify_cmd->add_option("--tier", tier)->check(CLI::IsMember({"quick", "full"}));
    verify_cmd->add_option("--k", sym_k, "isotropy dimension (symmetry suite)");
    verify_cmd->add_option("--n-max", sym_n_max, "largest dimension (symmetry suite)");

    // ---- euler-product ----
    auto* euler_cmd = app.add_subcommand("euler-product", "partial product of rho_p over primes");
    long ek = 1, en = 4;
    unsigned long eb = 10000;
    bool euler_exact = false;
    euler_cmd->add_option("--k", ek)->required();
    euler_cmd->add_option("--n", en)->required();
    euler_cmd->add_option("--prime-bound", eb)->check(CLI::Range(2ul, 100000000ul));
    euler_cmd->add_flag("--exact", euler_exact, "also print the exact rational");

    // ---- rho-infinity ----
    auto* inf_cmd = app.add_subcommand("rho-infinity", "Monte Carlo estimate of rho_inf(k,n)");
    long ik = 1, in = 4;
    unsigned long long inf_samples = 1000000;
    uint64_t inf_seed = 1;
    bool inf_serial = false;
    inf_cmd->add_option("--k", ik)->required();
    inf_cmd->add_option("--n", in)->required();
    inf_cmd->add_option("--samples", inf_samples);
    inf_cmd->add_option("--seed", inf_seed);
    inf_cmd->add_flag("--serial", inf_serial);

    // ---- table ----
    auto* table_cmd = app.add_subcommand("table", "reproduce the global-density table");
    bool remark = false;
    unsigned long tb = 10000;
    unsigned long long tsamples = 1000000;
    uint64_t tseed = 1;
    table_cmd->add_flag("--remark", remark, "the k = 1..5 table at n = 2k+2");
    table_cmd->add_option("--prime-bound", tb);
    table_cmd->add_option("--samples", tsamples);
    table_cmd->add_option("--seed", tseed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (threads == 0) {
        if (const char* env = std::getenv("QFISO_THREADS")) threads = std::atol(env);
    }
    if (threads > 0) omp_set_num_threads(static_cast<int>(threads));

    try {
        if (*rho_cmd) return run_function_command(rho_closed(rk, rn), "rho_p", rho_at, format());
        if (*delta_cmd)
            return run_function_command(
                delta_closed(static_cast<int>(di), static_cast<int>(dj), dk, dn), "delta",
                delta_at, format());
        if (*pi_cmd)
            return run_function_command(pi(static_cast<int>(pii), pil, pim, pin), "pi", pi_at,
                                        format());

        if (*witt_cmd) {
            FpForm q = parse_fpform_literal(witt_literal);
            WittClass w = witt_class(q);
            RowSink sink{format()};
            if (format() == Format::plain) {
                std::cout << "class [" << w.l << "," << w.m << "," << w.n << "] radical="
                          << w.radical_dim() << "\n";
            } else {
                sink.row({{"l", std::to_string(w.l)},
                          {"m", std::to_string(w.m)},
                          {"n", std::to_string(w.n)},
                          {"radical", std::to_string(w.radical_dim())}});
            }
            return 0;
        }

        if (*inv_cmd) {
            require_prime(inv_p);
            ZForm q = parse_zform_literal(inv_literal);
            Diagonalization dz = diagonalize(q);
            RowSink sink{format()};
            if (dz.diag.empty()) {
                sink.row({{"rank", "0"},
                          {"radical", std::to_string(dz.radical_dim)},
                          {"det_class", ""},
                          {"hasse", ""}});
                return 0;
            }
            QpInvariants inv = invariants_from_diagonal(dz.diag, inv_p);
            sink.row({{"rank", std::to_string(inv.rank)},
                      {"radical", std::to_string(dz.radical_dim)},
                      {"det_class", inv.det_class.to_string()},
                      {"hasse", inv.hasse > 0 ? "+1" : "-1"}});
            return 0;
        }

        if (*iso_cmd) {
            require_prime(iso_p);
            ZForm q = parse_zform_literal(iso_literal);
            std::cout << (k_isotropic(q, iso_p, iso_k) ? "true" : "false") << "\n";
            return 0;
        }

        if (*mc_cmd) {
            require_prime(mc_p);
            if (mc_digits == 0) mc_digits = default_digits(mc_p);
            McRhoResult r = mc_serial
                                ? mc_rho_serial(mc_p, mc_k, mc_n, mc_digits, mc_samples, mc_seed)
                                : mc_rho(mc_p, mc_k, mc_n, mc_digits, mc_samples, mc_seed);
            RowSink sink{format()};
            sink.row({{"p", std::to_string(r.p)},
                      {"k", std::to_string(r.k)},
                      {"n", std::to_string(r.n)},
                      {"N", std::to_string(r.digits)},
                      {"samples", std::to_string(r.samples)},
                      {"seed", std::to_string(r.seed)},
                      {"estimate", fixed6(r.estimate)},
                      {"stderr", fixed6(r.stderr_)}});
            return 0;
        }

        if (*kov_cmd) {
            require_prime(kov_p);
            if (kov_digits == 0) kov_digits = default_digits(kov_p);
            RowSink sink{format()};
            InvariantFrequencyResult mc;
            if (kov_samples > 0)
                mc = invariant_frequency_mc(kov_n, kov_p, kov_digits, kov_samples, kov_seed);
            for (const SquareClass& d : square_class_representatives(kov_p))
                for (int c : {1, -1}) {
                    InvariantCell cell{kov_n, d, c};
                    std::vector<std::pair<std::string, std::string>> fields = {
                        {"n", std::to_string(kov_n)},
                        {"p", std::to_string(kov_p)},
                        {"d_class", d.to_string()},
                        {"c", c > 0 ? "+1" : "-1"},
                        {"probability", to_string(kovaleva_prob(cell, kov_p))}};
                    if (kov_samples > 0) {
                        unsigned long long count = 0;
                        auto it = mc.counts.find(cell);
                        if (it != mc.counts.end()) count = it->second;
                        double freq =
                            static_cast<double>(count) / static_cast<double>(mc.samples);
                        double se =
                            std::sqrt(freq * (1 - freq) / static_cast<double>(mc.samples));
                        fields.push_back({"empirical", fixed6(freq)});
                        fields.push_back({"stderr", fixed6(se)});
                        fields.push_back({"seed", std::to_string(kov_seed)});
                        fields.push_back({"samples", std::to_string(mc.samples)});
                    }
                    sink.row(fields);
                }
            if (kov_samples > 0 && format() == Format::plain)
                std::cout << "singular=" << mc.singular << "/" << mc.samples << "\n";
            return 0;
        }

        if (*verify_cmd) {
            const bool full = tier == "full";
            if (suite == "identities") {
                int status = 0;
                for (auto which :
                     {AppendixIdentity::id1, AppendixIdentity::os, AppendixIdentity::id2,
                      AppendixIdentity::twoid, AppendixIdentity::phipsi})
                    status |= emit_checks(verify_appendix_identity(which, full ? 12 : 8),
                                          "IDENTITY", "OK", "FAIL");
                return status;
            }
            if (suite == "symmetry") {
                std::vector<CheckResult> rs = verify_symmetry(sym_k, sym_n_max);
                bool ok = true;
                for (const CheckResult& r : rs) {
                    std::cout << "SYMMETRY " << r.params << " " << (r.ok ? "PASS" : "FAIL")
                              << "\n";
                    ok = ok && r.ok;
                }
                return ok ? 0 : 1;
            }
            if (suite == "census") return verify_census_cmd(full);
            if (suite == "hilbert") return verify_hilbert_cmd(full);
            return verify_solver_cmd(full);
        }

        if (*euler_cmd) {
            EulerProductResult r = euler_product(ek, en, eb);
            RowSink sink{format()};
            std::vector<std::pair<std::string, std::string>> fields = {
                {"k", std::to_string(r.k)},
                {"n", std::to_string(r.n)},
                {"prime_bound", std::to_string(r.prime_bound)},
                {"partial_product", decimal_string(r.partial_product, 8)},
                {"bracket_low", decimal_string(r.partial_product * r.tail_lower_bound, 12)},
                {"bracket_high", decimal_string(r.partial_product, 12)}};
            if (euler_exact) fields.push_back({"exact", to_string(r.partial_product)});
            sink.row(fields);
            return 0;
        }

        if (*inf_cmd) {
            RhoInfinityResult r = inf_serial
                                      ? rho_infinity_mc_serial(ik, in, inf_samples, inf_seed)
                                      : rho_infinity_mc(ik, in, inf_samples, inf_seed);
            RowSink sink{format()};
            sink.row({{"k", std::to_string(r.k)},
                      {"n", std::to_string(r.n)},
                      {"samples", std::to_string(r.samples)},
                      {"seed", std::to_string(r.seed)},
                      {"estimate", fixed6(r.estimate)},
                      {"stderr", fixed6(r.stderr_)}});
            return 0;
        }

        if (*table_cmd) {
            if (!remark) throw CLI::ValidationError("table", "only --remark is available");
            RowSink sink{format()};
            bool markdown = format() == Format::plain;
            if (markdown) {
                std::cout << "| k | prod_p rho_p(k,2k+2) | rho_inf(k,2k+2) | rho_glob(k,2k+2) |"
                             " stderr_inf | seed |\n";
                std::cout << "|---|----------------------|-----------------|------------------|"
                             "------------|------|\n";
            }
            for (long k = 1; k <= 5; ++k) {
                GlobalDensityResult g = rho_global(k, 2 * k + 2, tb, tsamples, tseed);
                std::string local = decimal_string(g.euler.partial_product, 8);
                if (markdown) {
                    std::cout << "| " << k << " | " << local << " | "
                              << fixed6(g.real_place.estimate) << " | " << fixed6(g.estimate)
                              << " | " << fixed6(g.real_place.stderr_) << " | " << tseed
                              << " |\n";
                } else {
                    sink.row({{"k", std::to_string(k)},
                              {"local_product", local},
                              {"local_bracket_low",
                               decimal_string(
                                   g.euler.partial_product * g.euler.tail_lower_bound, 12)},
                              {"rho_inf", fixed6(g.real_place.estimate)},
                              {"rho_inf_stderr", fixed6(g.real_place.stderr_)},
                              {"rho_glob", fixed6(g.estimate)},
                              {"glob_stat_halfwidth", fixed6(g.stat_halfwidth)},
                              {"samples", std::to_string(tsamples)},
                              {"seed", std::to_string(tseed)}});
                }
            }
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
