// Compares the OpenMP kernels against their serial reference
// implementations and reports timings and speedups.

#include <omp.h>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "qfiso/fpforms.hpp"
#include "qfiso/global_density.hpp"
#include "qfiso/kovaleva.hpp"
#include "qfiso/qp.hpp"

using namespace qfiso;
using Clock = std::chrono::steady_clock;

namespace {

double timed(const std::function<void()>& fn) {
    auto t0 = Clock::now();
    fn();
    auto t1 = Clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void report(const std::string& name, double serial, double parallel, bool identical) {
    std::printf("%-28s serial %8.3fs  openmp %8.3fs  speedup %5.2fx  results %s\n", name.c_str(),
                serial, parallel, serial / parallel, identical ? "identical" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    unsigned long long mc_samples = 200000;
    if (argc > 1) mc_samples = std::stoull(argv[1]);
    std::printf("threads: %d\n", omp_get_max_threads());

    {
        Census serial_census, parallel_census;
        double ts = timed([&] { serial_census = enumerate_class_census_serial(3, 4); });
        double tp = timed([&] { parallel_census = enumerate_class_census(3, 4); });
        report("census p=3 n=4", ts, tp, serial_census == parallel_census);
    }
    {
        McRhoResult s{}, par{};
        double ts = timed([&] { s = mc_rho_serial(3, 2, 5, 8, mc_samples, 42); });
        double tp = timed([&] { par = mc_rho(3, 2, 5, 8, mc_samples, 42); });
        report("mc-rho p=3 k=2 n=5", ts, tp, s.hits == par.hits);
    }
    {
        InvariantFrequencyResult s, par;
        double ts = timed([&] { s = invariant_frequency_mc_serial(3, 3, 8, mc_samples / 2, 42); });
        double tp = timed([&] { par = invariant_frequency_mc(3, 3, 8, mc_samples / 2, 42); });
        report("invariant-mc p=3 n=3", ts, tp,
               s.counts == par.counts && s.singular == par.singular);
    }
    {
        RhoInfinityResult s{}, par{};
        double ts = timed([&] { s = rho_infinity_mc_serial(2, 6, mc_samples, 42); });
        double tp = timed([&] { par = rho_infinity_mc(2, 6, mc_samples, 42); });
        report("rho-infinity k=2 n=6", ts, tp, s.hits == par.hits);
    }
    return 0;
}
