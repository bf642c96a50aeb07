// Benchmark: OpenMP kernels against their serial reference twins.
// The two must agree exactly (counts are integers, Monte Carlo sums are
// reduced blockwise in a fixed order); only the wall time may differ.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hc/arch.hpp"
#include "hc/counting.hpp"

using namespace hc;

namespace {

template <typename F>
double timed(F&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, bool agree) {
    std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n", name, serial_s,
                parallel_s, serial_s / parallel_s, agree ? "results agree" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    long B = argc > 1 ? std::atol(argv[1]) : 1200;
    long samples = argc > 2 ? std::atol(argv[2]) : 4'000'000;
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif

    {
        long long a = 0, b = 0;
        double ts = timed([&] { a = count_points_serial(1, B); });
        double tp = timed([&] { b = count_points(1, B); });
        report("height enumeration (P^1)", ts, tp, a == b);
    }

    {
        CertifiedMorphism f(lift_from_spec("rat:(z^2+1)|1"));
        long radius = static_cast<long>(B / 16);
        long long a = 0, b = 0;
        double X = static_cast<double>(radius) * radius / 4.0;
        double ts = timed([&] { a = count_pullback_raw_serial(f, X, radius); });
        double tp = timed([&] { b = count_pullback_raw(f, X, radius); });
        report("pullback count (z^2+1)", ts, tp, a == b);
    }

    {
        CertifiedMorphism f(power_map(2, 2));
        ArchConfig cfg;
        cfg.mc_samples = samples;
        ArchConfig serial = cfg;
        serial.parallel = false;
        ArchEstimate a, b;
        double ts = timed([&] { a = arch_volume(f, serial); });
        double tp = timed([&] { b = arch_volume(f, cfg); });
        report("sphere MC volume (P^2)", ts, tp, a.value == b.value && a.error == b.error);
    }

    {
        CertifiedMorphism T2(chebyshev_lift(2));
        ArchConfig cfg;
        cfg.mc_samples = samples / 4;
        ArchConfig serial = cfg;
        serial.parallel = false;
        ArchEstimate a, b;
        double ts = timed([&] { a = limiting_arch_factor(T2, identity_map(1), serial); });
        double tp = timed([&] { b = limiting_arch_factor(T2, identity_map(1), cfg); });
        report("green MC limiting domain", ts, tp, a.value == b.value);
    }
    return 0;
}
