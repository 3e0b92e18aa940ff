// Serial versus OpenMP timings for the two heavy kernels: the phase
// transform and the Welch estimator. Also verifies that both code paths
// produce identical bits before reporting timings.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <vector>

#include "qosc/causal_gain.hpp"
#include "qosc/kk_kernel.hpp"
#include "qosc/spectrum.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

int read_arg(int argc, char** argv, int index, int fallback) {
    if (argc > index) return std::atoi(argv[index]);
    return fallback;
}

}  // namespace

int main(int argc, char** argv) {
    const int kk_points = read_arg(argc, argv, 1, 8001) | 1;  // odd
    const int welch_pow = read_arg(argc, argv, 2, 22);

#ifdef _OPENMP
    std::cout << "threads " << omp_get_max_threads() << "\n";
#else
    std::cout << "threads 1 (no OpenMP)\n";
#endif

    // phase transform on a Lorentzian magnitude profile
    const auto prof = qosc::gain::lorentzian_gain_model(0.95, 1.0, 100.0, kk_points);
    const auto tail = qosc::kk::fit_log_tail(prof.omega, prof.log_mag, 0.10, nullptr);

    std::vector<double> phase_serial(prof.omega.size());
    std::vector<double> phase_parallel(prof.omega.size());

    double t0 = now_seconds();
    qosc::kk::kk_phase_serial(prof.omega, prof.log_mag, tail, phase_serial);
    const double t_kk_serial = now_seconds() - t0;

    t0 = now_seconds();
    qosc::kk::kk_phase_parallel(prof.omega, prof.log_mag, tail, phase_parallel);
    const double t_kk_parallel = now_seconds() - t0;

    std::size_t kk_mismatch = 0;
    for (std::size_t i = 0; i < phase_serial.size(); ++i)
        if (phase_serial[i] != phase_parallel[i]) ++kk_mismatch;

    std::cout << "kk points " << kk_points << "\n";
    std::cout << "kk serial   " << t_kk_serial << " s\n";
    std::cout << "kk parallel " << t_kk_parallel << " s\n";
    std::cout << "kk speedup  " << t_kk_serial / t_kk_parallel << "\n";

    // Welch estimate on white noise
    const std::size_t n = std::size_t{1} << welch_pow;
    std::vector<double> q(n), p(n);
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = gauss(rng);
        p[i] = gauss(rng);
    }
    qosc::spec::WelchOptions opt;
    opt.segments = 16;

    t0 = now_seconds();
    const auto est_serial = qosc::spec::welch_serial(q, p, 0.01, opt);
    const double t_w_serial = now_seconds() - t0;

    t0 = now_seconds();
    const auto est_parallel = qosc::spec::welch_parallel(q, p, 0.01, opt);
    const double t_w_parallel = now_seconds() - t0;

    std::size_t w_mismatch = 0;
    for (std::size_t k = 0; k < est_serial.sqq.size(); ++k)
        if (est_serial.sqq[k] != est_parallel.sqq[k] ||
            est_serial.spp[k] != est_parallel.spp[k])
            ++w_mismatch;

    std::cout << "welch samples " << n << ", segment length "
              << est_serial.segment_length << "\n";
    std::cout << "welch serial   " << t_w_serial << " s\n";
    std::cout << "welch parallel " << t_w_parallel << " s\n";
    std::cout << "welch speedup  " << t_w_serial / t_w_parallel << "\n";

    if (kk_mismatch + w_mismatch > 0) {
        std::cout << "FAILED: " << kk_mismatch << " phase and " << w_mismatch
                  << " spectrum bins differ between serial and parallel\n";
        return 1;
    }
    std::cout << "serial and parallel outputs identical\n";
    return 0;
}
