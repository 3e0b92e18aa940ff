#include "qosc/kk_kernel.hpp"

#include <cmath>

#include "qosc/errors.hpp"
#include "qosc/numerics.hpp"

namespace qosc::kk {

double chi2_series(double x) {
    if (x < 0.0) return -chi2_series(-x);
    if (x > 1.0) throw NumericalError("chi2_series: |x| > 1");
    const double x2 = x * x;
    double term = x;
    double sum = 0.0;
    for (int k = 0; k < 200000; ++k) {
        const double odd = 2.0 * k + 1.0;
        const double contrib = term / (odd * odd);
        sum += contrib;
        if (contrib < 1e-16 * (1.0 + sum)) break;
        term *= x2;
    }
    return sum;
}

TailModel fit_log_tail(const std::vector<double>& omega,
                       const std::vector<double>& log_mag,
                       double edge_fraction, double* edge_variation) {
    const std::size_t n = omega.size();
    std::size_t m = static_cast<std::size_t>(std::ceil(edge_fraction * static_cast<double>(n)));
    if (m < 3) m = 3;
    if (2 * m > n) throw ResolutionError("fit_log_tail: grid too small for edge fit");

    std::vector<double> lx, ly;
    lx.reserve(2 * m);
    ly.reserve(2 * m);
    double vmin = log_mag[0], vmax = log_mag[0];
    auto take = [&](std::size_t i) {
        const double w = std::abs(omega[i]);
        if (!(w > 0.0)) throw NumericalError("fit_log_tail: edge region touches omega = 0");
        lx.push_back(std::log(w));
        ly.push_back(log_mag[i]);
        vmin = std::min(vmin, log_mag[i]);
        vmax = std::max(vmax, log_mag[i]);
    };
    vmin = vmax = log_mag[0];
    for (std::size_t i = 0; i < m; ++i) take(i);
    for (std::size_t i = n - m; i < n; ++i) take(i);
    if (edge_variation) *edge_variation = vmax - vmin;

    const auto fit = num::fit_line(lx, ly);
    TailModel tail;
    tail.log_slope = fit.slope;
    const double half_width = std::abs(omega.back());
    tail.edge_value = fit.intercept + fit.slope * std::log(half_width);
    return tail;
}

namespace {

// Phase at a single grid point; shared verbatim by the serial and OpenMP paths.
inline double point_phase(const std::vector<double>& omega,
                          const std::vector<double>& log_mag,
                          const TailModel& tail, std::size_t i) {
    const std::size_t n = omega.size();
    const double h = omega[1] - omega[0];
    const double w = omega[i];
    const double li = log_mag[i];
    const double half_width = omega[n - 1];

    // Regular part: trapezoid over [L(w') - L(w)] / (w' - w), with the
    // removable point replaced by the local derivative of L.
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double val;
        if (j == i) {
            if (i == 0)
                val = (log_mag[1] - log_mag[0]) / h;
            else if (i == n - 1)
                val = (log_mag[n - 1] - log_mag[n - 2]) / h;
            else
                val = (log_mag[i + 1] - log_mag[i - 1]) / (2.0 * h);
        } else {
            val = (log_mag[j] - li) / (omega[j] - w);
        }
        const double weight = (j == 0 || j == n - 1) ? 0.5 * h : h;
        acc += weight * val;
    }

    // Boundary log of the subtracted term, folded with the constant part of
    // the tail so the pair stays finite. At the two outermost points the
    // fold is exact only when the tail intercept matches L(edge); the fit
    // residual there is below grid accuracy, so the limit value 0 is used.
    double boundary = 0.0;
    if (i != 0 && i != n - 1) {
        const double ratio = (half_width - w) / (half_width + w);
        boundary = (li - tail.edge_value) * std::log(ratio);
    }

    // Sloped part of the tail continuation.
    const double x = w / half_width;
    const double sloped = 2.0 * tail.log_slope * chi2_series(x);

    return -(acc + boundary + sloped) / M_PI;
}

}  // namespace

void kk_phase_serial(const std::vector<double>& omega,
                     const std::vector<double>& log_mag,
                     const TailModel& tail,
                     std::vector<double>& phase_out) {
    const std::size_t n = omega.size();
    phase_out.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        phase_out[i] = point_phase(omega, log_mag, tail, i);
}

void kk_phase_parallel(const std::vector<double>& omega,
                       const std::vector<double>& log_mag,
                       const TailModel& tail,
                       std::vector<double>& phase_out) {
    const std::size_t n = omega.size();
    phase_out.resize(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        phase_out[static_cast<std::size_t>(i)] =
            point_phase(omega, log_mag, tail, static_cast<std::size_t>(i));
}

}  // namespace qosc::kk
