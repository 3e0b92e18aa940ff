#ifndef QOSC_KK_KERNEL_HPP
#define QOSC_KK_KERNEL_HPP

#include <cstddef>
#include <vector>

namespace qosc::kk {

/*
 * Principal-value transform of a sampled log-magnitude:
 *
 *   phi(w) = -(1/pi) P int L(w') / (w' - w) dw'
 *
 * evaluated with the singularity subtracted,
 *
 *   P int_a^b L(w')/(w'-w) dw'
 *     = int_a^b [L(w') - L(w)]/(w'-w) dw'  +  L(w) ln((b-w)/(w-a)),
 *
 * the regular part by composite trapezoid on the grid (the removable point
 * takes the local derivative of L). Frequencies outside the grid are modeled
 * by a log-linear continuation L(|w'|) ~ c + m ln(|w'|/W) fitted at the
 * edges; its contribution reduces to
 *
 *   c ln((W+w)/(W-w)) + 2 m sum_k x^{2k+1}/(2k+1)^2 ,  x = w/W,
 *
 * and the c part is folded against the on-grid boundary log so a constant
 * profile yields exactly zero phase everywhere.
 */

// Continuation of log|G| beyond the grid: L(|w|) ~ edge_value + log_slope*ln(|w|/W).
struct TailModel {
    double edge_value = 0.0;
    double log_slope = 0.0;
};

// Fit the tail model over the outer `edge_fraction` of both sides of a
// symmetric profile. Also reports the min-to-max variation of log_mag over
// that region (the truncation-warning statistic).
TailModel fit_log_tail(const std::vector<double>& omega,
                       const std::vector<double>& log_mag,
                       double edge_fraction, double* edge_variation);

// Serial reference transform. phase_out must have omega.size() entries.
void kk_phase_serial(const std::vector<double>& omega,
                     const std::vector<double>& log_mag,
                     const TailModel& tail,
                     std::vector<double>& phase_out);

// OpenMP version: distributes the outer loop over grid points. Per-point
// arithmetic is identical to the serial kernel, so results match bitwise.
void kk_phase_parallel(const std::vector<double>& omega,
                       const std::vector<double>& log_mag,
                       const TailModel& tail,
                       std::vector<double>& phase_out);

// Legendre chi_2(x) = sum_k x^{2k+1}/(2k+1)^2 for |x| <= 1 (tail series).
double chi2_series(double x);

}  // namespace qosc::kk

#endif
