#include "qosc/feedback_loop.hpp"

#include <cmath>

#include "qosc/errors.hpp"

namespace qosc::loop {

void LoopParams::validate() const {
    if (!(eta > 0.0) || !(eta < 1.0))
        throw ValidationError("loop params: eta must lie in (0, 1)");
    if (!(tau_f > 0.0)) throw ValidationError("loop params: tau_f must be positive");
    if (!(tau_g > 0.0)) throw ValidationError("loop params: tau_g must be positive");
    if (nbar_0 < 0.0 || nbar_g < 0.0)
        throw ValidationError("loop params: occupations must be >= 0");
    if (!std::isfinite(r_0) || !std::isfinite(r_g))
        throw ValidationError("loop params: squeezing parameters must be finite");
    if (!(flux > 0.0)) throw ValidationError("loop params: flux must be positive");
}

TransferPair solve_loop_exact(std::complex<double> gain, double eta, double tau_f,
                              double omega, double loop_phase_offset) {
    if (!(eta > 0.0) || !(eta < 1.0))
        throw ValidationError("solve_loop_exact: eta must lie in (0, 1)");
    if (!(tau_f >= 0.0))
        throw ValidationError("solve_loop_exact: tau_f must be >= 0");

    const std::complex<double> i1(0.0, 1.0);
    const double se = std::sqrt(eta);
    const std::complex<double> delayed =
        gain * std::exp(i1 * (omega * tau_f + loop_phase_offset));
    const std::complex<double> denom = 1.0 + i1 * se * delayed;
    if (std::abs(denom) < kPoleEpsilon)
        throw PoleError("solve_loop_exact: evaluation on the oscillation pole");

    TransferPair t;
    t.h0 = i1 * se + (1.0 - eta) * delayed / denom;
    const double excess = std::sqrt(std::abs(std::norm(gain) - 1.0));
    t.hg = excess * std::sqrt(1.0 - eta) / denom;
    return t;
}

TransferPair near_resonance_transfer(const LoopParams& p, double omega) {
    p.validate();
    const double tau = p.tau_g + p.tau_f;
    if (std::abs(omega) * tau < kPoleEpsilon)
        throw PoleError("near_resonance_transfer: omega too close to the carrier");
    const double se = std::sqrt(p.eta);
    const std::complex<double> h = (se - 1.0 / se) / std::complex<double>(0.0, omega * tau);
    TransferPair t;
    t.h0 = h;
    t.hg = h;
    t.validity_warning = std::abs(omega) * tau > 0.1;
    return t;
}

QuadratureSpectra output_spectra(const LoopParams& p, double omega) {
    const TransferPair t = near_resonance_transfer(p, omega);
    const double h2 = std::norm(t.h0);
    QuadratureSpectra s;
    s.sqq = h2 * (0.5 * std::exp(2.0 * p.r_0) + p.nbar_0 +
                  0.5 * std::exp(2.0 * p.r_g) + p.nbar_g);
    s.spp = h2 * (0.5 * std::exp(-2.0 * p.r_0) + p.nbar_0 +
                  0.5 * std::exp(-2.0 * p.r_g) + p.nbar_g);
    s.sqp = {0.0, 0.0};
    s.validity_warning = t.validity_warning;
    return s;
}

double gst_linewidth(const LoopParams& p) {
    p.validate();
    const double inv_sum = p.inv_kappa_sum();
    return (1.0 + 2.0 * p.nbar_th()) / (2.0 * p.flux * inv_sum * inv_sum);
}

SqlBound sql_product(const LoopParams& p, double omega) {
    const TransferPair t = near_resonance_transfer(p, omega);
    const double sum = std::norm(t.h0) + std::norm(t.hg);
    SqlBound b;
    b.exact = 0.25 * sum * sum;
    const double u = omega * p.inv_kappa_sum();
    b.approx = 1.0 / (u * u * u * u);
    return b;
}

double squeezed_linewidth(const LoopParams& p) {
    return gst_linewidth(p) * 0.5 * (std::exp(-2.0 * p.r_0) + std::exp(-2.0 * p.r_g));
}

}  // namespace qosc::loop
