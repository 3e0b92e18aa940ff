#ifndef QOSC_FEEDBACK_LOOP_HPP
#define QOSC_FEEDBACK_LOOP_HPP

#include <complex>

namespace qosc::loop {

// Oscillator loop: amplifier with bare lifetime tau_g, feedback delay tau_f,
// out-coupler transmission eta. Linewidths kappa_* = (1 - eta)/tau_* are
// derived, never stored. Input noise: occupations nbar_* and phase-squeezing
// parameters r_* for the out-coupler vacuum port (0) and the amplifier port
// (G). flux is the mean output photon flux |alpha|^2.
struct LoopParams {
    double eta = 0.0;
    double tau_f = 0.0;
    double tau_g = 0.0;
    double nbar_0 = 0.0;
    double nbar_g = 0.0;
    double r_0 = 0.0;
    double r_g = 0.0;
    double flux = 0.0;

    void validate() const;
    double kappa_f() const { return (1.0 - eta) / tau_f; }
    double kappa_g() const { return (1.0 - eta) / tau_g; }
    double inv_kappa_sum() const { return 1.0 / kappa_f() + 1.0 / kappa_g(); }
    double nbar_th() const { return 0.5 * (nbar_0 + nbar_g); }
    bool high_q() const { return eta > 0.9; }  // validity regime of the kappa forms
};

struct TransferPair {
    std::complex<double> h0;  // out-coupler vacuum port -> output
    std::complex<double> hg;  // amplifier noise port -> output
    bool validity_warning = false;
};

// Static loop phase folded into the delay factor e^{i(omega tau_f + offset)}.
// The default puts the oscillation pole at omega = 0 for a real saturated gain.
inline constexpr double kPoleAtZeroOffset = M_PI / 2.0;

inline constexpr double kPoleEpsilon = 1e-12;

// Exact single-frequency solve of the loop relations. gain is the complex
// amplifier response at this offset; the amplifier noise port carries the
// phase-insensitive added-noise weight sqrt(||G|^2 - 1|). Throws PoleError
// when the loop denominator collapses below kPoleEpsilon.
TransferPair solve_loop_exact(std::complex<double> gain, double eta, double tau_f,
                              double omega,
                              double loop_phase_offset = kPoleAtZeroOffset);

// Leading-order transfer near the carrier: both ports couple with
// (sqrt(eta) - 1/sqrt(eta)) / (i omega (tau_g + tau_f)). Sets the validity
// flag when |omega|(tau_g + tau_f) > 0.1.
TransferPair near_resonance_transfer(const LoopParams& p, double omega);

struct QuadratureSpectra {
    double sqq = 0.0;
    double spp = 0.0;
    std::complex<double> sqp{0.0, 0.0};
    bool validity_warning = false;
};

// Symmetrized output spectra in the near-resonance regime, for thermal and
// phase-squeezed inputs on both ports (vacuum = 1/2 per quadrature).
QuadratureSpectra output_spectra(const LoopParams& p, double omega);

// Quantum-limited linewidth (1 + 2 nbar_th) / (2 flux (1/kappa_f + 1/kappa_g)^2).
double gst_linewidth(const LoopParams& p);

struct SqlBound {
    double exact = 0.0;   // (1/4)(|H0|^2 + |HG|^2)^2
    double approx = 0.0;  // (omega (1/kappa_f + 1/kappa_g))^-4, high-Q form
};

// Lower bound on the Sqq*Spp uncertainty product of the output.
SqlBound sql_product(const LoopParams& p, double omega);

// Linewidth with phase-squeezed inputs: gst * (e^{-2 r_0} + e^{-2 r_g}) / 2.
double squeezed_linewidth(const LoopParams& p);

}  // namespace qosc::loop

#endif
