#ifndef QOSC_SUPERRADIANT_HPP
#define QOSC_SUPERRADIANT_HPP

#include <complex>

#include "qosc/feedback_loop.hpp"  // QuadratureSpectra

namespace qosc::sr {

// Laser driven by N two-level atoms coupled at single-atom rate g inside a
// cavity with output linewidth kappa_f; the atomic channel relaxes at
// kappa_g. One-axis-twisting strength is stored canonically as the
// dimensionless s = kappa_f * chi / (2 g^2). Input noise fields mirror
// loop::LoopParams: occupations and phase-squeezing per port (a: cavity
// input, b: atomic bath).
struct SuperradiantParams {
    double n_atoms = 0.0;
    double g = 0.0;
    double kappa_f = 0.0;
    double kappa_g = 0.0;
    double s = 0.0;
    double nbar_a = 0.0;
    double nbar_b = 0.0;
    double r_a = 0.0;
    double r_b = 0.0;

    void validate() const;
    double cooperativity() const;                   // C = 8 g^2 N / (kf kg)
    double threshold_cooperativity() const { return 1.0 / (1.0 + s); }
    bool above_threshold() const;
    double nbar_th() const { return 0.5 * (nbar_a + nbar_b); }
    double chi() const { return 2.0 * g * g * s / kappa_f; }
};

SuperradiantParams params_from_chi(double n_atoms, double g, double kappa_f,
                                   double kappa_g, double chi);

struct MeanField {
    double beta_sq = 0.0;      // atomic mode occupation |beta|^2
    double alpha_sq = 0.0;     // intracavity photon number |alpha|^2
    double flux_out = 0.0;     // output photon flux kappa_f |alpha|^2
    double hp_validity = 0.0;  // |beta|^2 / 2N, must stay < 1
    bool above_threshold = false;
    bool hp_warning = false;   // hp_validity > 0.1
};

// Mean field without twisting (requires s == 0). Below threshold all
// occupations are zero.
MeanField steady_state(const SuperradiantParams& p);

// Mean field with twisting; reduces to steady_state at s = 0.
MeanField ss_steady_state(const SuperradiantParams& p);

struct SmallSignalTransfer {
    std::complex<double> from_a_in;       // cavity input -> output
    std::complex<double> from_b_in_conj;  // conjugated atomic input -> output
    bool validity_warning = false;        // |omega| > 0.1 min(kf, kg)
};

// Leading small-omega output fluctuation transfer above threshold (s == 0):
// coefficients -i and +i over (1/kf + 1/kg) omega. Throws NotLasingError
// below threshold.
SmallSignalTransfer fluctuation_transfer(const SuperradiantParams& p, double omega);

// Symmetrized output spectra from the small-omega transfer (s == 0).
loop::QuadratureSpectra output_spectra(const SuperradiantParams& p, double omega);

// Quantum-limited linewidth from the mean-field flux; identical in form to
// loop::gst_linewidth.
double linewidth(const SuperradiantParams& p);

// Quadrature-diagonal transfer: amplitude (q) couples only to input q's,
// phase (p) only to input p's.
struct QuadratureTransfer {
    std::complex<double> q_from_qa;
    std::complex<double> q_from_qb;
    std::complex<double> p_from_pa;
    std::complex<double> p_from_pb;
};

// Closed-form spin-squeezed transfer, small-omega numerators with the full
// phase-sector denominator s(C-2) kf kg + i omega (kf(1+2s) + kg(1+(4-C)s)).
QuadratureTransfer ss_fluctuation_transfer_exact(const SuperradiantParams& p,
                                                 double omega);

// Fully truncated small-omega form: q like the unsqueezed laser, p with the
// denominator s(C-2) kf kg + i omega (kf + kg).
QuadratureTransfer ss_fluctuation_transfer_approx(const SuperradiantParams& p,
                                                  double omega);

// Independent route: direct 4x4 complex solve of the linearized equations of
// motion in the ladder basis (a, a^dag, b, b^dag) at frequency omega, rotated
// to quadratures. Cross-sector entries (q from p inputs and vice versa)
// vanish analytically and are reported for verification.
struct FullQuadratureTransfer {
    std::complex<double> q_qa, q_pa, q_qb, q_pb;
    std::complex<double> p_qa, p_pa, p_qb, p_pb;
};
FullQuadratureTransfer ss_transfer_matrix_solve(const SuperradiantParams& p,
                                                double omega);

enum class SsRoute { exact, approx };

// Output spectra composed from the spin-squeezed transfer and the per-port
// input spectra (1/2 + nbar) e^{+-2r}.
loop::QuadratureSpectra ss_output_spectra(const SuperradiantParams& p, double omega,
                                          SsRoute route = SsRoute::exact);

// Linearized drift coefficients shared by the matrix solve and the
// time-domain simulation: coupling K and twisting rate M, in whichever
// regime (above threshold, below, or decoupled g = 0) applies.
struct LinearCoefficients {
    double coupling_k = 0.0;
    double twist_m = 0.0;
    bool above_threshold = false;
};
LinearCoefficients linear_coefficients(const SuperradiantParams& p);

}  // namespace qosc::sr

#endif
