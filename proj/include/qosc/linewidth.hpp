#pragma once

#include <functional>

#include "qosc/superradiant.hpp"

// Full-width-half-maximum estimators for the emitted field.
//
// Three routes are provided:
//   flat        reads Gamma = w^2 Spp(w) / (2 flux) off a single probe point,
//               valid only while the phase spectrum is pure 1/w^2
//   beta_line   integrates w^2 Spp up to the crossing with the separation line
//               16 ln2 flux / (pi w); works for spectra with a low-frequency
//               plateau where the flat reading has no meaning
//   closed_form analytic shortcut for the spin-squeezed steady state
//
// The beta-line route carries a fixed calibration constant that maps the raw
// integral onto the flat-route value for a pure 1/w^2 spectrum. It is computed
// once at runtime from that reference case and reported in the result.

namespace qosc::lw {

enum class Method { flat, beta_line, closed_form };

struct LinewidthResult {
    double gamma = 0.0;        // FWHM, angular frequency units
    double omega_cut = 0.0;    // separation-line crossing (beta_line only)
    double a_integral = 0.0;   // calibrated integral, gamma = sqrt(8 ln2 a)
    double calibration = 1.0;  // factor applied to the raw beta-line value
    double reduction_scale = 1.0;  // gamma over the unsqueezed reference, when known
    Method method = Method::flat;
};

// omega -> Spp(omega), two-sided symmetric spectrum sampled at omega > 0
using SpectrumFn = std::function<double(double)>;

struct BetaLineOptions {
    double bracket_lo = 1e-10;  // initial cutoff search range
    double bracket_hi = 1e4;
    int max_expand = 10;        // decade expansions before giving up
    int scan_points = 256;      // log-spaced samples used to locate the crossing
    double quad_rel_tol = 1e-8;
};

// Raw-to-flat calibration for the beta-line pipeline (evaluates to 2*pi up to
// quadrature error). Computed lazily, then cached.
double pipeline_calibration();

// Single-point reading. Checks Spp(w)/Spp(2w) = 4 within 5 percent first and
// throws MethodMismatchError when the spectrum is not 1/w^2 there.
LinewidthResult flat_linewidth(const SpectrumFn& spp, double flux, double omega_probe);

// Separation-line integral. Throws NoCutoffError when the spectrum never rises
// above the line inside the (expanded) search range.
LinewidthResult beta_line_linewidth(const SpectrumFn& spp, double flux,
                                    const BetaLineOptions& opt = {});

// Analytic spin-squeezed result. flux is the emitted photon flux; nbar_th adds
// equal thermal occupancy on both ports. s = 0 reduces to the unsqueezed value.
LinewidthResult ss_closed_form_linewidth(const sr::SuperradiantParams& p, double flux,
                                         double nbar_th = 0.0);

}  // namespace qosc::lw
