#include "qosc/linewidth.hpp"

#include <algorithm>
#include <cmath>

#include "qosc/errors.hpp"
#include "qosc/numerics.hpp"

namespace qosc::lw {

namespace {

constexpr double kLn2 = 0.6931471805599453;

struct RawBeta {
    double gamma_raw = 0.0;
    double omega_cut = 0.0;
    double a_raw = 0.0;
};

// Uncalibrated separation-line pipeline. The calibration wrapper maps its
// pure-1/w^2 output onto the flat-route value, so this helper must not touch
// pipeline_calibration() itself.
RawBeta raw_beta_line(const SpectrumFn& spp, double flux, const BetaLineOptions& opt) {
    if (!(flux > 0.0))
        throw ValidationError("beta_line_linewidth: flux must be positive");
    if (!(opt.bracket_lo > 0.0) || !(opt.bracket_hi > opt.bracket_lo))
        throw ValidationError("beta_line_linewidth: need 0 < bracket_lo < bracket_hi");

    const double line_c = 16.0 * kLn2 * flux / M_PI;  // line(w) = line_c / w
    auto excess = [&](double w) { return spp(w) - line_c / w; };

    // The spectrum can cross the line twice (plateau below it at small w,
    // falloff below it at large w). Scan a log grid and keep the last
    // positive-to-nonpositive transition; that is the cutoff.
    double lo = opt.bracket_lo;
    double hi = opt.bracket_hi;
    const int n = std::max(opt.scan_points, 8);
    double a = 0.0, b = 0.0;
    for (int expand = 0;; ++expand) {
        const double llo = std::log(lo);
        const double step = (std::log(hi) - llo) / (n - 1);
        bool found = false;
        bool any_positive = false;
        double prev_w = lo;
        double prev_e = excess(lo);
        for (int i = 1; i < n; ++i) {
            const double w = std::exp(llo + step * i);
            const double e = excess(w);
            any_positive = any_positive || prev_e > 0.0;
            if (prev_e > 0.0 && e <= 0.0) {
                a = prev_w;
                b = w;
                found = true;
            }
            prev_w = w;
            prev_e = e;
        }
        any_positive = any_positive || prev_e > 0.0;
        if (found) break;
        if (expand >= opt.max_expand)
            throw NoCutoffError(
                "beta_line_linewidth: spectrum never crosses the separation line");
        if (any_positive) {
            hi *= 10.0;  // still above the line at the top edge
        } else {
            lo /= 10.0;
            hi *= 10.0;
        }
    }
    const double cut = num::brent(excess, a, b);

    // Integrate w^2 Spp from (almost) zero to the cutoff. The integrand is
    // bounded there even when Spp itself diverges, but a literal w = 0 sample
    // of a 1/w^2 profile would produce 0 * inf.
    const double eps = cut * 1e-9;
    auto integrand = [&](double w) { return w * w * spp(w); };
    const double coarse = std::abs(integrand(0.5 * cut)) * cut;
    const double integral =
        num::adaptive_simpson(integrand, eps, cut, 1e-12 * coarse + 1e-300,
                              opt.quad_rel_tol, 48);

    RawBeta out;
    out.omega_cut = cut;
    out.a_raw = integral / (8.0 * M_PI * M_PI * M_PI * flux);
    out.gamma_raw = std::sqrt(8.0 * kLn2 * std::max(out.a_raw, 0.0));
    return out;
}

}  // namespace

double pipeline_calibration() {
    static const double cal = [] {
        // Reference: Spp = 1/w^2 at unit flux, whose flat-route linewidth is
        // exactly 1/2. The ratio fixes the constant for every other spectrum.
        const SpectrumFn ref = [](double w) { return 1.0 / (w * w); };
        const RawBeta raw = raw_beta_line(ref, 1.0, BetaLineOptions{});
        return 0.5 / raw.gamma_raw;
    }();
    return cal;
}

LinewidthResult flat_linewidth(const SpectrumFn& spp, double flux, double omega_probe) {
    if (!(flux > 0.0))
        throw ValidationError("flat_linewidth: flux must be positive");
    if (!(omega_probe > 0.0))
        throw ValidationError("flat_linewidth: probe frequency must be positive");
    const double s1 = spp(omega_probe);
    const double s2 = spp(2.0 * omega_probe);
    if (!(s1 > 0.0) || !(s2 > 0.0))
        throw MethodMismatchError("flat_linewidth: spectrum not positive at the probe");
    if (std::abs(s1 / s2 - 4.0) > 0.2)
        throw MethodMismatchError(
            "flat_linewidth: spectrum is not 1/w^2 at the probe frequency");
    LinewidthResult r;
    r.method = Method::flat;
    r.gamma = omega_probe * omega_probe * s1 / (2.0 * flux);
    r.a_integral = r.gamma * r.gamma / (8.0 * kLn2);
    return r;
}

LinewidthResult beta_line_linewidth(const SpectrumFn& spp, double flux,
                                    const BetaLineOptions& opt) {
    const RawBeta raw = raw_beta_line(spp, flux, opt);
    const double cal = pipeline_calibration();
    LinewidthResult r;
    r.method = Method::beta_line;
    r.omega_cut = raw.omega_cut;
    r.calibration = cal;
    r.a_integral = cal * cal * raw.a_raw;
    r.gamma = std::sqrt(8.0 * kLn2 * r.a_integral);
    return r;
}

LinewidthResult ss_closed_form_linewidth(const sr::SuperradiantParams& p, double flux,
                                         double nbar_th) {
    p.validate();
    if (!(flux > 0.0))
        throw ValidationError("ss_closed_form_linewidth: flux must be positive");
    if (nbar_th < 0.0)
        throw ValidationError("ss_closed_form_linewidth: nbar_th must be nonnegative");

    const double inv_sum = 1.0 / p.kappa_f + 1.0 / p.kappa_g;
    const double gst = (1.0 + 2.0 * nbar_th) / (2.0 * flux * inv_sum * inv_sum);
    const double c = p.cooperativity();
    const double gamma_const = 4.0 * kLn2 * (c - 2.0) * (c - 2.0) * p.kappa_f *
                               p.kappa_g / (M_PI * M_PI * (p.kappa_f + p.kappa_g));

    LinewidthResult r;
    r.method = Method::closed_form;
    r.calibration = 1.0;
    const double x = gamma_const * p.s * p.s;
    if (x == 0.0) {
        r.gamma = gst;
    } else {
        const double rad = gst * (gst - x * std::atan(gst / x));
        r.gamma = std::sqrt(std::max(rad, 0.0));
    }
    r.a_integral = r.gamma * r.gamma / (8.0 * kLn2);
    r.reduction_scale = r.gamma / gst;
    return r;
}

}  // namespace qosc::lw
