#include "qosc/causal_gain.hpp"

#include <cmath>
#include <cstddef>

#include "qosc/errors.hpp"
#include "qosc/kk_kernel.hpp"
#include "qosc/numerics.hpp"

namespace qosc::gain {

namespace {
constexpr double kGridRelTol = 1e-9;
}

void GainMagnitudeProfile::validate() const {
    if (omega.size() != log_mag.size())
        throw ValidationError("gain profile: omega/log_mag size mismatch");
    if (omega.size() < 3)
        throw ValidationError("gain profile: need at least 3 points");
    if (omega.size() % 2 == 0)
        throw ValidationError("gain profile: grid must contain omega = 0 (odd point count)");
    if (!(eta > 0.0) || !(eta < 1.0))
        throw ValidationError("gain profile: eta must lie in (0, 1)");
    const double h = omega[1] - omega[0];
    if (!(h > 0.0))
        throw ValidationError("gain profile: grid must be increasing");
    const double w = half_width();
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const double expected = -w + static_cast<double>(i) * h;
        if (std::abs(omega[i] - expected) > kGridRelTol * std::max(1.0, w))
            throw ValidationError("gain profile: grid must be uniform");
        const double mirror = omega[omega.size() - 1 - i];
        if (std::abs(omega[i] + mirror) > kGridRelTol * std::max(1.0, w))
            throw ValidationError("gain profile: grid must be symmetric about 0");
        if (!std::isfinite(log_mag[i]))
            throw ValidationError("gain profile: non-finite log magnitude");
    }
    if (std::abs(omega[center_index()]) > kGridRelTol * std::max(1.0, w))
        throw ValidationError("gain profile: center point must be omega = 0");
}

double GainMagnitudeProfile::spacing() const { return omega[1] - omega[0]; }

double GainMagnitudeProfile::half_width() const { return omega.back(); }

std::size_t GainMagnitudeProfile::center_index() const { return omega.size() / 2; }

bool GainMagnitudeProfile::peaked() const {
    const std::size_t c = center_index();
    const double lc = log_mag[c];
    for (std::size_t i = 0; i < log_mag.size(); ++i) {
        if (i == c) continue;
        if (!(log_mag[i] < lc)) return false;
    }
    return true;
}

namespace {

GainMagnitudeProfile make_profile(double eta, double half_width, int n_points) {
    if (n_points < 3 || n_points % 2 == 0)
        throw ValidationError("gain model: n_points must be odd and >= 3");
    if (!(half_width > 0.0))
        throw ValidationError("gain model: half_width must be positive");
    GainMagnitudeProfile p;
    p.eta = eta;
    p.omega.resize(static_cast<std::size_t>(n_points));
    p.log_mag.resize(static_cast<std::size_t>(n_points));
    const double h = 2.0 * half_width / static_cast<double>(n_points - 1);
    const int mid = n_points / 2;
    for (int i = 0; i < n_points; ++i)
        p.omega[static_cast<std::size_t>(i)] = static_cast<double>(i - mid) * h;
    p.omega[static_cast<std::size_t>(mid)] = 0.0;
    return p;
}

}  // namespace

GainMagnitudeProfile quadratic_gain_model(double eta, double curvature_a,
                                          double half_width, int n_points) {
    if (!(eta > 0.0) || !(eta < 1.0))
        throw ValidationError("quadratic gain model: eta must lie in (0, 1)");
    if (curvature_a < 0.0)
        throw ValidationError("quadratic gain model: curvature must be >= 0");
    const double peak = 1.0 / std::sqrt(eta);
    if (!(curvature_a * half_width * half_width < peak))
        throw ValidationError("quadratic gain model: magnitude would cross zero inside the grid");
    GainMagnitudeProfile p = make_profile(eta, half_width, n_points);
    for (std::size_t i = 0; i < p.omega.size(); ++i) {
        const double w = p.omega[i];
        p.log_mag[i] = std::log(peak - curvature_a * w * w);
    }
    p.validate();
    return p;
}

GainMagnitudeProfile lorentzian_gain_model(double eta, double gamma_h,
                                           double half_width, int n_points) {
    if (!(eta > 0.0) || !(eta < 1.0))
        throw ValidationError("lorentzian gain model: eta must lie in (0, 1)");
    if (!(gamma_h > 0.0))
        throw ValidationError("lorentzian gain model: gamma_h must be positive");
    GainMagnitudeProfile p = make_profile(eta, half_width, n_points);
    const double log_peak = -0.5 * std::log(eta);
    for (std::size_t i = 0; i < p.omega.size(); ++i) {
        const double u = p.omega[i] / gamma_h;
        p.log_mag[i] = log_peak - 0.5 * std::log1p(u * u);
    }
    p.validate();
    return p;
}

PhaseProfile minimum_phase_kk(const GainMagnitudeProfile& profile,
                              const KkOptions& options) {
    profile.validate();
    if (static_cast<int>(profile.omega.size()) < options.min_points)
        throw ResolutionError("minimum_phase_kk: grid coarser than the configured minimum");

    double edge_variation = 0.0;
    const kk::TailModel tail =
        kk::fit_log_tail(profile.omega, profile.log_mag, 0.10, &edge_variation);

    PhaseProfile out;
    out.omega = profile.omega;
    out.truncation_warning = edge_variation > options.edge_flatness_threshold;
    if (options.parallel)
        kk::kk_phase_parallel(profile.omega, profile.log_mag, tail, out.phase);
    else
        kk::kk_phase_serial(profile.omega, profile.log_mag, tail, out.phase);

    const double center_phase = out.phase[profile.center_index()];
    if (std::abs(center_phase) > options.center_phase_tol)
        throw NumericalError("minimum_phase_kk: phase at the carrier exceeds tolerance");

    const GroupDelayResult gd = group_delay(out, &profile);
    out.tau_g = gd.tau_g;
    out.frequency_selective = gd.frequency_selective;
    return out;
}

GroupDelayResult group_delay(const PhaseProfile& phase,
                             const GainMagnitudeProfile* source) {
    const std::size_t n = phase.omega.size();
    if (n < 5 || n % 2 == 0)
        throw ResolutionError("group_delay: need omega = 0 plus two neighbors per side");
    const std::size_t c = n / 2;
    if (std::abs(phase.omega[c]) > 1e-9 * std::max(1.0, std::abs(phase.omega.back())))
        throw ValidationError("group_delay: grid center must be omega = 0");
    const double h = phase.omega[c + 1] - phase.omega[c];
    GroupDelayResult res;
    res.tau_g = num::central_derivative_5(phase.phase[c - 2], phase.phase[c - 1],
                                          phase.phase[c + 1], phase.phase[c + 2], h);
    const bool peaked = source != nullptr && source->peaked();
    if (peaked && !(res.tau_g > 0.0))
        throw CausalityError("group_delay: non-positive group delay for a peaked profile");
    // A frequency-selective profile produces a group delay that dominates the
    // finite-difference noise floor of the transform.
    res.frequency_selective = std::abs(res.tau_g) * std::abs(phase.omega.back()) > 1e-6;
    if (source != nullptr) res.frequency_selective = peaked;
    return res;
}

}  // namespace qosc::gain
