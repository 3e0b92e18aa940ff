#ifndef QOSC_CAUSAL_GAIN_HPP
#define QOSC_CAUSAL_GAIN_HPP

#include <vector>

namespace qosc::gain {

// Amplifier gain magnitude sampled on a uniform grid of offsets from the
// carrier. log_mag holds log|G|; the grid is symmetric about 0 (odd count).
// eta is the out-coupler transmission of the loop the amplifier sits in; a
// saturated amplifier peaks at |G| = 1/sqrt(eta).
struct GainMagnitudeProfile {
    std::vector<double> omega;
    std::vector<double> log_mag;
    double eta = 0.0;

    void validate() const;           // throws ValidationError
    double spacing() const;
    double half_width() const;
    std::size_t center_index() const;
    bool peaked() const;             // strict interior maximum at omega = 0
};

// Saturated peak with quadratic falloff: |G| = 1/sqrt(eta) - a*omega^2.
// Requires curvature_a * half_width^2 < 1/sqrt(eta) so |G| stays positive.
GainMagnitudeProfile quadratic_gain_model(double eta, double curvature_a,
                                          double half_width, int n_points);

// Saturated Lorentzian: |G| = (1/sqrt(eta)) / sqrt(1 + (omega/gamma_h)^2).
GainMagnitudeProfile lorentzian_gain_model(double eta, double gamma_h,
                                           double half_width, int n_points);

struct PhaseProfile {
    std::vector<double> omega;
    std::vector<double> phase;       // radians
    double tau_g = 0.0;              // group delay at the carrier
    bool truncation_warning = false; // log_mag not flat over the outer 10%
    bool frequency_selective = true; // false for (near-)constant profiles
};

struct KkOptions {
    int min_points = 32;                  // resolution floor for the transform
    double edge_flatness_threshold = 0.05;
    double center_phase_tol = 1e-3;       // |phi(0)| sanity bound, radians
    bool parallel = true;                 // OpenMP outer loop
};

// Minimum phase associated with the magnitude profile, via the principal-value
// transform of log|G| with a log-linear continuation of the profile beyond the
// grid edges. tau_g is filled from the phase slope at the carrier.
PhaseProfile minimum_phase_kk(const GainMagnitudeProfile& profile,
                              const KkOptions& options = {});

struct GroupDelayResult {
    double tau_g = 0.0;
    bool frequency_selective = true;
};

// Five-point central-difference slope of the phase at omega = 0. When the
// originating magnitude profile is supplied and is peaked, a non-positive
// slope raises CausalityError.
GroupDelayResult group_delay(const PhaseProfile& phase,
                             const GainMagnitudeProfile* source = nullptr);

}  // namespace qosc::gain

#endif
