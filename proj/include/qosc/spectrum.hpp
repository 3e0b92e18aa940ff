#pragma once

#include <cstddef>
#include <functional>
#include <vector>

// Welch power spectral density estimation for the simulated quadrature
// records. Two-sided normalization: a unit-variance white sequence sampled at
// dt has S = dt across the band, and the vacuum field floor sits at 1/2.
//
// welch_serial and welch_parallel run the same per-segment kernel and the
// same fixed-order reduction, so their outputs agree bit for bit; the
// parallel variant only distributes independent segments across threads.

namespace qosc::spec {

enum class Window { hann, rect };

struct WelchOptions {
    int segments = 8;              // exact segment count at 50 percent overlap
    Window window = Window::hann;
};

struct SpectrumEstimate {
    std::vector<double> omega;     // 2 pi k / (L dt), k = 1 .. L/2
    std::vector<double> sqq;
    std::vector<double> spp;
    std::vector<double> se_qq;     // standard error across segments
    std::vector<double> se_pp;
    int segments = 0;
    std::size_t segment_length = 0;
    double dt = 0.0;
};

SpectrumEstimate welch_serial(const std::vector<double>& q,
                              const std::vector<double>& p, double dt,
                              const WelchOptions& opt = {});

SpectrumEstimate welch_parallel(const std::vector<double>& q,
                                const std::vector<double>& p, double dt,
                                const WelchOptions& opt = {});

// Band comparison of one estimated channel against a model spectrum.
// band_ratio_dev is the relative deviation of the band-summed estimate from
// the band-summed model (a band-averaged error); chi2_per_bin uses the
// per-bin standard errors.
struct CompareReport {
    double band_ratio_dev = 0.0;
    double max_rel_dev = 0.0;
    double chi2_per_bin = 0.0;
    int n_bins = 0;
};

CompareReport compare_band(const std::vector<double>& omega,
                           const std::vector<double>& value,
                           const std::vector<double>& err,
                           const std::function<double(double)>& model,
                           double omega_lo, double omega_hi);

}  // namespace qosc::spec
