#include "qosc/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "qosc/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qosc::spec {

namespace {

constexpr std::size_t kMinSegmentLength = 8;

std::size_t pick_segment_length(std::size_t n, int segments) {
    // largest power of two L with (segments + 1) * L / 2 <= n
    const std::size_t m = static_cast<std::size_t>(segments);
    std::size_t len = 1;
    while ((m + 1) * (len << 1) <= 2 * n) len <<= 1;
    return len;
}

std::vector<double> make_window(Window w, std::size_t len) {
    std::vector<double> out(len, 1.0);
    if (w == Window::hann) {
        for (std::size_t j = 0; j < len; ++j)
            out[j] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(j) /
                                           static_cast<double>(len)));
    }
    return out;
}

// One windowed periodogram row: mean removal, window, r2c transform,
// two-sided normalization dt |X|^2 / sum(w^2). Writes bins k = 1 .. L/2.
void fill_row(const fftw_plan& plan, double* in, fftw_complex* out,
              const std::vector<double>& x, std::size_t start,
              const std::vector<double>& window, double dt, double win_norm,
              double* row, std::size_t bins) {
    const std::size_t len = window.size();
    double mean = 0.0;
    for (std::size_t j = 0; j < len; ++j) mean += x[start + j];
    mean /= static_cast<double>(len);
    for (std::size_t j = 0; j < len; ++j)
        in[j] = (x[start + j] - mean) * window[j];
    fftw_execute_dft_r2c(plan, in, out);
    const double scale = dt / win_norm;
    for (std::size_t k = 0; k < bins; ++k) {
        const double re = out[k + 1][0];
        const double im = out[k + 1][1];
        row[k] = scale * (re * re + im * im);
    }
}

// Fixed-order reduction across segment rows; shared by both drivers so the
// parallel estimate reproduces the serial one exactly.
void reduce_rows(const std::vector<double>& rows, int segments, std::size_t bins,
                 std::vector<double>& mean, std::vector<double>& se) {
    mean.assign(bins, 0.0);
    se.assign(bins, 0.0);
    for (int s = 0; s < segments; ++s)
        for (std::size_t k = 0; k < bins; ++k)
            mean[k] += rows[static_cast<std::size_t>(s) * bins + k];
    const double inv_m = 1.0 / static_cast<double>(segments);
    for (std::size_t k = 0; k < bins; ++k) mean[k] *= inv_m;
    if (segments < 2) return;
    for (int s = 0; s < segments; ++s)
        for (std::size_t k = 0; k < bins; ++k) {
            const double d = rows[static_cast<std::size_t>(s) * bins + k] - mean[k];
            se[k] += d * d;
        }
    const double norm = 1.0 / (static_cast<double>(segments - 1) *
                               static_cast<double>(segments));
    for (std::size_t k = 0; k < bins; ++k) se[k] = std::sqrt(se[k] * norm);
}

void estimate_channel(const std::vector<double>& x, double dt,
                      const WelchOptions& opt, std::size_t len, bool parallel,
                      std::vector<double>& mean, std::vector<double>& se) {
    const std::size_t bins = len / 2;
    const std::size_t hop = len / 2;
    const std::vector<double> window = make_window(opt.window, len);
    double win_norm = 0.0;
    for (double w : window) win_norm += w * w;

    std::vector<double> rows(static_cast<std::size_t>(opt.segments) * bins);

    double* in0 = fftw_alloc_real(len);
    fftw_complex* out0 = fftw_alloc_complex(len / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(len), in0, out0,
                                          FFTW_ESTIMATE);
    if (plan == nullptr) {
        fftw_free(in0);
        fftw_free(out0);
        throw NumericalError("welch: fftw plan creation failed");
    }

    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel
        {
            double* in = fftw_alloc_real(len);
            fftw_complex* out = fftw_alloc_complex(len / 2 + 1);
#pragma omp for schedule(static)
            for (int s = 0; s < opt.segments; ++s)
                fill_row(plan, in, out, x, static_cast<std::size_t>(s) * hop,
                         window, dt, win_norm,
                         rows.data() + static_cast<std::size_t>(s) * bins, bins);
            fftw_free(in);
            fftw_free(out);
        }
#else
        parallel = false;
#endif
    }
    if (!parallel) {
        for (int s = 0; s < opt.segments; ++s)
            fill_row(plan, in0, out0, x, static_cast<std::size_t>(s) * hop, window,
                     dt, win_norm, rows.data() + static_cast<std::size_t>(s) * bins,
                     bins);
    }

    fftw_destroy_plan(plan);
    fftw_free(in0);
    fftw_free(out0);

    reduce_rows(rows, opt.segments, bins, mean, se);
}

SpectrumEstimate welch_impl(const std::vector<double>& q,
                            const std::vector<double>& p, double dt,
                            const WelchOptions& opt, bool parallel) {
    if (q.size() != p.size())
        throw ValidationError("welch: quadrature records differ in length");
    if (!(dt > 0.0)) throw ValidationError("welch: dt must be positive");
    if (opt.segments < 2) throw ValidationError("welch: need at least 2 segments");

    const std::size_t len = pick_segment_length(q.size(), opt.segments);
    if (len < kMinSegmentLength)
        throw ResolutionError("welch: series too short for the segment count");

    SpectrumEstimate est;
    est.dt = dt;
    est.segments = opt.segments;
    est.segment_length = len;
    const std::size_t bins = len / 2;
    est.omega.resize(bins);
    for (std::size_t k = 0; k < bins; ++k)
        est.omega[k] = 2.0 * M_PI * static_cast<double>(k + 1) /
                       (static_cast<double>(len) * dt);

    estimate_channel(q, dt, opt, len, parallel, est.sqq, est.se_qq);
    estimate_channel(p, dt, opt, len, parallel, est.spp, est.se_pp);
    return est;
}

}  // namespace

SpectrumEstimate welch_serial(const std::vector<double>& q,
                              const std::vector<double>& p, double dt,
                              const WelchOptions& opt) {
    return welch_impl(q, p, dt, opt, false);
}

SpectrumEstimate welch_parallel(const std::vector<double>& q,
                                const std::vector<double>& p, double dt,
                                const WelchOptions& opt) {
    return welch_impl(q, p, dt, opt, true);
}

CompareReport compare_band(const std::vector<double>& omega,
                           const std::vector<double>& value,
                           const std::vector<double>& err,
                           const std::function<double(double)>& model,
                           double omega_lo, double omega_hi) {
    if (omega.size() != value.size() || omega.size() != err.size())
        throw ValidationError("compare_band: array lengths differ");
    if (!(omega_lo > 0.0) || !(omega_hi > omega_lo))
        throw ValidationError("compare_band: need 0 < omega_lo < omega_hi");

    CompareReport rep;
    double sum_val = 0.0, sum_model = 0.0, chi2 = 0.0;
    int chi2_bins = 0;
    for (std::size_t k = 0; k < omega.size(); ++k) {
        if (omega[k] < omega_lo || omega[k] > omega_hi) continue;
        const double m = model(omega[k]);
        if (!(m > 0.0))
            throw ValidationError("compare_band: model must be positive in band");
        ++rep.n_bins;
        sum_val += value[k];
        sum_model += m;
        rep.max_rel_dev = std::max(rep.max_rel_dev, std::abs(value[k] - m) / m);
        if (err[k] > 0.0) {
            const double z = (value[k] - m) / err[k];
            chi2 += z * z;
            ++chi2_bins;
        }
    }
    if (rep.n_bins < 8)
        throw ResolutionError("compare_band: fewer than 8 bins in band");
    rep.band_ratio_dev = std::abs(sum_val / sum_model - 1.0);
    rep.chi2_per_bin = chi2_bins > 0 ? chi2 / chi2_bins : 0.0;
    return rep;
}

}  // namespace qosc::spec
