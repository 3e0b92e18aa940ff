#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qosc/spectrum.hpp"
#include "qosc/superradiant.hpp"

// Time-domain check of the frequency-domain results. The linearized
// quadrature equations of motion are integrated with an Euler-Maruyama step
// and the emitted field is recorded through the input-output relation
// out = sqrt(kappa_f) x + in, reusing the same noise sample that drives the
// state. Spectra of the records are then compared against the analytic
// transfer functions.

namespace qosc::oracle {

struct SimConfig {
    double dt = 0.0;
    double duration = 0.0;      // total simulated time
    std::uint64_t seed = 1;
    int segments = 8;           // Welch segments the record must support
    spec::Window window = spec::Window::hann;
    double omega_min = 0.0;     // lowest frequency the run is meant to resolve

    // Checks the step against the fastest rate in the model and the duration
    // against the requested resolution (100 periods of omega_min per
    // segment). Throws ValidationError when the run cannot be trusted.
    void validate(const sr::SuperradiantParams& p) const;

    std::size_t steps() const;
};

struct TimeSeries {
    double dt = 0.0;
    std::vector<double> q;
    std::vector<double> p;
};

TimeSeries simulate(const sr::SuperradiantParams& p, const SimConfig& cfg);

// Raw record format: 24-byte header (magic "QOSC", u32 version, f64 dt,
// u64 count) followed by count (q, p) pairs of f64, native little-endian.
void dump_series(const TimeSeries& ts, const std::string& path);
TimeSeries load_series(const std::string& path);

}  // namespace qosc::oracle
