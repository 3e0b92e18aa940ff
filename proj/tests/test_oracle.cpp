#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qosc/errors.hpp"
#include "qosc/oracle.hpp"
#include "qosc/spectrum.hpp"
#include "qosc/superradiant.hpp"

using namespace qosc;

namespace {

sr::SuperradiantParams empty_cavity() {
    sr::SuperradiantParams p;
    p.n_atoms = 1.0;
    p.g = 0.0;
    p.kappa_f = 1.0;
    p.kappa_g = 1.0;
    return p;
}

sr::SuperradiantParams laser(double coop, double s) {
    sr::SuperradiantParams p;
    p.n_atoms = 3125.0;
    p.kappa_f = 1.0;
    p.kappa_g = 1.0;
    p.s = s;
    p.g = std::sqrt(coop * p.kappa_f * p.kappa_g / (8.0 * p.n_atoms));
    return p;
}

oracle::SimConfig short_run() {
    oracle::SimConfig c;
    c.dt = 0.01;
    c.duration = 1300.0;
    c.segments = 2;
    c.omega_min = 1.0;
    c.seed = 42;
    return c;
}

std::string scratch_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("sim config rejects unusable runs") {
    const sr::SuperradiantParams p = empty_cavity();
    oracle::SimConfig c = short_run();

    c.dt = 0.0;
    CHECK_THROWS_AS(c.validate(p), ValidationError);

    c = short_run();
    c.duration = 0.005;
    CHECK_THROWS_AS(c.validate(p), ValidationError);

    c = short_run();
    c.segments = 1;
    CHECK_THROWS_AS(c.validate(p), ValidationError);

    c = short_run();
    c.omega_min = 0.0;
    CHECK_THROWS_AS(c.validate(p), ValidationError);

    // step must resolve the fastest decay rate; 0.05 per unit rate is already
    // out (the bound is strict)
    c = short_run();
    c.dt = 0.05;
    CHECK_THROWS_AS(c.validate(p), ValidationError);

    // record must hold 100 periods of omega_min per segment
    c = short_run();
    c.omega_min = 0.1;
    c.duration = 1000.0;
    CHECK_THROWS_AS(c.validate(p), ValidationError);

    CHECK_NOTHROW(short_run().validate(p));
}

TEST_CASE("sim config rejects anti-damped phase sector runs") {
    // C > 2 with twisting makes the phase drift a saddle; a long record
    // diverges instead of averaging, so validate must refuse it
    const sr::SuperradiantParams p = laser(2.5, 0.01);
    oracle::SimConfig c;
    c.dt = 0.01;
    c.duration = 5000.0;
    c.segments = 2;
    c.omega_min = 1.0;
    CHECK_THROWS_AS(c.validate(p), ValidationError);

    // short enough that the accumulated growth stays harmless
    c.duration = 2000.0;
    CHECK_NOTHROW(c.validate(p));

    // without twisting the phase sector is only marginal, any length goes
    const sr::SuperradiantParams p0 = laser(2.5, 0.0);
    c.duration = 5000.0;
    CHECK_NOTHROW(c.validate(p0));
}

TEST_CASE("simulation is deterministic in the seed") {
    const sr::SuperradiantParams p = empty_cavity();
    oracle::SimConfig c = short_run();

    const oracle::TimeSeries a = oracle::simulate(p, c);
    const oracle::TimeSeries b = oracle::simulate(p, c);
    CHECK(a.dt == c.dt);
    CHECK(a.q.size() == c.steps());
    CHECK(a.p.size() == c.steps());
    CHECK(a.q == b.q);
    CHECK(a.p == b.p);

    c.seed = 43;
    const oracle::TimeSeries d = oracle::simulate(p, c);
    CHECK(a.q != d.q);

    for (std::size_t i = 0; i < a.q.size(); i += 9973) {
        CHECK(std::isfinite(a.q[i]));
        CHECK(std::isfinite(a.p[i]));
    }
}

TEST_CASE("welch serial and parallel agree bit for bit") {
    const oracle::TimeSeries ts = oracle::simulate(empty_cavity(), short_run());
    spec::WelchOptions opt;
    opt.segments = 4;
    const spec::SpectrumEstimate s = spec::welch_serial(ts.q, ts.p, ts.dt, opt);
    const spec::SpectrumEstimate r = spec::welch_parallel(ts.q, ts.p, ts.dt, opt);
    CHECK(s.segment_length == r.segment_length);
    CHECK(s.omega == r.omega);
    CHECK(s.sqq == r.sqq);
    CHECK(s.spp == r.spp);
    CHECK(s.se_qq == r.se_qq);
    CHECK(s.se_pp == r.se_pp);
}

TEST_CASE("welch picks the segment length and frequency grid") {
    const oracle::TimeSeries ts = oracle::simulate(empty_cavity(), short_run());
    spec::WelchOptions opt;
    opt.segments = 2;
    const spec::SpectrumEstimate est = spec::welch_parallel(ts.q, ts.p, ts.dt, opt);
    // largest power of two with (segments + 1) L / 2 <= n, n = 130000
    CHECK(est.segment_length == 65536);
    CHECK(est.omega.size() == 32768);
    CHECK(est.segments == 2);
    const double dw = 2.0 * M_PI / (65536.0 * ts.dt);
    CHECK(std::abs(est.omega[0] / dw - 1.0) < 1e-12);
    CHECK(std::abs(est.omega[9] / (10.0 * dw) - 1.0) < 1e-12);
}

TEST_CASE("welch input validation") {
    const std::vector<double> x(32, 1.0);
    const std::vector<double> y(30, 1.0);
    CHECK_THROWS_AS(spec::welch_serial(x, y, 0.1), ValidationError);
    CHECK_THROWS_AS(spec::welch_serial(x, x, 0.0), ValidationError);
    spec::WelchOptions opt;
    opt.segments = 1;
    CHECK_THROWS_AS(spec::welch_serial(x, x, 0.1, opt), ValidationError);
    const std::vector<double> tiny(10, 1.0);
    opt.segments = 8;
    CHECK_THROWS_AS(spec::welch_serial(tiny, tiny, 0.1, opt), ResolutionError);
}

TEST_CASE("band comparison on an exact model") {
    std::vector<double> omega, value, err;
    for (int k = 1; k <= 20; ++k) {
        omega.push_back(static_cast<double>(k));
        value.push_back(2.0 * k);
        err.push_back(0.1);
    }
    const auto model = [](double w) { return 2.0 * w; };
    const spec::CompareReport r = spec::compare_band(omega, value, err, model, 0.5, 25.0);
    CHECK(r.n_bins == 20);
    CHECK(r.band_ratio_dev == 0.0);
    CHECK(r.max_rel_dev == 0.0);
    CHECK(r.chi2_per_bin == 0.0);

    CHECK_THROWS_AS(spec::compare_band(omega, value, err, model, 30.0, 40.0),
                    ResolutionError);
    CHECK_THROWS_AS(spec::compare_band(omega, value, err, model, 25.0, 0.5),
                    ValidationError);
    const auto bad = [](double) { return 0.0; };
    CHECK_THROWS_AS(spec::compare_band(omega, value, err, bad, 0.5, 25.0),
                    ValidationError);
    std::vector<double> shorter(omega.begin(), omega.end() - 1);
    CHECK_THROWS_AS(spec::compare_band(shorter, value, err, model, 0.5, 25.0),
                    ValidationError);
}

TEST_CASE("empty cavity record sits on the half-photon floor") {
    const sr::SuperradiantParams p = empty_cavity();
    oracle::SimConfig c;
    c.dt = 0.01;
    c.duration = 50300.0;
    c.segments = 8;
    c.omega_min = 0.1;
    c.seed = 7;

    const oracle::TimeSeries ts = oracle::simulate(p, c);
    spec::WelchOptions opt;
    opt.segments = c.segments;
    const spec::SpectrumEstimate est = spec::welch_parallel(ts.q, ts.p, ts.dt, opt);

    const auto floor = [](double) { return 0.5; };
    const spec::CompareReport rq =
        spec::compare_band(est.omega, est.sqq, est.se_qq, floor, 0.2, 2.0);
    const spec::CompareReport rp =
        spec::compare_band(est.omega, est.spp, est.se_pp, floor, 0.2, 2.0);
    CHECK(rq.n_bins > 1000);
    CHECK(std::abs(rq.band_ratio_dev) < 0.03);
    CHECK(std::abs(rp.band_ratio_dev) < 0.03);
    // per-bin t^2 against an exponential periodogram parent with 8 segments
    // has mean ~2.9, well above the Gaussian 7/5
    CHECK(rq.chi2_per_bin > 1.5);
    CHECK(rq.chi2_per_bin < 4.5);
    CHECK(rp.chi2_per_bin > 1.5);
    CHECK(rp.chi2_per_bin < 4.5);
}

TEST_CASE("twisted laser record matches the transfer-matrix spectra") {
    // stable operating point: C < 2 keeps both sectors damped
    const sr::SuperradiantParams p = laser(1.5, 0.1);
    oracle::SimConfig c;
    c.dt = 0.04;
    c.duration = 251400.0;
    c.segments = 8;
    c.omega_min = 0.02;
    c.seed = 11;

    const oracle::TimeSeries ts = oracle::simulate(p, c);
    spec::WelchOptions opt;
    opt.segments = c.segments;
    const spec::SpectrumEstimate est = spec::welch_parallel(ts.q, ts.p, ts.dt, opt);

    const auto sqq_model = [&p](double w) {
        const sr::FullQuadratureTransfer t = sr::ss_transfer_matrix_solve(p, w);
        return 0.5 * (std::norm(t.q_qa) + std::norm(t.q_pa) + std::norm(t.q_qb) +
                      std::norm(t.q_pb));
    };
    const auto spp_model = [&p](double w) {
        const sr::FullQuadratureTransfer t = sr::ss_transfer_matrix_solve(p, w);
        return 0.5 * (std::norm(t.p_qa) + std::norm(t.p_pa) + std::norm(t.p_qb) +
                      std::norm(t.p_pb));
    };

    const spec::CompareReport rq =
        spec::compare_band(est.omega, est.sqq, est.se_qq, sqq_model, 0.02, 0.2);
    const spec::CompareReport rp =
        spec::compare_band(est.omega, est.spp, est.se_pp, spp_model, 0.02, 0.2);
    CHECK(rq.n_bins > 500);
    // q carries a visible Euler step bias at this dt, p does not
    CHECK(std::abs(rq.band_ratio_dev) < 0.08);
    CHECK(std::abs(rp.band_ratio_dev) < 0.05);
}

TEST_CASE("raw record files round-trip") {
    const oracle::TimeSeries ts = oracle::simulate(empty_cavity(), short_run());
    const std::string path = scratch_path("qosc_oracle_roundtrip.bin");
    oracle::dump_series(ts, path);
    const oracle::TimeSeries back = oracle::load_series(path);
    CHECK(back.dt == ts.dt);
    CHECK(back.q == ts.q);
    CHECK(back.p == ts.p);
    std::filesystem::remove(path);
}

TEST_CASE("record loader rejects foreign and truncated files") {
    CHECK_THROWS_AS(oracle::load_series(scratch_path("qosc_no_such_file.bin")), IoError);

    const std::string bad = scratch_path("qosc_bad_magic.bin");
    {
        std::ofstream f(bad, std::ios::binary);
        const char junk[32] = "XXXXnot a quadrature record";
        f.write(junk, sizeof junk);
    }
    CHECK_THROWS_AS(oracle::load_series(bad), IoError);
    std::filesystem::remove(bad);

    const oracle::TimeSeries ts = oracle::simulate(empty_cavity(), short_run());
    const std::string trunc = scratch_path("qosc_truncated.bin");
    oracle::dump_series(ts, trunc);
    std::filesystem::resize_file(trunc, 40);
    CHECK_THROWS_AS(oracle::load_series(trunc), IoError);
    std::filesystem::remove(trunc);
}
