#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "qosc/errors.hpp"
#include "qosc/feedback_loop.hpp"

using namespace qosc;

namespace {

loop::LoopParams good_cavity() {
    loop::LoopParams p;
    p.eta = 0.99;
    p.tau_f = 2.5;
    p.tau_g = 2.5;
    p.flux = 1.0;
    return p;
}

// saturated Lorentzian amplifier response, |G(0)| = 1/sqrt(eta)
std::complex<double> saturated_gain(double eta, double gamma_h, double omega) {
    return (1.0 / std::sqrt(eta)) / std::complex<double>(1.0, -omega / gamma_h);
}

}  // namespace

TEST_CASE("parameter validation") {
    loop::LoopParams p = good_cavity();
    p.eta = 1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = good_cavity();
    p.tau_g = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = good_cavity();
    p.flux = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = good_cavity();
    p.nbar_0 = -0.1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("derived loop rates") {
    loop::LoopParams p = good_cavity();
    p.tau_f = 2.0;
    p.tau_g = 3.0;
    CHECK(p.kappa_f() == doctest::Approx(0.005).epsilon(1e-15));
    CHECK(p.kappa_g() == doctest::Approx(0.01 / 3.0).epsilon(1e-15));
    CHECK(p.inv_kappa_sum() == doctest::Approx(500.0).epsilon(1e-14));
    CHECK(p.high_q());
}

TEST_CASE("near-resonance transfer frozen value") {
    const auto t = loop::near_resonance_transfer(good_cavity(), 1e-3);
    CHECK(t.h0.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(t.h0.imag() == doctest::Approx(2.0100756305184242).epsilon(1e-14));
    CHECK(t.hg == t.h0);
    CHECK_FALSE(t.validity_warning);
    CHECK(loop::near_resonance_transfer(good_cavity(), 0.03).validity_warning);
    CHECK_THROWS_AS(loop::near_resonance_transfer(good_cavity(), 0.0), PoleError);
}

TEST_CASE("open loop: zero gain reflects the out-coupler split") {
    // G = 0 gives |H0|^2 = eta and |HG|^2 = 1 - eta (unit added-noise weight)
    const auto t = loop::solve_loop_exact({0.0, 0.0}, 0.64, 1.0, 0.3);
    CHECK(t.h0.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(t.h0.imag() == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(t.hg.real() == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(std::abs(t.hg.imag()) < 1e-15);
    CHECK(std::norm(t.h0) + std::norm(t.hg) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("saturated loop pole sits at omega = 0") {
    const double eta = 0.99;
    CHECK_THROWS_AS(loop::solve_loop_exact(saturated_gain(eta, 1.0, 0.0), eta, 2.5, 0.0),
                    PoleError);
}

TEST_CASE("exact solve approaches the near-resonance form") {
    const double eta = 0.99, tau_f = 2.5, tau_g = 2.5;
    const double omega = 1e-3 / (tau_f + tau_g);
    const auto exact =
        loop::solve_loop_exact(saturated_gain(eta, 1.0 / tau_g, omega), eta, tau_f, omega);
    const auto near = loop::near_resonance_transfer(good_cavity(), omega);
    const double href = std::abs(near.h0);
    CHECK(std::abs(std::abs(exact.h0) / href - 1.0) < 0.01);
    CHECK(std::abs(std::abs(exact.hg) / href - 1.0) < 0.01);
}

TEST_CASE("vacuum output spectra and frozen linewidth values") {
    const auto s = loop::output_spectra(good_cavity(), 1e-3);
    CHECK(s.sqq == doctest::Approx(4.0404040404040404).epsilon(1e-13));
    CHECK(s.spp == doctest::Approx(4.0404040404040404).epsilon(1e-13));
    CHECK(s.sqp == std::complex<double>(0.0, 0.0));

    loop::LoopParams p = good_cavity();
    p.tau_f = 2.0;
    p.tau_g = 3.0;
    p.flux = 1e4;
    CHECK(loop::gst_linewidth(p) == doctest::Approx(2.0e-10).epsilon(1e-13));
}

TEST_CASE("thermal occupation scales the linewidth") {
    loop::LoopParams p = good_cavity();
    const double base = loop::gst_linewidth(p);
    p.nbar_0 = 1.0;
    p.nbar_g = 2.0;  // nbar_th = 1.5, factor 1 + 2*1.5 = 4
    CHECK(loop::gst_linewidth(p) == doctest::Approx(4.0 * base).epsilon(1e-14));
}

TEST_CASE("bad-cavity limit recovers the single-channel linewidth") {
    loop::LoopParams p = good_cavity();
    p.tau_f = 1.0;
    p.tau_g = 1e-4;  // kappa_g / kappa_f = 1e4
    const double st = p.kappa_f() * p.kappa_f() / (2.0 * p.flux);
    CHECK(std::abs(loop::gst_linewidth(p) / st - 1.0) < 1e-3);
}

TEST_CASE("channel exchange symmetry is exact") {
    loop::LoopParams p = good_cavity();
    p.tau_f = 1.7;
    p.tau_g = 0.4;
    loop::LoopParams q = p;
    std::swap(q.tau_f, q.tau_g);
    CHECK(loop::gst_linewidth(p) == loop::gst_linewidth(q));
}

TEST_CASE("quadrature uncertainty product bound") {
    loop::LoopParams p = good_cavity();
    const double omega = 2e-4;
    const auto b = loop::sql_product(p, omega);
    // high-Q approximation differs from the exact bound by exactly eta^-2
    CHECK(b.exact / b.approx == doctest::Approx(1.0 / (p.eta * p.eta)).epsilon(1e-12));
    // vacuum inputs saturate the exact bound
    const auto s = loop::output_spectra(p, omega);
    CHECK(std::abs(s.sqq * s.spp / b.exact - 1.0) < 1e-9);
}

TEST_CASE("phase squeezing narrows the line") {
    loop::LoopParams p = good_cavity();
    p.r_0 = std::log(2.0);
    const double g = loop::squeezed_linewidth(p);
    CHECK(g == doctest::Approx(0.625 * loop::gst_linewidth(p)).epsilon(1e-14));
}
