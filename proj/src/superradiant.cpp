#include "qosc/superradiant.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "qosc/errors.hpp"

namespace qosc::sr {

void SuperradiantParams::validate() const {
    if (!(n_atoms > 0.0)) throw ValidationError("superradiant params: N must be positive");
    if (g < 0.0) throw ValidationError("superradiant params: g must be >= 0");
    if (!(kappa_f > 0.0)) throw ValidationError("superradiant params: kappa_f must be positive");
    if (!(kappa_g > 0.0)) throw ValidationError("superradiant params: kappa_g must be positive");
    if (s < 0.0) throw ValidationError("superradiant params: s must be >= 0");
    if (nbar_a < 0.0 || nbar_b < 0.0)
        throw ValidationError("superradiant params: occupations must be >= 0");
    if (!std::isfinite(r_a) || !std::isfinite(r_b))
        throw ValidationError("superradiant params: squeezing parameters must be finite");
}

double SuperradiantParams::cooperativity() const {
    return 8.0 * g * g * n_atoms / (kappa_f * kappa_g);
}

bool SuperradiantParams::above_threshold() const {
    return cooperativity() > threshold_cooperativity();
}

SuperradiantParams params_from_chi(double n_atoms, double g, double kappa_f,
                                   double kappa_g, double chi) {
    if (!(g > 0.0))
        throw ValidationError("params_from_chi: g must be positive to convert chi");
    SuperradiantParams p;
    p.n_atoms = n_atoms;
    p.g = g;
    p.kappa_f = kappa_f;
    p.kappa_g = kappa_g;
    p.s = kappa_f * chi / (2.0 * g * g);
    p.validate();
    return p;
}

MeanField steady_state(const SuperradiantParams& p) {
    p.validate();
    if (p.s != 0.0)
        throw ValidationError("steady_state: twisting present, use ss_steady_state");
    SuperradiantParams q = p;
    return ss_steady_state(q);
}

MeanField ss_steady_state(const SuperradiantParams& p) {
    p.validate();
    MeanField mf;
    const double c = p.cooperativity();
    mf.above_threshold = c > p.threshold_cooperativity();
    if (!mf.above_threshold) return mf;
    mf.beta_sq = 2.0 * p.n_atoms * (1.0 + p.s - 1.0 / c) / (1.0 + 2.0 * p.s);
    mf.alpha_sq = p.kappa_g * (1.0 + p.s * c) / (p.kappa_f * (1.0 + 2.0 * p.s)) * mf.beta_sq;
    mf.flux_out = p.kappa_f * mf.alpha_sq;
    mf.hp_validity = mf.beta_sq / (2.0 * p.n_atoms);
    mf.hp_warning = mf.hp_validity > 0.1;
    return mf;
}

SmallSignalTransfer fluctuation_transfer(const SuperradiantParams& p, double omega) {
    p.validate();
    if (p.s != 0.0)
        throw ValidationError("fluctuation_transfer: twisting present, use the ss_ forms");
    if (!p.above_threshold())
        throw NotLasingError("fluctuation_transfer: below threshold");
    if (omega == 0.0)
        throw PoleError("fluctuation_transfer: omega = 0 sits on the diffusion pole");
    const double tau = 1.0 / p.kappa_f + 1.0 / p.kappa_g;
    SmallSignalTransfer t;
    t.from_a_in = std::complex<double>(0.0, -1.0 / (tau * omega));
    t.from_b_in_conj = std::complex<double>(0.0, 1.0 / (tau * omega));
    t.validity_warning = std::abs(omega) > 0.1 * std::min(p.kappa_f, p.kappa_g);
    return t;
}

loop::QuadratureSpectra output_spectra(const SuperradiantParams& p, double omega) {
    const SmallSignalTransfer t = fluctuation_transfer(p, omega);
    const double wa = std::norm(t.from_a_in);
    const double wb = std::norm(t.from_b_in_conj);
    loop::QuadratureSpectra spec;
    spec.sqq = wa * (0.5 + p.nbar_a) * std::exp(2.0 * p.r_a) +
               wb * (0.5 + p.nbar_b) * std::exp(2.0 * p.r_b);
    spec.spp = wa * (0.5 + p.nbar_a) * std::exp(-2.0 * p.r_a) +
               wb * (0.5 + p.nbar_b) * std::exp(-2.0 * p.r_b);
    spec.sqp = {0.0, 0.0};
    spec.validity_warning = t.validity_warning;
    return spec;
}

double linewidth(const SuperradiantParams& p) {
    const MeanField mf = ss_steady_state(p);
    if (!mf.above_threshold)
        throw NotLasingError("linewidth: below threshold");
    const double inv_sum = 1.0 / p.kappa_f + 1.0 / p.kappa_g;
    return (1.0 + 2.0 * p.nbar_th()) / (2.0 * mf.flux_out * inv_sum * inv_sum);
}

QuadratureTransfer ss_fluctuation_transfer_exact(const SuperradiantParams& p,
                                                 double omega) {
    p.validate();
    if (!p.above_threshold())
        throw NotLasingError("ss_fluctuation_transfer_exact: below threshold");
    if (omega == 0.0 && p.s == 0.0)
        throw PoleError("ss_fluctuation_transfer_exact: omega = 0 on the diffusion pole");
    const double kf = p.kappa_f, kg = p.kappa_g, s = p.s;
    const double c = p.cooperativity();
    const double kk = kf * kg;
    const std::complex<double> i1(0.0, 1.0);

    QuadratureTransfer t;
    const double dq = kf * (1.0 + 2.0 * s) + kg * (1.0 + c * s);
    if (omega == 0.0)
        throw PoleError("ss_fluctuation_transfer_exact: amplitude sector pole at omega = 0");
    t.q_from_qa = -i1 * kk * (1.0 + c * s) / (dq * omega);
    t.q_from_qb = i1 * kk * std::sqrt((1.0 + 2.0 * s) * (1.0 + c * s)) / (dq * omega);

    const std::complex<double> dp =
        s * (c - 2.0) * kk + i1 * omega * (kf * (1.0 + 2.0 * s) + kg * (1.0 + (4.0 - c) * s));
    if (std::abs(dp) < loop::kPoleEpsilon)
        throw PoleError("ss_fluctuation_transfer_exact: phase sector pole");
    t.p_from_pa = ((1.0 + 2.0 * s) * kk +
                   i1 * omega * (kg * (1.0 + (4.0 - c) * s) - kf * (1.0 + 2.0 * s))) / dp;
    t.p_from_pb = std::sqrt((1.0 + 2.0 * s) * (1.0 + c * s)) * kk / dp;
    return t;
}

QuadratureTransfer ss_fluctuation_transfer_approx(const SuperradiantParams& p,
                                                  double omega) {
    p.validate();
    if (!p.above_threshold())
        throw NotLasingError("ss_fluctuation_transfer_approx: below threshold");
    if (omega == 0.0 && p.s == 0.0)
        throw PoleError("ss_fluctuation_transfer_approx: omega = 0 on the diffusion pole");
    const double kf = p.kappa_f, kg = p.kappa_g, s = p.s;
    const double c = p.cooperativity();
    const double kk = kf * kg;
    const std::complex<double> i1(0.0, 1.0);

    QuadratureTransfer t;
    if (omega == 0.0)
        throw PoleError("ss_fluctuation_transfer_approx: amplitude sector pole at omega = 0");
    const double qmag = kk / ((kf + kg) * omega);
    t.q_from_qa = -i1 * qmag;
    t.q_from_qb = i1 * qmag;
    const std::complex<double> dp = s * (c - 2.0) * kk + i1 * omega * (kf + kg);
    if (std::abs(dp) < loop::kPoleEpsilon)
        throw PoleError("ss_fluctuation_transfer_approx: phase sector pole");
    t.p_from_pa = kk / dp;
    t.p_from_pb = kk / dp;
    return t;
}

LinearCoefficients linear_coefficients(const SuperradiantParams& p) {
    p.validate();
    LinearCoefficients lc;
    if (p.g == 0.0) return lc;  // empty cavity, atoms decoupled
    const double c = p.cooperativity();
    const double s = p.s;
    lc.above_threshold = c > p.threshold_cooperativity();
    if (lc.above_threshold) {
        lc.coupling_k = std::sqrt(p.kappa_f * p.kappa_g * (1.0 + s * c) /
                                  (4.0 * (1.0 + 2.0 * s)));
        lc.twist_m = p.kappa_g * s * (2.0 - c) / (2.0 * (1.0 + 2.0 * s));
    } else {
        lc.coupling_k = std::sqrt(2.0 * p.n_atoms) * p.g;
        lc.twist_m = s * c * p.kappa_g / 2.0;
    }
    return lc;
}

FullQuadratureTransfer ss_transfer_matrix_solve(const SuperradiantParams& p,
                                                double omega) {
    p.validate();
    const LinearCoefficients lc = linear_coefficients(p);
    const double kf = p.kappa_f, kg = p.kappa_g;
    const double k = lc.coupling_k, m = lc.twist_m;
    using cd = std::complex<double>;
    const cd iw(0.0, -omega);  // Fourier convention d/dt -> -i omega

    // Rows: equations for a, a^dag, b^dag, b. Columns: (a, a^dag, b, b^dag).
    Eigen::Matrix4cd sys = Eigen::Matrix4cd::Zero();
    sys(0, 0) = iw + kf / 2.0;  sys(0, 3) = k;
    sys(1, 1) = iw + kf / 2.0;  sys(1, 2) = k;
    sys(2, 0) = k;              sys(2, 3) = iw + kg / 2.0;  sys(2, 2) = -m;
    sys(3, 1) = k;              sys(3, 2) = iw + kg / 2.0;  sys(3, 3) = -m;

    const Eigen::PartialPivLU<Eigen::Matrix4cd> lu(sys);
    if (std::abs(lu.determinant()) < loop::kPoleEpsilon)
        throw PoleError("ss_transfer_matrix_solve: singular system at this omega");

    // Ladder inputs ordered (a_in, a_in^dag, b_in, b_in^dag); each drives the
    // equation of its matching intracavity operator.
    auto ladder_response = [&](const Eigen::Vector4cd& in, cd* out, cd* out_dag) {
        Eigen::Vector4cd rhs;
        rhs(0) = -std::sqrt(kf) * in(0);
        rhs(1) = -std::sqrt(kf) * in(1);
        rhs(2) = -std::sqrt(kg) * in(3);
        rhs(3) = -std::sqrt(kg) * in(2);
        const Eigen::Vector4cd x = lu.solve(rhs);
        *out = std::sqrt(kf) * x(0) + in(0);      // a_out = sqrt(kf) a + a_in
        *out_dag = std::sqrt(kf) * x(1) + in(1);
    };

    const double rt2 = std::sqrt(2.0);
    const cd i1(0.0, 1.0);
    FullQuadratureTransfer t;
    cd* qrow[4] = {&t.q_qa, &t.q_pa, &t.q_qb, &t.q_pb};
    cd* prow[4] = {&t.p_qa, &t.p_pa, &t.p_qb, &t.p_pb};
    for (int j = 0; j < 4; ++j) {
        // Unit input in quadrature j of (q_a, p_a, q_b, p_b) -> ladder basis.
        Eigen::Vector4cd in = Eigen::Vector4cd::Zero();
        switch (j) {
            case 0: in(0) = 1.0 / rt2; in(1) = 1.0 / rt2; break;
            case 1: in(0) = i1 / rt2;  in(1) = -i1 / rt2; break;
            case 2: in(2) = 1.0 / rt2; in(3) = 1.0 / rt2; break;
            case 3: in(2) = i1 / rt2;  in(3) = -i1 / rt2; break;
        }
        cd aout, aout_dag;
        ladder_response(in, &aout, &aout_dag);
        *qrow[j] = (aout + aout_dag) / rt2;
        *prow[j] = i1 * (aout_dag - aout) / rt2;
    }
    return t;
}

loop::QuadratureSpectra ss_output_spectra(const SuperradiantParams& p, double omega,
                                          SsRoute route) {
    const QuadratureTransfer t = route == SsRoute::exact
                                     ? ss_fluctuation_transfer_exact(p, omega)
                                     : ss_fluctuation_transfer_approx(p, omega);
    const double sqa = (0.5 + p.nbar_a) * std::exp(2.0 * p.r_a);
    const double spa = (0.5 + p.nbar_a) * std::exp(-2.0 * p.r_a);
    const double sqb = (0.5 + p.nbar_b) * std::exp(2.0 * p.r_b);
    const double spb = (0.5 + p.nbar_b) * std::exp(-2.0 * p.r_b);
    loop::QuadratureSpectra spec;
    spec.sqq = std::norm(t.q_from_qa) * sqa + std::norm(t.q_from_qb) * sqb;
    spec.spp = std::norm(t.p_from_pa) * spa + std::norm(t.p_from_pb) * spb;
    spec.sqp = {0.0, 0.0};
    spec.validity_warning = std::abs(omega) > 0.1 * std::min(p.kappa_f, p.kappa_g);
    return spec;
}

}  // namespace qosc::sr
