#include "qosc/oracle.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "qosc/errors.hpp"

namespace qosc::oracle {

namespace {

constexpr char kMagic[4] = {'Q', 'O', 'S', 'C'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

std::size_t SimConfig::steps() const {
    return static_cast<std::size_t>(std::llround(duration / dt));
}

void SimConfig::validate(const sr::SuperradiantParams& p) const {
    if (!(dt > 0.0)) throw ValidationError("oracle: dt must be positive");
    if (!(duration > dt)) throw ValidationError("oracle: duration must exceed dt");
    if (segments < 2) throw ValidationError("oracle: need at least 2 segments");
    if (!(omega_min > 0.0))
        throw ValidationError("oracle: omega_min must be positive");

    const double kappa_max = std::max(p.kappa_f, p.kappa_g);
    const double rate = std::max({p.kappa_f, p.kappa_g,
                                  p.s * std::abs(p.cooperativity() - 2.0) * kappa_max});
    if (!(dt * rate < 0.05))
        throw ValidationError("oracle: dt too coarse for the fastest rate");

    const double needed = 100.0 * static_cast<double>(segments) *
                          (2.0 * M_PI / omega_min);
    if (duration < needed)
        throw ValidationError("oracle: duration too short for omega_min");

    // With squeezed pumping above threshold and C > 2 the phase sector drift
    // is a saddle (its determinant goes negative), so trajectories grow like
    // exp(lambda t) and long runs overflow instead of averaging. Cap the total
    // growth rather than silently returning garbage.
    const sr::LinearCoefficients lc = sr::linear_coefficients(p);
    const auto max_eig = [](double a, double b, double c, double d) {
        const double tr = a + d;
        const double disc = (a - d) * (a - d) + 4.0 * b * c;
        return disc > 0.0 ? 0.5 * (tr + std::sqrt(disc)) : 0.5 * tr;
    };
    const double kf = p.kappa_f, kg = p.kappa_g;
    const double k = lc.coupling_k, m = lc.twist_m;
    const double lam = std::max(
        max_eig(-0.5 * kf, -k, -k, -(0.5 * kg - m)),
        max_eig(-0.5 * kf, k, k, -(0.5 * kg + m)));
    if (lam > 0.0 && duration * lam > 10.0)
        throw ValidationError(
            "oracle: anti-damped phase sector (C > 2 with squeezed pumping); "
            "duration * growth_rate exceeds 10, the run would diverge");
}

TimeSeries simulate(const sr::SuperradiantParams& p, const SimConfig& cfg) {
    p.validate();
    cfg.validate(p);

    const sr::LinearCoefficients lc = sr::linear_coefficients(p);
    const double kf = p.kappa_f;
    const double kg = p.kappa_g;
    const double k = lc.coupling_k;
    const double m = lc.twist_m;

    // Quadrature drift, q and p sectors decoupled:
    //   dq_a = (-kf/2 q_a - K q_b) dt - sqrt(kf) xi_qa dt
    //   dq_b = (-K q_a - (kg/2 - M) q_b) dt - sqrt(kg) xi_qb dt
    //   dp_a = (-kf/2 p_a + K p_b) dt - sqrt(kf) xi_pa dt
    //   dp_b = (+K p_a - (kg/2 + M) p_b) dt - sqrt(kg) xi_pb dt
    const double aqq = -0.5 * kf, aqb = -k;
    const double bqa = -k, bqb = -(0.5 * kg - m);
    const double apq = -0.5 * kf, apb = k;
    const double bpa = k, bpb = -(0.5 * kg + m);

    // Per-step noise has variance S_in / dt; sigma below are per-sample
    // standard deviations in the fixed draw order (qa, qb, pa, pb).
    const double sq_a = (0.5 + p.nbar_a) * std::exp(2.0 * p.r_a);
    const double sp_a = (0.5 + p.nbar_a) * std::exp(-2.0 * p.r_a);
    const double sq_b = (0.5 + p.nbar_b) * std::exp(2.0 * p.r_b);
    const double sp_b = (0.5 + p.nbar_b) * std::exp(-2.0 * p.r_b);
    const double sig_qa = std::sqrt(sq_a / cfg.dt);
    const double sig_qb = std::sqrt(sq_b / cfg.dt);
    const double sig_pa = std::sqrt(sp_a / cfg.dt);
    const double sig_pb = std::sqrt(sp_b / cfg.dt);

    const double rkf = std::sqrt(kf);
    const double rkg = std::sqrt(kg);
    const double dt = cfg.dt;
    const std::size_t n = cfg.steps();

    TimeSeries ts;
    ts.dt = dt;
    ts.q.resize(n);
    ts.p.resize(n);

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double qa = 0.0, qb = 0.0, pa = 0.0, pb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi_qa = sig_qa * gauss(rng);
        const double xi_qb = sig_qb * gauss(rng);
        const double xi_pa = sig_pa * gauss(rng);
        const double xi_pb = sig_pb * gauss(rng);

        // output uses the state and input of the same step
        ts.q[i] = rkf * qa + xi_qa;
        ts.p[i] = rkf * pa + xi_pa;

        const double dqa = (aqq * qa + aqb * qb - rkf * xi_qa) * dt;
        const double dqb = (bqa * qa + bqb * qb - rkg * xi_qb) * dt;
        const double dpa = (apq * pa + apb * pb - rkf * xi_pa) * dt;
        const double dpb = (bpa * pa + bpb * pb - rkg * xi_pb) * dt;
        qa += dqa;
        qb += dqb;
        pa += dpa;
        pb += dpb;
    }
    return ts;
}

void dump_series(const TimeSeries& ts, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("dump_series: cannot open " + path);
    const std::uint64_t count = ts.q.size();
    if (ts.p.size() != count)
        throw ValidationError("dump_series: quadrature records differ in length");
    f.write(kMagic, 4);
    f.write(reinterpret_cast<const char*>(&kVersion), 4);
    f.write(reinterpret_cast<const char*>(&ts.dt), 8);
    f.write(reinterpret_cast<const char*>(&count), 8);
    for (std::uint64_t i = 0; i < count; ++i) {
        f.write(reinterpret_cast<const char*>(&ts.q[i]), 8);
        f.write(reinterpret_cast<const char*>(&ts.p[i]), 8);
    }
    if (!f) throw IoError("dump_series: write failed for " + path);
}

TimeSeries load_series(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("load_series: cannot open " + path);
    char magic[4];
    std::uint32_t version = 0;
    TimeSeries ts;
    std::uint64_t count = 0;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&version), 4);
    f.read(reinterpret_cast<char*>(&ts.dt), 8);
    f.read(reinterpret_cast<char*>(&count), 8);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("load_series: bad header in " + path);
    if (version != kVersion)
        throw IoError("load_series: unsupported version in " + path);
    ts.q.resize(count);
    ts.p.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        f.read(reinterpret_cast<char*>(&ts.q[i]), 8);
        f.read(reinterpret_cast<char*>(&ts.p[i]), 8);
    }
    if (!f) throw IoError("load_series: truncated record in " + path);
    return ts;
}

}  // namespace qosc::oracle
