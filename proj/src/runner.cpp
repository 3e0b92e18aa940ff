#include "qosc/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qosc/causal_gain.hpp"
#include "qosc/config.hpp"
#include "qosc/csv.hpp"
#include "qosc/errors.hpp"
#include "qosc/feedback_loop.hpp"
#include "qosc/linewidth.hpp"
#include "qosc/oracle.hpp"
#include "qosc/spectrum.hpp"
#include "qosc/superradiant.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qosc::run {

namespace {

using cfg::Config;
using nlohmann::json;

constexpr const char* kToolVersion = "1.0.0";

loop::LoopParams loop_from_config(const Config& c) {
    loop::LoopParams p;
    p.eta = c.number("loop.eta");
    p.tau_f = c.number("loop.tau_f");
    p.tau_g = c.number("loop.tau_g");
    p.nbar_0 = c.number_or("loop.nbar_0", 0.0);
    p.nbar_g = c.number_or("loop.nbar_g", 0.0);
    p.r_0 = c.number_or("loop.r_0", 0.0);
    p.r_g = c.number_or("loop.r_g", 0.0);
    p.flux = c.number_or("loop.flux", 1.0);
    p.validate();
    return p;
}

sr::SuperradiantParams sr_from_config(const Config& c) {
    sr::SuperradiantParams p;
    p.n_atoms = c.number("sr.n_atoms");
    p.kappa_f = c.number("sr.kappa_f");
    p.kappa_g = c.number("sr.kappa_g");
    p.s = c.number_or("sr.s", 0.0);
    p.nbar_a = c.number_or("sr.nbar_a", 0.0);
    p.nbar_b = c.number_or("sr.nbar_b", 0.0);
    p.r_a = c.number_or("sr.r_a", 0.0);
    p.r_b = c.number_or("sr.r_b", 0.0);
    if (c.has("sr.g")) {
        p.g = c.number("sr.g");
    } else if (c.has("sr.cooperativity")) {
        const double coop = c.number("sr.cooperativity");
        if (coop < 0.0) throw ConfigError("sr.cooperativity must be >= 0");
        if (!(p.n_atoms > 0.0) || !(p.kappa_f > 0.0) || !(p.kappa_g > 0.0))
            throw ConfigError("sr.cooperativity needs positive N and kappas");
        p.g = std::sqrt(coop * p.kappa_f * p.kappa_g / (8.0 * p.n_atoms));
    } else {
        throw ConfigError("config: missing key sr.g (or sr.cooperativity)");
    }
    p.validate();
    return p;
}

std::vector<double> grid_from_config(const Config& c) {
    if (!c.has("grid.omega"))
        throw ConfigError("config: missing key grid.omega");
    return c.sweep("grid.omega").values();
}

enum class SrRoute { exact, approx, matrix };

SrRoute sr_route_from(const Config& c, const std::string& fallback) {
    const std::string r = c.text_or("sr.route", fallback);
    if (r == "exact") return SrRoute::exact;
    if (r == "approx") return SrRoute::approx;
    if (r == "matrix") return SrRoute::matrix;
    throw ConfigError("sr.route must be exact, approx, or matrix");
}

loop::QuadratureSpectra sr_spectra_at(const sr::SuperradiantParams& p, double w,
                                      SrRoute route) {
    if (route == SrRoute::matrix) {
        const sr::FullQuadratureTransfer t = sr::ss_transfer_matrix_solve(p, w);
        const double sqa = (0.5 + p.nbar_a) * std::exp(2.0 * p.r_a);
        const double spa = (0.5 + p.nbar_a) * std::exp(-2.0 * p.r_a);
        const double sqb = (0.5 + p.nbar_b) * std::exp(2.0 * p.r_b);
        const double spb = (0.5 + p.nbar_b) * std::exp(-2.0 * p.r_b);
        loop::QuadratureSpectra s;
        s.sqq = std::norm(t.q_qa) * sqa + std::norm(t.q_pa) * spa +
                std::norm(t.q_qb) * sqb + std::norm(t.q_pb) * spb;
        s.spp = std::norm(t.p_qa) * sqa + std::norm(t.p_pa) * spa +
                std::norm(t.p_qb) * sqb + std::norm(t.p_pb) * spb;
        return s;
    }
    return sr::ss_output_spectra(
        p, w, route == SrRoute::exact ? sr::SsRoute::exact : sr::SsRoute::approx);
}

double sr_bound_at(const sr::SuperradiantParams& p, double w, SrRoute route) {
    // vacuum-input uncertainty product Sqq_vac * Spp_vac
    double q2 = 0.0, p2 = 0.0;
    if (route == SrRoute::matrix) {
        const sr::FullQuadratureTransfer t = sr::ss_transfer_matrix_solve(p, w);
        q2 = std::norm(t.q_qa) + std::norm(t.q_pa) + std::norm(t.q_qb) +
             std::norm(t.q_pb);
        p2 = std::norm(t.p_qa) + std::norm(t.p_pa) + std::norm(t.p_qb) +
             std::norm(t.p_pb);
    } else {
        const sr::QuadratureTransfer t =
            route == SrRoute::exact ? sr::ss_fluctuation_transfer_exact(p, w)
                                    : sr::ss_fluctuation_transfer_approx(p, w);
        q2 = std::norm(t.q_from_qa) + std::norm(t.q_from_qb);
        p2 = std::norm(t.p_from_pa) + std::norm(t.p_from_pb);
    }
    return 0.25 * q2 * p2;
}

const char* method_name(lw::Method m) {
    switch (m) {
        case lw::Method::flat: return "flat";
        case lw::Method::beta_line: return "beta_line";
        case lw::Method::closed_form: return "closed_form";
    }
    return "unknown";
}

json linewidth_json(const lw::LinewidthResult& r) {
    return json{{"gamma", r.gamma},
                {"omega_cut", r.omega_cut},
                {"A", r.a_integral},
                {"method", method_name(r.method)},
                {"calibration", r.calibration},
                {"reduction_scale", r.reduction_scale}};
}

lw::LinewidthResult linewidth_from_config(const Config& c, json* meta) {
    const std::string method = c.text("linewidth.method");

    lw::SpectrumFn spp;
    double flux = 0.0;
    if (c.has_section("sr")) {
        const sr::SuperradiantParams p = sr_from_config(c);
        const SrRoute route = sr_route_from(c, "approx");
        const sr::MeanField mf = sr::ss_steady_state(p);
        flux = c.number_or("linewidth.flux", mf.flux_out);
        if (meta != nullptr) {
            (*meta)["flux"] = flux;
            (*meta)["cooperativity"] = p.cooperativity();
            (*meta)["above_threshold"] = mf.above_threshold;
        }
        if (method == "closed_form")
            return lw::ss_closed_form_linewidth(p, flux, p.nbar_th());
        spp = [p, route](double w) { return sr_spectra_at(p, w, route).spp; };
    } else if (c.has_section("loop")) {
        const loop::LoopParams p = loop_from_config(c);
        flux = c.number_or("linewidth.flux", p.flux);
        if (meta != nullptr) {
            (*meta)["flux"] = flux;
            (*meta)["gst_linewidth"] = loop::gst_linewidth(p);
        }
        if (method == "closed_form")
            throw ConfigError("linewidth: closed_form needs an [sr] section");
        spp = [p](double w) { return loop::output_spectra(p, w).spp; };
    } else {
        throw ConfigError("linewidth: need an [sr] or [loop] section");
    }

    if (method == "flat")
        return lw::flat_linewidth(spp, flux, c.number("linewidth.omega_probe"));
    if (method == "beta_line") {
        lw::BetaLineOptions opt;
        opt.bracket_lo = c.number_or("linewidth.bracket_lo", opt.bracket_lo);
        opt.bracket_hi = c.number_or("linewidth.bracket_hi", opt.bracket_hi);
        opt.max_expand =
            static_cast<int>(c.number_or("linewidth.max_expand", opt.max_expand));
        return lw::beta_line_linewidth(spp, flux, opt);
    }
    throw ConfigError("linewidth.method must be flat, beta_line, or closed_form");
}

csv::Table mode_kk_phase(const Config& c, json& meta) {
    gain::GainMagnitudeProfile prof;
    const std::string model = c.text("gain.model");
    if (model == "file") {
        const csv::ProfileData d = csv::load_profile(c.text("gain.file"));
        prof.omega = d.omega;
        prof.log_mag = d.log_mag;
        prof.eta = c.number("gain.eta");
    } else if (model == "lorentzian") {
        prof = gain::lorentzian_gain_model(
            c.number("gain.eta"), c.number("gain.gamma_h"),
            c.number("gain.half_width"), static_cast<int>(c.number("gain.points")));
    } else if (model == "quadratic") {
        prof = gain::quadratic_gain_model(
            c.number("gain.eta"), c.number("gain.curvature_a"),
            c.number("gain.half_width"), static_cast<int>(c.number("gain.points")));
    } else {
        throw ConfigError("gain.model must be lorentzian, quadratic, or file");
    }
    prof.validate();

    gain::KkOptions opt;
    opt.min_points = static_cast<int>(c.number_or("kk.min_points", opt.min_points));
    opt.edge_flatness_threshold =
        c.number_or("kk.edge_flatness_threshold", opt.edge_flatness_threshold);
    opt.center_phase_tol = c.number_or("kk.center_phase_tol", opt.center_phase_tol);
    opt.parallel = c.flag_or("kk.parallel", opt.parallel);

    const gain::PhaseProfile ph = gain::minimum_phase_kk(prof, opt);

    csv::Table t;
    t.columns = {"omega", "log_mag", "phase"};
    t.rows.reserve(prof.omega.size());
    for (std::size_t i = 0; i < prof.omega.size(); ++i)
        t.rows.push_back({prof.omega[i], prof.log_mag[i], ph.phase[i]});
    meta["tau_g"] = ph.tau_g;
    meta["frequency_selective"] = ph.frequency_selective;
    meta["truncation_warning"] = ph.truncation_warning;
    return t;
}

csv::Table mode_loop_spectrum(const Config& c, json& meta) {
    const loop::LoopParams p = loop_from_config(c);
    const std::vector<double> grid = grid_from_config(c);
    const std::string route = c.text_or("loop.route", "near");

    csv::Table t;
    t.columns = {"omega", "sqq", "spp", "bound"};
    t.rows.reserve(grid.size());
    int warnings = 0;

    if (route == "near") {
        for (double w : grid) {
            const loop::QuadratureSpectra s = loop::output_spectra(p, w);
            const loop::SqlBound b = loop::sql_product(p, w);
            if (s.validity_warning) ++warnings;
            t.rows.push_back({w, s.sqq, s.spp, b.exact});
        }
    } else if (route == "exact") {
        const double gamma_h = c.number("loop.gamma_h");
        const double sq0 = 0.5 * std::exp(2.0 * p.r_0) + p.nbar_0;
        const double sp0 = 0.5 * std::exp(-2.0 * p.r_0) + p.nbar_0;
        const double sqg = 0.5 * std::exp(2.0 * p.r_g) + p.nbar_g;
        const double spg = 0.5 * std::exp(-2.0 * p.r_g) + p.nbar_g;
        for (double w : grid) {
            // saturated amplifier: Lorentzian magnitude with its minimum phase
            const double mag = (1.0 / std::sqrt(p.eta)) /
                               std::sqrt(1.0 + (w / gamma_h) * (w / gamma_h));
            const std::complex<double> gn = std::polar(mag, std::atan(w / gamma_h));
            const loop::TransferPair tp =
                loop::solve_loop_exact(gn, p.eta, p.tau_f, w);
            const double h0 = std::norm(tp.h0);
            const double hg = std::norm(tp.hg);
            const double sqq = h0 * sq0 + hg * sqg;
            const double sppv = h0 * sp0 + hg * spg;
            const double bound = 0.25 * (h0 + hg) * (h0 + hg);
            t.rows.push_back({w, sqq, sppv, bound});
        }
    } else {
        throw ConfigError("loop.route must be near or exact");
    }

    meta["gst_linewidth"] = loop::gst_linewidth(p);
    meta["squeezed_linewidth"] = loop::squeezed_linewidth(p);
    meta["validity_warnings"] = warnings;
    return t;
}

csv::Table mode_sr_spectrum(const Config& c, json& meta) {
    const sr::SuperradiantParams p = sr_from_config(c);
    const std::vector<double> grid = grid_from_config(c);
    const SrRoute route = sr_route_from(c, "exact");

    csv::Table t;
    t.columns = {"omega", "sqq", "spp", "bound"};
    t.rows.reserve(grid.size());
    for (double w : grid) {
        const loop::QuadratureSpectra s = sr_spectra_at(p, w, route);
        t.rows.push_back({w, s.sqq, s.spp, sr_bound_at(p, w, route)});
    }

    const sr::MeanField mf = sr::ss_steady_state(p);
    meta["cooperativity"] = p.cooperativity();
    meta["threshold_cooperativity"] = p.threshold_cooperativity();
    meta["above_threshold"] = mf.above_threshold;
    meta["flux_out"] = mf.flux_out;
    meta["hp_validity"] = mf.hp_validity;
    meta["hp_warning"] = mf.hp_warning;
    if (mf.above_threshold) meta["linewidth"] = sr::linewidth(p);
    return t;
}

csv::Table mode_sweep(const Config& c, json& meta) {
    const std::vector<std::string> skeys = c.section_keys("sweep");
    if (skeys.empty()) throw ConfigError("sweep: no [sweep] arrays given");

    std::vector<std::string> targets;
    std::vector<std::vector<double>> values;
    for (const std::string& k : skeys) {
        if (!c.is_sweep(k))
            throw ConfigError("sweep: " + k + " must be a [start, stop, count, lin|log] array");
        targets.push_back(k.substr(std::string("sweep.").size()));
        values.push_back(c.sweep(k).values());
    }

    std::size_t total = 1;
    for (const auto& v : values) total *= v.size();
    if (total == 0 || total > 1000000)
        throw ConfigError("sweep: empty or oversized grid");

    csv::Table t;
    t.columns = targets;
    t.columns.push_back("gamma");
    t.columns.push_back("omega_cut");
    t.rows.assign(total, {});

    const int nt = thread_cap();
    std::exception_ptr first_error = nullptr;
    int failures = 0;
    const long long n = static_cast<long long>(total);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nt) reduction(+ : failures)
#endif
    for (long long idx = 0; idx < n; ++idx) {
        std::vector<double> row;
        row.reserve(targets.size() + 2);
        Config local = c;
        std::size_t rem = static_cast<std::size_t>(idx);
        std::vector<double> point(targets.size());
        for (std::size_t k = targets.size(); k-- > 0;) {
            const std::size_t m = values[k].size();
            point[k] = values[k][rem % m];
            rem /= m;
        }
        for (std::size_t k = 0; k < targets.size(); ++k) {
            local.set_number(targets[k], point[k]);
            row.push_back(point[k]);
        }
        double gamma = std::nan("");
        double cut = std::nan("");
        try {
            const lw::LinewidthResult r = linewidth_from_config(local, nullptr);
            gamma = r.gamma;
            cut = r.omega_cut;
        } catch (const NumericalError&) {
            ++failures;  // point left as NaN
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (first_error == nullptr) first_error = std::current_exception();
            }
        }
        row.push_back(gamma);
        row.push_back(cut);
        t.rows[static_cast<std::size_t>(idx)] = std::move(row);
    }
    if (first_error != nullptr) std::rethrow_exception(first_error);

    meta["points"] = total;
    meta["failures"] = failures;
    meta["threads"] = nt;
    return t;
}

csv::Table mode_oracle_check(const Config& c, const RunRequest& req, json& meta) {
    const sr::SuperradiantParams p = sr_from_config(c);

    oracle::SimConfig sim;
    sim.dt = c.number("sim.dt");
    sim.duration = c.number("sim.duration");
    sim.segments = static_cast<int>(c.number_or("sim.segments", 8));
    sim.omega_min = c.number("sim.omega_min");
    const std::string wname = c.text_or("sim.window", "hann");
    if (wname == "hann")
        sim.window = spec::Window::hann;
    else if (wname == "rect")
        sim.window = spec::Window::rect;
    else
        throw ConfigError("sim.window must be hann or rect");
    sim.seed = req.seed_set
                   ? req.seed
                   : static_cast<std::uint64_t>(c.number_or("sim.seed", 1.0));

    const double wlo = c.number("band.omega_lo");
    const double whi = c.number("band.omega_hi");
    const SrRoute route = sr_route_from(c, "matrix");

    const auto t0 = std::chrono::steady_clock::now();
    const oracle::TimeSeries ts = oracle::simulate(p, sim);
    spec::WelchOptions wopt;
    wopt.segments = sim.segments;
    wopt.window = sim.window;
    const spec::SpectrumEstimate est = spec::welch_parallel(ts.q, ts.p, ts.dt, wopt);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (c.has("sim.dump")) oracle::dump_series(ts, c.text("sim.dump"));

    const auto sqq_model = [&p, route](double w) {
        return sr_spectra_at(p, w, route).sqq;
    };
    const auto spp_model = [&p, route](double w) {
        return sr_spectra_at(p, w, route).spp;
    };
    const spec::CompareReport rq =
        spec::compare_band(est.omega, est.sqq, est.se_qq, sqq_model, wlo, whi);
    const spec::CompareReport rp =
        spec::compare_band(est.omega, est.spp, est.se_pp, spp_model, wlo, whi);

    csv::Table t;
    t.columns = {"omega", "sqq_sim", "spp_sim", "se_qq", "se_pp",
                 "sqq_model", "spp_model"};
    for (std::size_t k = 0; k < est.omega.size(); ++k) {
        const double w = est.omega[k];
        if (w < wlo || w > whi) continue;
        t.rows.push_back({w, est.sqq[k], est.spp[k], est.se_qq[k], est.se_pp[k],
                          sqq_model(w), spp_model(w)});
    }

    meta["seed"] = sim.seed;
    meta["segments"] = est.segments;
    meta["segment_length"] = est.segment_length;
    meta["steps"] = sim.steps();
    meta["runtime_seconds"] = seconds;
    meta["qq"] = {{"band_ratio_dev", rq.band_ratio_dev},
                  {"max_rel_dev", rq.max_rel_dev},
                  {"chi2_per_bin", rq.chi2_per_bin},
                  {"n_bins", rq.n_bins}};
    meta["pp"] = {{"band_ratio_dev", rp.band_ratio_dev},
                  {"max_rel_dev", rp.max_rel_dev},
                  {"chi2_per_bin", rp.chi2_per_bin},
                  {"n_bins", rp.n_bins}};
    return t;
}

csv::Table mode_fig2(const Config& c, json& meta) {
    sr::SuperradiantParams p;
    if (c.has_section("sr")) {
        p = sr_from_config(c);
    } else {
        p.n_atoms = 3125.0;
        p.g = 0.01;
        p.kappa_f = 1.0;
        p.kappa_g = 1.0;
        p.s = 0.004;
        p.validate();
    }
    std::vector<double> grid;
    if (c.has("grid.omega")) {
        grid = c.sweep("grid.omega").values();
    } else {
        cfg::SweepSpec def;
        def.start = 1e-4;
        def.stop = 1e-1;
        def.count = 241;
        def.log_spaced = true;
        grid = def.values();
    }

    const double kpar = p.kappa_f * p.kappa_g / (p.kappa_f + p.kappa_g);
    const double s0 = kpar * kpar;

    csv::Table t;
    t.columns = {"omega", "spp_st", "spp_squeezed_modes", "spp_spin_squeezed"};
    t.rows.reserve(grid.size());
    for (double w : grid) {
        const double st = s0 / (w * w);
        const double ss = sr_spectra_at(p, w, SrRoute::approx).spp;
        t.rows.push_back({w, st, 0.5 * st, ss});
    }

    meta["cooperativity"] = p.cooperativity();
    meta["omega_star"] = p.s * std::abs(p.cooperativity() - 2.0) * kpar;
    meta["floor_ratio_lowest"] =
        t.rows.empty() ? 0.0 : t.rows.front()[3] / t.rows.front()[1];
    return t;
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("output: cannot open " + path);
    f << j.dump(2) << "\n";
    if (!f) throw IoError("output: write failed for " + path);
}

void write_tabular(const csv::Table& t, const RunRequest& req) {
    if (req.format == "csv") {
        csv::write_table(t, req.output_path);
        return;
    }
    json j;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    write_json_file(j, req.output_path);
}

void write_manifest(const RunRequest& req, const Config& c, const json& meta,
                    std::size_t rows) {
    json m;
    m["mode"] = req.mode;
    m["versions"] = {{"qosc", kToolVersion}, {"manifest", 1}};
    m["calibration"] = {{"beta_line_pipeline", lw::pipeline_calibration()}};
    if (req.seed_set) m["seed"] = req.seed;
    json cj = json::object();
    for (const auto& [k, v] : c.entries()) cj[k] = v;
    m["config"] = cj;
    m["meta"] = meta;
    m["output"] = {{"path", req.output_path}, {"format", req.format}, {"rows", rows}};
    write_json_file(m, req.output_path + ".manifest.json");
}

}  // namespace

int thread_cap() {
    int cap = 1;
#ifdef _OPENMP
    cap = omp_get_max_threads();
#endif
    const char* env = std::getenv("QOSC_THREADS");
    if (env != nullptr) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && v <= 4096)
            cap = std::min(cap, static_cast<int>(v));
    }
    return std::max(cap, 1);
}

void run(const RunRequest& req) {
    if (req.mode.empty()) throw ConfigError("mode is required");
    if (req.config_path.empty()) throw ConfigError("config path is required");
    if (req.output_path.empty()) throw ConfigError("output path is required");
    if (req.format != "csv" && req.format != "json")
        throw ConfigError("format must be csv or json");

    const Config c = Config::parse_file(req.config_path);
    json meta = json::object();

    if (req.mode == "linewidth") {
        const lw::LinewidthResult r = linewidth_from_config(c, &meta);
        write_json_file(linewidth_json(r), req.output_path);
        write_manifest(req, c, meta, 1);
        return;
    }

    csv::Table t;
    if (req.mode == "kk-phase")
        t = mode_kk_phase(c, meta);
    else if (req.mode == "loop-spectrum")
        t = mode_loop_spectrum(c, meta);
    else if (req.mode == "sr-spectrum")
        t = mode_sr_spectrum(c, meta);
    else if (req.mode == "sweep")
        t = mode_sweep(c, meta);
    else if (req.mode == "oracle-check")
        t = mode_oracle_check(c, req, meta);
    else if (req.mode == "fig2")
        t = mode_fig2(c, meta);
    else
        throw ConfigError("unknown mode " + req.mode);

    write_tabular(t, req);
    write_manifest(req, c, meta, t.rows.size());
}

}  // namespace qosc::run
