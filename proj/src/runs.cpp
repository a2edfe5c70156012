#include "nhqc/runs.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "nhqc/ep.hpp"
#include "nhqc/nonreciprocity.hpp"
#include "nhqc/oracle.hpp"

namespace nhqc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Table new_table(const RunConfig& cfg, const std::string& command) {
    Table t;
    t.comments.push_back("command = " + command);
    for (const auto& line : echo_config(cfg)) t.comments.push_back(line);
    return t;
}

// Splits "path/to/name.csv" into a stem for multi-file commands.
std::string path_stem(const std::string& path) {
    const auto dot = path.rfind('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path;
    return path.substr(0, dot);
}

std::string derived_path(const RunConfig& cfg, const std::string& suffix) {
    return path_stem(cfg.output_path) + suffix + "." + cfg.format;
}

void push_grid_row(Table& t, double v1, double v2, const ScanCell& cell) {
    if (cell.masked) {
        t.add_row({v1, v2, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN});
        return;
    }
    const SpectrumPoint& sp = cell.sp;
    t.add_row({v1, v2, sp.omega_plus.real(), sp.omega_plus.imag(),
               sp.omega_minus.real(), sp.omega_minus.imag(), sp.r_disc, sp.i_disc,
               sp.delta_e, sp.delta_gamma});
}

void push_trajectory_rows(Table& t, const Trajectory& tr,
                          const std::vector<Cell>& prefix = {}) {
    for (const TrajectoryState& s : tr.states) {
        std::vector<Cell> row = prefix;
        row.insert(row.end(),
                   {s.omega_n_t, s.p1, s.p2, s.p1_raw, s.p2_raw, s.trace});
        t.add_row(std::move(row));
    }
}

}  // namespace

Table run_spectrum(const RunConfig& cfg) {
    EffectiveModel m = derive_effective_model(cfg.circuit);
    if (cfg.ge_override) m = with_coherent_coupling(m, *cfg.ge_override);
    const SpectrumPoint sp = eigenmodes(m);
    Table t = new_table(cfg, "spectrum");
    t.columns = {"ge",    "omega_n", "delta_theta", "dprime_1", "dprime_2",
                 "Gamma_1", "Gamma_2", "re_wp",     "im_wp",    "re_wm",
                 "im_wm", "R",       "I",           "dEq",      "dGq"};
    t.add_row({m.g_e, m.omega_n, m.delta_theta, m.delta_prime[0], m.delta_prime[1],
               m.big_gamma[0], m.big_gamma[1], sp.omega_plus.real(),
               sp.omega_plus.imag(), sp.omega_minus.real(), sp.omega_minus.imag(),
               sp.r_disc, sp.i_disc, sp.delta_e, sp.delta_gamma});
    return t;
}

Table run_scan2d(const RunConfig& cfg) {
    const AxisSpec a1 = resolved_axis1(cfg), a2 = resolved_axis2(cfg);
    const Scan2D scan = scan_2d(cfg.circuit, a1, a2, cfg.threads, cfg.ge_override);
    Table t = new_table(cfg, "scan2d");
    t.comments.push_back("masked cells (undefined detuning) emitted as nan");
    t.columns = {std::string("axis1_") + axis_name(a1.axis),
                 std::string("axis2_") + axis_name(a2.axis),
                 "re_wp", "im_wp", "re_wm", "im_wm", "R", "I", "dEq", "dGq"};
    for (std::size_t i1 = 0; i1 < a1.values.size(); ++i1)
        for (std::size_t i2 = 0; i2 < a2.values.size(); ++i2)
            push_grid_row(t, a1.values[i1], a2.values[i2], scan.at(i1, i2));
    return t;
}

Table run_epfind(const RunConfig& cfg) {
    const AxisSpec a1 = resolved_axis1(cfg), a2 = resolved_axis2(cfg);
    EpOptions opt;
    opt.tol_disc = cfg.ep.tol_disc;
    opt.max_bisect = cfg.ep.max_bisect;
    std::vector<DegeneracyLocus> loci;
    const bool two_d = a2.values.size() >= 2;
    if (two_d)
        loci = find_ep_2d(cfg.circuit, a1, a2, opt);
    else
        loci = find_degeneracies_1d(cfg.circuit, a1, opt);
    Table t = new_table(cfg, two_d ? "epfind (2-D)" : "epfind (1-D)");
    t.columns = {"kind", "axis1", "axis2", "R_residual", "I_residual", "bracket_width"};
    for (const auto& l : loci)
        t.add_row({std::string(locus_kind_name(l.kind)), l.axis1, l.axis2, l.r_residual,
                   l.i_residual, l.refinement_width});
    return t;
}

Table run_evolve(const RunConfig& cfg) {
    const Trajectory tr = evolve(cfg.circuit, cfg.evolve, cfg.ge_override);
    Table t = new_table(cfg, "evolve");
    t.comments.push_back(std::string("engine_used = ") + engine_name(tr.engine_used) +
                         (tr.series_fallback ? " (series fallback)" : ""));
    t.columns = {"omega_n_t", "p1", "p2", "p1_raw", "p2_raw", "trace"};
    push_trajectory_rows(t, tr);
    return t;
}

Table run_nonrecip(const RunConfig& cfg) {
    const AxisSpec a1 = resolved_axis1(cfg), a2 = resolved_axis2(cfg);
    const NonrecipMap map =
        nonrecip_map(cfg.circuit, a1, a2, cfg.threads, cfg.ge_override);
    Table t = new_table(cfg, "nonrecip");
    const auto where = [&](std::size_t idx) {
        const std::size_t i1 = idx / a2.values.size(), i2 = idx % a2.values.size();
        return "(" + format_double(a1.values[i1]) + ", " + format_double(a2.values[i2]) +
               ")";
    };
    t.comments.push_back("min |g_fwd| at (axis1, axis2) = " + where(map.argmin_fwd));
    t.comments.push_back("min |g_bwd| at (axis1, axis2) = " + where(map.argmin_bwd));
    t.comments.push_back("max ratio at (axis1, axis2) = " + where(map.argmax_ratio));
    t.comments.push_back("min ratio at (axis1, axis2) = " + where(map.argmin_ratio));
    t.columns = {std::string("axis1_") + axis_name(a1.axis),
                 std::string("axis2_") + axis_name(a2.axis),
                 "abs_g_fwd", "abs_g_bwd", "ratio", "log10_ratio"};
    for (std::size_t i1 = 0; i1 < a1.values.size(); ++i1)
        for (std::size_t i2 = 0; i2 < a2.values.size(); ++i2) {
            const NonrecipCell& c = map.cells[i1 * a2.values.size() + i2];
            if (c.masked) {
                t.add_row({a1.values[i1], a2.values[i2], kNaN, kNaN, kNaN, kNaN});
                continue;
            }
            t.add_row({a1.values[i1], a2.values[i2], std::abs(c.dc.g_fwd),
                       std::abs(c.dc.g_bwd), c.dc.ratio, c.dc.log10_ratio});
        }
    return t;
}

Table run_asym(const RunConfig& cfg) {
    const AxisSpec axis = resolved_axis1(cfg);
    const AsymmetryMap map =
        asymmetry_dynamics(cfg.circuit, axis, cfg.evolve, cfg.threads, cfg.ge_override);
    Table t = new_table(cfg, "asym");
    t.columns = {"omega_n_t", std::string("axis_") + axis_name(axis.axis),
                 "p2_minus_p1"};
    const std::size_t nt = map.omega_n_t.size();
    for (std::size_t ia = 0; ia < axis.values.size(); ++ia)
        for (std::size_t it = 0; it < nt; ++it)
            t.add_row({map.omega_n_t[it], axis.values[ia],
                       map.p2_minus_p1[ia * nt + it]});
    return t;
}

Table run_oracle(const RunConfig& cfg) {
    const std::vector<ReductionReport> reports =
        compare_reduction(cfg.circuit, cfg.oracle.gamma_a_schedule);
    Table t = new_table(cfg, "oracle");
    if (cfg.oracle.with_coupler) {
        CircuitParams p = cfg.circuit;
        const CouplerFoldCheck fold = compare_coupler_fold(p);
        t.comments.push_back("coupler fold: |split4 - split3| / |split4| = " +
                             format_double(fold.rel_error));
    }
    t.columns = {"gamma_a", "re_eff",    "im_eff",         "re_full",
                 "im_full", "rel_error", "offdiag_residual"};
    for (const auto& r : reports)
        t.add_row({r.gamma_a, r.eff_splitting.real(), r.eff_splitting.imag(),
                   r.full_splitting.real(), r.full_splitting.imag(), r.rel_error,
                   r.offdiag_residual});
    return t;
}

// --- figure presets ---------------------------------------------------------

namespace {

std::vector<std::pair<std::string, Table>> figure_fig2(const RunConfig& cfg) {
    const AxisSpec ge = linspace_axis(Axis::GeDirect, -3.0, 3.0, 201);
    const AxisSpec dth = linspace_axis(Axis::DeltaTheta, 0.0, kPi, 201);
    const Scan2D scan = scan_2d(cfg.circuit, ge, dth, cfg.threads);
    std::vector<std::pair<std::string, Table>> out;
    for (int which = 0; which < 2; ++which) {
        Table t = new_table(cfg, which == 0 ? "fig2 (level splitting)"
                                            : "fig2 (damping splitting)");
        t.columns = {"ge", "delta_theta", which == 0 ? "dEq" : "dGq"};
        for (std::size_t i1 = 0; i1 < ge.values.size(); ++i1)
            for (std::size_t i2 = 0; i2 < dth.values.size(); ++i2) {
                const ScanCell& c = scan.at(i1, i2);
                t.add_row({ge.values[i1], dth.values[i2],
                           c.masked ? kNaN
                                    : (which == 0 ? c.sp.delta_e : c.sp.delta_gamma)});
            }
        out.emplace_back(derived_path(cfg, which == 0 ? "_dEq" : "_dGq"), std::move(t));
    }
    return out;
}

std::vector<std::pair<std::string, Table>> figure_fig3(const RunConfig& cfg) {
    CircuitParams p = cfg.circuit;
    p.lambda_q = {11.3, 11.6};
    const AxisSpec ge = linspace_axis(Axis::GeDirect, -3.0, 3.0, 1201);
    Table t = new_table(cfg, "fig3");
    t.comments.push_back("curves emitted unshifted (no presentation offsets)");
    t.comments.push_back("lambda_q = 11.3, 11.6");
    t.columns = {"delta_theta", "ge", "re_wa", "im_wa", "re_wb", "im_wb", "dEq", "dGq"};
    for (double frac : {0.5, 0.501, 0.502}) {
        const double dth = frac * kPi;
        CircuitParams q = p;
        q.theta_q = {dth, 0.0};
        const Sweep1D sweep = sweep_1d(q, ge, cfg.threads);
        for (std::size_t k = 0; k < ge.values.size(); ++k) {
            const auto& pair = sweep.paired[k];
            const SpectrumPoint& sp = sweep.points[k].sp;
            t.add_row({dth, ge.values[k], pair[0].real(), pair[0].imag(),
                       pair[1].real(), pair[1].imag(), sp.delta_e, sp.delta_gamma});
        }
    }
    return {{cfg.output_path, std::move(t)}};
}

std::vector<std::pair<std::string, Table>> figure_fig4a(const RunConfig& cfg) {
    const AxisSpec lam = linspace_axis(Axis::LambdaCommon, 8.0, 14.0, 601);
    Table t = new_table(cfg, "fig4a");
    t.comments.push_back(
        "black curve rescales gamma_q2 with lambda to hold Gamma_2 = 0.99 Gamma_1");
    t.columns = {"curve", "lambda", "re_wa", "im_wa", "re_wb", "im_wb", "dEq", "dGq"};
    struct Curve {
        const char* name;
        double g_e, gamma_a;
        bool gamma2_tracks_lambda;
    };
    const Curve curves[] = {{"blue", 1.137, 65.0, false},
                            {"green", 1.224, 65.0, false},
                            {"red", 1.137, 66.0, false},
                            {"black", 1.137, 65.0, true}};
    for (const Curve& cv : curves) {
        CircuitParams p = cfg.circuit;
        p.theta_q = {0.5 * kPi, 0.0};
        p.sigma_z = {-1.0, -1.0};
        p.gamma_a = cv.gamma_a;
        p.gamma_q = {1.0, 1.0};  // equal effective damping unless tracking
        // Continuity pairing needs the whole sweep; the gamma2-tracking curve
        // changes parameters pointwise, so pair manually below.
        std::array<complex, 2> prev{};
        bool have_prev = false;
        for (double lambda : lam.values) {
            CircuitParams q = p;
            q.lambda_q = {lambda, lambda};
            if (cv.gamma2_tracks_lambda)
                q.gamma_q[1] = 0.99 * q.gamma_q[0] + 0.01 * lambda * lambda / q.gamma_a;
            EffectiveModel m = derive_effective_model(q);
            m = with_coherent_coupling(m, cv.g_e);
            const SpectrumPoint sp = eigenmodes(m);
            std::array<complex, 2> cur{sp.omega_plus, sp.omega_minus};
            if (have_prev) {
                const double keep =
                    std::abs(cur[0] - prev[0]) + std::abs(cur[1] - prev[1]);
                const double swap =
                    std::abs(cur[1] - prev[0]) + std::abs(cur[0] - prev[1]);
                if (swap < keep) std::swap(cur[0], cur[1]);
            }
            prev = cur;
            have_prev = true;
            t.add_row({std::string(cv.name), lambda, cur[0].real(), cur[0].imag(),
                       cur[1].real(), cur[1].imag(), sp.delta_e, sp.delta_gamma});
        }
    }
    return {{cfg.output_path, std::move(t)}};
}

std::vector<std::pair<std::string, Table>> figure_fig4b(const RunConfig& cfg) {
    const AxisSpec sz = linspace_axis(Axis::SigmaZPattern, -1.0, 1.0, 401);
    Table t = new_table(cfg, "fig4b");
    t.comments.push_back("axis value v applies as sigma_z = (v, -v)");
    t.columns = {"curve", "sigma_z1", "re_wa", "im_wa", "re_wb", "im_wb", "dEq", "dGq"};
    struct Curve {
        const char* name;
        double dtheta_frac, lambda, g_e;
    };
    const Curve curves[] = {{"blue", 0.5, 11.0, 1.137},
                            {"red", 0.5005, 11.0, 1.137},
                            {"black", 0.5, 10.6, 1.224}};
    for (const Curve& cv : curves) {
        CircuitParams p = cfg.circuit;
        p.theta_q = {cv.dtheta_frac * kPi, 0.0};
        p.lambda_q = {cv.lambda, cv.lambda};
        const Sweep1D sweep = sweep_1d(p, sz, cfg.threads, cv.g_e);
        for (std::size_t k = 0; k < sz.values.size(); ++k) {
            const auto& pair = sweep.paired[k];
            const SpectrumPoint& sp = sweep.points[k].sp;
            t.add_row({std::string(cv.name), sz.values[k], pair[0].real(),
                       pair[0].imag(), pair[1].real(), pair[1].imag(), sp.delta_e,
                       sp.delta_gamma});
        }
    }
    return {{cfg.output_path, std::move(t)}};
}

std::vector<std::pair<std::string, Table>> figure_fig5(const RunConfig& cfg) {
    Table t = new_table(cfg, "fig5");
    t.comments.push_back("panel ab: delta_theta = 5 pi / 12, param column holds g_e");
    t.comments.push_back("panel cd: g_e = -0.031, param column holds delta_theta");
    t.columns = {"panel", "param", "omega_n_t", "p1", "p2", "p1_raw", "p2_raw", "trace"};
    EvolveSpec spec = cfg.evolve;
    spec.sigma_z0 = {+1.0, -1.0};
    spec.t_max = 50.0;
    spec.t_max_raw = false;
    spec.engine = Engine::Exact;
    spec.n_steps = 2000;
    for (double ge : {-0.080, -0.035, 0.021, 0.090}) {
        CircuitParams p = cfg.circuit;
        p.theta_q = {5.0 * kPi / 12.0, 0.0};
        const Trajectory tr = evolve(p, spec, ge);
        push_trajectory_rows(t, tr, {std::string("ab"), ge});
    }
    for (double frac : {0.46, 0.48, 0.50, 0.52}) {
        CircuitParams p = cfg.circuit;
        p.theta_q = {frac * kPi, 0.0};
        const Trajectory tr = evolve(p, spec, -0.031);
        push_trajectory_rows(t, tr, {std::string("cd"), frac * kPi});
    }
    return {{cfg.output_path, std::move(t)}};
}

std::vector<std::pair<std::string, Table>> figure_fig6(const RunConfig& cfg) {
    const AxisSpec dth = linspace_axis(Axis::DeltaTheta, 0.0, kPi, 201);
    const AxisSpec ge = linspace_axis(Axis::GeDirect, -3.0, 3.0, 201);
    const NonrecipMap map = nonrecip_map(cfg.circuit, dth, ge, cfg.threads);
    Table tm = new_table(cfg, "fig6 (map)");
    tm.columns = {"delta_theta", "ge", "abs_g_fwd", "abs_g_bwd", "ratio", "log10_ratio"};
    for (std::size_t i1 = 0; i1 < dth.values.size(); ++i1)
        for (std::size_t i2 = 0; i2 < ge.values.size(); ++i2) {
            const NonrecipCell& c = map.cells[i1 * ge.values.size() + i2];
            tm.add_row({dth.values[i1], ge.values[i2], std::abs(c.dc.g_fwd),
                        std::abs(c.dc.g_bwd), c.dc.ratio, c.dc.log10_ratio});
        }
    Table tc = new_table(cfg, "fig6 (cuts)");
    tc.columns = {"cut", "ge", "abs_g_fwd", "abs_g_bwd", "ratio", "log10_ratio"};
    const AxisSpec ge_fine = linspace_axis(Axis::GeDirect, -3.0, 3.0, 1201);
    const struct {
        const char* name;
        double dth;
    } cuts[] = {{"pi_over_2", 0.5 * kPi}, {"pi_over_3", kPi / 3.0}};
    for (const auto& cut : cuts) {
        CircuitParams p = cfg.circuit;
        p.theta_q = {cut.dth, 0.0};
        for (double g : ge_fine.values) {
            EffectiveModel m = derive_effective_model(p);
            m = with_coherent_coupling(m, g);
            const DirectionalCoupling dc = directional_coupling(m);
            tc.add_row({std::string(cut.name), g, std::abs(dc.g_fwd),
                        std::abs(dc.g_bwd), dc.ratio, dc.log10_ratio});
        }
    }
    std::vector<std::pair<std::string, Table>> out;
    out.emplace_back(derived_path(cfg, "_map"), std::move(tm));
    out.emplace_back(derived_path(cfg, "_cuts"), std::move(tc));
    return out;
}

std::vector<std::pair<std::string, Table>> figure_fig7(const RunConfig& cfg) {
    CircuitParams p = cfg.circuit;
    p.omega_q = {4500.0, 4500.0};
    p.g_qc = {30.0, 30.0};
    p.lambda_q = {11.0, 11.0};
    p.gamma_q = {1.0, 1.0};
    EvolveSpec spec = cfg.evolve;
    spec.t_max = 20.0;
    spec.t_max_raw = false;
    spec.engine = Engine::Exact;
    spec.n_steps = 400;
    std::vector<std::pair<std::string, Table>> out;
    {
        CircuitParams q = p;
        q.theta_q = {0.5 * kPi, 0.0};
        const AxisSpec ge = linspace_axis(Axis::GeDirect, -3.0, 3.0, 241);
        const AsymmetryMap map = asymmetry_dynamics(q, ge, spec, cfg.threads);
        Table t = new_table(cfg, "fig7a");
        t.comments.push_back("identical qubits, delta_theta = pi/2, both initially excited");
        t.columns = {"omega_n_t", "ge", "p2_minus_p1"};
        const std::size_t nt = map.omega_n_t.size();
        for (std::size_t ia = 0; ia < ge.values.size(); ++ia)
            for (std::size_t it = 0; it < nt; ++it)
                t.add_row({map.omega_n_t[it], ge.values[ia],
                           map.p2_minus_p1[ia * nt + it]});
        out.emplace_back(derived_path(cfg, "_a"), std::move(t));
    }
    {
        const AxisSpec dth = linspace_axis(Axis::DeltaTheta, 0.0, kPi, 241);
        const AsymmetryMap map = asymmetry_dynamics(p, dth, spec, cfg.threads, 0.0053);
        Table t = new_table(cfg, "fig7b");
        t.comments.push_back("identical qubits, g_e = 0.0053, both initially excited");
        t.columns = {"omega_n_t", "delta_theta", "p2_minus_p1"};
        const std::size_t nt = map.omega_n_t.size();
        for (std::size_t ia = 0; ia < dth.values.size(); ++ia)
            for (std::size_t it = 0; it < nt; ++it)
                t.add_row({map.omega_n_t[it], dth.values[ia],
                           map.p2_minus_p1[ia * nt + it]});
        out.emplace_back(derived_path(cfg, "_b"), std::move(t));
    }
    return out;
}

}  // namespace

std::vector<std::pair<std::string, Table>> run_figure(const std::string& name,
                                                      const RunConfig& cfg) {
    if (name == "fig2") return figure_fig2(cfg);
    if (name == "fig3") return figure_fig3(cfg);
    if (name == "fig4a") return figure_fig4a(cfg);
    if (name == "fig4b") return figure_fig4b(cfg);
    if (name == "fig5") return figure_fig5(cfg);
    if (name == "fig6") return figure_fig6(cfg);
    if (name == "fig7") return figure_fig7(cfg);
    throw InvalidParameter("unknown figure command '" + name + "'");
}

// --- selftest ----------------------------------------------------------------

namespace {

CircuitParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto uni = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
    CircuitParams p;
    p.omega_a = uni(3000.0, 6000.0);
    p.omega_q = {p.omega_a + uni(-200.0, 200.0), p.omega_a + uni(-200.0, 200.0)};
    p.omega_c = p.omega_a + uni(300.0, 1500.0);  // keeps omega_q != omega_c
    p.gamma_q = {uni(0.0, 5.0), uni(0.0, 5.0)};
    p.gamma_a = uni(20.0, 200.0);
    p.g_xy = uni(-10.0, 10.0);
    p.g_qc = {uni(0.0, 60.0), uni(0.0, 60.0)};
    p.lambda_q = {uni(0.0, 30.0), uni(0.0, 30.0)};
    p.theta_q = {uni(-kPi, kPi), uni(-kPi, kPi)};
    p.sigma_z = {uni(-1.0, 1.0), uni(-1.0, 1.0)};
    return p;
}

}  // namespace

int run_selftest(const RunConfig& cfg, std::ostream& log) {
    int bad = 0;
    const auto report = [&](const char* name, bool ok, const std::string& detail = "") {
        log << (ok ? "[ok] " : "[violation] ") << name;
        if (!ok && !detail.empty()) log << ": " << detail;
        log << "\n";
        if (!ok) ++bad;
    };
    std::mt19937_64 rng(cfg.seed);

    {
        bool ok = true;
        std::string detail;
        for (int k = 0; k < 1000 && ok; ++k) {
            const CircuitParams p = random_params(rng);
            const EffectiveModel m = derive_effective_model(p);
            const complex want01 =
                complex(m.g_e, 0.0) -
                complex(0.0, m.omega_n) * std::exp(complex(0.0, m.delta_theta));
            const complex d00 =
                m.h_non(0, 0) - 0.5 * complex(m.delta_prime[0], -m.big_gamma[0]);
            if (m.h_non(0, 1) != want01 || std::abs(d00) != 0.0) {
                ok = false;
                detail = "matrix entries drifted from their defining expressions";
            }
        }
        report("matrix entry identities (1000 draws)", ok, detail);
    }
    {
        bool ok = true;
        std::string detail;
        for (int k = 0; k < 1000 && ok; ++k) {
            const CircuitParams p = random_params(rng);
            const EffectiveModel m = derive_effective_model(p);
            try {
                const SpectrumPoint sp = eigenmodes(m);  // includes residual check
                const complex tr_err =
                    sp.omega_plus + sp.omega_minus - (m.h_non(0, 0) + m.h_non(1, 1));
                const complex diff = sp.omega_plus - sp.omega_minus;
                const complex disc_err =
                    diff * diff - complex(sp.r_disc, sp.i_disc);
                const double scale = std::max(1.0, std::abs(complex(sp.r_disc, sp.i_disc)));
                if (std::abs(tr_err) > 1e-12 * std::max(1.0, std::abs(sp.omega_plus)) ||
                    std::abs(disc_err) > 1e-10 * scale || sp.delta_e < 0.0) {
                    ok = false;
                    detail = "trace / squared-splitting / branch invariant failed";
                }
            } catch (const Error& e) {
                ok = false;
                detail = e.what();
            }
        }
        report("spectrum invariants (1000 draws)", ok, detail);
    }
    {
        bool ok = true;
        std::string detail;
        for (int k = 0; k < 1000 && ok; ++k) {
            const CircuitParams p = random_params(rng);
            const EffectiveModel m = derive_effective_model(p);
            const DirectionalCoupling dc = directional_coupling(m);
            const double lhs = std::norm(dc.g_fwd) - std::norm(dc.g_bwd);
            const double rhs = -4.0 * m.g_e * m.omega_n * std::sin(m.delta_theta);
            const double scale =
                std::max({1.0, std::norm(dc.g_fwd), std::norm(dc.g_bwd)});
            if (std::abs(lhs - rhs) > 1e-12 * scale) {
                ok = false;
                detail = "directional magnitude identity failed";
            }
        }
        report("nonreciprocity identity (1000 draws)", ok, detail);
    }
    {
        bool ok = true;
        std::string detail;
        for (int k = 0; k < 1000 && ok; ++k) {
            const CircuitParams p = random_params(rng);
            if (offdiag_identity_residual(p) > 1e-12) {
                ok = false;
                detail = "photon elimination off-diagonal identity failed";
            }
        }
        report("elimination identity (1000 draws)", ok, detail);
    }
    {
        CircuitParams p = cfg.circuit;
        p.theta_q = {5.0 * kPi / 12.0, 0.0};
        p.sigma_z = {+1.0, -1.0};
        EffectiveModel m = derive_effective_model(p);
        m = with_coherent_coupling(m, -0.080);
        EvolveSpec spec;
        spec.t_max = 20.0;
        spec.n_steps = 8192;
        const double div = engine_max_divergence(m, spec);
        report("dynamics engines agree (1e-8)", div <= 1e-8, format_double(div));
    }
    {
        RunConfig c1 = cfg;
        c1.scan.n1 = 21;
        c1.scan.n2 = 21;
        c1.threads = 1;
        RunConfig c4 = c1;
        c4.threads = 4;
        // The echoed thread count is the one config field allowed to differ.
        Table t1 = run_scan2d(c1), t4 = run_scan2d(c4);
        t1.comments.clear();
        t4.comments.clear();
        const bool ok = render_csv(t1) == render_csv(t4);
        report("grid output is byte-deterministic across thread counts", ok);
    }
    return bad == 0 ? 0 : 4;
}

}  // namespace nhqc
