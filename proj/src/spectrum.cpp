#include "nhqc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/Eigenvalues>

namespace nhqc {

Discriminant discriminant(const EffectiveModel& m) {
    const double dd = m.delta_prime[0] - m.delta_prime[1];
    const double dg = m.big_gamma[0] - m.big_gamma[1];
    Discriminant d;
    d.r = dd * dd / 4.0 - dg * dg / 4.0 + 4.0 * m.g_e * m.g_e - 4.0 * m.omega_n * m.omega_n;
    d.i = -8.0 * m.g_e * m.omega_n * std::cos(m.delta_theta) - dg * dd / 2.0;
    return d;
}

complex splitting_root(const Discriminant& d) {
    // std::sqrt is principal (Re >= 0) except that a negative real input
    // with a -0.0 imaginary part lands on the Im < 0 side of the cut; pin
    // the i == 0 ray to +0.0 so Re = 0 always resolves to Im >= 0.
    complex z(d.r, d.i);
    if (z.imag() == 0.0) z = complex(z.real(), +0.0);
    return std::sqrt(z);
}

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

// Right eigenvector of a 2x2 matrix for eigenvalue w, unit norm. Picks the
// better-conditioned of the two classic null-space columns.
Vector2c right_eigenvector(const Matrix2c& h, complex w) {
    const complex a = h(0, 0) - w, b = h(0, 1);
    const complex c = h(1, 0), d = h(1, 1) - w;
    // Rows of (h - w I) are (a, b) and (c, d); a null vector is (b, -a) or (d, -c).
    Vector2c v1, v2;
    v1 << b, -a;
    v2 << d, -c;
    Vector2c v = (v1.norm() >= v2.norm()) ? v1 : v2;
    const double n = v.norm();
    if (n == 0.0) {
        // h is exactly w * I: any direction is an eigenvector.
        v << 1.0, 0.0;
        return v;
    }
    return v / n;
}

}  // namespace

SpectrumPoint eigenmodes(const EffectiveModel& m) {
    const Matrix2c& h = m.h_non;
    const Discriminant d = discriminant(m);
    const complex root = splitting_root(d);  // equals omega_plus - omega_minus
    const complex mean = 0.5 * (h(0, 0) + h(1, 1));

    SpectrumPoint sp;
    sp.omega_plus = mean + 0.5 * root;
    sp.omega_minus = mean - 0.5 * root;
    sp.r_disc = d.r;
    sp.i_disc = d.i;
    sp.delta_e = 2.0 * root.real();
    sp.delta_gamma = 2.0 * root.imag();
    sp.eigvecs[0] = right_eigenvector(h, sp.omega_plus);
    sp.eigvecs[1] = right_eigenvector(h, sp.omega_minus);

    // Cross-check the closed form against a direct eigendecomposition: the
    // residual ||(h - w I) v|| must be small for the closed-form pair.
    const double hnorm = h.norm();
    const double tol = 1e-10 * std::max(hnorm, 1e-300);
    const double res_p = ((h - sp.omega_plus * Matrix2c::Identity()) * sp.eigvecs[0]).norm();
    const double res_m = ((h - sp.omega_minus * Matrix2c::Identity()) * sp.eigvecs[1]).norm();
    if (!(res_p <= tol && res_m <= tol))
        throw ResidualCheckFailed("closed-form eigenpair residual " +
                                  sci(std::max(res_p, res_m)) +
                                  " exceeds 1e-10 * ||h||");
    // And the eigenvalues against Eigen's solver. Individual eigenvalues of
    // a near-defective pair are sqrt(eps)-conditioned, so compare the
    // well-conditioned symmetric functions instead: sum and product must
    // match to rounding everywhere, including at an exceptional point.
    Eigen::ComplexEigenSolver<Matrix2c> es(h, /*computeEigenvectors=*/false);
    const complex e0 = es.eigenvalues()(0), e1 = es.eigenvalues()(1);
    const double sum_err = std::abs((e0 + e1) - (sp.omega_plus + sp.omega_minus));
    const double prod_err =
        std::abs(e0 * e1 - sp.omega_plus * sp.omega_minus);
    if (!(sum_err <= tol && prod_err <= tol * std::max(hnorm, 1.0)))
        throw ResidualCheckFailed(
            "closed-form eigenvalues disagree with direct solve (sum error " +
            sci(sum_err) + ", product error " + sci(prod_err) + ")");
    return sp;
}

// --- sweeps -----------------------------------------------------------------

const char* axis_name(Axis a) {
    switch (a) {
        case Axis::GeDirect: return "ge";
        case Axis::DeltaTheta: return "dtheta";
        case Axis::LambdaCommon: return "lambda";
        case Axis::SigmaZPattern: return "sigma_z";
        case Axis::OmegaC: return "omega_c";
    }
    return "?";
}

std::optional<Axis> axis_from_name(const std::string& name) {
    for (Axis a : {Axis::GeDirect, Axis::DeltaTheta, Axis::LambdaCommon,
                   Axis::SigmaZPattern, Axis::OmegaC})
        if (name == axis_name(a)) return a;
    return std::nullopt;
}

AxisSpec linspace_axis(Axis a, double lo, double hi, int n) {
    if (n < 1) throw InvalidParameter("axis needs at least one value");
    AxisSpec spec{a, {}};
    spec.values.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        spec.values.push_back(lo);
        return spec;
    }
    for (int k = 0; k < n; ++k)
        spec.values.push_back(lo + (hi - lo) * static_cast<double>(k) /
                                       static_cast<double>(n - 1));
    return spec;
}

AxisApplication apply_axis_value(CircuitParams p, Axis a, double v,
                                 std::optional<double> ge_base) {
    AxisApplication out{p, ge_base};
    switch (a) {
        case Axis::GeDirect:
            out.ge_override = v;
            break;
        case Axis::DeltaTheta:
            out.p.theta_q = {v, 0.0};
            break;
        case Axis::LambdaCommon:
            out.p.lambda_q = {v, v};
            break;
        case Axis::SigmaZPattern:
            out.p.sigma_z = {v, -v};
            break;
        case Axis::OmegaC:
            out.p.omega_c = v;
            break;
    }
    return out;
}

EffectiveModel model_at(const CircuitParams& base, Axis a1, double v1,
                        std::optional<std::pair<Axis, double>> second,
                        std::optional<double> ge_base) {
    AxisApplication app = apply_axis_value(base, a1, v1, ge_base);
    if (second) app = apply_axis_value(app.p, second->first, second->second, app.ge_override);
    EffectiveModel m = derive_effective_model(app.p);
    if (app.ge_override) m = with_coherent_coupling(m, *app.ge_override);
    return m;
}

Scan2D scan_2d(const CircuitParams& base, const AxisSpec& a1, const AxisSpec& a2,
               int threads, std::optional<double> ge_base) {
    if (a1.values.empty() || a2.values.empty())
        throw InvalidParameter("scan axes must be non-empty");
    Scan2D scan{a1, a2, {}};
    const std::size_t n1 = a1.values.size(), n2 = a2.values.size();
    scan.cells.resize(n1 * n2);
    std::vector<std::exception_ptr> errors(n1 * n2);
    parallel_for(n1 * n2, threads, [&](std::size_t idx) {
        const std::size_t i1 = idx / n2, i2 = idx % n2;
        try {
            ScanCell cell;
            cell.model = model_at(base, a1.axis, a1.values[i1],
                                  std::make_pair(a2.axis, a2.values[i2]), ge_base);
            cell.sp = eigenmodes(cell.model);
            scan.cells[idx] = std::move(cell);
        } catch (const DegenerateDetuning&) {
            scan.cells[idx].masked = true;
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    });
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return scan;
}

Sweep1D sweep_1d(const CircuitParams& base, const AxisSpec& axis, int threads,
                 std::optional<double> ge_base) {
    if (axis.values.empty()) throw InvalidParameter("sweep axis must be non-empty");
    Sweep1D sweep{axis, {}, {}};
    const std::size_t n = axis.values.size();
    sweep.points.resize(n);
    std::vector<std::exception_ptr> errors(n);
    parallel_for(n, threads, [&](std::size_t k) {
        try {
            ScanCell cell;
            cell.model = model_at(base, axis.axis, axis.values[k], {}, ge_base);
            cell.sp = eigenmodes(cell.model);
            sweep.points[k] = std::move(cell);
        } catch (const DegenerateDetuning&) {
            sweep.points[k].masked = true;
        } catch (...) {
            errors[k] = std::current_exception();
        }
    });
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    // Continuity pairing: greedy 2-point assignment against the previous
    // unmasked sample, so curves follow modes instead of the branch rule.
    sweep.paired.resize(n, {complex(0, 0), complex(0, 0)});
    bool have_prev = false;
    std::array<complex, 2> prev{};
    for (std::size_t k = 0; k < n; ++k) {
        if (sweep.points[k].masked) {
            sweep.paired[k] = {complex(std::nan(""), std::nan("")),
                               complex(std::nan(""), std::nan(""))};
            continue;
        }
        const complex wp = sweep.points[k].sp.omega_plus;
        const complex wm = sweep.points[k].sp.omega_minus;
        std::array<complex, 2> cur{wp, wm};
        if (have_prev) {
            const double keep = std::abs(wp - prev[0]) + std::abs(wm - prev[1]);
            const double swap = std::abs(wm - prev[0]) + std::abs(wp - prev[1]);
            if (swap < keep) cur = {wm, wp};
        }
        sweep.paired[k] = cur;
        prev = cur;
        have_prev = true;
    }
    return sweep;
}

}  // namespace nhqc
