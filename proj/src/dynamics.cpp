#include "nhqc/dynamics.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "nhqc/spectrum.hpp"

namespace nhqc {

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::Exact: return "exact";
        case Engine::Rk4: return "rk4";
        case Engine::Both: return "both";
    }
    return "?";
}

std::optional<Engine> engine_from_name(const std::string& name) {
    for (Engine e : {Engine::Exact, Engine::Rk4, Engine::Both})
        if (name == engine_name(e)) return e;
    return std::nullopt;
}

const char* feedback_name(Feedback f) {
    switch (f) {
        case Feedback::Off: return "off";
        case Feedback::Frozen: return "frozen";
        case Feedback::SelfConsistent: return "self_consistent";
    }
    return "?";
}

std::optional<Feedback> feedback_from_name(const std::string& name) {
    for (Feedback f : {Feedback::Off, Feedback::Frozen, Feedback::SelfConsistent})
        if (name == feedback_name(f)) return f;
    return std::nullopt;
}

namespace {

// exp(A) for 2x2 A by scaling and squaring a 24-term series; headroom is
// huge for the |A| ~ O(10^2) arguments that occur here.
Matrix2c expm_series(Matrix2c a) {
    double norm = a.cwiseAbs().maxCoeff();
    int squarings = 0;
    while (norm > 0.5 && squarings < 60) {
        a *= 0.5;
        norm *= 0.5;
        ++squarings;
    }
    Matrix2c term = Matrix2c::Identity();
    Matrix2c sum = Matrix2c::Identity();
    for (int n = 1; n <= 24; ++n) {
        term = (term * a) / static_cast<double>(n);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

struct Eig2 {
    complex w0, w1;
    Matrix2c vecs;
    double cond;  // condition number of vecs
};

Eig2 eig2(const Matrix2c& h) {
    Eig2 out;
    const complex mean = 0.5 * (h(0, 0) + h(1, 1));
    const complex half_diff = 0.5 * (h(0, 0) - h(1, 1));
    complex disc = half_diff * half_diff + h(0, 1) * h(1, 0);
    if (disc.imag() == 0.0) disc = complex(disc.real(), +0.0);
    const complex root = std::sqrt(disc);
    out.w0 = mean + root;
    out.w1 = mean - root;
    const auto vec_for = [&](complex w) -> Vector2c {
        Vector2c v1, v2;
        v1 << h(0, 1), w - h(0, 0);
        v2 << w - h(1, 1), h(1, 0);
        Vector2c v = (v1.norm() >= v2.norm()) ? v1 : v2;
        const double n = v.norm();
        if (n == 0.0) {
            v << 1.0, 0.0;
            return v;
        }
        return v / n;
    };
    out.vecs.col(0) = vec_for(out.w0);
    out.vecs.col(1) = vec_for(out.w1);
    Eigen::JacobiSVD<Matrix2c> svd(out.vecs);
    const double smin = svd.singularValues()(1);
    out.cond = smin > 0.0 ? svd.singularValues()(0) / smin
                          : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace

PropagatorPlan plan_propagator(const Matrix2c& h) {
    PropagatorPlan plan;
    plan.h = h;
    const Eig2 e = eig2(h);
    if (!std::isfinite(e.cond) || e.cond > 1e8) {
        plan.series = true;  // defective or near-defective eigenbasis (EP regime)
        return plan;
    }
    plan.w0 = e.w0;
    plan.w1 = e.w1;
    plan.vecs = e.vecs;
    plan.vecs_inv = e.vecs.inverse();
    return plan;
}

Matrix2c PropagatorPlan::at(double t) const {
    if (series) return expm_series(complex(0.0, -t) * h);
    Matrix2c d = Matrix2c::Zero();
    d(0, 0) = std::exp(complex(0.0, -t) * w0);
    d(1, 1) = std::exp(complex(0.0, -t) * w1);
    return vecs * d * vecs_inv;
}

Matrix2c propagator(const Matrix2c& h, double t) { return plan_propagator(h).at(t); }

namespace {

Matrix2c rho_initial(const std::array<double, 2>& sigma_z0) {
    const bool up1 = sigma_z0[0] > 0.0, up2 = sigma_z0[1] > 0.0;
    if (up1 && !up2) return (Matrix2c() << 1, 0, 0, 0).finished();
    if (!up1 && up2) return (Matrix2c() << 0, 0, 0, 1).finished();
    if (up1 && up2)
        throw InvalidParameter(
            "both qubits excited does not fit the single-excitation state space; "
            "use the two-run protocol (evolve_both_excited)");
    throw InvalidParameter("no excitation present: nothing to evolve");
}

void check_finite(const Matrix2c& rho, std::size_t step) {
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            if (!std::isfinite(rho(r, c).real()) || !std::isfinite(rho(r, c).imag()))
                throw NonFiniteState("state left the finite range", step);
}

TrajectoryState make_state(double t_raw, double omega_n, const Matrix2c& rho,
                           std::size_t step) {
    check_finite(rho, step);
    TrajectoryState s;
    s.t_raw = t_raw;
    s.omega_n_t = omega_n * t_raw;
    s.rho_raw = rho;
    s.trace = (rho(0, 0) + rho(1, 1)).real();
    if (!(s.trace > 0.0) || !std::isfinite(s.trace))
        throw NonFiniteState("state trace is not positive", step);
    s.p1_raw = rho(0, 0).real();
    s.p2_raw = rho(1, 1).real();
    s.p1 = s.p1_raw / s.trace;
    s.p2 = s.p2_raw / s.trace;
    return s;
}

double resolve_t_max_raw(const EvolveSpec& spec, double omega_n) {
    if (!(spec.t_max > 0.0)) throw InvalidParameter("t_max must be > 0");
    if (spec.t_max_raw) return spec.t_max;
    if (!(std::abs(omega_n) > 1e-12))
        throw InvalidParameter(
            "t_max is measured in omega_n * t units but omega_n is zero here; "
            "set t_max_raw to give a horizon in 1/MHz");
    return spec.t_max / omega_n;
}

Matrix2c rhs(const Matrix2c& h, const Matrix2c& rho) {
    return complex(0.0, -1.0) * (h * rho - rho * h.adjoint());
}

Trajectory evolve_fixed_h(const Matrix2c& h, double omega_n, const EvolveSpec& spec) {
    if (spec.n_steps < 2) throw InvalidParameter("n_steps must be >= 2");
    const double t_end = resolve_t_max_raw(spec, omega_n);
    const Matrix2c rho0 = rho_initial(spec.sigma_z0);
    const std::size_t n = static_cast<std::size_t>(spec.n_steps);
    const double dt = t_end / static_cast<double>(n);

    Trajectory out;
    out.states.reserve(n + 1);

    if (spec.engine == Engine::Exact || spec.engine == Engine::Both) {
        const PropagatorPlan plan = plan_propagator(h);
        out.series_fallback = plan.series;
        out.engine_used = Engine::Exact;
        for (std::size_t k = 0; k <= n; ++k) {
            const double t = dt * static_cast<double>(k);
            const Matrix2c v = plan.at(t);
            const Matrix2c rho = v * rho0 * v.adjoint();
            out.states.push_back(make_state(t, omega_n, rho, k));
        }
        if (spec.engine == Engine::Exact) return out;
    }

    Trajectory rk;
    rk.engine_used = Engine::Rk4;
    rk.states.reserve(n + 1);
    Matrix2c rho = rho0;
    rk.states.push_back(make_state(0.0, omega_n, rho, 0));
    for (std::size_t k = 1; k <= n; ++k) {
        const Matrix2c k1 = rhs(h, rho);
        const Matrix2c k2 = rhs(h, rho + 0.5 * dt * k1);
        const Matrix2c k3 = rhs(h, rho + 0.5 * dt * k2);
        const Matrix2c k4 = rhs(h, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rk.states.push_back(make_state(dt * static_cast<double>(k), omega_n, rho, k));
    }
    if (spec.engine == Engine::Rk4) return rk;

    // Both: gate on the normalized states, return the exact trajectory.
    double worst = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const Matrix2c d = out.states[k].rho_raw / out.states[k].trace -
                           rk.states[k].rho_raw / rk.states[k].trace;
        worst = std::max(worst, d.cwiseAbs().maxCoeff());
    }
    if (worst > spec.engine_agreement_tol)
        throw ResidualCheckFailed("exact and rk4 engines disagree by " +
                                  std::to_string(worst));
    return out;
}

}  // namespace

Trajectory evolve(const EffectiveModel& m, const EvolveSpec& spec) {
    if (spec.feedback == Feedback::SelfConsistent)
        throw InvalidParameter(
            "self-consistent feedback needs circuit parameters to rebuild damping; "
            "call the CircuitParams overload");
    return evolve_fixed_h(m.h_non, m.omega_n, spec);
}

Trajectory evolve(const CircuitParams& p, const EvolveSpec& spec,
                  std::optional<double> ge_override) {
    CircuitParams q = p;
    if (spec.feedback != Feedback::Off) q.sigma_z = spec.sigma_z0;
    EffectiveModel m = derive_effective_model(q);
    if (ge_override) m = with_coherent_coupling(m, *ge_override);

    if (spec.feedback != Feedback::SelfConsistent) return evolve_fixed_h(m.h_non, m.omega_n, spec);

    // Self-consistent damping: sigma_z_j = 2 p_j_raw - 1 refreshed each step,
    // so the generator is time-dependent and only the stepper applies.
    if (spec.n_steps < 2) throw InvalidParameter("n_steps must be >= 2");
    const double t_end = resolve_t_max_raw(spec, m.omega_n);
    const std::size_t n = static_cast<std::size_t>(spec.n_steps);
    const double dt = t_end / static_cast<double>(n);

    Trajectory out;
    out.engine_used = Engine::Rk4;
    out.states.reserve(n + 1);
    Matrix2c rho = rho_initial(spec.sigma_z0);
    out.states.push_back(make_state(0.0, m.omega_n, rho, 0));
    for (std::size_t k = 1; k <= n; ++k) {
        q.sigma_z = {std::clamp(2.0 * rho(0, 0).real() - 1.0, -1.0, 1.0),
                     std::clamp(2.0 * rho(1, 1).real() - 1.0, -1.0, 1.0)};
        EffectiveModel mk = derive_effective_model(q);
        if (ge_override) mk = with_coherent_coupling(mk, *ge_override);
        const Matrix2c& h = mk.h_non;
        const Matrix2c k1 = rhs(h, rho);
        const Matrix2c k2 = rhs(h, rho + 0.5 * dt * k1);
        const Matrix2c k3 = rhs(h, rho + 0.5 * dt * k2);
        const Matrix2c k4 = rhs(h, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.states.push_back(make_state(dt * static_cast<double>(k), m.omega_n, rho, k));
    }
    return out;
}

double engine_max_divergence(const EffectiveModel& m, const EvolveSpec& spec) {
    EvolveSpec a = spec;
    a.engine = Engine::Exact;
    a.feedback = Feedback::Off;
    EvolveSpec b = a;
    b.engine = Engine::Rk4;
    const Trajectory ta = evolve(m, a);
    const Trajectory tb = evolve(m, b);
    double worst = 0.0;
    for (std::size_t k = 0; k < ta.states.size(); ++k) {
        const Matrix2c d = ta.states[k].rho_raw / ta.states[k].trace -
                           tb.states[k].rho_raw / tb.states[k].trace;
        worst = std::max(worst, d.cwiseAbs().maxCoeff());
    }
    return worst;
}

std::array<double, 2> steady_populations(const EffectiveModel& m) {
    const SpectrumPoint sp = eigenmodes(m);
    const double gap = std::abs(sp.omega_plus.imag() - sp.omega_minus.imag());
    if (gap < 1e-9)
        throw DegenerateDecay("eigenmode decay rates coincide within 1e-9 MHz; "
                              "the long-time state depends on the initial condition");
    const Vector2c& v = (sp.omega_plus.imag() > sp.omega_minus.imag()) ? sp.eigvecs[0]
                                                                       : sp.eigvecs[1];
    const double n2 = std::norm(v(0)) + std::norm(v(1));
    return {std::norm(v(0)) / n2, std::norm(v(1)) / n2};
}

TwoRunAsymmetry evolve_both_excited(const CircuitParams& p, const EvolveSpec& spec,
                                    std::optional<double> ge_override) {
    EvolveSpec run_a = spec;
    run_a.sigma_z0 = {+1.0, -1.0};
    EvolveSpec run_b = spec;
    run_b.sigma_z0 = {-1.0, +1.0};
    const Trajectory ta = evolve(p, run_a, ge_override);
    const Trajectory tb = evolve(p, run_b, ge_override);

    TwoRunAsymmetry out;
    const std::size_t n = ta.states.size();
    out.omega_n_t.reserve(n);
    out.p1.reserve(n);
    out.p2.reserve(n);
    out.p2_minus_p1.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.omega_n_t.push_back(ta.states[k].omega_n_t);
        out.p1.push_back(ta.states[k].p1);
        out.p2.push_back(tb.states[k].p2);
        out.p2_minus_p1.push_back(tb.states[k].p2 - ta.states[k].p1);
    }
    return out;
}

}  // namespace nhqc
