#pragma once
// No-jump state evolution in the single-excitation basis {|eg>, |ge>}:
//   d rho / dt = -i (H rho - rho H^dagger),  H = h_non.
// The trace decays (or grows, for effective gain), so populations are
// reported both raw and trace-normalized; the normalized pair is what
// saturates at finite values.

#include <optional>
#include <vector>

#include "nhqc/model.hpp"

namespace nhqc {

enum class Engine : std::uint8_t {
    Exact,  // rho(t) = V rho0 V^dag, V = exp(-i H t) by eigendecomposition,
            // scaled-and-squared series when the eigenbasis is ill-conditioned
    Rk4,    // classical fixed-step 4th-order integration
    Both,   // run both, cross-check elementwise, return the exact trajectory
};

enum class Feedback : std::uint8_t {
    Off,             // take the model's sigma_z as configured
    Frozen,          // rebuild damping from the initial sigma_z, hold fixed (default)
    SelfConsistent,  // sigma_z_j = 2 p_j_raw - 1 refreshed per step (Rk4 only)
};

const char* engine_name(Engine e);
std::optional<Engine> engine_from_name(const std::string& name);
const char* feedback_name(Feedback f);
std::optional<Feedback> feedback_from_name(const std::string& name);

struct EvolveSpec {
    std::array<double, 2> sigma_z0{+1.0, -1.0};  // (+1,-1) -> rho0 = |eg><eg|
    double t_max{20.0};       // horizon on the omega_n * t axis (raw 1/MHz if t_max_raw)
    bool t_max_raw{false};
    int n_steps{8192};        // >= 2; outputs at every step including t = 0
    Engine engine{Engine::Exact};
    Feedback feedback{Feedback::Frozen};
    double engine_agreement_tol{1e-8};  // Both: elementwise gate on normalized rho
};

struct TrajectoryState {
    double omega_n_t{};  // dimensionless time axis
    double t_raw{};      // time in 1/MHz
    Matrix2c rho_raw;    // unnormalized state
    double trace{};      // tr rho_raw
    double p1{}, p2{};   // normalized populations, p1 + p2 = 1
    double p1_raw{}, p2_raw{};
};

struct Trajectory {
    std::vector<TrajectoryState> states;  // n_steps + 1 entries
    Engine engine_used{};
    bool series_fallback{false};  // exact engine used the series propagator
};

// V(t) = exp(-i h t) for an arbitrary 2x2 h (eigendecomposition, series
// fallback above condition number 1e8).
Matrix2c propagator(const Matrix2c& h, double t);

// Semigroup-friendly factored form: one analysis, many times.
struct PropagatorPlan {
    Matrix2c h;
    bool series{false};    // ill-conditioned eigenbasis, use the series per time
    complex w0, w1;        // eigenvalues
    Matrix2c vecs, vecs_inv;
    Matrix2c at(double t) const;
};
PropagatorPlan plan_propagator(const Matrix2c& h);

// Evolves the model as given; Feedback::SelfConsistent is rejected here
// because there are no circuit parameters to rebuild from (Off and Frozen
// coincide for a prebuilt model).
Trajectory evolve(const EffectiveModel& m, const EvolveSpec& spec);

// Full version: Frozen rebuilds the damping from spec.sigma_z0 before
// evolving; SelfConsistent refreshes it every step (forces the Rk4 engine).
Trajectory evolve(const CircuitParams& p, const EvolveSpec& spec,
                  std::optional<double> ge_override = {});

// Max elementwise |rho_exact - rho_rk4| over all output times, on the
// trace-normalized states (the raw traces drift apart multiplicatively).
double engine_max_divergence(const EffectiveModel& m, const EvolveSpec& spec);

// Normalized populations of the slowest-decaying eigenmode (largest Im w);
// the normalized state converges to that projector. Throws DegenerateDecay
// when |Im w_+ - Im w_-| < 1e-9 MHz.
std::array<double, 2> steady_populations(const EffectiveModel& m);

// Two-run reading of the both-excited initial condition: run A starts
// |eg><eg| and contributes its p1, run B starts |ge><ge| and contributes its
// p2 (each qubit initially excited against the other in ground). Damping is
// rebuilt per run from that run's initial sigma_z when feedback is Frozen.
struct TwoRunAsymmetry {
    std::vector<double> omega_n_t;
    std::vector<double> p1;  // qubit-1 population of run A
    std::vector<double> p2;  // qubit-2 population of run B
    std::vector<double> p2_minus_p1;
};
TwoRunAsymmetry evolve_both_excited(const CircuitParams& p, const EvolveSpec& spec,
                                    std::optional<double> ge_override = {});

}  // namespace nhqc
