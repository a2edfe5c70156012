#pragma once
// Independent full-circuit models in the single-excitation subspace, used to
// validate the two reductions behind the effective 2x2 model:
//   * eliminating the lossy resonator  (dim-3: qubit1, qubit2, photon)
//   * folding the coupler into g_e     (dim-4: ... + coupler)
//
// Decay conventions follow the amplitude equations of motion: the photon
// amplitude relaxes at gamma_a (full rate), qubit amplitudes at gamma_j / 2.

#include <optional>
#include <string>
#include <vector>

#include "nhqc/model.hpp"

namespace nhqc {

struct FullModel {
    int dim{};                // 3 or 4
    Eigen::MatrixXcd matrix;  // non-Hermitian generator, rotating frame at omega_a
    std::vector<std::string> basis_labels;
};

struct OracleOptions {
    bool with_coupler{false};
    double gamma_c{0.0};  // coupler decay; no value is pinned by the physics here
};

// dim-3 rows/cols {q1, q2, photon}:
//   diag: (delta_prime_1 - i gamma_1/2, delta_prime_2 - i gamma_2/2, -i gamma_a)
//   qubit-qubit edge g_e; qubit-photon edges lambda_j exp(+i theta_j) on the
//   (qubit, photon) side, conjugate below.
// dim-4 rows/cols {q1, q2, photon, coupler}: qubit diagonals use the bare
// detunings (the coupler shift is explicit here), qubit-qubit edge is the
// bare g_xy, qubit-coupler edges g_qc_j, coupler-photon edge 0, coupler
// diagonal (omega_c - omega_a) - i gamma_c/2.
FullModel build_full_model(const CircuitParams& p, const OracleOptions& opt = {});

// Eliminates the photon from the dim-3 model with the photon pole replaced
// by its decay alone (a ~ -i sum_j lambda_j e^{-i theta_j} s_j / gamma_a).
// The off-diagonals of the result equal h_non's, g_e - i omega_n
// e^{+/- i dtheta}, exactly; the diagonal picks up lambda_j^2 / gamma_a of
// extra damping, which differs from the sigma_z-weighted big_gamma
// convention (reported by compare_reduction, not hidden).
Matrix2c adiabatic_elimination(const FullModel& fm);

// Exact Schur complement of the photon block at generator eigenvalue z:
// reduced(z) = A - B (C - z I)^{-1} B', self-consistent when z matches the
// slow eigenvalue. z defaults to the mean qubit pole of the model.
Matrix2c exact_schur_elimination(const FullModel& fm, std::optional<complex> z = {});

// Max |reduced_offdiag - h_non_offdiag| over both corners, for tests.
double offdiag_identity_residual(const CircuitParams& p);

// The two most qubit-like eigenmodes of a full model.
struct SlowModes {
    std::array<complex, 2> w;          // eigenvalues [MHz]
    std::array<Eigen::VectorXcd, 2> v; // unit eigenvectors
    std::array<double, 2> qubit_weight; // |v_q1|^2 + |v_q2|^2 per mode
};

// Picks the two eigenvectors with the largest qubit-subspace weight; throws
// SlowModeAmbiguity if the second-best weight drops below 0.5 (reduction
// regime invalid).
SlowModes slow_modes(const FullModel& fm);

struct ReductionReport {
    double gamma_a{};
    complex eff_splitting;   // closed-form slow splitting of the reduced model
    complex full_splitting;  // difference of the dim-3 slow eigenvalues
    double rel_error{};      // |eff - full| / |full|
    double offdiag_residual{};
};

// Closed-form splitting of the reduced amplitude equations,
//   sqrt(S^2 + 4 P),  S = (dprime_1 - dprime_2) - i (Gamma_1 - Gamma_2),
//                     P = h_non(0,1) * h_non(1,0),
// i.e. the eigenvalue splitting of the amplitude-rate matrix whose diagonal
// carries the full detuning (h_non halves it). Branch rule as in spectrum.
complex effective_splitting(const EffectiveModel& m);

// Reruns the comparison at each gamma_a in the schedule (all else fixed).
// full_splitting's sign is aligned to minimize |eff - full|.
std::vector<ReductionReport> compare_reduction(CircuitParams p,
                                               const std::vector<double>& gamma_a_schedule);

// Minimum overlap |<v_k, v_k'>| between consecutively tracked slow
// eigenvectors along the schedule (continuity of the mode tracker).
double slow_mode_continuity(CircuitParams p, const std::vector<double>& gamma_a_schedule);

// Slow-mode splittings of the dim-4 (bare couplings) and dim-3 (folded g_e)
// models for the same circuit; used to measure how well the coupler folds
// into g_e as g_qc / |omega_q - omega_c| shrinks.
struct CouplerFoldCheck {
    complex full4_splitting;
    complex full3_splitting;
    double rel_error{};
};
CouplerFoldCheck compare_coupler_fold(CircuitParams p);

}  // namespace nhqc
