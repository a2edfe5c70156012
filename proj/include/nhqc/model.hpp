#pragma once
// Circuit parameters and the reduced two-mode non-Hermitian model.
//
// Unit convention: every frequency-like quantity (omega_*, gamma_*, g_*,
// lambda_*) is a cyclic frequency in MHz. All formulas below are homogeneous
// of degree one in that unit, so no 2*pi appears anywhere; times are measured
// in 1/MHz and usually reported on the dimensionless axis omega_n * t.

#include <array>

#include "nhqc/common.hpp"
#include "nhqc/errors.hpp"

namespace nhqc {

// Physical inputs: two qubits coupled directly (g_xy), through a far-detuned
// tunable coupler (g_qc), and through a deliberately lossy common resonator
// (lambda_q, gamma_a). sigma_z holds the frozen qubit populations that set
// the sign of the resonator-induced damping.
struct CircuitParams {
    double omega_a{4475.0};                  // lossy resonator frequency
    std::array<double, 2> omega_q{4500.0, 4505.0};  // qubit frequencies
    double omega_c{5200.0};                  // tunable coupler frequency
    std::array<double, 2> gamma_q{1.00, 1.01};      // intrinsic qubit decay rates
    double gamma_a{65.0};                    // resonator loss rate, must be > 0
    double g_xy{4.0};                        // direct qubit-qubit coupling
    std::array<double, 2> g_qc{30.0, 30.3};  // qubit-coupler couplings
    std::array<double, 2> lambda_q{11.0, 11.0};     // qubit-resonator couplings
    std::array<double, 2> theta_q{0.0, 0.0};        // qubit-resonator phases (rad)
    std::array<double, 2> sigma_z{-1.0, -1.0};      // frozen <sigma_z> per qubit
};

// Throws DegenerateDetuning / NonPositiveResonatorLoss / InvalidParameter.
void validate(const CircuitParams& p);

// Reduced 2x2 generator in the frame rotating at omega_a. h_non acts on the
// single-excitation qubit amplitudes (c1, c2); its anti-Hermitian part
// encodes both intrinsic decay and the resonator-mediated dissipative
// coupling omega_n (phases theta enter only through delta_theta).
struct EffectiveModel {
    std::array<double, 2> delta_prime{};  // coupler-shifted qubit-resonator detunings
    std::array<double, 2> big_gamma{};    // effective decay rates (can go negative
                                          // for an excited qubit, sigma_z = +1)
    double g_e{};          // net coherent coupling: direct + coupler-mediated
    double omega_n{};      // dissipative coupling magnitude lambda1*lambda2/gamma_a
    double delta_theta{};  // theta_1 - theta_2
    Matrix2c h_non;        // the 2x2 non-Hermitian matrix itself
};

// Assembles h_non from the scalar fields:
//   diag:    (delta_prime_j - i*big_gamma_j) / 2
//   offdiag: g_e - i*omega_n*exp(+i*delta_theta)   (row 0, col 1)
//            g_e - i*omega_n*exp(-i*delta_theta)   (row 1, col 0)
Matrix2c build_h_non(const EffectiveModel& m);

// Derives the full reduced model from circuit parameters. Validates first.
EffectiveModel derive_effective_model(const CircuitParams& p);

// Same model with the coherent coupling replaced by an explicit value
// (stands in for retuning the coupler without moving the detunings).
EffectiveModel with_coherent_coupling(EffectiveModel m, double g_e);

// Coherent coupling as a function of coupler frequency, other parameters
// fixed. Throws DegenerateDetuning if any omega_c hits a qubit frequency.
std::vector<double> sweep_ge_via_coupler(const CircuitParams& p,
                                         const std::vector<double>& omega_c_values);

// --- drive-calibrated resonator coupling ---------------------------------

// Inputs for the drive-induced resonator coupling: a qubit driven with
// amplitude |Omega| at detuning delta_ja from the resonator, with
// anharmonicity alpha and bare coupling lambda0.
struct DriveParams {
    double lambda0{0.0};          // bare qubit-resonator coupling
    double alpha{0.0};            // qubit anharmonicity (negative for transmons)
    double omega_drive_amp{0.0};  // |Omega| drive amplitude
    double delta_ja{0.0};         // omega_q - omega_a
    double dispersive_ratio{0.2}; // warn threshold for lambda0 / |detuning|
};

struct DriveCoupling {
    double lambda;         // |lambda|; the phase lives in theta_q
    double lambda_signed;  // raw signed value of the same expression
    bool dispersive_ok;    // lambda0 below dispersive_ratio of both detunings
    double ratio_ja;       // lambda0 / |delta_ja|
    double ratio_ja_alpha; // lambda0 / |delta_ja + alpha|
};

// lambda = lambda0 * alpha * |Omega| / (sqrt(2) * delta_ja * (delta_ja + alpha)).
// Linear in |Omega|. Throws DegenerateDetuning when either denominator factor
// vanishes; a dispersive-validity miss only clears dispersive_ok.
DriveCoupling lambda_from_drive(const DriveParams& d);

}  // namespace nhqc
