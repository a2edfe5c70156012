// Shared test utilities: random parameter draws and complex comparisons.
#pragma once

#include <random>

#include "nhqc/model.hpp"

namespace nhqc::testing {

inline double uni(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Valid-by-construction draw: qubits near the resonator, coupler well above,
// so no detuning denominator can vanish.
inline CircuitParams random_params(std::mt19937_64& rng) {
    CircuitParams p;
    p.omega_a = uni(rng, 3000.0, 6000.0);
    p.omega_q = {p.omega_a + uni(rng, -200.0, 200.0),
                 p.omega_a + uni(rng, -200.0, 200.0)};
    p.omega_c = p.omega_a + uni(rng, 300.0, 1500.0);
    p.gamma_q = {uni(rng, 0.0, 5.0), uni(rng, 0.0, 5.0)};
    p.gamma_a = uni(rng, 20.0, 200.0);
    p.g_xy = uni(rng, -10.0, 10.0);
    p.g_qc = {uni(rng, 0.0, 60.0), uni(rng, 0.0, 60.0)};
    p.lambda_q = {uni(rng, 0.0, 30.0), uni(rng, 0.0, 30.0)};
    p.theta_q = {uni(rng, -kPi, kPi), uni(rng, -kPi, kPi)};
    p.sigma_z = {uni(rng, -1.0, 1.0), uni(rng, -1.0, 1.0)};
    return p;
}

// Default working point with both qubits made identical to qubit 1 (the
// symmetric configuration: equal shifted detunings and equal dampings).
inline CircuitParams symmetric_params() {
    CircuitParams p;
    p.omega_q = {4500.0, 4500.0};
    p.gamma_q = {1.0, 1.0};
    p.g_qc = {30.0, 30.0};
    return p;
}

inline double cdist(const complex& a, const complex& b) { return std::abs(a - b); }

}  // namespace nhqc::testing
