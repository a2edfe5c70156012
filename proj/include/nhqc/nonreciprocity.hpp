#pragma once
// Directional coupling constants and the asymmetric-exchange diagnostics.
// The two off-diagonal entries of h_non differ whenever sin(delta_theta),
// g_e and omega_n are all nonzero:
//   |g_fwd|^2 - |g_bwd|^2 = -4 g_e omega_n sin(delta_theta)   (identity)

#include <vector>

#include "nhqc/dynamics.hpp"
#include "nhqc/spectrum.hpp"

namespace nhqc {

struct DirectionalCoupling {
    complex g_fwd;       // 1 -> 2 transfer: g_e - i omega_n exp(-i delta_theta)
    complex g_bwd;       // 2 -> 1 transfer: g_e - i omega_n exp(+i delta_theta)
    double ratio;        // |g_bwd| / |g_fwd|; inf at a unidirectional point
    double log10_ratio;  // log10(ratio) clipped to [-12, 12] for file output
};

// g_fwd is the row-1 column-0 entry of h_non (the amplitude of qubit 1
// driving qubit 2) and g_bwd the row-0 column-1 entry; both are checked
// against the matrix entries exactly.
DirectionalCoupling directional_coupling(const EffectiveModel& m);

struct NonrecipCell {
    bool masked{false};
    DirectionalCoupling dc;
};

struct NonrecipMap {
    AxisSpec a1, a2;
    std::vector<NonrecipCell> cells;  // row-major, i1 * n2 + i2
    // Extrema over unmasked cells (indices into cells).
    std::size_t argmin_fwd{}, argmin_bwd{}, argmax_ratio{}, argmin_ratio{};
};

NonrecipMap nonrecip_map(const CircuitParams& base, const AxisSpec& a1,
                         const AxisSpec& a2, int threads = 1,
                         std::optional<double> ge_base = {});

// P2 - P1 of the two-run both-excited protocol across a sweep axis.
// Row-major over (axis value, time): index = ia * n_times + it.
struct AsymmetryMap {
    AxisSpec axis;
    std::vector<double> omega_n_t;
    std::vector<double> p2_minus_p1;
};

AsymmetryMap asymmetry_dynamics(const CircuitParams& base, const AxisSpec& axis,
                                const EvolveSpec& spec, int threads = 1,
                                std::optional<double> ge_base = {});

}  // namespace nhqc
