#pragma once
// Complex eigenmode spectrum of the reduced model: discriminant split into
// its real part R and imaginary part I, eigenvalues, splitting diagnostics,
// and grid sweeps.
//
// Splitting conventions (pinned, used everywhere downstream):
//   * omega_plus/omega_minus are the actual eigenvalues of h_non, so
//     omega_+ + omega_- = tr h_non and (omega_+ - omega_-)^2 = R + iI.
//   * The headline diagnostics keep the doubled normalization the R/I
//     expressions are written in: delta_e = 2 Re sqrt(R+iI) and
//     delta_gamma = 2 Im sqrt(R+iI). They vanish exactly where the
//     eigenvalues degenerate, which is all the locator needs.
//   * sqrt branch: principal with Re >= 0; on the Re = 0 ray pick Im >= 0.
//     Hence delta_e >= 0 always and delta_gamma carries the sign.

#include <cstdint>
#include <optional>
#include <vector>

#include "nhqc/model.hpp"

namespace nhqc {

struct Discriminant {
    double r;  // (dD')^2/4 - (dG)^2/4 + 4 g_e^2 - 4 omega_n^2    [MHz^2]
    double i;  // -8 g_e omega_n cos(dtheta) - dG dD'/2            [MHz^2]
};

Discriminant discriminant(const EffectiveModel& m);

// sqrt(r + i*i_) under the branch rule above.
complex splitting_root(const Discriminant& d);

struct SpectrumPoint {
    complex omega_plus;   // eigenvalue on the +sqrt branch [MHz]
    complex omega_minus;  // eigenvalue on the -sqrt branch [MHz]
    double r_disc{};      // R [MHz^2]
    double i_disc{};      // I [MHz^2]
    double delta_e{};     // 2 Re sqrt(R+iI) >= 0 [MHz]
    double delta_gamma{}; // 2 Im sqrt(R+iI), signed [MHz]
    std::array<Vector2c, 2> eigvecs;  // unit right eigenvectors, [0] <-> omega_plus
};

// Closed-form eigensystem, cross-checked against a direct numerical
// eigendecomposition of h_non; throws ResidualCheckFailed if the residual
// ||(H - w I) v|| exceeds 1e-10 * ||H||_F for either mode.
SpectrumPoint eigenmodes(const EffectiveModel& m);

// --- parameter sweeps ------------------------------------------------------

// What a sweep coordinate means:
//   GeDirect      overrides g_e, everything else from the base parameters
//   DeltaTheta    theta_q = {v, 0}
//   LambdaCommon  lambda_q = {v, v}
//   SigmaZPattern sigma_z = {v, -v}
//   OmegaC        omega_c = v (g_e then follows the coupler formula)
enum class Axis : std::uint8_t { GeDirect, DeltaTheta, LambdaCommon, SigmaZPattern, OmegaC };

const char* axis_name(Axis a);
std::optional<Axis> axis_from_name(const std::string& name);

struct AxisSpec {
    Axis axis{Axis::GeDirect};
    std::vector<double> values;
};

AxisSpec linspace_axis(Axis a, double lo, double hi, int n);

struct AxisApplication {
    CircuitParams p;
    std::optional<double> ge_override;
};

AxisApplication apply_axis_value(CircuitParams p, Axis a, double v,
                                 std::optional<double> ge_base = {});

// Builds the model for one or two applied axis values on top of base.
EffectiveModel model_at(const CircuitParams& base, Axis a1, double v1,
                        std::optional<std::pair<Axis, double>> second = {},
                        std::optional<double> ge_base = {});

struct ScanCell {
    bool masked{false};  // DegenerateDetuning at this grid point
    SpectrumPoint sp;
    EffectiveModel model;
};

struct Scan2D {
    AxisSpec a1, a2;
    std::vector<ScanCell> cells;  // row-major, index = i1 * n2 + i2
    const ScanCell& at(std::size_t i1, std::size_t i2) const {
        return cells[i1 * a2.values.size() + i2];
    }
};

// Dense grid over axis1 x axis2. Cells hitting DegenerateDetuning are
// masked, any other error propagates. Deterministic for any thread count.
Scan2D scan_2d(const CircuitParams& base, const AxisSpec& a1, const AxisSpec& a2,
               int threads = 1, std::optional<double> ge_base = {});

struct Sweep1D {
    AxisSpec axis;
    std::vector<ScanCell> points;
    // Branch-continuous curves: curve(k) follows the eigenvalue nearest (in
    // complex distance, greedy 2-point assignment) to curve(k) at the
    // previous sweep point. Raw branch-rule ordering stays in points[].
    std::vector<std::array<complex, 2>> paired;
};

Sweep1D sweep_1d(const CircuitParams& base, const AxisSpec& axis, int threads = 1,
                 std::optional<double> ge_base = {});

}  // namespace nhqc
