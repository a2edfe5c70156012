#pragma once
// Locates and classifies degeneracy loci of the spectrum:
//   LevelDegeneracy    I = 0, R < 0   (level attraction: delta_e = 0)
//   DampingDegeneracy  I = 0, R > 0   (equal decay rates: delta_gamma = 0)
//   ExceptionalPoint   R = 0, I = 0   (eigenvectors coalesce)

#include <string>
#include <vector>

#include "nhqc/spectrum.hpp"

namespace nhqc {

enum class LocusKind : std::uint8_t { LevelDegeneracy, DampingDegeneracy, ExceptionalPoint };

const char* locus_kind_name(LocusKind k);

struct DegeneracyLocus {
    LocusKind kind{};
    double axis1{};             // refined coordinate on the first axis
    double axis2{};             // second axis, NaN for 1-D sweeps
    double r_residual{};        // |R| at the refined point [MHz^2]
    double i_residual{};        // |I| at the refined point [MHz^2]
    double refinement_width{};  // final bracket / step width (axis units)
};

struct EpOptions {
    double tol_disc{1e-9};  // residual tolerance on |R|, |I| [MHz^2]
    int max_bisect{80};     // bisection depth cap
    int newton_iters{60};   // 2-D polish iterations
};

// Scans I along the axis grid, refines each sign change by bisection, and
// classifies by the sign of R at the root (|R| <= tol_disc ties break to
// ExceptionalPoint). Grid lines where I stays below tol_disc throughout are
// treated as lying on the I = 0 set: R sign changes along them refine to
// ExceptionalPoints directly. Constant-sign I yields an empty list, not an
// error. Requires >= 16 grid values. Deterministic, ordered by axis value.
std::vector<DegeneracyLocus> find_degeneracies_1d(const CircuitParams& base,
                                                  const AxisSpec& axis,
                                                  const EpOptions& opt = {});

// Marches the I = 0 contour over the 2-D grid (cell-edge sign changes plus
// whole degenerate lines as above), looks for R sign changes along it, and
// polishes each candidate with a damped finite-difference Newton step on
// (R, I). Only points with both residuals <= tol_disc are returned, ordered
// by axis1 then axis2.
std::vector<DegeneracyLocus> find_ep_2d(const CircuitParams& base, const AxisSpec& a1,
                                        const AxisSpec& a2, const EpOptions& opt = {});

// Angle (radians) between the two unit right eigenvectors, via normalized
// overlap: acos(min(1, |<v+|v->|)). Near 0 at an exceptional point.
double eigenvector_angle(const SpectrumPoint& sp);

// True when the signed delta_gamma of the continuity-paired curves swaps
// ordering between the sweep samples left and right of locus_value
// (damping-rate exchange across a level degeneracy).
bool damping_exchange_across(const Sweep1D& sweep, double locus_value);

}  // namespace nhqc
