#include "nhqc/nonreciprocity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhqc {

DirectionalCoupling directional_coupling(const EffectiveModel& m) {
    DirectionalCoupling dc;
    dc.g_fwd = m.h_non(1, 0);  // drives qubit 2 from qubit 1's amplitude
    dc.g_bwd = m.h_non(0, 1);
    const double fwd = std::abs(dc.g_fwd), bwd = std::abs(dc.g_bwd);
    dc.ratio = fwd > 0.0 ? bwd / fwd : std::numeric_limits<double>::infinity();
    if (dc.ratio == 0.0)
        dc.log10_ratio = -12.0;
    else if (std::isinf(dc.ratio))
        dc.log10_ratio = 12.0;
    else
        dc.log10_ratio = std::clamp(std::log10(dc.ratio), -12.0, 12.0);
    return dc;
}

NonrecipMap nonrecip_map(const CircuitParams& base, const AxisSpec& a1,
                         const AxisSpec& a2, int threads,
                         std::optional<double> ge_base) {
    if (a1.values.empty() || a2.values.empty())
        throw InvalidParameter("map axes must be non-empty");
    NonrecipMap map{a1, a2, {}, 0, 0, 0, 0};
    const std::size_t n1 = a1.values.size(), n2 = a2.values.size();
    map.cells.resize(n1 * n2);
    std::vector<std::exception_ptr> errors(n1 * n2);
    parallel_for(n1 * n2, threads, [&](std::size_t idx) {
        const std::size_t i1 = idx / n2, i2 = idx % n2;
        try {
            const EffectiveModel m = model_at(base, a1.axis, a1.values[i1],
                                              std::make_pair(a2.axis, a2.values[i2]),
                                              ge_base);
            map.cells[idx] = {false, directional_coupling(m)};
        } catch (const DegenerateDetuning&) {
            map.cells[idx].masked = true;
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    });
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    double min_fwd = std::numeric_limits<double>::infinity();
    double min_bwd = std::numeric_limits<double>::infinity();
    double max_ratio = -std::numeric_limits<double>::infinity();
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < map.cells.size(); ++idx) {
        const NonrecipCell& c = map.cells[idx];
        if (c.masked) continue;
        const double fwd = std::abs(c.dc.g_fwd), bwd = std::abs(c.dc.g_bwd);
        if (fwd < min_fwd) { min_fwd = fwd; map.argmin_fwd = idx; }
        if (bwd < min_bwd) { min_bwd = bwd; map.argmin_bwd = idx; }
        if (c.dc.ratio > max_ratio) { max_ratio = c.dc.ratio; map.argmax_ratio = idx; }
        if (c.dc.ratio < min_ratio) { min_ratio = c.dc.ratio; map.argmin_ratio = idx; }
    }
    return map;
}

AsymmetryMap asymmetry_dynamics(const CircuitParams& base, const AxisSpec& axis,
                                const EvolveSpec& spec, int threads,
                                std::optional<double> ge_base) {
    if (axis.values.empty()) throw InvalidParameter("sweep axis must be non-empty");
    AsymmetryMap map;
    map.axis = axis;
    const std::size_t na = axis.values.size();
    const std::size_t nt = static_cast<std::size_t>(spec.n_steps) + 1;
    map.p2_minus_p1.assign(na * nt, 0.0);
    std::vector<std::vector<double>> times(na);
    std::vector<std::exception_ptr> errors(na);
    parallel_for(na, threads, [&](std::size_t ia) {
        try {
            const AxisApplication app =
                apply_axis_value(base, axis.axis, axis.values[ia], ge_base);
            const TwoRunAsymmetry run =
                evolve_both_excited(app.p, spec, app.ge_override);
            times[ia] = run.omega_n_t;
            std::copy(run.p2_minus_p1.begin(), run.p2_minus_p1.end(),
                      map.p2_minus_p1.begin() + static_cast<std::ptrdiff_t>(ia * nt));
        } catch (...) {
            errors[ia] = std::current_exception();
        }
    });
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    map.omega_n_t = times.front();
    return map;
}

}  // namespace nhqc
