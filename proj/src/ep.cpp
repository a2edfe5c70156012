#include "nhqc/ep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhqc {

const char* locus_kind_name(LocusKind k) {
    switch (k) {
        case LocusKind::LevelDegeneracy: return "LevelDegeneracy";
        case LocusKind::DampingDegeneracy: return "DampingDegeneracy";
        case LocusKind::ExceptionalPoint: return "ExceptionalPoint";
    }
    return "?";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

LocusKind classify(double r, double tol) {
    if (r <= -tol) return LocusKind::LevelDegeneracy;
    if (r >= +tol) return LocusKind::DampingDegeneracy;
    return LocusKind::ExceptionalPoint;
}

struct DiscEval {
    bool ok{false};
    Discriminant d{kNaN, kNaN};
};

// One continuous coordinate -> discriminant, for bisection.
template <class Fn>
DiscEval eval_disc(const Fn& disc_at, double v) {
    try {
        return {true, disc_at(v)};
    } catch (const DegenerateDetuning&) {
        return {false, {kNaN, kNaN}};
    }
}

// Bisects component `pick` (0: R, 1: I) of the discriminant on [lo, hi],
// where the component has opposite signs at the ends. Returns the midpoint,
// the residual pair there, and the final bracket width.
template <class Fn>
void bisect_component(const Fn& disc_at, int pick, double lo, double hi, int sign_lo,
                      double tol, int max_iter, double& root, Discriminant& at_root,
                      double& width) {
    double mid = 0.5 * (lo + hi);
    Discriminant dm = disc_at(mid);
    for (int it = 0; it < max_iter; ++it) {
        const double f = pick == 0 ? dm.r : dm.i;
        if (std::abs(f) <= 0.125 * tol) break;
        if (sign_of(f) == sign_lo)
            lo = mid;
        else
            hi = mid;
        const double next = 0.5 * (lo + hi);
        if (next == mid) break;  // bracket exhausted at double precision
        mid = next;
        dm = disc_at(mid);
    }
    root = mid;
    at_root = dm;
    width = hi - lo;
}

}  // namespace

double eigenvector_angle(const SpectrumPoint& sp) {
    const double overlap = std::abs(sp.eigvecs[0].dot(sp.eigvecs[1]));
    return std::acos(std::min(1.0, overlap));
}

bool damping_exchange_across(const Sweep1D& sweep, double locus_value) {
    const auto& vals = sweep.axis.values;
    double d_left = kNaN, d_right = kNaN;
    for (std::size_t k = 0; k < vals.size(); ++k) {
        if (sweep.points[k].masked) continue;
        const double diff =
            sweep.paired[k][0].imag() - sweep.paired[k][1].imag();
        if (vals[k] < locus_value) d_left = diff;
        if (vals[k] > locus_value && std::isnan(d_right)) d_right = diff;
    }
    if (std::isnan(d_left) || std::isnan(d_right)) return false;
    return sign_of(d_left) * sign_of(d_right) < 0;
}

std::vector<DegeneracyLocus> find_degeneracies_1d(const CircuitParams& base,
                                                  const AxisSpec& axis,
                                                  const EpOptions& opt) {
    if (axis.values.size() < 16)
        throw InvalidParameter("degeneracy scan needs at least 16 grid values");
    const auto disc_at = [&](double v) {
        return discriminant(model_at(base, axis.axis, v));
    };

    const std::size_t n = axis.values.size();
    std::vector<DiscEval> grid(n);
    for (std::size_t k = 0; k < n; ++k) grid[k] = eval_disc(disc_at, axis.values[k]);

    std::vector<DegeneracyLocus> loci;
    const auto push = [&](LocusKind kind, double v, const Discriminant& d, double width) {
        loci.push_back({kind, v, kNaN, std::abs(d.r), std::abs(d.i), width});
    };

    // Whole-line degenerate case: I below tolerance everywhere it exists.
    bool any_ok = false, line_degenerate = true;
    for (const auto& g : grid) {
        if (!g.ok) continue;
        any_ok = true;
        if (std::abs(g.d.i) > opt.tol_disc) line_degenerate = false;
    }
    if (!any_ok) return loci;

    if (line_degenerate) {
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (!grid[k].ok || !grid[k + 1].ok) continue;
            if (sign_of(grid[k].d.r) * sign_of(grid[k + 1].d.r) >= 0) continue;
            double root, width;
            Discriminant dr;
            bisect_component(disc_at, 0, axis.values[k], axis.values[k + 1],
                             sign_of(grid[k].d.r), opt.tol_disc, opt.max_bisect, root,
                             dr, width);
            if (std::abs(dr.i) <= opt.tol_disc)
                push(LocusKind::ExceptionalPoint, root, dr, width);
        }
        return loci;
    }

    // Sign changes of I, classified by R at the root.
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (!grid[k].ok || !grid[k + 1].ok) continue;
        const int s0 = sign_of(grid[k].d.i), s1 = sign_of(grid[k + 1].d.i);
        if (s0 == 0) {  // exact grid hit
            push(classify(grid[k].d.r, opt.tol_disc), axis.values[k], grid[k].d, 0.0);
            continue;
        }
        if (s1 == 0 || s0 * s1 > 0) continue;
        double root, width;
        Discriminant dr;
        bisect_component(disc_at, 1, axis.values[k], axis.values[k + 1], s0,
                         opt.tol_disc, opt.max_bisect, root, dr, width);
        push(classify(dr.r, opt.tol_disc), root, dr, width);
    }
    if (grid[n - 1].ok && sign_of(grid[n - 1].d.i) == 0)
        push(classify(grid[n - 1].d.r, opt.tol_disc), axis.values[n - 1], grid[n - 1].d,
             0.0);

    // R sign changes while I is already inside tolerance on both ends:
    // exceptional-point candidates the I-scan cannot see.
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (!grid[k].ok || !grid[k + 1].ok) continue;
        if (std::max(std::abs(grid[k].d.i), std::abs(grid[k + 1].d.i)) > opt.tol_disc)
            continue;
        if (sign_of(grid[k].d.r) * sign_of(grid[k + 1].d.r) >= 0) continue;
        double root, width;
        Discriminant dr;
        bisect_component(disc_at, 0, axis.values[k], axis.values[k + 1],
                         sign_of(grid[k].d.r), opt.tol_disc, opt.max_bisect, root, dr,
                         width);
        if (std::abs(dr.i) <= opt.tol_disc)
            push(LocusKind::ExceptionalPoint, root, dr, width);
    }

    std::sort(loci.begin(), loci.end(),
              [](const DegeneracyLocus& a, const DegeneracyLocus& b) {
                  return a.axis1 < b.axis1;
              });
    // Merge duplicates from overlapping detectors.
    std::vector<DegeneracyLocus> unique;
    for (const auto& l : loci) {
        if (!unique.empty() && unique.back().kind == l.kind &&
            std::abs(unique.back().axis1 - l.axis1) <=
                4.0 * std::max(unique.back().refinement_width, l.refinement_width) +
                    1e-12 * (1.0 + std::abs(l.axis1)))
            continue;
        unique.push_back(l);
    }
    return unique;
}

namespace {

struct GridDisc {
    std::vector<DiscEval> d;  // row-major i1 * n2 + i2
    std::size_t n1{}, n2{};
    const DiscEval& at(std::size_t i1, std::size_t i2) const { return d[i1 * n2 + i2]; }
};

}  // namespace

std::vector<DegeneracyLocus> find_ep_2d(const CircuitParams& base, const AxisSpec& a1,
                                        const AxisSpec& a2, const EpOptions& opt) {
    if (a1.values.size() < 16 || a2.values.size() < 16)
        throw InvalidParameter("2-D locator needs at least 16 values per axis");
    const auto disc_at = [&](double v1, double v2) {
        return discriminant(
            model_at(base, a1.axis, v1, std::make_pair(a2.axis, v2)));
    };

    GridDisc g;
    g.n1 = a1.values.size();
    g.n2 = a2.values.size();
    g.d.resize(g.n1 * g.n2);
    for (std::size_t i1 = 0; i1 < g.n1; ++i1)
        for (std::size_t i2 = 0; i2 < g.n2; ++i2)
            g.d[i1 * g.n2 + i2] = eval_disc(
                [&](double) { return disc_at(a1.values[i1], a2.values[i2]); }, 0.0);

    std::vector<DegeneracyLocus> eps;
    const auto push_ep = [&](double v1, double v2, const Discriminant& d, double width) {
        eps.push_back({LocusKind::ExceptionalPoint, v1, v2, std::abs(d.r), std::abs(d.i),
                       width});
    };

    // 1) Whole grid lines sitting on the I = 0 set.
    const auto line_sweep = [&](bool row, std::size_t fixed) {
        const std::size_t m = row ? g.n2 : g.n1;
        const auto& vals = row ? a2.values : a1.values;
        bool ok_any = false, all_small = true;
        for (std::size_t t = 0; t < m; ++t) {
            const DiscEval& e = row ? g.at(fixed, t) : g.at(t, fixed);
            if (!e.ok) continue;
            ok_any = true;
            if (std::abs(e.d.i) > opt.tol_disc) all_small = false;
        }
        if (!ok_any || !all_small) return;
        const double fv = row ? a1.values[fixed] : a2.values[fixed];
        const auto disc_line = [&](double v) {
            return row ? disc_at(fv, v) : disc_at(v, fv);
        };
        for (std::size_t t = 0; t + 1 < m; ++t) {
            const DiscEval& e0 = row ? g.at(fixed, t) : g.at(t, fixed);
            const DiscEval& e1 = row ? g.at(fixed, t + 1) : g.at(t + 1, fixed);
            if (!e0.ok || !e1.ok) continue;
            if (sign_of(e0.d.r) * sign_of(e1.d.r) >= 0) continue;
            double root, width;
            Discriminant dr;
            bisect_component(disc_line, 0, vals[t], vals[t + 1], sign_of(e0.d.r),
                             opt.tol_disc, opt.max_bisect, root, dr, width);
            if (std::abs(dr.i) > opt.tol_disc) continue;
            if (row)
                push_ep(fv, root, dr, width);
            else
                push_ep(root, fv, dr, width);
        }
    };
    for (std::size_t i1 = 0; i1 < g.n1; ++i1) line_sweep(true, i1);
    for (std::size_t i2 = 0; i2 < g.n2; ++i2) line_sweep(false, i2);

    // 2) Contour cells: I changes sign across cell edges; follow the contour
    // chord inside the cell and look for an R sign change on it.
    struct EdgePoint {
        double x, y, r;
    };
    const double span1 = std::abs(a1.values.back() - a1.values.front());
    const double span2 = std::abs(a2.values.back() - a2.values.front());
    for (std::size_t i1 = 0; i1 + 1 < g.n1; ++i1) {
        for (std::size_t i2 = 0; i2 + 1 < g.n2; ++i2) {
            const DiscEval* c[4] = {&g.at(i1, i2), &g.at(i1 + 1, i2), &g.at(i1, i2 + 1),
                                    &g.at(i1 + 1, i2 + 1)};
            if (!(c[0]->ok && c[1]->ok && c[2]->ok && c[3]->ok)) continue;
            std::vector<EdgePoint> pts;
            // Edge parameterizations: (lo, hi) along one axis, other fixed.
            const auto edge = [&](double x0, double y0, double x1, double y1,
                                  const Discriminant& d0, const Discriminant& d1) {
                if (sign_of(d0.i) * sign_of(d1.i) >= 0) return;
                const auto disc_edge = [&](double s) {
                    return disc_at(x0 + (x1 - x0) * s, y0 + (y1 - y0) * s);
                };
                double root, width;
                Discriminant dr;
                bisect_component(disc_edge, 1, 0.0, 1.0, sign_of(d0.i), opt.tol_disc,
                                 opt.max_bisect, root, dr, width);
                pts.push_back({x0 + (x1 - x0) * root, y0 + (y1 - y0) * root, dr.r});
            };
            const double x0 = a1.values[i1], x1 = a1.values[i1 + 1];
            const double y0 = a2.values[i2], y1 = a2.values[i2 + 1];
            edge(x0, y0, x1, y0, c[0]->d, c[1]->d);
            edge(x0, y1, x1, y1, c[2]->d, c[3]->d);
            edge(x0, y0, x0, y1, c[0]->d, c[2]->d);
            edge(x1, y0, x1, y1, c[1]->d, c[3]->d);
            if (pts.size() < 2) continue;
            // Any pair of contour intersections with opposite R brackets an
            // EP along the contour within this cell; polish the first such
            // pair (a 2x2 spectrum has isolated EPs, one per cell at most).
            bool cell_done = false;
            for (std::size_t p = 0; p + 1 < pts.size() && !cell_done; ++p) {
                for (std::size_t q = p + 1; q < pts.size() && !cell_done; ++q) {
                    if (sign_of(pts[p].r) * sign_of(pts[q].r) >= 0) continue;
                    // Newton polish from the chord midpoint.
                    double x = 0.5 * (pts[p].x + pts[q].x);
                    double y = 0.5 * (pts[p].y + pts[q].y);
                    const double hx = 1e-7 * (span1 + std::abs(x));
                    const double hy = 1e-7 * (span2 + std::abs(y));
                    double step = std::numeric_limits<double>::infinity();
                    Discriminant dc = disc_at(x, y);
                    bool converged = false;
                    for (int it = 0; it < opt.newton_iters; ++it) {
                        if (std::abs(dc.r) <= opt.tol_disc &&
                            std::abs(dc.i) <= opt.tol_disc) {
                            converged = true;
                            break;
                        }
                        const Discriminant dxp = disc_at(x + hx, y);
                        const Discriminant dyp = disc_at(x, y + hy);
                        const double j00 = (dxp.r - dc.r) / hx, j01 = (dyp.r - dc.r) / hy;
                        const double j10 = (dxp.i - dc.i) / hx, j11 = (dyp.i - dc.i) / hy;
                        const double det = j00 * j11 - j01 * j10;
                        if (det == 0.0 || !std::isfinite(det)) break;
                        double dx = -(j11 * dc.r - j01 * dc.i) / det;
                        double dy = -(-j10 * dc.r + j00 * dc.i) / det;
                        // Stay within ~1.5 cells of the seed region.
                        const double lim_x = 1.5 * std::abs(x1 - x0);
                        const double lim_y = 1.5 * std::abs(y1 - y0);
                        dx = std::clamp(dx, -lim_x, lim_x);
                        dy = std::clamp(dy, -lim_y, lim_y);
                        x += dx;
                        y += dy;
                        step = std::max(std::abs(dx), std::abs(dy));
                        dc = disc_at(x, y);
                    }
                    if (converged) push_ep(x, y, dc, step);
                    cell_done = true;
                }
            }
        }
    }

    std::sort(eps.begin(), eps.end(),
              [](const DegeneracyLocus& a, const DegeneracyLocus& b) {
                  if (a.axis1 != b.axis1) return a.axis1 < b.axis1;
                  return a.axis2 < b.axis2;
              });
    // Merge refinements of the same point reached from neighboring cells.
    const double dedup1 = span1 / static_cast<double>(g.n1 - 1);
    const double dedup2 = span2 / static_cast<double>(g.n2 - 1);
    std::vector<DegeneracyLocus> unique;
    for (const auto& l : eps) {
        bool dup = false;
        for (const auto& u : unique)
            if (std::abs(u.axis1 - l.axis1) <= dedup1 && std::abs(u.axis2 - l.axis2) <= dedup2)
                dup = true;
        if (!dup) unique.push_back(l);
    }
    return unique;
}

}  // namespace nhqc
