#pragma once

// Integration against dx dy / y^2 over regions cut out by Euclidean
// circles and lines. Hyperbolic half-planes, horoballs and height bands
// are all of that form, so one slicing routine covers polygons, cusp
// zones and partition cells. Each horizontal slice is a finite union of
// intervals computed in closed form; the y-integral is split at every
// height where the slice structure can change.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "hypcover/polygon.hpp"

namespace hypcover {

struct Constraint {
    enum class Kind { XAtLeast, XAtMost, YAtLeast, YAtMost, InsideDisc, OutsideDisc };
    Kind kind;
    double cx = 0;  // threshold for line kinds, disc centre x
    double cy = 0;
    double r = 0;
    double power = 0;  // cx^2 + cy^2 - r^2, kept separately to avoid cancellation

    static Constraint x_at_least(double v) { return {Kind::XAtLeast, v}; }
    static Constraint x_at_most(double v) { return {Kind::XAtMost, v}; }
    static Constraint y_at_least(double v) { return {Kind::YAtLeast, v}; }
    static Constraint y_at_most(double v) { return {Kind::YAtMost, v}; }
    static Constraint inside(double cx, double cy, double r) {
        return {Kind::InsideDisc, cx, cy, r, cx * cx + cy * cy - r * r};
    }
    static Constraint outside(double cx, double cy, double r) {
        return {Kind::OutsideDisc, cx, cy, r, cx * cx + cy * cy - r * r};
    }

    /// Closed left half-plane of an oriented geodesic.
    static Constraint left_of(const OrientedGeodesic& g) {
        if (g.x0.infinite) return x_at_least(g.x1.x);
        if (g.x1.infinite) return x_at_most(g.x0.x);
        Constraint c = g.x1.x > g.x0.x ? outside(g.center(), 0, g.radius()) : inside(g.center(), 0, g.radius());
        c.power = g.x0.x * g.x1.x;
        return c;
    }

    /// Chord of the circle at height y as (lo, hi); false when the line misses it.
    bool chord(double y, double& lo, double& hi) const {
        double dy = y - cy;
        double w2 = (r - dy) * (r + dy);
        if (w2 <= 0) return false;
        double w = std::sqrt(w2);
        double q = power + y * y - 2 * y * cy;  // product of the two roots
        double big = cx + std::copysign(w, cx);
        double small = big != 0 ? q / big : cx - w;
        lo = std::min(big, small);
        hi = std::max(big, small);
        return true;
    }

    bool contains(const HPoint& z, double eps = 0) const {
        switch (kind) {
        case Kind::XAtLeast: return z.x >= cx - eps;
        case Kind::XAtMost: return z.x <= cx + eps;
        case Kind::YAtLeast: return z.y >= cx - eps;
        case Kind::YAtMost: return z.y <= cx + eps;
        case Kind::InsideDisc: return std::hypot(z.x - cx, z.y - cy) <= r + eps;
        case Kind::OutsideDisc: return std::hypot(z.x - cx, z.y - cy) >= r - eps;
        }
        return false;
    }

    /// Euclidean distance scale used to reject interior points near the boundary.
    double boundary_gap(const HPoint& z) const {
        switch (kind) {
        case Kind::XAtLeast:
        case Kind::XAtMost: return std::abs(z.x - cx);
        case Kind::YAtLeast:
        case Kind::YAtMost: return std::abs(z.y - cx);
        case Kind::InsideDisc:
        case Kind::OutsideDisc: return std::abs(std::hypot(z.x - cx, z.y - cy) - r);
        }
        return 0;
    }
};

struct Interval {
    double lo;
    double hi;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    std::size_t max_evaluations = 1'000'000;
    unsigned max_depth = 18;
};

/// Intersection of constraints; measure is the hyperbolic one.
struct Region {
    std::vector<Constraint> constraints;

    Region() = default;
    explicit Region(std::vector<Constraint> cs) : constraints(std::move(cs)) {}

    static Region from_polygon(const HPolygon& poly) {
        Region reg;
        for (const auto& e : poly.edges()) reg.constraints.push_back(Constraint::left_of(e));
        return reg;
    }

    Region& add(const Constraint& c) {
        constraints.push_back(c);
        return *this;
    }

    Region intersected(const Region& o) const {
        Region reg = *this;
        reg.constraints.insert(reg.constraints.end(), o.constraints.begin(), o.constraints.end());
        return reg;
    }

    bool contains(const HPoint& z, double eps = 0) const {
        return std::all_of(constraints.begin(), constraints.end(),
                           [&](const Constraint& c) { return c.contains(z, eps); });
    }

    double boundary_gap(const HPoint& z) const {
        double g = std::numeric_limits<double>::infinity();
        for (const auto& c : constraints) g = std::min(g, c.boundary_gap(z));
        return g;
    }

    /// Horizontal slice at height y as sorted disjoint intervals.
    std::vector<Interval> slice(double y) const {
        constexpr double inf = std::numeric_limits<double>::infinity();
        std::vector<Interval> cur{{-inf, inf}};
        std::vector<Interval> next;
        auto clip_to = [&](double lo, double hi) {
            next.clear();
            for (const auto& iv : cur) {
                double a = std::max(iv.lo, lo), b = std::min(iv.hi, hi);
                if (a < b) next.push_back({a, b});
            }
            cur.swap(next);
        };
        for (const auto& c : constraints) {
            if (cur.empty()) break;
            switch (c.kind) {
            case Constraint::Kind::XAtLeast: clip_to(c.cx, inf); break;
            case Constraint::Kind::XAtMost: clip_to(-inf, c.cx); break;
            case Constraint::Kind::YAtLeast:
                if (y < c.cx) cur.clear();
                break;
            case Constraint::Kind::YAtMost:
                if (y > c.cx) cur.clear();
                break;
            case Constraint::Kind::InsideDisc: {
                double lo, hi;
                if (!c.chord(y, lo, hi)) {
                    cur.clear();
                    break;
                }
                clip_to(lo, hi);
                break;
            }
            case Constraint::Kind::OutsideDisc: {
                double lo, hi;
                if (!c.chord(y, lo, hi)) break;
                next.clear();
                for (const auto& iv : cur) {
                    double a = iv.lo, b = std::min(iv.hi, lo);
                    if (a < b) next.push_back({a, b});
                    a = std::max(iv.lo, hi);
                    b = iv.hi;
                    if (a < b) next.push_back({a, b});
                }
                cur.swap(next);
                break;
            }
            }
        }
        return cur;
    }

    /// Heights where the slice combinatorics may change, sorted.
    std::vector<double> breakpoints() const {
        std::vector<double> ys;
        auto push = [&](double v) {
            if (std::isfinite(v) && v > 0) ys.push_back(v);
        };
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            const auto& a = constraints[i];
            bool a_disc = a.kind == Constraint::Kind::InsideDisc || a.kind == Constraint::Kind::OutsideDisc;
            bool a_vert = a.kind == Constraint::Kind::XAtLeast || a.kind == Constraint::Kind::XAtMost;
            if (a.kind == Constraint::Kind::YAtLeast || a.kind == Constraint::Kind::YAtMost) push(a.cx);
            if (a_disc) {
                push(a.cy + a.r);
                push(a.cy - a.r);
                push(a.cy);
            }
            for (std::size_t j = i + 1; j < constraints.size(); ++j) {
                const auto& b = constraints[j];
                bool b_disc = b.kind == Constraint::Kind::InsideDisc || b.kind == Constraint::Kind::OutsideDisc;
                bool b_vert = b.kind == Constraint::Kind::XAtLeast || b.kind == Constraint::Kind::XAtMost;
                if (a_disc && b_disc) {
                    double dx = b.cx - a.cx, dy = b.cy - a.cy;
                    double d = std::hypot(dx, dy);
                    if (d == 0 || d > a.r + b.r || d < std::abs(a.r - b.r)) continue;
                    double along = (a.r * a.r - b.r * b.r + d * d) / (2 * d);
                    double h = std::sqrt(std::max(0.0, a.r * a.r - along * along));
                    double my = a.cy + along * dy / d;
                    push(my + h * dx / d);
                    push(my - h * dx / d);
                } else if ((a_disc && b_vert) || (a_vert && b_disc)) {
                    const auto& disc = a_disc ? a : b;
                    const auto& line = a_disc ? b : a;
                    double dx = line.cx - disc.cx;
                    double h2 = disc.r * disc.r - dx * dx;
                    if (h2 < 0) continue;
                    push(disc.cy + std::sqrt(h2));
                    push(disc.cy - std::sqrt(h2));
                }
            }
        }
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end(), [](double u, double v) { return std::abs(u - v) <= 1e-15 * (1 + std::abs(u)); }),
                 ys.end());
        return ys;
    }

    /// Lower / upper height bounds imposed directly by the constraints.
    std::pair<double, double> height_range() const {
        double lo = 0, hi = std::numeric_limits<double>::infinity();
        for (const auto& c : constraints) {
            if (c.kind == Constraint::Kind::YAtLeast) lo = std::max(lo, c.cx);
            if (c.kind == Constraint::Kind::YAtMost) hi = std::min(hi, c.cx);
            if (c.kind == Constraint::Kind::InsideDisc) {
                lo = std::max(lo, c.cy - c.r);
                hi = std::min(hi, c.cy + c.r);
            }
        }
        return {lo, hi};
    }
};

namespace detail {

inline double slice_width(const std::vector<Interval>& ivs) {
    double w = 0;
    for (const auto& iv : ivs) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
            fail(ErrorKind::Unbounded, "region slice is unbounded in x");
        w += iv.hi - iv.lo;
    }
    return w;
}

class EvalBudget {
public:
    explicit EvalBudget(std::size_t max) : max_(max) {}
    void tick() {
        if (++count_ > max_) fail(ErrorKind::NonConvergent, "quadrature evaluation budget exhausted");
    }
    std::size_t count() const { return count_; }

private:
    std::size_t max_;
    std::size_t count_ = 0;
};

template <class F>
double gk(F&& f, double a, double b, const QuadratureOptions& opt) {
    if (!(b > a)) return 0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0, l1 = 0;
    double rough = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
    if (err <= opt.abs_tol * 1e-3) return rough;
    double rel = std::max(1e-13, 1e-3 * opt.abs_tol / std::max(l1, 1e-300));
    return GK::integrate(f, a, b, opt.max_depth, rel, &err);
}

/// Integrates g(y) over [a, b] with the endpoints smoothed out (kills sqrt singularities).
template <class G>
double integrate_smoothed(G&& g, double a, double b, const QuadratureOptions& opt) {
    const double len = b - a;
    auto h = [&](double u) {
        double s = u * u * (3 - 2 * u);
        double ds = 6 * u * (1 - u);
        if (ds == 0) return 0.0;
        return g(a + len * s) * len * ds;
    };
    return gk(h, 0.0, 1.0, opt);
}

/// Sums \int over y of inner(y) dy / y^2, with the tail above the breakpoints mapped by s = 1/y.
template <class Inner>
double integrate_heights(const Region& reg, Inner&& inner, const QuadratureOptions& opt) {
    auto [lo, hi] = reg.height_range();
    if (!(hi > lo)) return 0;
    auto bps = reg.breakpoints();
    std::vector<double> cuts{lo};
    for (double y : bps)
        if (y > lo && y < hi) cuts.push_back(y);
    bool unbounded = !std::isfinite(hi);
    double top = hi;
    if (unbounded) {
        double highest = std::max(2.0, cuts.back());
        top = highest + 1;
    }
    cuts.push_back(top);
    double total = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        double a = cuts[k], b = cuts[k + 1];
        if (!(b > a)) continue;
        total += integrate_smoothed([&](double y) { return inner(y) / (y * y); }, a, b, opt);
    }
    if (unbounded) {
        // y = 1/s, dy / y^2 = ds
        auto tail = [&](double s) {
            if (s <= 0) s = std::numeric_limits<double>::min();
            return inner(1.0 / s);
        };
        total += integrate_smoothed(tail, 0.0, 1.0 / top, opt);
    }
    return total;
}

}  // namespace detail

/// Hyperbolic area of a region by slicing; independent of Gauss-Bonnet.
inline double region_area(const Region& reg, const QuadratureOptions& opt = {}) {
    detail::EvalBudget budget(opt.max_evaluations);
    auto width = [&](double y) {
        budget.tick();
        return detail::slice_width(reg.slice(y));
    };
    return detail::integrate_heights(reg, width, opt);
}

/// \int_reg f d\mu for a bounded test function f(x, y).
inline double integrate(const Region& reg, const std::function<double(const HPoint&)>& f,
                        const QuadratureOptions& opt = {}) {
    detail::EvalBudget budget(opt.max_evaluations);
    auto inner = [&](double y) {
        double s = 0;
        for (const auto& iv : reg.slice(y)) {
            if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
                fail(ErrorKind::Unbounded, "region slice is unbounded in x");
            s += detail::gk(
                [&](double x) {
                    budget.tick();
                    return f(HPoint{x, y});
                },
                iv.lo, iv.hi, opt);
        }
        return s;
    };
    return detail::integrate_heights(reg, inner, opt);
}

inline double integrate(const HPolygon& poly, const std::function<double(const HPoint&)>& f,
                        const QuadratureOptions& opt = {}) {
    return integrate(Region::from_polygon(poly), f, opt);
}

inline double region_area(const HPolygon& poly, const QuadratureOptions& opt = {}) {
    return region_area(Region::from_polygon(poly), opt);
}

}  // namespace hypcover
