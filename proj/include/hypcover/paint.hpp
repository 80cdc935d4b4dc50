#pragma once

// Tracing closed geodesics through the tessellation by translates of F
// and painting each visited translate to the left of the lift.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "hypcover/error.hpp"
#include "hypcover/fundpoly.hpp"
#include "hypcover/hypgeo.hpp"
#include "hypcover/polygon.hpp"
#include "hypcover/precision.hpp"
#include "hypcover/quadrature.hpp"

namespace hypcover {

/// Integer matrix of determinant one.
struct IntMatrix {
    BigInt a, b, c, d;

    BigInt det() const { return a * d - b * c; }
    BigInt trace() const { return a + d; }
    IntMatrix inverse() const { return {d, -b, -c, a}; }
    IntMatrix operator*(const IntMatrix& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    bool operator==(const IntMatrix& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }

    template <class R>
    BasicMoebius<R> eval() const {
        return BasicMoebius<R>::raw(from_bigint<R>(a), from_bigint<R>(b), from_bigint<R>(c), from_bigint<R>(d));
    }
};

/// Oriented closed geodesic given by a hyperbolic representative.
struct ClosedGeodesic {
    MoebiusMap rep;
    OrientedGeodesic axis;
    double length = 0;
    std::string label;
    std::variant<std::monostate, IntMatrix, Word> exact;

    static ClosedGeodesic from_matrix(const MoebiusMap& m, std::string label) {
        ClosedGeodesic g;
        g.rep = m;
        g.axis = hypcover::axis(m);
        g.length = translation_length(m);
        g.label = std::move(label);
        return g;
    }

    static ClosedGeodesic from_int(const IntMatrix& m, std::string label) {
        if (m.det() != 1) fail(ErrorKind::NonPositiveDeterminant, "integer representative must have determinant 1");
        ClosedGeodesic g;
        g.exact = m;
        auto hi = m.eval<Float128>();
        g.rep = hi.cast<double>();
        g.axis = hypcover::axis(hi).cast<double>();
        g.length = static_cast<double>(translation_length(hi));
        g.label = std::move(label);
        return g;
    }

    static ClosedGeodesic from_word(const FundamentalPolygon& F, const Word& w, std::string label) {
        ClosedGeodesic g;
        g.exact = w;
        auto hi = evaluate<Float128>(F, w);
        g.rep = hi.cast<double>();
        g.axis = hypcover::axis(hi).cast<double>();
        g.length = static_cast<double>(translation_length(hi));
        g.label = std::move(label);
        return g;
    }

    /// The representative at working precision R from its exact description.
    template <class R>
    BasicMoebius<R> rep_at(const FundamentalPolygon& F) const {
        if (auto m = std::get_if<IntMatrix>(&exact)) return m->template eval<R>();
        if (auto w = std::get_if<Word>(&exact)) return evaluate<R>(F, *w);
        return rep.cast<R>();
    }
};

inline ClosedGeodesic opposite(const ClosedGeodesic& g) {
    ClosedGeodesic o = g;
    o.rep = g.rep.inverse();
    o.axis = g.axis.reversed();
    o.label = g.label + "^-1";
    if (auto m = std::get_if<IntMatrix>(&g.exact)) o.exact = m->inverse();
    if (auto w = std::get_if<Word>(&g.exact)) {
        Word r;
        for (auto it = w->factors.rbegin(); it != w->factors.rend(); ++it) r.factors.push_back({it->first, -it->second});
        o.exact = r;
    }
    return o;
}

/// Piece of the lift inside one translate g F, stored in F coordinates.
struct Crossing {
    MoebiusMap translate;       // the segment lies in translate * closure(F)
    OrientedGeodesic local_axis;  // translate^{-1} * axis
    HPoint entry, exit;
    double t_in = 0;            // arc-length parameters of entry/exit on local_axis
    double t_out = 0;
    double seg_length = 0;
    bool on_boundary = false;   // segment runs along an edge of F
};

struct TraceOptions {
    int precision_bits = 0;       // 0 picks a tier from the geodesic length
    bool strict_vertices = false;  // throw VertexHit instead of passing through vertices
    double length_tol = 1e-8;
    std::size_t max_crossings = 2'000'000;
};

struct TraceResult {
    std::vector<Crossing> crossings;
    double total_length = 0;
    double primitive_length = 0;  // length travelled until the lift first repeats
    int precision_bits = 0;
    int vertex_passages = 0;
    int restarts = 0;

    bool primitive(double tol = 1e-6) const { return std::abs(primitive_length - total_length) < tol; }
};

namespace detail {

template <class R>
bool finite(const R& v) {
    using std::isfinite;
    return isfinite(v);
}

template <class R>
struct Chord {
    R t_in, t_out;
    bool empty = false;
    bool boundary = false;
    int exit_edges = 0;  // constraints active at t_out
};

/// Parameter interval of the local axis inside the closure of F.
template <class R>
Chord<R> chord_of(const PolygonView<R>& v, const BasicOrientedGeodesic<R>& l, const R& tiny) {
    using std::abs;
    using std::log;
    using std::sqrt;
    const R inf = std::numeric_limits<R>::infinity();
    Chord<R> ch{-inf, inf};
    auto sigma = to_standard(l);
    std::vector<R> upper;
    const R big = R(1) / tiny;
    auto is_inf = [&](const BasicBoundaryPoint<R>& p) { return p.infinite || abs(p.x) > big; };
    auto is_zero = [&](const BasicBoundaryPoint<R>& p) { return !p.infinite && abs(p.x) < tiny; };
    for (const auto& e : v.edges) {
        auto a = sigma(e.x0), b = sigma(e.x1);
        if ((is_inf(a) && is_zero(b)) || (is_zero(a) && is_inf(b))) {
            ch.boundary = true;
            continue;
        }
        if (is_inf(a) || is_inf(b)) {
            // vertical line in standard coordinates
            if (is_inf(a)) {
                if (b.x > R(0)) ch.empty = true;
            } else if (a.x < R(0)) {
                ch.empty = true;
            }
            continue;
        }
        bool outside_left = a.x < b.x;
        if (is_zero(a) || is_zero(b)) {
            if (!outside_left) ch.empty = true;
            continue;
        }
        R prod = a.x * b.x;
        if (prod < R(0)) {
            R ts = -log(sqrt(-prod));
            if (outside_left) {
                upper.push_back(ts);
                if (ts < ch.t_out) ch.t_out = ts;
            } else if (ts > ch.t_in) {
                ch.t_in = ts;
            }
        } else if (!outside_left) {
            ch.empty = true;
        }
    }
    if (!(ch.t_out > ch.t_in)) ch.empty = true;
    if (!ch.empty && (!finite(ch.t_in) || !finite(ch.t_out)))
        fail(ErrorKind::Unbounded, "local axis leaves F through a cusp");
    for (const auto& u : upper)
        if (abs(u - ch.t_out) < R(1e-12)) ++ch.exit_edges;
    return ch;
}

template <class R>
R two_to(double e) {
    using std::pow;
    return pow(R(2), R(e));
}

template <class R>
TraceResult trace_at(const FundamentalPolygon& F, const ClosedGeodesic& geo, const TraceOptions& opt, int bits) {
    using std::abs;
    const PolygonView<R> v = make_view<R>(F);
    const BasicMoebius<R> M = geo.rep_at<R>(F);
    if (classify(M) != MapClass::Hyperbolic) fail(ErrorKind::NotHyperbolic, "closed geodesic needs a hyperbolic representative");
    const BasicOrientedGeodesic<R> ax = axis(M);
    const R L = translation_length(M);
    const R tiny = two_to<R>(-0.8 * bits);
    const R red_eps = two_to<R>(-0.7 * bits);
    const R delta0 = two_to<R>(-0.3 * bits);
    const R close_eps = two_to<R>(-0.25 * bits);
    const double ltol = opt.length_tol * 0.01;

    TraceResult res;
    res.precision_bits = bits;

    // start in the translate containing a point of the axis near its summit
    BasicOrientedGeodesic<R> l;
    BasicMoebius<R> g;
    Chord<R> ch{};
    R shift(0);
    // the foot of the basepoint on the axis is a well-conditioned start
    R t_summit = parameter_of(ax, v.basepoint);
    for (int attempt = 0;; ++attempt) {
        auto start = point_at(ax, t_summit + shift);
        auto red = reduce_point<R>(v, start, red_eps);
        l = red.gamma * ax;
        g = red.gamma.inverse();
        ch = chord_of(v, l, tiny);
        if (!ch.empty && ch.t_out - ch.t_in > delta0 && !ch.boundary) break;
        if (attempt > 16) break;
        shift += R(0.137);
        ++res.restarts;
    }
    const BasicOrientedGeodesic<R> l0 = l;
    R total(0);
    bool any_interior = false;

    while (true) {
        if (res.crossings.size() >= opt.max_crossings) fail(ErrorKind::BudgetExceeded, "too many crossings");
        if (ch.empty) fail(ErrorKind::TraceNotClosed, "local axis misses the closure of F");
        R seg = ch.t_out - ch.t_in;
        if (seg > tiny) {
            Crossing c;
            c.translate = g.template cast<double>();
            c.local_axis = l.template cast<double>();
            c.t_in = static_cast<double>(ch.t_in);
            c.t_out = static_cast<double>(ch.t_out);
            c.entry = BasicHPoint<double>(point_at(l, ch.t_in));
            c.exit = BasicHPoint<double>(point_at(l, ch.t_out));
            c.seg_length = static_cast<double>(seg);
            c.on_boundary = ch.boundary;
            any_interior |= !ch.boundary;
            res.crossings.push_back(c);
            total += seg;
        }
        if (ch.exit_edges >= 2) {
            if (opt.strict_vertices) fail(ErrorKind::VertexHit, "axis passes through a vertex of the tessellation");
            ++res.vertex_passages;
        }
        // step into the neighbouring translate
        const auto exit_pt = point_at(l, ch.t_out);
        R delta = delta0;
        BasicMoebius<R> w;
        BasicOrientedGeodesic<R> nl;
        Chord<R> nch{};
        for (int attempt = 0;; ++attempt) {
            auto probe = point_at(l, ch.t_out + delta);
            auto red = reduce_point<R>(v, probe, tiny);
            w = red.gamma;
            nl = w * l;
            nch = chord_of(v, nl, tiny);
            R t_exit = parameter_of(nl, w(exit_pt));
            bool identity = red.steps == 0;
            R gap = nch.t_in - t_exit;
            if (!identity && !nch.empty && abs(gap) <= delta * R(0.01)) break;
            if (identity) {
                delta *= R(4);
            } else {
                delta /= R(16);
            }
            if (attempt > 24) fail(ErrorKind::TraceNotClosed, "could not step across the boundary of F");
        }
        g = g * w.inverse();
        l = nl;
        ch = nch;
        if (same_geodesic(l, l0, static_cast<double>(close_eps))) {
            double tot = static_cast<double>(total);
            if (res.primitive_length == 0) res.primitive_length = tot;
            if (abs(total - L) < R(ltol) + R(1e-6)) break;
        }
        if (total > L + R(1e-6)) fail(ErrorKind::TraceNotClosed, "accumulated length exceeds the period");
    }
    res.total_length = static_cast<double>(total);
    if (!any_interior) fail(ErrorKind::BoundaryGeodesic, "closed geodesic lies in the image of the boundary of F");
    return res;
}

}  // namespace detail

/// Crossings of one period of the lift of geo with the translates of F.
inline TraceResult trace(const FundamentalPolygon& F, const ClosedGeodesic& geo, const TraceOptions& opt = {}) {
    int bits = opt.precision_bits > 0 ? opt.precision_bits : bits_for_length(geo.length);
    return with_precision(bits, [&](auto zero) {
        using R = decltype(zero);
        return detail::trace_at<R>(F, geo, opt, std::max(bits, mantissa_bits<R>()));
    });
}

// ------------------------------------------------------------ coverings

struct CoveringCell {
    HPolygon polygon;        // closure(F) intersected with the left of local_axis
    std::size_t crossing = 0;
    OrientedGeodesic local_axis;
    MoebiusMap translate;
    double area = 0;
};

struct PartialCovering {
    std::string base_label;
    HPolygon base;
    std::vector<CoveringCell> cells;
    double length = 0;         // total length of the geodesics painted
    bool boundary_input = false;

    bool empty() const { return cells.empty(); }
};

inline PartialCovering empty_covering(const FundamentalPolygon& F) {
    PartialCovering cov;
    cov.base_label = F.group_label;
    cov.base = F.polygon;
    return cov;
}

inline PartialCovering covering_from_trace(const FundamentalPolygon& F, const TraceResult& tr) {
    PartialCovering cov = empty_covering(F);
    cov.length = tr.total_length;
    for (std::size_t i = 0; i < tr.crossings.size(); ++i) {
        const auto& c = tr.crossings[i];
        if (c.on_boundary) continue;
        CoveringCell cell;
        cell.crossing = i;
        cell.local_axis = c.local_axis;
        cell.translate = c.translate;
        cell.polygon = clip_left(F.polygon, c.local_axis);
        if (cell.polygon.size() < 3) continue;
        try {
            cell.area = area(cell.polygon);
        } catch (const Error&) {
            continue;
        }
        cov.cells.push_back(std::move(cell));
    }
    return cov;
}

inline PartialCovering covering(const FundamentalPolygon& F, const ClosedGeodesic& geo, const TraceOptions& opt = {}) {
    try {
        return covering_from_trace(F, trace(F, geo, opt));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BoundaryGeodesic) throw;
        PartialCovering cov = empty_covering(F);
        cov.boundary_input = true;
        return cov;
    }
}

/// Number of cells containing z; z must lie in the interior of F off every cell boundary.
inline int multiplicity(const PartialCovering& cov, const HPoint& z, double eps = default_tolerances().side) {
    for (const auto& e : cov.base.edges()) {
        double s = signed_sinh_distance(e, z);
        if (std::abs(s) <= eps && !cov.cells.empty()) fail(ErrorKind::OnCellBoundary, "point on the boundary of F");
    }
    int count = 0;
    for (const auto& c : cov.cells) {
        double s = signed_sinh_distance(c.local_axis, z);
        if (std::abs(s) <= eps) fail(ErrorKind::OnCellBoundary, "point on a cell boundary");
        if (s > 0) ++count;
    }
    return count;
}

inline double volume(const PartialCovering& cov) {
    double v = 0;
    for (const auto& c : cov.cells) v += c.area;
    return v;
}

inline double integrate_cov(const PartialCovering& cov, const std::function<double(const HPoint&)>& f,
                            const QuadratureOptions& q = {}) {
    double s = 0;
    for (const auto& c : cov.cells) s += integrate(c.polygon, f, q);
    return s;
}

/// Mass of the cells above height Y in the cusp coordinates of the zone.
inline double cusp_mass(const PartialCovering& cov, const CuspZone& zone, const QuadratureOptions& q = {}) {
    Constraint h = zone.horoball();
    double s = 0;
    for (const auto& c : cov.cells) s += region_area(Region::from_polygon(c.polygon).add(h), q);
    return s;
}

inline PartialCovering covering_sum(const std::vector<PartialCovering>& covs) {
    PartialCovering out;
    if (covs.empty()) return out;
    out.base_label = covs.front().base_label;
    out.base = covs.front().base;
    for (const auto& c : covs) {
        if (c.base_label != out.base_label) fail(ErrorKind::BaseMismatch, "coverings of different polygons");
        out.cells.insert(out.cells.end(), c.cells.begin(), c.cells.end());
        out.length += c.length;
    }
    return out;
}

// ------------------------------------------------------- sampling grids

struct Box {
    double x0, x1, y0, y1;
};

/// Bounding box of the finite part of F, capped above for cusps at infinity.
inline Box bounding_box(const HPolygon& poly, double cap_above = 1.5) {
    Box b{1e300, -1e300, 0, 0};
    bool inf = false;
    for (const auto& v : poly.vertices) {
        if (v.is_infinity()) {
            inf = true;
            continue;
        }
        b.x0 = std::min(b.x0, v.x);
        b.x1 = std::max(b.x1, v.x);
        b.y1 = std::max(b.y1, v.y);
    }
    // an arc reaches its radius only when its summit lies within the span
    double top = 0;
    for (const auto& v : poly.vertices)
        if (!v.is_infinity()) top = std::max(top, v.y);
    for (const auto& e : poly.edges()) {
        if (e.vertical()) continue;
        double c = e.center();
        if (c > b.x0 && c < b.x1) top = std::max(top, e.radius());
    }
    b.y1 = inf ? top + cap_above : top;
    return b;
}

struct MultiplicityGrid {
    Box box;
    int nx = 0, ny = 0;
    std::vector<int> counts;  // -1 outside F or on a boundary
    int min_count = 0, max_count = 0;
    std::size_t sampled = 0;

    int at(int i, int j) const { return counts[static_cast<std::size_t>(j) * nx + i]; }
};

/// Samples the multiplicity at cell centres of an nx by ny grid over F.
inline MultiplicityGrid multiplicity_grid(const PartialCovering& cov, int nx = 600, int ny = 600,
                                          std::optional<Box> box = std::nullopt, double eps = 1e-9) {
    MultiplicityGrid grid;
    grid.box = box ? *box : bounding_box(cov.base);
    grid.nx = nx;
    grid.ny = ny;
    grid.counts.assign(static_cast<std::size_t>(nx) * ny, -1);
    auto edges = cov.base.edges();
    bool first = true;
    for (int j = 0; j < ny; ++j) {
        double y = grid.box.y0 + (grid.box.y1 - grid.box.y0) * (j + 0.5) / ny;
        for (int i = 0; i < nx; ++i) {
            double x = grid.box.x0 + (grid.box.x1 - grid.box.x0) * (i + 0.5) / nx;
            HPoint z{x, y};
            bool inside = true;
            for (const auto& e : edges)
                if (signed_sinh_distance(e, z) <= eps) inside = false;
            if (!inside) continue;
            int count = 0;
            bool ok = true;
            for (const auto& c : cov.cells) {
                double s = signed_sinh_distance(c.local_axis, z);
                if (std::abs(s) <= eps) {
                    ok = false;
                    break;
                }
                if (s > 0) ++count;
            }
            if (!ok) continue;
            grid.counts[static_cast<std::size_t>(j) * nx + i] = count;
            ++grid.sampled;
            if (first || count < grid.min_count) grid.min_count = count;
            if (first || count > grid.max_count) grid.max_count = count;
            first = false;
        }
    }
    return grid;
}

}  // namespace hypcover
