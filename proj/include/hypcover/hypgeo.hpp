#pragma once

// Upper half-plane kernel: points, PSL2(R) maps, oriented geodesics.
// Everything is templated on the scalar so that chaotic computations
// (geodesic tracing) can run in extended precision while the public
// surface stays in double.

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "hypcover/error.hpp"

namespace hypcover {

struct Tolerances {
    double det = 1e-12;
    double side = 1e-10;
    double classify = 1e-9;
};

inline Tolerances& default_tolerances() {
    static Tolerances tol;
    return tol;
}

template <class R>
R pi_v() {
    return boost::math::constants::pi<R>();
}

template <class R>
int mantissa_bits() {
    return std::numeric_limits<R>::digits;
}

template <class R>
struct BasicHPoint {
    R x{};
    R y{1};

    BasicHPoint() = default;
    BasicHPoint(R x_, R y_) : x(std::move(x_)), y(std::move(y_)) {}

    template <class S>
    explicit BasicHPoint(const BasicHPoint<S>& o) : x(static_cast<R>(o.x)), y(static_cast<R>(o.y)) {}
};

/// A point of the boundary circle: a real number or infinity.
template <class R>
struct BasicBoundaryPoint {
    bool infinite = false;
    R x{};

    static BasicBoundaryPoint inf() { return {true, R(0)}; }
    static BasicBoundaryPoint at(R v) { return {false, std::move(v)}; }

    template <class S>
    BasicBoundaryPoint<S> cast() const {
        return {infinite, static_cast<S>(x)};
    }
};

/// Point of the closed half-plane (interior, finite boundary, or infinity).
template <class R>
struct BasicClosurePoint {
    enum class Kind { Interior, Boundary, Infinity };
    Kind kind = Kind::Interior;
    R x{};
    R y{1};

    BasicClosurePoint() = default;
    BasicClosurePoint(const BasicHPoint<R>& p) : kind(Kind::Interior), x(p.x), y(p.y) {}
    BasicClosurePoint(const BasicBoundaryPoint<R>& b)
        : kind(b.infinite ? Kind::Infinity : Kind::Boundary), x(b.infinite ? R(0) : b.x), y(R(0)) {}

    static BasicClosurePoint interior(R x, R y) { return BasicClosurePoint(BasicHPoint<R>(x, y)); }
    static BasicClosurePoint boundary(R x) { return BasicClosurePoint(BasicBoundaryPoint<R>::at(x)); }
    static BasicClosurePoint infinity() { return BasicClosurePoint(BasicBoundaryPoint<R>::inf()); }

    bool is_ideal() const { return kind != Kind::Interior; }
    bool is_infinity() const { return kind == Kind::Infinity; }
    BasicHPoint<R> hpoint() const { return {x, y}; }
    BasicBoundaryPoint<R> boundary_point() const {
        return kind == Kind::Infinity ? BasicBoundaryPoint<R>::inf() : BasicBoundaryPoint<R>::at(x);
    }

    template <class S>
    BasicClosurePoint<S> cast() const {
        BasicClosurePoint<S> p;
        p.kind = static_cast<typename BasicClosurePoint<S>::Kind>(kind);
        p.x = static_cast<S>(x);
        p.y = static_cast<S>(y);
        return p;
    }
};

/// Element of PSL2(R) with a canonical sign representative.
template <class R>
class BasicMoebius {
public:
    R a{1}, b{0}, c{0}, d{1};

    BasicMoebius() = default;

    /// Renormalizes to determinant one and canonical sign. Throws for det <= 0.
    static BasicMoebius make(R a, R b, R c, R d) {
        using std::sqrt;
        R det = a * d - b * c;
        if (!(det > R(0)))
            fail(ErrorKind::NonPositiveDeterminant, "matrix determinant must be positive");
        R s = sqrt(det);
        BasicMoebius m;
        m.a = a / s;
        m.b = b / s;
        m.c = c / s;
        m.d = d / s;
        m.canonicalize();
        return m;
    }

    /// Trusts the caller on det == 1; only fixes the sign.
    static BasicMoebius raw(R a, R b, R c, R d) {
        BasicMoebius m;
        m.a = std::move(a);
        m.b = std::move(b);
        m.c = std::move(c);
        m.d = std::move(d);
        m.canonicalize();
        return m;
    }

    static BasicMoebius identity() { return {}; }

    template <class S>
    BasicMoebius<S> cast() const {
        return BasicMoebius<S>::raw(static_cast<S>(a), static_cast<S>(b), static_cast<S>(c),
                                    static_cast<S>(d));
    }

    R trace() const { return a + d; }
    R det() const { return a * d - b * c; }

    BasicMoebius inverse() const { return raw(d, -b, -c, a); }

    BasicMoebius operator*(const BasicMoebius& o) const {
        return raw(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d);
    }

    BasicHPoint<R> operator()(const BasicHPoint<R>& z) const {
        // (az+b)/(cz+d) with z = x+iy
        R nr = a * z.x + b, ni = a * z.y;
        R dr = c * z.x + d, di = c * z.y;
        R den = dr * dr + di * di;
        // Im of the image is y/|cz+d|^2 since det = 1; keeps it positive.
        return {(nr * dr + ni * di) / den, z.y / den};
    }

    BasicBoundaryPoint<R> operator()(const BasicBoundaryPoint<R>& p) const {
        using std::abs;
        // quotients beyond the working precision are indistinguishable from infinity
        const R rel = R(16) * std::numeric_limits<R>::epsilon();
        if (p.infinite) {
            if (abs(c) <= rel * abs(a)) return BasicBoundaryPoint<R>::inf();
            return BasicBoundaryPoint<R>::at(a / c);
        }
        R num = a * p.x + b;
        R den = c * p.x + d;
        if (abs(den) <= rel * abs(num)) return BasicBoundaryPoint<R>::inf();
        return BasicBoundaryPoint<R>::at(num / den);
    }

    BasicClosurePoint<R> operator()(const BasicClosurePoint<R>& p) const {
        if (p.is_ideal()) return BasicClosurePoint<R>((*this)(p.boundary_point()));
        return BasicClosurePoint<R>((*this)(p.hpoint()));
    }

    bool approx_equal(const BasicMoebius& o, double eps = 1e-9) const {
        using std::abs;
        auto close = [&](const R& u, const R& v) { return abs(u - v) <= R(eps) * (R(1) + abs(u)); };
        bool same = close(a, o.a) && close(b, o.b) && close(c, o.c) && close(d, o.d);
        bool neg = close(a, -o.a) && close(b, -o.b) && close(c, -o.c) && close(d, -o.d);
        return same || neg;
    }

private:
    void canonicalize() {
        using std::abs;
        const R eps = R(64) * std::numeric_limits<R>::epsilon() * (R(1) + abs(a) + abs(d));
        R tr = a + d;
        bool flip;
        if (abs(tr) > eps)
            flip = tr < R(0);
        else if (abs(c) > eps)
            flip = c < R(0);
        else
            flip = a < R(0);
        if (flip) {
            a = -a;
            b = -b;
            c = -c;
            d = -d;
        }
    }
};

enum class MapClass { Identity, Elliptic, Parabolic, Hyperbolic };

template <class R>
MapClass classify(const BasicMoebius<R>& m, double eps = default_tolerances().classify) {
    using std::abs;
    R tr = abs(m.trace());
    if (tr < R(2) - R(eps)) return MapClass::Elliptic;
    if (tr > R(2) + R(eps)) return MapClass::Hyperbolic;
    R scale = R(1) + abs(m.a) + abs(m.b) + abs(m.c) + abs(m.d);
    R exact_tol = R(64) * std::numeric_limits<R>::epsilon() * scale * scale;
    if (abs(m.b) <= R(eps) && abs(m.c) <= R(eps) && abs(m.a - R(1)) <= R(eps)) return MapClass::Identity;
    if (abs(tr - R(2)) <= exact_tol) return MapClass::Parabolic;
    fail(ErrorKind::AmbiguousTrace, "trace within tolerance of 2 but not numerically parabolic");
}

template <class R>
struct BasicOrientedGeodesic {
    BasicBoundaryPoint<R> x0;  // initial (repelling) endpoint
    BasicBoundaryPoint<R> x1;  // terminal (attracting) endpoint

    BasicOrientedGeodesic reversed() const { return {x1, x0}; }
    bool vertical() const { return x0.infinite || x1.infinite; }

    R center() const { return (x0.x + x1.x) / R(2); }
    R radius() const {
        using std::abs;
        return abs(x1.x - x0.x) / R(2);
    }

    template <class S>
    BasicOrientedGeodesic<S> cast() const {
        return {x0.template cast<S>(), x1.template cast<S>()};
    }
};

template <class R>
BasicOrientedGeodesic<R> operator*(const BasicMoebius<R>& m, const BasicOrientedGeodesic<R>& g) {
    return {m(g.x0), m(g.x1)};
}

using HPoint = BasicHPoint<double>;
using BoundaryPoint = BasicBoundaryPoint<double>;
using ClosurePoint = BasicClosurePoint<double>;
using MoebiusMap = BasicMoebius<double>;
using OrientedGeodesic = BasicOrientedGeodesic<double>;

/// Fixed points of a hyperbolic map, repelling -> attracting.
template <class R>
BasicOrientedGeodesic<R> axis(const BasicMoebius<R>& m) {
    using std::abs;
    using std::sqrt;
    if (classify(m) != MapClass::Hyperbolic) fail(ErrorKind::NotHyperbolic, "axis requires a hyperbolic map");
    R tr = m.trace();
    if (abs(m.c) <= R(16) * std::numeric_limits<R>::epsilon() * (abs(m.a) + abs(m.d))) {
        // z -> (a/d) z + b/d
        BasicBoundaryPoint<R> fin = BasicBoundaryPoint<R>::at(m.b / (m.d - m.a));
        if (abs(m.a) < abs(m.d)) return {BasicBoundaryPoint<R>::inf(), fin};
        return {fin, BasicBoundaryPoint<R>::inf()};
    }
    R disc = sqrt(tr * tr - R(4));
    R p = (m.a - m.d + disc) / (R(2) * m.c);
    R q = (m.a - m.d - disc) / (R(2) * m.c);
    R dp = m.c * p + m.d;
    // |m'(x)| = 1/(cx+d)^2 < 1 at the attractor
    bool p_attracts = abs(dp) > R(1);
    if (p_attracts) return {BasicBoundaryPoint<R>::at(q), BasicBoundaryPoint<R>::at(p)};
    return {BasicBoundaryPoint<R>::at(p), BasicBoundaryPoint<R>::at(q)};
}

template <class R>
R translation_length(const BasicMoebius<R>& m) {
    using std::abs;
    using std::acosh;
    if (classify(m) != MapClass::Hyperbolic)
        fail(ErrorKind::NotHyperbolic, "translation length requires a hyperbolic map");
    return R(2) * acosh(abs(m.trace()) / R(2));
}

template <class R>
R distance(const BasicHPoint<R>& p, const BasicHPoint<R>& q) {
    using std::log;
    using std::sqrt;
    // arccosh(1 + |p-q|^2/(2 y1 y2)) written as 2 asinh(|p-q|/(2 sqrt(y1 y2)))
    R dx = p.x - q.x, dy = p.y - q.y;
    R s = sqrt(dx * dx + dy * dy) / (R(2) * sqrt(p.y * q.y));
    return R(2) * log(s + sqrt(s * s + R(1)));
}

/// sigma with sigma(x0) = inf, sigma(x1) = 0; the left side of g is Re sigma(z) >= 0.
template <class R>
BasicMoebius<R> to_standard(const BasicOrientedGeodesic<R>& g) {
    using std::sqrt;
    if (g.x0.infinite) return BasicMoebius<R>::raw(R(1), -g.x1.x, R(0), R(1));
    if (g.x1.infinite) return BasicMoebius<R>::raw(R(0), R(-1), R(1), -g.x0.x);
    R diff = g.x1.x - g.x0.x;
    if (diff > R(0)) {
        R s = sqrt(diff);
        return BasicMoebius<R>::raw(R(1) / s, -g.x1.x / s, R(1) / s, -g.x0.x / s);
    }
    R s = sqrt(-diff);
    return BasicMoebius<R>::raw(R(-1) / s, g.x1.x / s, R(1) / s, -g.x0.x / s);
}

/// Point at signed arc length t along g, with t = 0 the foot of i under to_standard.
template <class R>
BasicHPoint<R> point_at(const BasicOrientedGeodesic<R>& g, const R& t) {
    using std::exp;
    return to_standard(g).inverse()(BasicHPoint<R>(R(0), exp(-t)));
}

/// Arc-length parameter of the orthogonal projection of z onto g.
template <class R>
R parameter_of(const BasicOrientedGeodesic<R>& g, const BasicHPoint<R>& z) {
    using std::log;
    using std::sqrt;
    auto w = to_standard(g)(z);
    return -log(sqrt(w.x * w.x + w.y * w.y));
}

/// sinh of the signed hyperbolic distance from z to g; positive on the left.
template <class R>
R signed_sinh_distance(const BasicOrientedGeodesic<R>& g, const BasicHPoint<R>& z) {
    if (g.x0.infinite) return (z.x - g.x1.x) / z.y;
    if (g.x1.infinite) return (g.x0.x - z.x) / z.y;
    R c = g.center(), r = g.radius();
    R dx = z.x - c;
    R v = (dx * dx + z.y * z.y - r * r) / (R(2) * r * z.y);
    return g.x1.x > g.x0.x ? v : -v;
}

enum class Side { Left, On, Right };

template <class R>
Side side_of(const BasicOrientedGeodesic<R>& g, const BasicHPoint<R>& z, double eps = default_tolerances().side) {
    using std::abs;
    R v = signed_sinh_distance(g, z);
    if (abs(v) <= R(eps)) return Side::On;
    return v > R(0) ? Side::Left : Side::Right;
}

template <class R>
bool same_boundary_point(const BasicBoundaryPoint<R>& p, const BasicBoundaryPoint<R>& q, double eps) {
    using std::abs;
    using std::atan;
    if (p.infinite && q.infinite) return true;
    // compare on the circle P^1(R) so that huge finite values approach infinity
    R ap = p.infinite ? pi_v<R>() / R(2) : atan(p.x);
    R aq = q.infinite ? pi_v<R>() / R(2) : atan(q.x);
    R diff = abs(ap - aq);
    R period = pi_v<R>();
    if (diff > period / R(2)) diff = period - diff;
    return diff <= R(eps);
}

template <class R>
bool same_geodesic(const BasicOrientedGeodesic<R>& g, const BasicOrientedGeodesic<R>& h, double eps) {
    return same_boundary_point(g.x0, h.x0, eps) && same_boundary_point(g.x1, h.x1, eps);
}

/// Side of an ideal point relative to g (On when it is an endpoint of g).
template <class R>
Side side_of(const BasicOrientedGeodesic<R>& g, const BasicBoundaryPoint<R>& p, double eps = default_tolerances().side) {
    if (same_boundary_point(g.x0, p, eps) || same_boundary_point(g.x1, p, eps)) return Side::On;
    if (p.infinite) return g.x1.x > g.x0.x ? Side::Left : Side::Right;
    if (g.x0.infinite) return p.x > g.x1.x ? Side::Left : Side::Right;
    if (g.x1.infinite) return p.x < g.x0.x ? Side::Left : Side::Right;
    R v = (p.x - g.x0.x) * (p.x - g.x1.x);
    if (g.x1.x < g.x0.x) v = -v;
    return v > R(0) ? Side::Left : Side::Right;
}

template <class R>
Side side_of(const BasicOrientedGeodesic<R>& g, const BasicClosurePoint<R>& p, double eps = default_tolerances().side) {
    if (p.is_ideal()) return side_of(g, p.boundary_point(), eps);
    return side_of(g, p.hpoint(), eps);
}

/// The geodesic through p and q, oriented from p towards q.
template <class R>
BasicOrientedGeodesic<R> geodesic_between(const BasicClosurePoint<R>& p, const BasicClosurePoint<R>& q) {
    using std::abs;
    using std::sqrt;
    using BP = BasicBoundaryPoint<R>;
    const R tiny = R(64) * std::numeric_limits<R>::epsilon();
    auto scale = [&](const BasicClosurePoint<R>& u) { return R(1) + abs(u.x) + abs(u.y); };
    if (p.is_infinity() && q.is_infinity()) fail(ErrorKind::CoincidentPoints, "both points at infinity");
    if (p.is_infinity()) return {BP::inf(), BP::at(q.x)};
    if (q.is_infinity()) return {BP::at(p.x), BP::inf()};
    R dx = q.x - p.x;
    R tol = tiny * (scale(p) + scale(q));
    if (abs(dx) <= tol && abs(q.y - p.y) <= tol) fail(ErrorKind::CoincidentPoints, "points coincide");
    if (p.is_ideal() && q.is_ideal()) return {BP::at(p.x), BP::at(q.x)};
    if (abs(dx) <= tol) {
        bool up = q.y > p.y;
        if (up) return {BP::at(p.x), BP::inf()};
        return {BP::inf(), BP::at(p.x)};
    }
    R c = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (R(2) * dx);
    R r = p.is_ideal() ? abs(p.x - c) : sqrt((p.x - c) * (p.x - c) + p.y * p.y);
    if (dx > R(0)) return {BP::at(c - r), BP::at(c + r)};
    return {BP::at(c + r), BP::at(c - r)};
}

/// Euclidean unit tangent of g at the point z on it, in the direction of travel.
template <class R>
std::pair<R, R> tangent_at(const BasicOrientedGeodesic<R>& g, const BasicHPoint<R>& z) {
    using std::sqrt;
    if (g.x1.infinite) return {R(0), R(1)};
    if (g.x0.infinite) return {R(0), R(-1)};
    R c = g.center();
    R tx = z.y, ty = -(z.x - c);  // clockwise
    if (g.x1.x < g.x0.x) {
        tx = -tx;
        ty = -ty;
    }
    R n = sqrt(tx * tx + ty * ty);
    return {tx / n, ty / n};
}

/// Intersection point of two geodesics inside H, if any.
template <class R>
std::optional<BasicHPoint<R>> intersect(const BasicOrientedGeodesic<R>& g, const BasicOrientedGeodesic<R>& h) {
    using std::sqrt;
    auto s = to_standard(g);
    auto a = s(h.x0), b = s(h.x1);
    if (a.infinite || b.infinite) return std::nullopt;
    R prod = a.x * b.x;
    if (!(prod < R(0))) return std::nullopt;
    return s.inverse()(BasicHPoint<R>(R(0), sqrt(-prod)));
}

/// Highest point of the support of g (i on a vertical line over its foot).
template <class R>
BasicHPoint<R> summit(const BasicOrientedGeodesic<R>& g) {
    if (g.x0.infinite) return {g.x1.x, R(1)};
    if (g.x1.infinite) return {g.x0.x, R(1)};
    return {g.center(), g.radius()};
}

}  // namespace hypcover
