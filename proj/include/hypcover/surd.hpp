#pragma once

// Exact descriptions of group and polygon data for the built-in groups.
// Values live in Q(sqrt2, sqrt3) and are stored as coordinates on the
// basis {1, sqrt2, sqrt3, sqrt6}; every coordinate used by the built-ins
// is a dyadic rational, so a double holds it exactly and evaluation at
// any working precision is exact up to the precision itself.

#include <array>
#include <cmath>
#include <string>

#include "hypcover/hypgeo.hpp"

namespace hypcover {

struct Surd {
    std::array<double, 4> c{0, 0, 0, 0};  // 1, sqrt2, sqrt3, sqrt6

    Surd() = default;
    Surd(double v) : c{v, 0, 0, 0} {}
    Surd(double c0, double c1, double c2, double c3) : c{c0, c1, c2, c3} {}

    static Surd sqrt2(double k = 1) { return {0, k, 0, 0}; }
    static Surd sqrt3(double k = 1) { return {0, 0, k, 0}; }

    Surd operator+(const Surd& o) const { return {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2], c[3] + o.c[3]}; }
    Surd operator-(const Surd& o) const { return {c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2], c[3] - o.c[3]}; }
    Surd operator-() const { return {-c[0], -c[1], -c[2], -c[3]}; }

    Surd operator*(const Surd& o) const {
        const auto& a = c;
        const auto& b = o.c;
        return {a[0] * b[0] + 2 * a[1] * b[1] + 3 * a[2] * b[2] + 6 * a[3] * b[3],
                a[0] * b[1] + a[1] * b[0] + 3 * a[2] * b[3] + 3 * a[3] * b[2],
                a[0] * b[2] + a[2] * b[0] + 2 * a[1] * b[3] + 2 * a[3] * b[1],
                a[0] * b[3] + a[3] * b[0] + a[1] * b[2] + a[2] * b[1]};
    }

    template <class R>
    R eval() const {
        using std::sqrt;
        R s2 = sqrt(R(2)), s3 = sqrt(R(3));
        return R(c[0]) + R(c[1]) * s2 + R(c[2]) * s3 + R(c[3]) * s2 * s3;
    }

    double value() const { return eval<double>(); }
};

struct SurdMatrix {
    Surd a{1}, b{0}, c{0}, d{1};

    SurdMatrix operator*(const SurdMatrix& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    SurdMatrix inverse() const { return {d, -b, -c, a}; }

    template <class R>
    BasicMoebius<R> eval() const {
        return BasicMoebius<R>::make(a.eval<R>(), b.eval<R>(), c.eval<R>(), d.eval<R>());
    }
    MoebiusMap value() const { return eval<double>(); }

    static SurdMatrix from(const MoebiusMap& m) { return {m.a, m.b, m.c, m.d}; }
};

/// Point of the closed half-plane with exact coordinates.
struct SurdPoint {
    enum class Kind { Interior, Boundary, Infinity };
    Kind kind = Kind::Interior;
    Surd x, y;

    static SurdPoint interior(Surd x, Surd y) { return {Kind::Interior, x, y}; }
    static SurdPoint boundary(Surd x) { return {Kind::Boundary, x, Surd(0)}; }
    static SurdPoint infinity() { return {Kind::Infinity, Surd(0), Surd(0)}; }

    static SurdPoint from(const ClosurePoint& p) {
        if (p.is_infinity()) return infinity();
        if (p.is_ideal()) return boundary(p.x);
        return interior(p.x, p.y);
    }

    template <class R>
    BasicClosurePoint<R> eval() const {
        switch (kind) {
        case Kind::Interior: return BasicClosurePoint<R>::interior(x.eval<R>(), y.eval<R>());
        case Kind::Boundary: return BasicClosurePoint<R>::boundary(x.eval<R>());
        case Kind::Infinity: return BasicClosurePoint<R>::infinity();
        }
        return {};
    }
};

}  // namespace hypcover
