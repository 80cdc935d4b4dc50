#pragma once

#include <cmath>
#include <vector>

#include "hypcover/hypgeo.hpp"

namespace hypcover {

/// Convex hyperbolic polygon; vertices counterclockwise, ideal vertices allowed.
template <class R>
struct BasicHPolygon {
    std::vector<BasicClosurePoint<R>> vertices;

    bool empty() const { return vertices.empty(); }
    std::size_t size() const { return vertices.size(); }
    bool degenerate() const { return vertices.size() < 3; }

    BasicOrientedGeodesic<R> edge(std::size_t i) const {
        return geodesic_between(vertices[i], vertices[(i + 1) % vertices.size()]);
    }

    std::vector<BasicOrientedGeodesic<R>> edges() const {
        std::vector<BasicOrientedGeodesic<R>> out;
        if (vertices.size() < 2) return out;
        out.reserve(vertices.size());
        for (std::size_t i = 0; i < vertices.size(); ++i) out.push_back(edge(i));
        return out;
    }

    template <class S>
    BasicHPolygon<S> cast() const {
        BasicHPolygon<S> p;
        p.vertices.reserve(vertices.size());
        for (const auto& v : vertices) p.vertices.push_back(v.template cast<S>());
        return p;
    }
};

using HPolygon = BasicHPolygon<double>;

template <class R>
BasicHPolygon<R> operator*(const BasicMoebius<R>& m, const BasicHPolygon<R>& p) {
    BasicHPolygon<R> out;
    out.vertices.reserve(p.vertices.size());
    for (const auto& v : p.vertices) out.vertices.push_back(m(v));
    return out;
}

/// Every vertex weakly left of every directed edge.
template <class R>
bool is_convex(const BasicHPolygon<R>& poly, double eps = default_tolerances().side) {
    if (poly.degenerate()) return false;
    auto es = poly.edges();
    for (const auto& e : es)
        for (const auto& v : poly.vertices)
            if (side_of(e, v, eps) == Side::Right) return false;
    return true;
}

/// Strictly inside: Left of every edge. On when within eps of some edge and not Right of any.
template <class R>
Side locate(const BasicHPolygon<R>& poly, const BasicHPoint<R>& z, double eps = default_tolerances().side) {
    bool on = false;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        Side s = side_of(poly.edge(i), z, eps);
        if (s == Side::Right) return Side::Right;
        if (s == Side::On) on = true;
    }
    return on ? Side::On : Side::Left;
}

/// poly intersected with the closed left half-plane of g.
template <class R>
BasicHPolygon<R> clip_left(const BasicHPolygon<R>& poly, const BasicOrientedGeodesic<R>& g,
                           double eps = default_tolerances().side) {
    const std::size_t n = poly.vertices.size();
    BasicHPolygon<R> out;
    if (n == 0) return out;
    std::vector<Side> sides(n);
    bool any_left = false, any_right = false;
    for (std::size_t i = 0; i < n; ++i) {
        sides[i] = side_of(g, poly.vertices[i], eps);
        any_left |= sides[i] == Side::Left;
        any_right |= sides[i] == Side::Right;
    }
    for (std::size_t i = 0; i < n && n >= 2; ++i) {
        std::size_t j = (i + 1) % n;
        if (sides[i] == Side::On && sides[j] == Side::On) {
            auto e = poly.edge(i);
            if (same_geodesic(e, g, eps) || same_geodesic(e, g.reversed(), eps))
                fail(ErrorKind::DegenerateClip, "polygon side lies on the clipping geodesic");
        }
    }
    if (!any_right) return poly;
    if (!any_left) return out;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = (i + 1) % n;
        if (sides[i] != Side::Right) out.vertices.push_back(poly.vertices[i]);
        bool crosses = (sides[i] == Side::Left && sides[j] == Side::Right) ||
                       (sides[i] == Side::Right && sides[j] == Side::Left);
        if (crosses) {
            auto p = intersect(g, poly.edge(i));
            if (p) out.vertices.push_back(BasicClosurePoint<R>(*p));
        }
    }
    return out;
}

/// Interior angle at vertex i (zero at ideal vertices).
template <class R>
R interior_angle(const BasicHPolygon<R>& poly, std::size_t i) {
    using std::atan2;
    using std::abs;
    const std::size_t n = poly.vertices.size();
    const auto& v = poly.vertices[i];
    if (v.is_ideal()) return R(0);
    const auto& prev = poly.vertices[(i + n - 1) % n];
    const auto& next = poly.vertices[(i + 1) % n];
    auto t1 = tangent_at(geodesic_between(v, prev), v.hpoint());
    auto t2 = tangent_at(geodesic_between(v, next), v.hpoint());
    R cross = t1.first * t2.second - t1.second * t2.first;
    R dot = t1.first * t2.first + t1.second * t2.second;
    return atan2(abs(cross), dot);
}

/// Gauss-Bonnet area (n - 2) pi - sum of interior angles.
template <class R>
R area(const BasicHPolygon<R>& poly) {
    using std::abs;
    const std::size_t n = poly.vertices.size();
    if (n < 3) fail(ErrorKind::DegeneratePolygon, "fewer than three vertices");
    R sum(0);
    int straight = 0;
    for (std::size_t i = 0; i < n; ++i) {
        R a = interior_angle(poly, i);
        if (abs(a - pi_v<R>()) < R(1e-12)) ++straight;
        sum += a;
    }
    if (n - straight < 3) fail(ErrorKind::DegeneratePolygon, "fewer than three effective vertices");
    R value = R(static_cast<double>(n) - 2) * pi_v<R>() - sum;
    return value < R(0) ? R(0) : value;
}

}  // namespace hypcover
