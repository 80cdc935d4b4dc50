#pragma once

// Fundamental polygons with side pairings: construction, validation,
// point reduction, vertex cycles, cusp zones and bulks.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hypcover/error.hpp"
#include "hypcover/hypgeo.hpp"
#include "hypcover/polygon.hpp"
#include "hypcover/quadrature.hpp"
#include "hypcover/surd.hpp"

namespace hypcover {

/// Named group element usable in words.
struct Letter {
    std::string name;
    SurdMatrix exact;
    MoebiusMap value;
};

/// Product of powers of letters, evaluated left to right as written.
struct Word {
    std::vector<std::pair<int, int>> factors;  // (letter index, exponent)

    bool empty() const { return factors.empty(); }
};

/// Boundary point of F listed in counterclockwise order; folds are
/// order-two fixed points splitting an edge into two sides.
struct BoundaryNode {
    SurdPoint exact;
    ClosurePoint point;
    bool fold = false;
};

struct SidePairing {
    int side_index = 0;
    int partner_index = 0;
    MoebiusMap element;  // maps the partner side onto this side
};

struct VertexClass {
    std::vector<int> nodes;
    double angle_sum = 0;
    int order = 0;  // 0 for cusp classes
    bool cusp = false;
    MoebiusMap cycle;  // fixes nodes.front()
};

/// Polygon data at working precision R.
template <class R>
struct PolygonView {
    std::vector<BasicClosurePoint<R>> nodes;
    std::vector<BasicOrientedGeodesic<R>> sides;
    std::vector<BasicOrientedGeodesic<R>> edges;
    std::vector<int> side_edge;
    std::vector<BasicMoebius<R>> element, inverse;
    BasicHPoint<R> basepoint;
};

struct FundamentalPolygon {
    std::string group_label;
    HPolygon polygon;
    std::vector<BoundaryNode> nodes;
    std::vector<SidePairing> pairings;
    std::vector<SurdMatrix> exact_pairings;
    std::vector<int> side_edge;
    std::vector<int> cusp_vertices;     // node indices of ideal vertices
    std::map<int, int> elliptic_orders;  // declared: node index -> order
    std::vector<Letter> letters;
    HPoint basepoint;
    std::vector<VertexClass> classes;
    PolygonView<double> view;

    std::size_t side_count() const { return nodes.size(); }
    const ClosurePoint& side_start(std::size_t k) const { return nodes[k].point; }
    const ClosurePoint& side_end(std::size_t k) const { return nodes[(k + 1) % nodes.size()].point; }
    OrientedGeodesic side_geodesic(std::size_t k) const { return view.sides[k]; }
    double volume() const { return area(polygon); }
    bool has_cusps() const { return !cusp_vertices.empty(); }

    int letter_index(const std::string& name) const {
        for (std::size_t i = 0; i < letters.size(); ++i)
            if (letters[i].name == name) return static_cast<int>(i);
        return -1;
    }

    int class_of(int node) const {
        for (std::size_t i = 0; i < classes.size(); ++i)
            for (int n : classes[i].nodes)
                if (n == node) return static_cast<int>(i);
        return -1;
    }
};

template <class R>
PolygonView<R> make_view(const FundamentalPolygon& F) {
    PolygonView<R> v;
    std::size_t n = F.nodes.size();
    for (const auto& node : F.nodes) v.nodes.push_back(node.exact.template eval<R>());
    for (std::size_t k = 0; k < n; ++k) v.sides.push_back(geodesic_between(v.nodes[k], v.nodes[(k + 1) % n]));
    for (std::size_t i = 0; i < F.polygon.size(); ++i) v.edges.push_back(F.polygon.edge(i).template cast<R>());
    for (std::size_t k = 0; k < n; ++k) v.edges[F.side_edge[k]] = v.sides[k];
    v.side_edge = F.side_edge;
    for (const auto& m : F.exact_pairings) {
        v.element.push_back(m.template eval<R>());
        v.inverse.push_back(v.element.back().inverse());
    }
    v.basepoint = BasicHPoint<R>(F.basepoint);
    return v;
}

// ---------------------------------------------------------------- words

template <class R>
BasicMoebius<R> evaluate(const FundamentalPolygon& F, const Word& w) {
    BasicMoebius<R> out;
    for (auto [idx, power] : w.factors) {
        BasicMoebius<R> g = F.letters.at(idx).exact.template eval<R>();
        if (power < 0) g = g.inverse();
        for (int k = 0; k < std::abs(power); ++k) out = out * g;
    }
    return out;
}

inline MoebiusMap evaluate(const FundamentalPolygon& F, const Word& w) { return evaluate<double>(F, w); }

/// Parses words such as "sigma^2*S" or "T^-1*S" over the letters of F.
inline Word parse_word(const FundamentalPolygon& F, const std::string& text) {
    Word w;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, '*')) {
        if (tok.empty()) fail(ErrorKind::InvalidInput, "empty factor in word '" + text + "'");
        int power = 1;
        std::string name = tok;
        auto caret = tok.find('^');
        if (caret != std::string::npos) {
            name = tok.substr(0, caret);
            try {
                power = std::stoi(tok.substr(caret + 1));
            } catch (const std::exception&) {
                fail(ErrorKind::InvalidInput, "bad exponent in '" + tok + "'");
            }
        }
        int idx = F.letter_index(name);
        if (idx < 0) fail(ErrorKind::InvalidInput, "unknown letter '" + name + "' for group " + F.group_label);
        if (power != 0) w.factors.push_back({idx, power});
    }
    return w;
}

inline std::string to_string(const FundamentalPolygon& F, const Word& w) {
    std::string out;
    for (auto [idx, power] : w.factors) {
        if (!out.empty()) out += "*";
        out += F.letters[idx].name;
        if (power != 1) out += "^" + std::to_string(power);
    }
    return out.empty() ? "Id" : out;
}

// ------------------------------------------------------------ reduction

template <class R>
struct BasicReduction {
    BasicMoebius<R> gamma;  // gamma * z lies in the closure of F
    BasicHPoint<R> point;
    std::size_t steps = 0;
};

using Reduction = BasicReduction<double>;

namespace detail {

template <class R>
R node_parameter(const BasicOrientedGeodesic<R>& g, const BasicClosurePoint<R>& p, bool start) {
    if (p.is_ideal()) return start ? -std::numeric_limits<R>::infinity() : std::numeric_limits<R>::infinity();
    return parameter_of(g, p.hpoint());
}

/// Index of the side whose supporting geodesic is most violated by z, or -1.
template <class R>
int violated_side(const PolygonView<R>& v, const BasicHPoint<R>& z, const R& eps) {
    int worst = -1;
    R worst_val = -eps;
    for (std::size_t k = 0; k < v.sides.size(); ++k) {
        R s = signed_sinh_distance(v.sides[k], z);
        if (s < worst_val) {
            worst_val = s;
            worst = static_cast<int>(k);
        }
    }
    if (worst < 0) return -1;
    // sides folded onto one edge: pick the half containing the projection of z
    int best = worst;
    R best_gap = std::numeric_limits<R>::infinity();
    std::size_t n = v.sides.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (v.side_edge[k] != v.side_edge[worst]) continue;
        const auto& g = v.sides[k];
        R t = parameter_of(g, z);
        R t0 = node_parameter(g, v.nodes[k], true);
        R t1 = node_parameter(g, v.nodes[(k + 1) % n], false);
        R gap = t < t0 ? t0 - t : (t > t1 ? t - t1 : R(0));
        if (gap < best_gap) {
            best_gap = gap;
            best = static_cast<int>(k);
        }
    }
    return best;
}

}  // namespace detail

/// Moves z into the closure of F by greedy reflection across violated sides,
/// falling back to distance descent towards the basepoint if greedy stalls.
template <class R>
BasicReduction<R> reduce_point(const PolygonView<R>& v, BasicHPoint<R> z, const R& eps,
                               std::size_t budget = 100000) {
    BasicReduction<R> out;
    const std::size_t greedy_limit = std::min<std::size_t>(budget, 2000);
    for (; out.steps < greedy_limit; ++out.steps) {
        int s = detail::violated_side(v, z, eps);
        if (s < 0) {
            out.point = z;
            return out;
        }
        z = v.inverse[s](z);
        out.gamma = v.inverse[s] * out.gamma;
    }
    for (; out.steps < budget; ++out.steps) {
        if (detail::violated_side(v, z, eps) < 0) {
            out.point = z;
            return out;
        }
        R best = distance(z, v.basepoint);
        int pick = -1;
        for (std::size_t k = 0; k < v.element.size(); ++k) {
            R d = distance(v.inverse[k](z), v.basepoint);
            if (d < best) {
                best = d;
                pick = static_cast<int>(k);
            }
        }
        if (pick < 0) break;
        z = v.inverse[pick](z);
        out.gamma = v.inverse[pick] * out.gamma;
    }
    fail(ErrorKind::ReductionBudgetExceeded, "point reduction did not terminate");
}

inline Reduction reduce_point(const FundamentalPolygon& F, const HPoint& z, std::size_t budget = 100000) {
    return reduce_point<double>(F.view, z, default_tolerances().side, budget);
}

/// True when z lies in the closure of F up to eps.
template <class R>
bool in_closure(const PolygonView<R>& v, const BasicHPoint<R>& z, const R& eps) {
    for (const auto& g : v.sides)
        if (signed_sinh_distance(g, z) < -eps) return false;
    return true;
}

inline bool in_closure(const FundamentalPolygon& F, const HPoint& z, double eps = default_tolerances().side) {
    return in_closure<double>(F.view, z, eps);
}

// -------------------------------------------------------- construction

namespace detail {

inline double point_gap(const ClosurePoint& p, const ClosurePoint& q) {
    if (p.is_ideal() != q.is_ideal()) return std::numeric_limits<double>::infinity();
    if (p.is_ideal()) {
        double ap = p.is_infinity() ? M_PI / 2 : std::atan(p.x);
        double aq = q.is_infinity() ? M_PI / 2 : std::atan(q.x);
        double d = std::abs(ap - aq);
        return std::min(d, M_PI - d);
    }
    return distance(p.hpoint(), q.hpoint());
}

inline double interior_angle_at(const FundamentalPolygon& F, int node) {
    if (F.nodes[node].fold) return M_PI;
    const auto& p = F.nodes[node].point;
    for (std::size_t i = 0; i < F.polygon.size(); ++i)
        if (point_gap(F.polygon.vertices[i], p) < 1e-9) return interior_angle(F.polygon, i);
    return 0;
}

inline HPoint default_basepoint(const HPolygon& poly) {
    double sx = 0, sy = 0, top = 0, fx = 0;
    int finite = 0;
    for (const auto& v : poly.vertices) {
        if (v.is_infinity()) continue;
        fx += v.x;
        top = std::max(top, v.y);
        ++finite;
    }
    fx = finite ? fx / finite : 0;
    for (const auto& v : poly.vertices) {
        if (v.is_infinity()) {
            sx += fx;
            sy += top + 1;
        } else {
            sx += v.x;
            sy += v.y;
        }
    }
    HPoint c{sx / poly.size(), std::max(sy / poly.size(), 1e-3)};
    auto margin = [&](const HPoint& z) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& e : poly.edges()) m = std::min(m, signed_sinh_distance(e, z));
        return m;
    };
    if (margin(c) > 0) return c;
    // grid search for the deepest interior point
    double x0 = 1e300, x1 = -1e300, y1 = 0;
    for (const auto& v : poly.vertices) {
        if (v.is_infinity()) continue;
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y1 = std::max(y1, v.y);
    }
    y1 = y1 + 2;
    HPoint best = c;
    double best_m = margin(c);
    for (int i = 1; i < 200; ++i)
        for (int j = 1; j < 200; ++j) {
            HPoint z{x0 + (x1 - x0) * i / 200.0, y1 * j / 200.0};
            double m = margin(z);
            if (m > best_m) {
                best_m = m;
                best = z;
            }
        }
    return best;
}

/// Walks the vertex cycle starting at `start` along the side ending there.
inline VertexClass vertex_cycle(const FundamentalPolygon& F, int start) {
    int n = static_cast<int>(F.nodes.size());
    VertexClass vc;
    int v = start;
    int s = (start + n - 1) % n;
    MoebiusMap h;
    for (int guard = 0; guard < 4 * n + 4; ++guard) {
        vc.nodes.push_back(v);
        vc.angle_sum += interior_angle_at(F, v);
        int p = F.pairings[s].partner_index;
        const MoebiusMap inv = F.pairings[s].element.inverse();
        ClosurePoint image = inv(F.nodes[v].point);
        int a = p, b = (p + 1) % n;
        int v2 = point_gap(image, F.nodes[a].point) <= point_gap(image, F.nodes[b].point) ? a : b;
        // the other side at v2; side p is outgoing there iff v2 == p
        int s2 = (p == v2) ? (v2 + n - 1) % n : v2;
        h = inv * h;
        v = v2;
        s = s2;
        if (v == start && s == (start + n - 1) % n) break;
    }
    std::sort(vc.nodes.begin(), vc.nodes.end());
    vc.nodes.erase(std::unique(vc.nodes.begin(), vc.nodes.end()), vc.nodes.end());
    auto it = std::find(vc.nodes.begin(), vc.nodes.end(), start);
    std::rotate(vc.nodes.begin(), it, vc.nodes.end());
    vc.cycle = h;
    vc.cusp = F.nodes[start].point.is_ideal();
    if (!vc.cusp && vc.angle_sum > 0) vc.order = static_cast<int>(std::lround(2 * M_PI / vc.angle_sum));
    return vc;
}

inline void compute_classes(FundamentalPolygon& F) {
    F.classes.clear();
    std::vector<bool> seen(F.nodes.size(), false);
    // prefer infinity as the representative of its class
    std::vector<int> order(F.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return F.nodes[a].point.is_infinity() && !F.nodes[b].point.is_infinity();
    });
    for (int start : order) {
        if (seen[start]) continue;
        VertexClass vc = vertex_cycle(F, start);
        for (int m : vc.nodes) seen[m] = true;
        F.classes.push_back(vc);
    }
    std::sort(F.classes.begin(), F.classes.end(), [](const VertexClass& a, const VertexClass& b) {
        return *std::min_element(a.nodes.begin(), a.nodes.end()) < *std::min_element(b.nodes.begin(), b.nodes.end());
    });
}

}  // namespace detail

/// Pairing input for make_polygon: the side's partner and exact element.
struct PairingSpec {
    int partner = 0;
    SurdMatrix element;
};

/// Assembles a polygon from counterclockwise boundary nodes (fold points
/// included, flagged) and one pairing per side; side k runs from node k
/// to node k+1.
inline FundamentalPolygon make_polygon(std::string label, const std::vector<std::pair<SurdPoint, bool>>& nodes,
                                       const std::vector<PairingSpec>& pairs, std::vector<Letter> letters = {},
                                       std::map<int, int> orders = {}) {
    if (nodes.size() < 2 || pairs.size() != nodes.size())
        fail(ErrorKind::InvalidInput, "need one pairing per side and at least two nodes");
    FundamentalPolygon F;
    F.group_label = std::move(label);
    for (const auto& [p, fold] : nodes) F.nodes.push_back({p, p.eval<double>(), fold});
    std::vector<int> vertex_of_node(nodes.size(), -1);
    for (std::size_t i = 0; i < F.nodes.size(); ++i) {
        if (F.nodes[i].fold) continue;
        vertex_of_node[i] = static_cast<int>(F.polygon.vertices.size());
        F.polygon.vertices.push_back(F.nodes[i].point);
        if (F.nodes[i].point.is_ideal()) F.cusp_vertices.push_back(static_cast<int>(i));
    }
    if (F.polygon.size() < 3) fail(ErrorKind::DegeneratePolygon, "fundamental polygon needs three vertices");
    if (F.nodes.front().fold) fail(ErrorKind::InvalidInput, "first node must be a vertex");
    int edge = -1;
    for (std::size_t k = 0; k < F.nodes.size(); ++k) {
        if (vertex_of_node[k] >= 0) edge = vertex_of_node[k];
        F.side_edge.push_back(edge);
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        F.exact_pairings.push_back(pairs[k].element);
        F.pairings.push_back({static_cast<int>(k), pairs[k].partner, pairs[k].element.value()});
    }
    F.letters = std::move(letters);
    F.elliptic_orders = std::move(orders);
    F.basepoint = detail::default_basepoint(F.polygon);
    F.view = make_view<double>(F);
    detail::compute_classes(F);
    return F;
}

// -------------------------------------------------------------- built-ins

namespace detail {

inline Letter letter(const std::string& name, const SurdMatrix& m) { return {name, m, m.value()}; }

}  // namespace detail

/// Standard polygon for PSL2(Z): vertices 0, rho, infinity; fold at i.
inline FundamentalPolygon builtin_modular() {
    const SurdMatrix S{0, -1, 1, 0};
    const SurdMatrix T{1, 1, 0, 1};
    const SurdMatrix Tinv{1, -1, 0, 1};
    const SurdMatrix TS = T * S;
    const SurdMatrix STinv = S * Tinv;
    std::vector<std::pair<SurdPoint, bool>> nodes = {
        {SurdPoint::boundary(0), false},
        {SurdPoint::interior(0.5, Surd::sqrt3(0.5)), false},
        {SurdPoint::infinity(), false},
        {SurdPoint::interior(0, 1), true},
    };
    // arc [0,rho] <- STinv from Re z = 1/2; Re z = 1/2 <- TS from the arc; Re z = 0 folded by S
    std::vector<PairingSpec> pairs = {{1, STinv}, {0, TS}, {3, S}, {2, S}};
    std::vector<Letter> letters = {detail::letter("S", S), detail::letter("T", T), detail::letter("TS", TS),
                                   detail::letter("ST^-1", STinv), detail::letter("U", TS)};
    return make_polygon("psl2z", nodes, pairs, letters, {{1, 3}, {3, 2}});
}

/// Triangle for the (2,4,6) group with pairings S (folded base) and sigma.
inline FundamentalPolygon builtin_triangle246() {
    const SurdMatrix S{0, -1, 1, 0};
    const SurdMatrix sigma{Surd::sqrt2(0.5), Surd(0.5, 0, 0.5, 0), Surd(0.5, 0, -0.5, 0), Surd::sqrt2(0.5)};
    const Surd r = Surd::sqrt2(0.5);  // 1/sqrt2
    std::vector<std::pair<SurdPoint, bool>> nodes = {
        {SurdPoint::interior(-r, r), false},
        {SurdPoint::interior(0, 1), true},
        {SurdPoint::interior(r, r), false},
        {SurdPoint::interior(0, Surd(0, 0.5, 0, 0.5)), false},
    };
    std::vector<PairingSpec> pairs = {{1, S}, {0, S}, {3, sigma}, {2, sigma.inverse()}};
    std::vector<Letter> letters = {detail::letter("S", S), detail::letter("sigma", sigma)};
    return make_polygon("triangle246", nodes, pairs, letters, {{1, 2}, {0, 6}, {3, 4}});
}

// ------------------------------------------------------------- validation

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double residual = 0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.pass; });
    }
    std::string first_failure() const {
        for (const auto& c : checks)
            if (!c.pass) return c.name;
        return {};
    }
    const ValidationCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

/// Checks convexity, side matching, angle sums and cycle transformations.
inline ValidationReport validate(const FundamentalPolygon& F, double tol = 1e-8) {
    ValidationReport rep;
    auto add = [&](std::string name, bool pass, double res, std::string det = {}) {
        rep.checks.push_back({std::move(name), pass, res, std::move(det)});
    };
    std::size_t n = F.nodes.size();
    add("convex", is_convex(F.polygon), 0);
    double vol = 0;
    bool vol_ok = true;
    try {
        vol = F.volume();
    } catch (const Error&) {
        vol_ok = false;
    }
    add("positive_area", vol_ok && vol > 0, vol);
    add("even_side_count", n % 2 == 0, static_cast<double>(n % 2));

    bool involution = true;
    for (const auto& p : F.pairings)
        if (p.partner_index < 0 || p.partner_index >= static_cast<int>(n) ||
            F.pairings[p.partner_index].partner_index != p.side_index)
            involution = false;
    add("pairing_involution", involution, involution ? 0 : 1);
    if (!involution) return rep;

    double match_res = 0, inverse_res = 0;
    bool far_side = true;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& pr = F.pairings[k];
        int p = pr.partner_index;
        ClosurePoint a = pr.element(F.side_start(p)), b = pr.element(F.side_end(p));
        // orientation is reversed: start of the partner goes to the end of this side
        double r = std::max(detail::point_gap(a, F.side_end(k)), detail::point_gap(b, F.side_start(k)));
        match_res = std::max(match_res, r);
        MoebiusMap prod = pr.element * F.pairings[p].element;
        double ir = std::abs(prod.a - 1) + std::abs(prod.b) + std::abs(prod.c) + std::abs(prod.d - 1);
        inverse_res = std::max(inverse_res, ir);
        HPoint image = pr.element(F.basepoint);
        if (signed_sinh_distance(F.side_geodesic(k), image) >= 0) far_side = false;
    }
    add("side_matching", match_res < tol, match_res);
    add("partner_inverse", inverse_res < tol, inverse_res);
    add("pairing_far_side", far_side, 0);

    double angle_res = 0;
    bool orders_ok = true, cycles_ok = true;
    std::string detail_text;
    for (const auto& vc : F.classes) {
        if (vc.cusp) {
            bool parabolic = false;
            try {
                parabolic = classify(vc.cycle) == MapClass::Parabolic;
            } catch (const Error&) {
            }
            if (vc.angle_sum != 0 || !parabolic) cycles_ok = false;
            continue;
        }
        int order = vc.order;
        for (int m : vc.nodes) {
            auto it = F.elliptic_orders.find(m);
            if (it != F.elliptic_orders.end() && it->second != order) {
                orders_ok = false;
                detail_text += "declared order mismatch at node " + std::to_string(m) + "; ";
            }
        }
        if (order <= 0) {
            orders_ok = false;
            continue;
        }
        angle_res = std::max(angle_res, std::abs(vc.angle_sum - 2 * M_PI / order));
        MoebiusMap power;
        for (int i = 0; i < order; ++i) power = power * vc.cycle;
        double pr = std::abs(power.a - 1) + std::abs(power.b) + std::abs(power.c) + std::abs(power.d - 1);
        if (pr > 1e-6 || (order > 1 && classify(vc.cycle) != MapClass::Elliptic)) cycles_ok = false;
    }
    add("angle_sums", angle_res < tol && orders_ok, angle_res, detail_text);
    add("cycle_transformations", cycles_ok, 0);
    return rep;
}

// ------------------------------------------------------------ cusp zones

struct CuspZone {
    BoundaryPoint cusp;
    int node = -1;
    MoebiusMap scaling;  // scaling(inf) = cusp, conjugates the stabilizer to unit translations
    double Y = 0;
    double width = 0;    // width of F at the cusp in scaled coordinates

    /// The horoball {Im scaling^{-1} z >= Y} as a quadrature constraint.
    Constraint horoball() const { return horoball_at(Y); }

    Constraint horoball_at(double height) const {
        const auto& s = scaling;
        if (std::abs(s.c) < 1e-14) return Constraint::y_at_least(s.a * s.a * height);
        double r = 1.0 / (2 * s.c * s.c * height);
        return Constraint::inside(s.a / s.c, r, r);
    }

    Constraint complement() const {
        Constraint h = horoball();
        if (h.kind == Constraint::Kind::YAtLeast) return Constraint::y_at_most(h.cx);
        return Constraint::outside(h.cx, h.cy, h.r);
    }

    double volume() const { return width / Y; }
};

namespace detail {

inline MoebiusMap cusp_scaling(const FundamentalPolygon& F, int node) {
    int cls = F.class_of(node);
    if (cls < 0) fail(ErrorKind::NotACusp, "node is not part of any vertex class");
    const auto& vc = F.classes[cls];
    // conjugate the cycle so that it fixes this node
    MoebiusMap P = vc.cycle;
    if (vc.nodes.front() != node) {
        // find a product of pairings carrying the class representative to node
        int n = static_cast<int>(F.nodes.size());
        int v = vc.nodes.front();
        int s = (v + n - 1) % n;
        MoebiusMap h;
        for (int guard = 0; guard < 4 * n && v != node; ++guard) {
            int p = F.pairings[s].partner_index;
            MoebiusMap inv = F.pairings[s].element.inverse();
            ClosurePoint image = inv(F.nodes[v].point);
            int a = p, b = (p + 1) % n;
            int v2 = point_gap(image, F.nodes[a].point) <= point_gap(image, F.nodes[b].point) ? a : b;
            s = (p == v2) ? (v2 + n - 1) % n : v2;
            h = inv * h;
            v = v2;
        }
        P = h * P * h.inverse();
    }
    const ClosurePoint& cp = F.nodes[node].point;
    MoebiusMap tau = cp.is_infinity() ? MoebiusMap() : MoebiusMap::make(0, -1, 1, -cp.x);
    MoebiusMap Q = tau * P * tau.inverse();
    double h = Q.b / Q.a;
    double s = std::sqrt(std::abs(h));
    return tau.inverse() * MoebiusMap::make(s, 0, 0, 1 / s);
}

/// Highest point reached in cusp coordinates by F away from the cusp.
inline double zone_threshold(const FundamentalPolygon& F, int node, const MoebiusMap& scaling) {
    MoebiusMap inv = scaling.inverse();
    double top = 0;
    std::size_t m = F.polygon.size();
    int vidx = -1;
    for (std::size_t i = 0; i < m; ++i)
        if (point_gap(F.polygon.vertices[i], F.nodes[node].point) < 1e-9) vidx = static_cast<int>(i);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = (i + 1) % m;
        if (static_cast<int>(i) == vidx || static_cast<int>(j) == vidx) continue;
        ClosurePoint p = inv(F.polygon.vertices[i]), q = inv(F.polygon.vertices[j]);
        if (p.is_infinity() || q.is_infinity()) continue;
        double py = p.is_ideal() ? 0 : p.y, qy = q.is_ideal() ? 0 : q.y;
        top = std::max({top, py, qy});
        OrientedGeodesic g = geodesic_between(p, q);
        if (!g.vertical()) {
            double c = g.center();
            if ((c - p.x) * (c - q.x) < 0) top = std::max(top, g.radius());
        }
    }
    return top;
}

}  // namespace detail

inline CuspZone cusp_zone(const FundamentalPolygon& F, const BoundaryPoint& cusp, double Y) {
    if (!F.has_cusps()) fail(ErrorKind::NoCusps, "group " + F.group_label + " is co-compact");
    int node = -1;
    for (int v : F.cusp_vertices)
        if (same_boundary_point(F.nodes[v].point.boundary_point(), cusp, 1e-12)) node = v;
    if (node < 0) fail(ErrorKind::NotACusp, "point is not a cusp vertex of F");
    CuspZone z;
    z.cusp = cusp;
    z.node = node;
    z.scaling = detail::cusp_scaling(F, node);
    z.Y = Y;
    double threshold = detail::zone_threshold(F, node, z.scaling);
    if (!(Y > threshold))
        fail(ErrorKind::ZonesOverlap, "cusp height " + std::to_string(Y) + " must exceed " + std::to_string(threshold));
    MoebiusMap inv = z.scaling.inverse();
    int n = static_cast<int>(F.nodes.size());
    ClosurePoint prev = inv(F.nodes[(node + n - 1) % n].point);
    ClosurePoint next = inv(F.nodes[(node + 1) % n].point);
    z.width = std::abs(next.x - prev.x);
    return z;
}

/// One zone per cusp class, placed at the class representative.
inline std::vector<CuspZone> cusp_zones(const FundamentalPolygon& F, double Y) {
    if (!F.has_cusps()) fail(ErrorKind::NoCusps, "group " + F.group_label + " is co-compact");
    std::vector<CuspZone> out;
    for (const auto& vc : F.classes)
        if (vc.cusp) out.push_back(cusp_zone(F, F.nodes[vc.nodes.front()].point.boundary_point(), Y));
    return out;
}

inline Region zone_region(const FundamentalPolygon& F, const CuspZone& z) {
    return Region::from_polygon(F.polygon).add(z.horoball());
}

/// F minus its cusp zones at height Y (F itself when co-compact).
inline Region bulk(const FundamentalPolygon& F, double Y) {
    Region r = Region::from_polygon(F.polygon);
    if (!F.has_cusps()) return r;
    for (const auto& z : cusp_zones(F, Y)) r.add(z.complement());
    return r;
}

inline double bulk_volume(const FundamentalPolygon& F, double Y) {
    double v = F.volume();
    if (!F.has_cusps()) return v;
    for (const auto& z : cusp_zones(F, Y)) v -= z.volume();
    return v;
}

// ------------------------------------------------------- custom polygons

/// Reads a polygon spec: {"label", "vertices": [[x,y] | "inf", ...],
/// "pairings": [[a,b,c,d] | {"side","partner","matrix"}, ...],
/// "folds": [node indices], "elliptic_orders": {"node": order},
/// "generators": {"name": [a,b,c,d]}}.
inline FundamentalPolygon polygon_from_json(const nlohmann::json& j) {
    try {
        std::vector<std::pair<SurdPoint, bool>> nodes;
        std::vector<int> folds;
        if (j.contains("folds")) folds = j.at("folds").get<std::vector<int>>();
        const auto& vs = j.at("vertices");
        for (std::size_t i = 0; i < vs.size(); ++i) {
            const auto& v = vs[i];
            SurdPoint p;
            if (v.is_string()) {
                if (v.get<std::string>() != "inf") fail(ErrorKind::InvalidInput, "vertex strings must be \"inf\"");
                p = SurdPoint::infinity();
            } else {
                double x = v.at(0).get<double>(), y = v.at(1).get<double>();
                p = y == 0 ? SurdPoint::boundary(x) : SurdPoint::interior(x, y);
            }
            bool fold = std::find(folds.begin(), folds.end(), static_cast<int>(i)) != folds.end();
            nodes.push_back({p, fold});
        }
        auto matrix = [](const nlohmann::json& m) {
            auto e = m.get<std::vector<double>>();
            if (e.size() != 4) fail(ErrorKind::InvalidInput, "matrices are quadruples a,b,c,d");
            return SurdMatrix::from(MoebiusMap::make(e[0], e[1], e[2], e[3]));
        };
        std::size_t n = nodes.size();
        std::vector<PairingSpec> pairs(n);
        std::vector<bool> given(n, false);
        const auto& ps = j.at("pairings");
        for (std::size_t k = 0; k < ps.size(); ++k) {
            const auto& p = ps[k];
            if (p.is_object()) {
                int side = p.at("side").get<int>();
                if (side < 0 || side >= static_cast<int>(n)) fail(ErrorKind::InvalidInput, "side index out of range");
                pairs[side].element = matrix(p.at("matrix"));
                pairs[side].partner = p.contains("partner") ? p.at("partner").get<int>() : -1;
                given[side] = true;
            } else {
                if (k >= n) fail(ErrorKind::InvalidInput, "more pairings than sides");
                pairs[k].element = matrix(p);
                pairs[k].partner = -1;
                given[k] = true;
            }
        }
        for (std::size_t k = 0; k < n; ++k)
            if (!given[k]) fail(ErrorKind::InvalidInput, "side " + std::to_string(k) + " has no pairing");
        // infer partners by endpoint matching
        std::vector<ClosurePoint> pts;
        for (const auto& [p, f] : nodes) pts.push_back(p.eval<double>());
        for (std::size_t k = 0; k < n; ++k) {
            if (pairs[k].partner >= 0) continue;
            MoebiusMap g = pairs[k].element.value();
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t p = 0; p < n; ++p) {
                double r = std::max(detail::point_gap(g(pts[p]), pts[(k + 1) % n]),
                                    detail::point_gap(g(pts[(p + 1) % n]), pts[k]));
                if (r < best) {
                    best = r;
                    pairs[k].partner = static_cast<int>(p);
                }
            }
        }
        std::vector<Letter> letters;
        for (std::size_t k = 0; k < n; ++k)
            letters.push_back(detail::letter("g" + std::to_string(k), pairs[k].element));
        if (j.contains("generators"))
            for (auto it = j.at("generators").begin(); it != j.at("generators").end(); ++it)
                letters.push_back(detail::letter(it.key(), matrix(it.value())));
        std::map<int, int> orders;
        if (j.contains("elliptic_orders"))
            for (auto it = j.at("elliptic_orders").begin(); it != j.at("elliptic_orders").end(); ++it)
                orders[std::stoi(it.key())] = it.value().get<int>();
        std::string label = j.value("label", std::string("custom"));
        return make_polygon(label, nodes, pairs, letters, orders);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("polygon spec: ") + e.what());
    }
}

inline FundamentalPolygon load_polygon(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InvalidInput, "cannot open polygon spec " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("polygon spec: ") + e.what());
    }
    return polygon_from_json(j);
}

/// Resolves "psl2z", "triangle246" or "custom:<path>".
inline FundamentalPolygon group_by_name(const std::string& name) {
    if (name == "psl2z" || name == "modular") return builtin_modular();
    if (name == "triangle246") return builtin_triangle246();
    if (name.rfind("custom:", 0) == 0) return load_polygon(name.substr(7));
    fail(ErrorKind::InvalidInput, "unknown group '" + name + "'");
}

}  // namespace hypcover
