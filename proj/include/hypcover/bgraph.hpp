#pragma once

// The boundary graph: the image of the boundary of F in the quotient, with
// vertex and edge classes generated by the side pairings.

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypcover/error.hpp"
#include "hypcover/fundpoly.hpp"

namespace hypcover {

struct BoundaryGraph {
    std::vector<std::vector<int>> vertex_classes;  // node indices
    std::vector<std::vector<int>> edge_classes;    // side indices
    std::vector<std::pair<int, int>> incidence;    // edge class -> (vertex class, vertex class)
    std::vector<bool> cusp_class;
    std::vector<int> orders;                       // per vertex class; 0 for cusps

    std::size_t V() const { return vertex_classes.size(); }
    std::size_t E() const { return edge_classes.size(); }
};

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }

    std::vector<std::vector<int>> groups() {
        std::vector<std::vector<int>> out;
        std::vector<int> slot(parent.size(), -1);
        for (int i = 0; i < static_cast<int>(parent.size()); ++i) {
            int r = find(i);
            if (slot[r] < 0) {
                slot[r] = static_cast<int>(out.size());
                out.emplace_back();
            }
            out[slot[r]].push_back(i);
        }
        return out;
    }
};

inline int nearest_node(const FundamentalPolygon& F, const ClosurePoint& p) {
    int best = -1;
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < F.nodes.size(); ++i) {
        double g = point_gap(p, F.nodes[i].point);
        if (g < gap) gap = g, best = static_cast<int>(i);
    }
    return gap < 1e-7 ? best : -1;
}

}  // namespace detail

/// Orbit closure of nodes and sides under the pairing elements.
inline BoundaryGraph boundary_graph(const FundamentalPolygon& F) {
    auto report = validate(F);
    if (!report.ok()) fail(ErrorKind::InvalidInput, "polygon fails validation: " + report.first_failure());
    std::size_t n = F.side_count();
    detail::UnionFind nodes(n), sides(n);
    for (const auto& sp : F.pairings) {
        int k = sp.side_index;
        sides.unite(k, sp.partner_index);
        int p = sp.partner_index;
        for (int end : {p, static_cast<int>((p + 1) % n)}) {
            int img = detail::nearest_node(F, sp.element(F.nodes[end].point));
            if (img < 0) fail(ErrorKind::InvalidInput, "pairing does not map vertices to vertices");
            nodes.unite(end, img);
        }
    }
    BoundaryGraph g;
    g.vertex_classes = nodes.groups();
    g.edge_classes = sides.groups();
    auto vclass = [&](int node) {
        for (std::size_t c = 0; c < g.vertex_classes.size(); ++c)
            for (int m : g.vertex_classes[c])
                if (m == node) return static_cast<int>(c);
        return -1;
    };
    for (const auto& ec : g.edge_classes) {
        int k = ec.front();
        g.incidence.push_back({vclass(k), vclass(static_cast<int>((k + 1) % n))});
    }
    for (const auto& vc : g.vertex_classes) {
        bool cusp = F.nodes[vc.front()].point.is_ideal();
        g.cusp_class.push_back(cusp);
        int cls = F.class_of(vc.front());
        g.orders.push_back(cusp || cls < 0 ? 0 : F.classes[cls].order);
    }
    return g;
}

inline bool connected(const BoundaryGraph& g) {
    if (g.V() == 0) return false;
    detail::UnionFind uf(g.V());
    for (const auto& [a, b] : g.incidence) uf.unite(a, b);
    return uf.groups().size() == 1;
}

inline int betti1(const BoundaryGraph& g) {
    if (!connected(g)) fail(ErrorKind::Disconnected, "boundary graph is disconnected");
    return static_cast<int>(g.E()) - static_cast<int>(g.V()) + 1;
}

/// Genus of the compactified quotient from V - E + 1 = 2 - 2g (one 2-cell).
inline int genus(const BoundaryGraph& g) {
    if (!connected(g)) fail(ErrorKind::Disconnected, "boundary graph is disconnected");
    int chi = static_cast<int>(g.V()) - static_cast<int>(g.E()) + 1;
    if ((2 - chi) % 2 != 0 || chi > 2) fail(ErrorKind::InvalidInput, "odd Euler characteristic");
    int genus = (2 - chi) / 2;
    if (betti1(g) != 2 * genus) fail(ErrorKind::InvalidInput, "betti number disagrees with the genus");
    return genus;
}

inline int genus(const FundamentalPolygon& F) { return genus(boundary_graph(F)); }

/// One closed path of edge classes per edge outside a BFS spanning tree, as (edge, direction) pairs.
inline std::vector<std::vector<std::pair<int, int>>> cycle_basis(const BoundaryGraph& g) {
    std::size_t V = g.V();
    std::vector<int> parent(V, -1), parent_edge(V, -1), depth(V, -1);
    std::vector<std::vector<std::pair<int, int>>> adj(V);  // (neighbour, edge)
    for (std::size_t e = 0; e < g.E(); ++e) {
        auto [a, b] = g.incidence[e];
        adj[a].push_back({b, static_cast<int>(e)});
        if (a != b) adj[b].push_back({a, static_cast<int>(e)});
    }
    std::vector<bool> tree(g.E(), false);
    for (std::size_t root = 0; root < V; ++root) {
        if (depth[root] >= 0) continue;
        depth[root] = 0;
        std::vector<int> queue{static_cast<int>(root)};
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            for (auto [w, e] : adj[v]) {
                if (depth[w] >= 0) continue;
                depth[w] = depth[v] + 1;
                parent[w] = v;
                parent_edge[w] = e;
                tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    // path from v up to the root, as edges traversed towards the root
    auto climb = [&](int v) {
        std::vector<std::pair<int, int>> path;
        while (parent[v] >= 0) {
            int e = parent_edge[v];
            path.push_back({e, g.incidence[e].first == v ? +1 : -1});
            v = parent[v];
        }
        return path;
    };
    std::vector<std::vector<std::pair<int, int>>> basis;
    for (std::size_t e = 0; e < g.E(); ++e) {
        if (tree[e]) continue;
        auto [a, b] = g.incidence[e];
        std::vector<std::pair<int, int>> cyc{{static_cast<int>(e), +1}};
        auto up_b = climb(b), up_a = climb(a);
        // drop the shared tail above the lowest common ancestor
        while (!up_a.empty() && !up_b.empty() && up_a.back() == up_b.back()) {
            up_a.pop_back();
            up_b.pop_back();
        }
        cyc.insert(cyc.end(), up_b.begin(), up_b.end());
        for (auto it = up_a.rbegin(); it != up_a.rend(); ++it) cyc.push_back({it->first, -it->second});
        basis.push_back(cyc);
    }
    return basis;
}

inline nlohmann::json topology_report(const FundamentalPolygon& F) {
    BoundaryGraph g = boundary_graph(F);
    nlohmann::json j;
    j["group"] = F.group_label;
    auto& vs = j["vertex_classes"] = nlohmann::json::array();
    for (std::size_t c = 0; c < g.V(); ++c)
        vs.push_back({{"nodes", g.vertex_classes[c]}, {"order", g.orders[c]}, {"cusp", static_cast<bool>(g.cusp_class[c])}});
    auto& es = j["edge_classes"] = nlohmann::json::array();
    for (std::size_t e = 0; e < g.E(); ++e)
        es.push_back({{"sides", g.edge_classes[e]}, {"ends", {g.incidence[e].first, g.incidence[e].second}}});
    j["betti1"] = betti1(g);
    j["genus"] = genus(g);
    j["cycle_basis"] = nlohmann::json::array();
    for (const auto& cyc : cycle_basis(g)) {
        nlohmann::json path = nlohmann::json::array();
        for (auto [e, dir] : cyc) path.push_back({e, dir});
        j["cycle_basis"].push_back(path);
    }
    return j;
}

}  // namespace hypcover
