// Copyright 2026 The loopgas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOOPGAS_LATTICE_HPP
#define LOOPGAS_LATTICE_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "loopgas/bitvector.hpp"

namespace loopgas {

/// Surface on which the square lattice lives.
///
///  * Torus: lx x ly vertices, periodic in both directions.
///  * Annulus: periodic in x with lx columns, ly rows of plaquettes
///    (ly + 1 rows of vertices), open at the bottom and top rows. The two
///    boundary faces carry no plaquette stabilizer.
///  * Sphere: an open (lx+1) x (ly+1) vertex patch closed off by one exterior
///    face, which carries no plaquette stabilizer.
struct Topology {
    enum class Kind { Sphere, Annulus, Torus };
    Kind kind = Kind::Torus;
    int lx = 2;
    int ly = 2;

    static Topology torus(int lx, int ly) { return {Kind::Torus, lx, ly}; }
    static Topology annulus(int lx, int ly) { return {Kind::Annulus, lx, ly}; }
    static Topology sphere(int lx, int ly) { return {Kind::Sphere, lx, ly}; }

    friend bool operator==(const Topology &, const Topology &) = default;
};

inline std::string to_string(Topology::Kind k) {
    switch (k) {
        case Topology::Kind::Sphere:
            return "sphere";
        case Topology::Kind::Annulus:
            return "annulus";
        case Topology::Kind::Torus:
            return "torus";
    }
    return "?";
}

inline Topology::Kind parse_topology_kind(const std::string &s) {
    if (s == "sphere") return Topology::Kind::Sphere;
    if (s == "annulus") return Topology::Kind::Annulus;
    if (s == "torus") return Topology::Kind::Torus;
    throw std::invalid_argument("unknown topology '" + s + "' (expected sphere, annulus or torus)");
}

struct Edge {
    int u = 0;  ///< tail vertex (the vertex the edge leaves in +x or +y)
    int v = 0;  ///< head vertex
    bool horizontal = true;
};

/// Immutable square lattice with spins on edges.
///
/// Indexing is row-major and part of the file-format contract:
///  * vertex (x, y) has index y * row_width + x, where row_width is lx for the
///    torus and annulus and lx + 1 for the sphere patch;
///  * edges are numbered by visiting vertices in index order and emitting, for
///    each vertex, its +x edge (if present) followed by its +y edge (if
///    present). On the torus edge 2i is the +x edge of vertex i and 2i+1 its
///    +y edge;
///  * plaquette (x, y) has its lower-left corner at vertex (x, y) and index
///    y * lx + x; its edges are listed bottom, right, top, left.
class LatticeGeometry {
   public:
    const Topology &topology() const { return topology_; }
    bool is_dual() const { return dual_; }

    int num_vertices() const { return static_cast<int>(vertex_edges_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_plaquettes() const { return static_cast<int>(plaquette_edges_.size()); }
    /// Faces of the cell complex, including boundary/exterior faces without stabilizers.
    int num_faces() const { return num_plaquettes() + num_boundary_faces_; }
    int num_boundary_faces() const { return num_boundary_faces_; }
    /// Connected components of the edge graph (always 1 for supported lattices).
    int num_components() const { return 1; }
    int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }
    /// GF(2) dimension of the space of closed edge subsets.
    int cycle_space_dim() const { return num_edges() - num_vertices() + num_components(); }

    const std::vector<Edge> &edges() const { return edges_; }
    const Edge &edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
    const std::vector<int> &vertex_edges(int v) const { return vertex_edges_.at(static_cast<std::size_t>(v)); }
    const std::vector<int> &plaquette_edges(int p) const {
        return plaquette_edges_.at(static_cast<std::size_t>(p));
    }
    const std::vector<int> &edge_plaquettes(int e) const { return edge_plaquettes_.at(static_cast<std::size_t>(e)); }
    const std::vector<std::vector<int>> &all_vertex_edges() const { return vertex_edges_; }
    const std::vector<std::vector<int>> &all_plaquette_edges() const { return plaquette_edges_; }

    /// Identity map plaquette -> dual vertex: dual vertex p sits inside plaquette p.
    int dual_vertex_of_plaquette(int p) const {
        check_plaquette(p);
        return p;
    }

    /// Representatives of the non-contractible classes: none on the sphere,
    /// one (the bottom row) on the annulus, and C_x (row y = 0) and C_y
    /// (column x = 0) on the torus.
    const std::vector<EdgeSubset> &noncontractible() const { return noncontractible_; }
    /// Edges crossed by the dual cut detecting each non-contractible class, in
    /// the same order: |C_i AND cut_j| is odd iff i == j.
    const std::vector<EdgeSubset> &cross_cuts() const { return cross_cuts_; }
    int num_winding_classes() const { return static_cast<int>(noncontractible_.size()); }

    int vertex_at(int x, int y) const {
        auto [w, h] = vertex_extent();
        if (topology_.kind != Topology::Kind::Sphere) x = ((x % w) + w) % w;
        if (topology_.kind == Topology::Kind::Torus) y = ((y % h) + h) % h;
        if (x < 0 || x >= w || y < 0 || y >= h)
            throw std::out_of_range("vertex (" + std::to_string(x) + "," + std::to_string(y) + ") outside lattice");
        return y * w + x;
    }
    std::pair<int, int> vertex_xy(int v) const {
        auto [w, h] = vertex_extent();
        (void)h;
        return {v % w, v / w};
    }
    int plaquette_at(int x, int y) const {
        int lx = topology_.lx;
        int ly = topology_.ly;
        if (topology_.kind != Topology::Kind::Sphere) x = ((x % lx) + lx) % lx;
        if (topology_.kind == Topology::Kind::Torus) y = ((y % ly) + ly) % ly;
        if (x < 0 || x >= lx || y < 0 || y >= ly)
            throw std::out_of_range("plaquette (" + std::to_string(x) + "," + std::to_string(y) + ") outside lattice");
        return y * lx + x;
    }

    /// Edge set bounding plaquette p.
    EdgeSubset plaquette_boundary(int p) const {
        return EdgeSubset::from_indices(static_cast<std::size_t>(num_edges()), plaquette_edges(p));
    }
    /// Edge set of the star of vertex v (the edges a dual loop around v crosses).
    EdgeSubset vertex_star(int v) const {
        return EdgeSubset::from_indices(static_cast<std::size_t>(num_edges()), vertex_edges(v));
    }
    EdgeSubset empty_subset() const { return EdgeSubset(static_cast<std::size_t>(num_edges())); }

    /// Winding label of a closed subset: parity of its intersection with each cross cut.
    std::vector<int> winding(const EdgeSubset &closed) const {
        std::vector<int> w;
        for (const auto &c : cross_cuts_) w.push_back(closed.dot(c) ? 1 : 0);
        return w;
    }

    /// Stable 64-bit FNV-1a digest of topology and incidence, printed in hex.
    std::string hash() const {
        std::uint64_t h = 1469598103934665603ULL;
        auto mix = [&h](std::uint64_t x) {
            for (int i = 0; i < 8; ++i) {
                h ^= (x >> (8 * i)) & 0xFF;
                h *= 1099511628211ULL;
            }
        };
        mix(static_cast<std::uint64_t>(topology_.kind));
        mix(static_cast<std::uint64_t>(topology_.lx));
        mix(static_cast<std::uint64_t>(topology_.ly));
        mix(dual_ ? 1 : 0);
        for (const auto &e : edges_) {
            mix(static_cast<std::uint64_t>(e.u));
            mix(static_cast<std::uint64_t>(e.v));
        }
        for (const auto &pe : plaquette_edges_)
            for (int e : pe) mix(static_cast<std::uint64_t>(e));
        static const char *digits = "0123456789abcdef";
        std::string s(16, '0');
        for (int i = 0; i < 16; ++i) s[static_cast<std::size_t>(15 - i)] = digits[(h >> (4 * i)) & 0xF];
        return s;
    }

    friend std::shared_ptr<const LatticeGeometry> build_lattice(const Topology &t);
    friend std::shared_ptr<const LatticeGeometry> dual_lattice(const LatticeGeometry &g);

   private:
    std::pair<int, int> vertex_extent() const {
        switch (topology_.kind) {
            case Topology::Kind::Torus:
                return {topology_.lx, topology_.ly};
            case Topology::Kind::Annulus:
                return {topology_.lx, topology_.ly + 1};
            case Topology::Kind::Sphere:
                return {topology_.lx + 1, topology_.ly + 1};
        }
        return {0, 0};
    }
    void check_plaquette(int p) const {
        if (p < 0 || p >= num_plaquettes()) throw std::out_of_range("plaquette index " + std::to_string(p) + " out of range");
    }

    Topology topology_;
    bool dual_ = false;
    int num_boundary_faces_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> vertex_edges_;
    std::vector<std::vector<int>> plaquette_edges_;
    std::vector<std::vector<int>> edge_plaquettes_;
    std::vector<EdgeSubset> noncontractible_;
    std::vector<EdgeSubset> cross_cuts_;
};

using GeometryPtr = std::shared_ptr<const LatticeGeometry>;

/// Builds the lattice for a topology; rejects extents for which incidence
/// would degenerate (an edge bounding the same plaquette on both sides).
inline GeometryPtr build_lattice(const Topology &t) {
    using K = Topology::Kind;
    switch (t.kind) {
        case K::Torus:
            if (t.lx < 2 || t.ly < 2)
                throw std::invalid_argument("torus needs lx >= 2 and ly >= 2 (got " + std::to_string(t.lx) + "x" +
                                            std::to_string(t.ly) + "); smaller extents make an edge bound one plaquette twice");
            break;
        case K::Annulus:
            if (t.lx < 2 || t.ly < 1)
                throw std::invalid_argument("annulus needs lx >= 2 and ly >= 1 (got " + std::to_string(t.lx) + "x" +
                                            std::to_string(t.ly) + ")");
            break;
        case K::Sphere:
            if (t.lx < 1 || t.ly < 1)
                throw std::invalid_argument("sphere patch needs lx >= 1 and ly >= 1 (got " + std::to_string(t.lx) + "x" +
                                            std::to_string(t.ly) + ")");
            break;
    }

    auto g = std::shared_ptr<LatticeGeometry>(new LatticeGeometry());
    g->topology_ = t;
    auto [w, h] = g->vertex_extent();
    const bool wrap_x = t.kind != K::Sphere;
    const bool wrap_y = t.kind == K::Torus;
    const int nv = w * h;
    g->vertex_edges_.assign(static_cast<std::size_t>(nv), {});

    // hx[v], vy[v]: index of the +x / +y edge leaving vertex v, or -1.
    std::vector<int> hx(static_cast<std::size_t>(nv), -1);
    std::vector<int> vy(static_cast<std::size_t>(nv), -1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int v = y * w + x;
            if (wrap_x || x + 1 < w) {
                int u2 = y * w + (x + 1) % w;
                hx[static_cast<std::size_t>(v)] = static_cast<int>(g->edges_.size());
                g->edges_.push_back({v, u2, true});
            }
            if (wrap_y || y + 1 < h) {
                int u2 = ((y + 1) % h) * w + x;
                vy[static_cast<std::size_t>(v)] = static_cast<int>(g->edges_.size());
                g->edges_.push_back({v, u2, false});
            }
        }
    }
    for (int e = 0; e < g->num_edges(); ++e) {
        const auto &ed = g->edges_[static_cast<std::size_t>(e)];
        g->vertex_edges_[static_cast<std::size_t>(ed.u)].push_back(e);
        g->vertex_edges_[static_cast<std::size_t>(ed.v)].push_back(e);
    }
    for (auto &ve : g->vertex_edges_) std::sort(ve.begin(), ve.end());

    for (int y = 0; y < t.ly; ++y) {
        for (int x = 0; x < t.lx; ++x) {
            int v00 = y * w + x;
            int v10 = y * w + (x + 1) % w;
            int v01 = ((y + 1) % h) * w + x;
            g->plaquette_edges_.push_back({hx[static_cast<std::size_t>(v00)], vy[static_cast<std::size_t>(v10)],
                                           hx[static_cast<std::size_t>(v01)], vy[static_cast<std::size_t>(v00)]});
        }
    }
    g->edge_plaquettes_.assign(static_cast<std::size_t>(g->num_edges()), {});
    for (int p = 0; p < g->num_plaquettes(); ++p)
        for (int e : g->plaquette_edges_[static_cast<std::size_t>(p)])
            g->edge_plaquettes_[static_cast<std::size_t>(e)].push_back(p);

    const auto ne = static_cast<std::size_t>(g->num_edges());
    switch (t.kind) {
        case K::Torus: {
            g->num_boundary_faces_ = 0;
            EdgeSubset cx(ne), cy(ne), cut_x(ne), cut_y(ne);
            for (int x = 0; x < w; ++x) cx.set(static_cast<std::size_t>(hx[static_cast<std::size_t>(x)]));
            for (int y = 0; y < h; ++y) cy.set(static_cast<std::size_t>(vy[static_cast<std::size_t>(y * w)]));
            // The cut detecting C_x is a dual loop running in y that crosses the
            // +x edges of column 0; the cut detecting C_y crosses the +y edges of row 0.
            for (int y = 0; y < h; ++y) cut_x.set(static_cast<std::size_t>(hx[static_cast<std::size_t>(y * w)]));
            for (int x = 0; x < w; ++x) cut_y.set(static_cast<std::size_t>(vy[static_cast<std::size_t>(x)]));
            g->noncontractible_ = {cx, cy};
            g->cross_cuts_ = {cut_x, cut_y};
            break;
        }
        case K::Annulus: {
            g->num_boundary_faces_ = 2;
            EdgeSubset c(ne), cut(ne);
            for (int x = 0; x < w; ++x) c.set(static_cast<std::size_t>(hx[static_cast<std::size_t>(x)]));
            // From the inner (bottom) boundary face to the outer (top) one.
            for (int y = 0; y < h; ++y) cut.set(static_cast<std::size_t>(hx[static_cast<std::size_t>(y * w)]));
            g->noncontractible_ = {c};
            g->cross_cuts_ = {cut};
            break;
        }
        case K::Sphere:
            g->num_boundary_faces_ = 1;
            break;
    }
    return g;
}

/// Dual lattice of a torus: dual vertices are plaquettes, dual plaquettes are
/// vertices, and each edge keeps its index (it is identified with the dual edge
/// crossing it). Non-contractible representatives and cross cuts swap roles.
inline GeometryPtr dual_lattice(const LatticeGeometry &g) {
    if (g.topology().kind != Topology::Kind::Torus)
        throw std::invalid_argument("dual lattice is only provided for the torus");
    auto d = std::shared_ptr<LatticeGeometry>(new LatticeGeometry());
    d->topology_ = g.topology_;
    d->dual_ = !g.dual_;
    d->num_boundary_faces_ = 0;
    d->vertex_edges_ = g.plaquette_edges_;
    for (auto &ve : d->vertex_edges_) std::sort(ve.begin(), ve.end());
    d->plaquette_edges_ = g.vertex_edges_;
    d->edges_.resize(g.edges_.size());
    for (int e = 0; e < g.num_edges(); ++e) {
        const auto &ps = g.edge_plaquettes_[static_cast<std::size_t>(e)];
        d->edges_[static_cast<std::size_t>(e)] = {ps.at(0), ps.at(1), !g.edges_[static_cast<std::size_t>(e)].horizontal};
    }
    d->edge_plaquettes_.assign(g.edges_.size(), {});
    for (int p = 0; p < d->num_plaquettes(); ++p)
        for (int e : d->plaquette_edges_[static_cast<std::size_t>(p)])
            d->edge_plaquettes_[static_cast<std::size_t>(e)].push_back(p);
    d->noncontractible_ = g.cross_cuts_;
    d->cross_cuts_ = g.noncontractible_;
    return d;
}

/// Plaquette boundaries spanning the contractible cycles: all plaquettes on
/// the sphere and annulus, all but the last on the torus (where the product of
/// every plaquette is the identity).
inline std::vector<EdgeSubset> contractible_basis(const LatticeGeometry &g) {
    std::vector<EdgeSubset> basis;
    int np = g.num_plaquettes();
    if (g.topology().kind == Topology::Kind::Torus) --np;
    for (int p = 0; p < np; ++p) basis.push_back(g.plaquette_boundary(p));
    return basis;
}

/// Basis of the GF(2) cycle space: contractible plaquette boundaries followed
/// by one representative per non-contractible class.
inline std::vector<EdgeSubset> cycle_basis(const LatticeGeometry &g) {
    auto basis = contractible_basis(g);
    for (const auto &c : g.noncontractible()) basis.push_back(c);
    return basis;
}

/// Shortest vertex path from a to b (BFS, lowest edge index first); empty set if a == b.
inline EdgeSubset shortest_path(const LatticeGeometry &g, int a, int b) {
    std::vector<int> prev_edge(static_cast<std::size_t>(g.num_vertices()), -2);
    std::deque<int> q{a};
    prev_edge[static_cast<std::size_t>(a)] = -1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        if (v == b) break;
        for (int e : g.vertex_edges(v)) {
            const auto &ed = g.edge(e);
            int w = ed.u == v ? ed.v : ed.u;
            if (prev_edge[static_cast<std::size_t>(w)] == -2) {
                prev_edge[static_cast<std::size_t>(w)] = e;
                q.push_back(w);
            }
        }
    }
    if (prev_edge[static_cast<std::size_t>(b)] == -2) throw std::invalid_argument("vertices are not connected");
    EdgeSubset path = g.empty_subset();
    for (int v = b; v != a;) {
        int e = prev_edge[static_cast<std::size_t>(v)];
        path.flip(static_cast<std::size_t>(e));
        const auto &ed = g.edge(e);
        v = ed.u == v ? ed.v : ed.u;
    }
    return path;
}

/// Edges crossed by a shortest dual path between plaquettes a and b.
inline EdgeSubset shortest_dual_path(const LatticeGeometry &g, int a, int b) {
    std::vector<int> prev_edge(static_cast<std::size_t>(g.num_plaquettes()), -2);
    std::deque<int> q{a};
    prev_edge[static_cast<std::size_t>(a)] = -1;
    while (!q.empty()) {
        int p = q.front();
        q.pop_front();
        if (p == b) break;
        for (int e : g.plaquette_edges(p)) {
            for (int r : g.edge_plaquettes(e)) {
                if (r != p && prev_edge[static_cast<std::size_t>(r)] == -2) {
                    prev_edge[static_cast<std::size_t>(r)] = e;
                    q.push_back(r);
                }
            }
        }
    }
    if (prev_edge[static_cast<std::size_t>(b)] == -2) throw std::invalid_argument("plaquettes are not dual-connected");
    EdgeSubset path = g.empty_subset();
    for (int p = b; p != a;) {
        int e = prev_edge[static_cast<std::size_t>(p)];
        path.flip(static_cast<std::size_t>(e));
        const auto &ps = g.edge_plaquettes(e);
        p = ps[0] == p ? ps[1] : ps[0];
    }
    return path;
}

}  // namespace loopgas

#endif
