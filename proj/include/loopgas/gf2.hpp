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

#ifndef LOOPGAS_GF2_HPP
#define LOOPGAS_GF2_HPP

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "loopgas/bitvector.hpp"
#include "loopgas/lattice.hpp"
#include "loopgas/scalar.hpp"

namespace loopgas {

/// Vertex parity vector of an edge set: bit v is |subset AND star(v)| mod 2.
inline VertexParity boundary(const LatticeGeometry &g, const EdgeSubset &subset) {
    if (static_cast<int>(subset.size()) != g.num_edges())
        throw std::invalid_argument("edge subset does not belong to this geometry");
    VertexParity r(static_cast<std::size_t>(g.num_vertices()));
    for (int e : subset.ones()) {
        const auto &ed = g.edge(e);
        r.flip(static_cast<std::size_t>(ed.u));
        r.flip(static_cast<std::size_t>(ed.v));
    }
    return r;
}

inline bool is_closed(const LatticeGeometry &g, const EdgeSubset &subset) { return boundary(g, subset).none(); }

/// Linear system over GF(2) whose unknowns are the edges of a support set.
///
/// Rows are stored over the support's local column order (support[i] is the
/// edge of column i). Boundary rows come from vertex stars; arbitrary extra
/// rows (cut parities, for instance) can be appended with add_edge_row.
class Gf2System {
   public:
    Gf2System(std::size_t num_edges, std::vector<int> support) : num_edges_(num_edges), support_(std::move(support)) {
        col_of_edge_.assign(num_edges_, -1);
        for (std::size_t i = 0; i < support_.size(); ++i) {
            int e = support_[i];
            if (e < 0 || static_cast<std::size_t>(e) >= num_edges_) throw std::out_of_range("support edge out of range");
            col_of_edge_[static_cast<std::size_t>(e)] = static_cast<int>(i);
        }
    }

    /// System boundary(x) = rhs restricted to x subset of support, one row per vertex.
    static Gf2System boundary_system(const LatticeGeometry &g, const EdgeSubset &support, const VertexParity &rhs) {
        Gf2System sys(static_cast<std::size_t>(g.num_edges()), support.ones());
        for (int v = 0; v < g.num_vertices(); ++v)
            sys.add_edge_row(g.vertex_edges(v), rhs.test(static_cast<std::size_t>(v)));
        return sys;
    }

    /// Adds the row  sum_{e in edges, e in support} x_e = value.
    void add_edge_row(const std::vector<int> &edges, bool value) {
        BitVector row(support_.size());
        for (int e : edges) {
            int c = col_of_edge_.at(static_cast<std::size_t>(e));
            if (c >= 0) row.flip(static_cast<std::size_t>(c));
        }
        rows_.push_back(std::move(row));
        rhs_.push_back(value);
    }
    void add_edge_row(const EdgeSubset &edges, bool value) { add_edge_row(edges.ones(), value); }

    std::size_t num_edges() const { return num_edges_; }
    const std::vector<int> &support() const { return support_; }
    std::size_t num_rows() const { return rows_.size(); }
    std::size_t num_cols() const { return support_.size(); }
    const std::vector<BitVector> &rows() const { return rows_; }
    const std::vector<bool> &rhs() const { return rhs_; }

    /// Maps a local column vector to an edge subset.
    EdgeSubset to_edges(const BitVector &local) const {
        EdgeSubset r(num_edges_);
        for (int c : local.ones()) r.set(static_cast<std::size_t>(support_[static_cast<std::size_t>(c)]));
        return r;
    }
    /// True iff the edge subset lies in the support and satisfies every row.
    bool satisfied_by(const EdgeSubset &x) const {
        BitVector local(support_.size());
        for (int e : x.ones()) {
            int c = col_of_edge_.at(static_cast<std::size_t>(e));
            if (c < 0) return false;
            local.set(static_cast<std::size_t>(c));
        }
        for (std::size_t r = 0; r < rows_.size(); ++r)
            if (rows_[r].dot(local) != rhs_[r]) return false;
        return true;
    }

   private:
    std::size_t num_edges_;
    std::vector<int> support_;
    std::vector<int> col_of_edge_;
    std::vector<BitVector> rows_;
    std::vector<bool> rhs_;
};

/// Result of solving a Gf2System: 0 or 2^nullity solutions.
struct Gf2Solution {
    bool solvable = false;
    int rank = 0;
    int nullity = 0;
    std::optional<EdgeSubset> one_solution;
    /// Null-space basis as edge subsets (solutions = one_solution + span).
    std::vector<EdgeSubset> null_basis;

    BigInt num_solutions() const {
        if (!solvable) return 0;
        return BigInt(1) << nullity;
    }
};

/// Gauss-Jordan elimination over packed rows with columns pivoted in
/// increasing order, so the returned particular solution (free variables set
/// to zero) is reproducible.
inline Gf2Solution solve_and_count(const Gf2System &sys) {
    const std::size_t nc = sys.num_cols();
    // Augmented rows: columns 0..nc-1 plus the rhs at column nc.
    std::vector<BitVector> m;
    m.reserve(sys.num_rows());
    for (std::size_t r = 0; r < sys.num_rows(); ++r) {
        BitVector row(nc + 1);
        for (int c : sys.rows()[r].ones()) row.set(static_cast<std::size_t>(c));
        if (sys.rhs()[r]) row.set(nc);
        m.push_back(std::move(row));
    }
    std::vector<int> pivot_col;
    std::size_t prow = 0;
    for (std::size_t c = 0; c < nc && prow < m.size(); ++c) {
        std::size_t sel = prow;
        while (sel < m.size() && !m[sel].test(c)) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[prow], m[sel]);
        for (std::size_t r = 0; r < m.size(); ++r)
            if (r != prow && m[r].test(c)) m[r] ^= m[prow];
        pivot_col.push_back(static_cast<int>(c));
        ++prow;
    }
    Gf2Solution out;
    out.rank = static_cast<int>(prow);
    out.nullity = static_cast<int>(nc) - out.rank;
    for (std::size_t r = prow; r < m.size(); ++r) {
        if (m[r].test(nc)) {
            out.solvable = false;
            return out;
        }
    }
    out.solvable = true;
    BitVector x(nc);
    for (std::size_t r = 0; r < prow; ++r)
        if (m[r].test(nc)) x.set(static_cast<std::size_t>(pivot_col[r]));
    out.one_solution = sys.to_edges(x);

    std::vector<bool> is_pivot(nc, false);
    for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    for (std::size_t f = 0; f < nc; ++f) {
        if (is_pivot[f]) continue;
        BitVector n(nc);
        n.set(f);
        for (std::size_t r = 0; r < prow; ++r)
            if (m[r].test(f)) n.set(static_cast<std::size_t>(pivot_col[r]));
        out.null_basis.push_back(sys.to_edges(n));
    }
    return out;
}

/// Rank of a list of bit vectors over GF(2).
inline int gf2_rank(std::vector<BitVector> rows) {
    int rank = 0;
    if (rows.empty()) return 0;
    const std::size_t n = rows[0].size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = static_cast<std::size_t>(rank);
        while (sel < rows.size() && !rows[sel].test(c)) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[static_cast<std::size_t>(rank)], rows[sel]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != static_cast<std::size_t>(rank) && rows[r].test(c)) rows[r] ^= rows[static_cast<std::size_t>(rank)];
        ++rank;
    }
    return rank;
}

/// Visits offset + every GF(2) combination of basis, in Gray-code order.
/// Intended for small spans; the caller bounds basis.size().
inline void for_each_in_span(const std::vector<BitVector> &basis, const BitVector &offset,
                             const std::function<void(const BitVector &)> &visit) {
    if (basis.size() >= 63) throw std::length_error("span too large to enumerate");
    BitVector cur = offset;
    visit(cur);
    const std::uint64_t total = std::uint64_t{1} << basis.size();
    for (std::uint64_t i = 1; i < total; ++i) {
        cur ^= basis[static_cast<std::size_t>(std::countr_zero(i))];
        visit(cur);
    }
}

/// Lazily enumerates every solution of a solvable system.
inline void for_each_solution(const Gf2Solution &sol, const std::function<void(const EdgeSubset &)> &visit) {
    if (!sol.solvable) return;
    for_each_in_span(sol.null_basis, *sol.one_solution, visit);
}

}  // namespace loopgas

#endif
