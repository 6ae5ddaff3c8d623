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

#ifndef LOOPGAS_TORIC_HPP
#define LOOPGAS_TORIC_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "loopgas/gf2.hpp"
#include "loopgas/lattice.hpp"
#include "loopgas/state.hpp"

namespace loopgas {

/// Spin-1/2 basis configuration: bit e set means edge e carries an up-spin (a line).
using SpinHalfConfig = EdgeSubset;
/// Unnormalized toric-code state over spin-1/2 configurations.
using ToricState = SparseState<SpinHalfConfig>;

enum class Stabilizer { Vertex, Plaquette };
enum class StringKind {
    X,  ///< flips every edge of a primal path
    Z,  ///< phase (-1)^(up-spins) on the edges crossed by a dual path
};

inline std::string to_string(StringKind k) { return k == StringKind::X ? "x" : "z"; }

/// A string operator together with the edge set it acts on. Z strings are
/// given by the primal edges their dual path crosses.
struct StringOp {
    StringKind kind = StringKind::X;
    EdgeSubset path;
};

inline void check_wind(const LatticeGeometry &g, const std::vector<int> &wind) {
    if (static_cast<int>(wind.size()) != g.num_winding_classes())
        throw std::invalid_argument("expected " + std::to_string(g.num_winding_classes()) +
                                    " winding labels for this topology, got " + std::to_string(wind.size()));
    for (int w : wind)
        if (w != 0 && w != 1) throw std::invalid_argument("winding labels must be 0 or 1");
}

/// Representative closed set of the winding sector: sum of wind[i] * C_i.
inline EdgeSubset winding_representative(const LatticeGeometry &g, const std::vector<int> &wind) {
    check_wind(g, wind);
    EdgeSubset r = g.empty_subset();
    for (std::size_t i = 0; i < wind.size(); ++i)
        if (wind[i]) r ^= g.noncontractible()[i];
    return r;
}

/// Every sector label of the topology, in lexicographic order.
inline std::vector<std::vector<int>> all_windings(const LatticeGeometry &g) {
    std::vector<std::vector<int>> out;
    const int n = g.num_winding_classes();
    for (int m = 0; m < (1 << n); ++m) {
        std::vector<int> w(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = (m >> (n - 1 - i)) & 1;
        out.push_back(w);
    }
    return out;
}

/// Equal-amplitude loop condensate of one winding sector: every closed set in
/// the class of the sector representative, with amplitude 1. Built from the
/// contractible cycle basis; never by diagonalization.
inline ToricState toric_ground_state(const GeometryPtr &g, const std::vector<int> &wind) {
    EdgeSubset offset = winding_representative(*g, wind);
    auto basis = contractible_basis(*g);
    if (basis.size() > 30) throw std::length_error("toric ground state support 2^" + std::to_string(basis.size()) + " is too large");
    ToricState s(g);
    for_each_in_span(basis, offset, [&](const BitVector &c) { s.add(c, ExactScalar(1)); });
    return s;
}

/// A_v (diagonal, sign (-1)^(up-spins at v)) or B_p (flips the plaquette's edges).
inline ToricState apply_stabilizer(const ToricState &state, Stabilizer which, int site) {
    const auto &g = state.geometry();
    ToricState out(state.geometry_ptr());
    if (which == Stabilizer::Vertex) {
        if (site < 0 || site >= g.num_vertices()) throw std::out_of_range("vertex index out of range");
        EdgeSubset star = g.vertex_star(site);
        for (const auto &[c, a] : state) out.add(c, c.dot(star) ? -a : a);
    } else {
        if (site < 0 || site >= g.num_plaquettes()) throw std::out_of_range("plaquette index out of range");
        EdgeSubset box = g.plaquette_boundary(site);
        for (const auto &[c, a] : state) out.add(c ^ box, a);
    }
    return out;
}

inline ToricState string_operator(const ToricState &state, StringKind kind, const EdgeSubset &path) {
    ToricState out(state.geometry_ptr());
    if (static_cast<int>(path.size()) != state.geometry().num_edges())
        throw std::invalid_argument("string path does not belong to this geometry");
    for (const auto &[c, a] : state) {
        if (kind == StringKind::X) {
            out.add(c ^ path, a);
        } else {
            out.add(c, c.dot(path) ? -a : a);
        }
    }
    return out;
}

inline ToricState string_operator(const ToricState &state, const StringOp &op) {
    return string_operator(state, op.kind, op.path);
}

/// Toric ground state of a sector dressed by a sequence of strings (applied in order).
inline ToricState dressed_toric_state(const GeometryPtr &g, const std::vector<int> &wind, const std::vector<StringOp> &strings) {
    ToricState s = toric_ground_state(g, wind);
    for (const auto &op : strings) s = string_operator(s, op);
    return s;
}

enum class FluxValue { Plus, Minus, Mixed };

inline std::string to_string(FluxValue f) {
    switch (f) {
        case FluxValue::Plus:
            return "+1";
        case FluxValue::Minus:
            return "-1";
        case FluxValue::Mixed:
            return "not an eigenstate";
    }
    return "?";
}

/// Eigenvalue of F = prod_{cut} sigma^z, or Mixed when the support disagrees.
inline FluxValue flux_detector(const ToricState &state, const EdgeSubset &cut) {
    if (state.empty()) throw std::invalid_argument("flux of an empty state is undefined");
    std::optional<bool> odd;
    for (const auto &[c, a] : state) {
        bool p = c.dot(cut);
        if (!odd) {
            odd = p;
        } else if (*odd != p) {
            return FluxValue::Mixed;
        }
    }
    return *odd ? FluxValue::Minus : FluxValue::Plus;
}

/// Eigenvalue of a stabilizer on a state: +1, -1, or nullopt if not an eigenstate.
inline std::optional<int> stabilizer_eigenvalue(const ToricState &state, Stabilizer which, int site) {
    ToricState s = apply_stabilizer(state, which, site);
    if (s == state) return 1;
    if (s == state.scaled(ExactScalar(-1))) return -1;
    return std::nullopt;
}

/// H^{(x) N} applied to a state: amplitude of x is 2^{-N/2} sum_c (-1)^{x.c} psi(c).
/// Produces a dense result; intended for N <= 20.
inline ToricState hadamard_transform(const ToricState &state) {
    const int n = state.geometry().num_edges();
    if (n > 20) throw std::length_error("Hadamard transform limited to 20 edges");
    std::vector<BigInt> a_num(std::size_t{1} << n), b_num(std::size_t{1} << n);
    // Accumulate numerators over a common denominator 2^kmax.
    std::uint32_t kmax = 0;
    for (const auto &[c, a] : state) kmax = std::max(kmax, a.k());
    std::vector<std::pair<std::size_t, std::pair<BigInt, BigInt>>> src;
    for (const auto &[c, a] : state) {
        std::size_t idx = 0;
        for (int e : c.ones()) idx |= std::size_t{1} << e;
        src.push_back({idx, {a.a() << (kmax - a.k()), a.b() << (kmax - a.k())}});
    }
    // Fast Walsh-Hadamard on a dense table of numerators.
    std::vector<BigInt> &A = a_num;
    std::vector<BigInt> &B = b_num;
    for (auto &[idx, ab] : src) {
        A[idx] += ab.first;
        B[idx] += ab.second;
    }
    for (std::size_t len = 1; len < A.size(); len <<= 1) {
        for (std::size_t i = 0; i < A.size(); i += 2 * len) {
            for (std::size_t j = i; j < i + len; ++j) {
                BigInt ua = A[j], ub = B[j];
                A[j] = ua + A[j + len];
                B[j] = ub + B[j + len];
                A[j + len] = ua - A[j + len];
                B[j + len] = ub - B[j + len];
            }
        }
    }
    ToricState out(state.geometry_ptr());
    ExactScalar scale = ExactScalar::inv_sqrt2_pow(static_cast<std::uint32_t>(n));
    for (std::size_t x = 0; x < A.size(); ++x) {
        if (A[x].is_zero() && B[x].is_zero()) continue;
        EdgeSubset c(static_cast<std::size_t>(n));
        for (int e = 0; e < n; ++e)
            if ((x >> e) & 1U) c.set(static_cast<std::size_t>(e));
        out.add(c, ExactScalar(A[x], B[x], kmax) * scale);
    }
    return out;
}

/// Z^N H^N Z^N. Under merging this is the image of the spin-1 duality U:
/// U^N P(a (x) b) = P(twisted_hadamard(a) (x) twisted_hadamard(b)).
inline ToricState twisted_hadamard(const ToricState &state) {
    EdgeSubset all = state.geometry().empty_subset().complement();
    return string_operator(hadamard_transform(string_operator(state, StringKind::Z, all)), StringKind::Z, all);
}

/// Vertices enclosed by a contractible closed dual loop, given by the primal
/// edges it crosses: the smaller of the two vertex regions R with
/// sum_{v in R} star(v) == loop. nullopt if the loop is not a sum of stars
/// (not closed, or non-contractible).
inline std::optional<VertexParity> enclosed_vertices(const LatticeGeometry &g, const EdgeSubset &dual_loop) {
    // Unknowns are vertices; each edge gives one equation r_u + r_v = [e in loop].
    // Reuse Gf2System by treating vertices as "edges" of an auxiliary system.
    const auto nv = static_cast<std::size_t>(g.num_vertices());
    std::vector<int> all(nv);
    for (std::size_t i = 0; i < nv; ++i) all[i] = static_cast<int>(i);
    Gf2System sys(nv, all);
    for (int e = 0; e < g.num_edges(); ++e) {
        const auto &ed = g.edge(e);
        sys.add_edge_row(std::vector<int>{ed.u, ed.v}, dual_loop.test(static_cast<std::size_t>(e)));
    }
    auto sol = solve_and_count(sys);
    if (!sol.solvable) return std::nullopt;
    // The lattice is connected, so the only other region is the complement.
    VertexParity r = *sol.one_solution;
    VertexParity c = r.complement();
    if (c.count() < r.count()) r = c;
    return r;
}

}  // namespace loopgas

#endif
