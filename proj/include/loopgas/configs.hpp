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

#ifndef LOOPGAS_CONFIGS_HPP
#define LOOPGAS_CONFIGS_HPP

#include <stdexcept>

#include "loopgas/lattice.hpp"
#include "loopgas/merge.hpp"

namespace loopgas {

/// Edge from vertex (x, y) in the +x direction.
inline int horizontal_edge(const LatticeGeometry &g, int x, int y) {
    int v = g.vertex_at(x, y);
    for (int e : g.vertex_edges(v))
        if (g.edge(e).u == v && g.edge(e).horizontal) return e;
    throw std::out_of_range("no +x edge at (" + std::to_string(x) + "," + std::to_string(y) + ")");
}

/// Edge from vertex (x, y) in the +y direction.
inline int vertical_edge(const LatticeGeometry &g, int x, int y) {
    int v = g.vertex_at(x, y);
    for (int e : g.vertex_edges(v))
        if (g.edge(e).u == v && !g.edge(e).horizontal) return e;
    throw std::out_of_range("no +y edge at (" + std::to_string(x) + "," + std::to_string(y) + ")");
}

/// Hand-built configurations used by the checks. All need a torus of at least 4x4.
namespace configs {

inline void require_4x4_torus(const LatticeGeometry &g) {
    if (g.topology().kind != Topology::Kind::Torus || g.topology().lx < 4 || g.topology().ly < 4)
        throw std::invalid_argument("configuration needs a torus of at least 4x4");
}

/// Single-line loops around plaquettes (0,0) and (2,0), joined by three
/// double lines: (1,0)-(2,0), (1,1)-(2,1) and the wrapping edge (lx-1,0)-(0,0).
/// Each loop carries three double-line attachment points, so no pairing of
/// the single lines into two closed sets exists.
inline Spin1Config three_attachment_configuration(const LatticeGeometry &g) {
    require_4x4_torus(g);
    EdgeSubset s = g.plaquette_boundary(g.plaquette_at(0, 0)) | g.plaquette_boundary(g.plaquette_at(2, 0));
    EdgeSubset d = g.empty_subset();
    d.set(static_cast<std::size_t>(horizontal_edge(g, 1, 0)));
    d.set(static_cast<std::size_t>(horizontal_edge(g, 1, 1)));
    d.set(static_cast<std::size_t>(horizontal_edge(g, g.topology().lx - 1, 0)));
    return {s, d};
}

/// Single-line boundary of the 2x1 rectangle at (0,0)-(2,1) with its middle
/// rung (1,0)-(1,1) doubled. Decomposable in two ways.
inline Spin1Config rectangle_with_rung(const LatticeGeometry &g) {
    require_4x4_torus(g);
    EdgeSubset s = g.plaquette_boundary(g.plaquette_at(0, 0)) ^ g.plaquette_boundary(g.plaquette_at(1, 0));
    EdgeSubset d = g.empty_subset();
    d.set(static_cast<std::size_t>(vertical_edge(g, 1, 0)));
    return {s, d};
}

/// Single-line loop C_x + C_y + boundary of plaquette (0,0): a staircase that
/// winds once in both directions and shares segments with both reference loops.
inline Spin1Config staircase_configuration(const LatticeGeometry &g) {
    require_4x4_torus(g);
    EdgeSubset s = g.noncontractible()[0] ^ g.noncontractible()[1] ^ g.plaquette_boundary(g.plaquette_at(0, 0));
    return {s, g.empty_subset()};
}

}  // namespace configs

}  // namespace loopgas

#endif
