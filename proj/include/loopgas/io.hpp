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

// File formats. Every document carries "schema" and "version"; readers
// reject unknown schemas, newer versions and geometry hash mismatches.
//
//   scalar          ["a", "b", k]  meaning (a + b*sqrt2) / 2^k, a and b decimal strings
//   edge subset     {"bits": hex, "geometry": hash}  (hex: least significant nibble first)
//   toric state     {"schema": "loopgas.toric-state", ..., "entries": [[hex, scalar], ...]}
//   merged state    {"schema": "loopgas.merged-state", ..., "entries": [[ternary, scalar], ...]}
//   operator        {"schema": "loopgas.operator", "terms": [{"coefficient", "stamps": [{"site", "matrix"}]}]}
//   hamiltonian     {"schema": "loopgas.hamiltonian", "terms": [{"kind", "site", "J"}]}
//   triplets        text; "# loopgas-triplets 1 dim=<n> basis=<kind> geometry=<hash>" then
//                   one "row col a b k" line per nonzero <row|op|col>, column-major order

#ifndef LOOPGAS_IO_HPP
#define LOOPGAS_IO_HPP

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "loopgas/spectral.hpp"

namespace loopgas {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

namespace detail {

inline void check_header(const Json &j, const std::string &schema) {
    if (!j.is_object() || j.value("schema", "") != schema) throw std::invalid_argument("expected a " + schema + " document");
    if (j.value("version", 0) < 1 || j.value("version", 0) > kFormatVersion)
        throw std::invalid_argument("unsupported " + schema + " version");
}

inline void check_geometry(const Json &j, const LatticeGeometry &g) {
    if (j.at("geometry").get<std::string>() != g.hash())
        throw std::invalid_argument("geometry hash mismatch: file " + j.at("geometry").get<std::string>() + ", expected " + g.hash());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

inline Json to_json(const ExactScalar &x) { return Json::array({x.a().str(), x.b().str(), x.k()}); }

inline ExactScalar scalar_from_json(const Json &j) {
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument("scalar must be [a, b, k]");
    auto big = [](const Json &v) {
        if (v.is_number_integer()) return BigInt(v.get<long long>());
        const auto s = v.get<std::string>();
        if (s.empty() || s.find_first_not_of("-0123456789") != std::string::npos)
            throw std::invalid_argument("bad integer in scalar: " + s);
        return BigInt(s);
    };
    auto k = j[2].get<long long>();
    if (k < 0) throw std::invalid_argument("scalar exponent must be non-negative");
    return {big(j[0]), big(j[1]), static_cast<std::uint32_t>(k)};
}

inline Json to_json(const ExactRatio &r) {
    return Json{{"num", to_json(r.num)}, {"den", to_json(r.den)}, {"value", r.to_double()}};
}

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

inline Json to_json(const Topology &t) { return Json{{"kind", to_string(t.kind)}, {"lx", t.lx}, {"ly", t.ly}}; }

inline Topology topology_from_json(const Json &j) {
    return {parse_topology_kind(j.at("kind").get<std::string>()), j.at("lx").get<int>(), j.at("ly").get<int>()};
}

inline Json subsets_to_json(const std::vector<EdgeSubset> &v) {
    Json a = Json::array();
    for (const auto &s : v) a.push_back(s.to_hex());
    return a;
}

inline Json to_json(const LatticeGeometry &g) {
    Json edges = Json::array();
    for (const auto &e : g.edges()) edges.push_back(Json::array({e.u, e.v, e.horizontal ? "h" : "v"}));
    return Json{{"schema", "loopgas.geometry"},
                {"version", kFormatVersion},
                {"topology", to_json(g.topology())},
                {"dual", g.is_dual()},
                {"hash", g.hash()},
                {"num_vertices", g.num_vertices()},
                {"num_edges", g.num_edges()},
                {"num_plaquettes", g.num_plaquettes()},
                {"num_boundary_faces", g.num_boundary_faces()},
                {"edges", edges},
                {"vertex_edges", g.all_vertex_edges()},
                {"plaquette_edges", g.all_plaquette_edges()},
                {"cycle_basis", subsets_to_json(cycle_basis(g))},
                {"noncontractible", subsets_to_json(g.noncontractible())},
                {"cross_cuts", subsets_to_json(g.cross_cuts())}};
}

/// Rebuilds the lattice from its topology and checks it against the stored hash.
inline GeometryPtr geometry_from_json(const Json &j) {
    detail::check_header(j, "loopgas.geometry");
    auto g = build_lattice(topology_from_json(j.at("topology")));
    if (j.value("dual", false)) g = dual_lattice(*g);
    if (g->hash() != j.at("hash").get<std::string>()) throw std::invalid_argument("geometry document does not match its hash");
    return g;
}

inline Json to_json(const EdgeSubset &s, const LatticeGeometry &g) { return Json{{"bits", s.to_hex()}, {"geometry", g.hash()}}; }

inline EdgeSubset subset_from_json(const Json &j, const LatticeGeometry &g) {
    detail::check_geometry(j, g);
    return EdgeSubset::from_hex(static_cast<std::size_t>(g.num_edges()), j.at("bits").get<std::string>());
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

inline Json to_json(const ToricState &s) {
    Json entries = Json::array();
    for (const auto &[c, a] : s) entries.push_back(Json::array({c.to_hex(), to_json(a)}));
    return Json{{"schema", "loopgas.toric-state"},
                {"version", kFormatVersion},
                {"geometry", s.geometry().hash()},
                {"topology", to_json(s.geometry().topology())},
                {"dual", s.geometry().is_dual()},
                {"entries", entries}};
}

inline Json to_json(const MergedState &s) {
    Json entries = Json::array();
    for (const auto &[c, a] : s) entries.push_back(Json::array({c.to_ternary(), to_json(a)}));
    return Json{{"schema", "loopgas.merged-state"},
                {"version", kFormatVersion},
                {"geometry", s.geometry().hash()},
                {"topology", to_json(s.geometry().topology())},
                {"dual", s.geometry().is_dual()},
                {"entries", entries}};
}

inline ToricState toric_state_from_json(const Json &j, const GeometryPtr &g) {
    detail::check_header(j, "loopgas.toric-state");
    detail::check_geometry(j, *g);
    ToricState s(g);
    for (const auto &e : j.at("entries"))
        s.add(EdgeSubset::from_hex(static_cast<std::size_t>(g->num_edges()), e.at(0).get<std::string>()), scalar_from_json(e.at(1)));
    return s;
}

inline MergedState merged_state_from_json(const Json &j, const GeometryPtr &g) {
    detail::check_header(j, "loopgas.merged-state");
    detail::check_geometry(j, *g);
    MergedState s(g);
    for (const auto &e : j.at("entries")) {
        auto t = e.at(0).get<std::string>();
        if (t.size() != static_cast<std::size_t>(g->num_edges())) throw std::invalid_argument("ternary config has wrong length");
        s.add(Spin1Config::from_ternary(t), scalar_from_json(e.at(1)));
    }
    return s;
}

/// Reads a state document, rebuilding its geometry from the embedded topology.
inline GeometryPtr state_geometry_from_json(const Json &j) {
    auto g = build_lattice(topology_from_json(j.at("topology")));
    if (j.value("dual", false)) g = dual_lattice(*g);
    detail::check_geometry(j, *g);
    return g;
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

inline Json to_json(const SiteMatrix &m) {
    Json a = Json::array();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a.push_back(to_json(m(r, c)));
    return a;
}

inline SiteMatrix site_matrix_from_json(const Json &j) {
    if (!j.is_array() || j.size() != 9) throw std::invalid_argument("site matrix must have 9 entries");
    SiteMatrix m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = scalar_from_json(j[static_cast<std::size_t>(3 * r + c)]);
    return m;
}

inline Json to_json(const LatticeOperator &op) {
    Json terms = Json::array();
    for (const auto &t : op.terms()) {
        Json stamps = Json::array();
        for (const auto &s : t.stamps) stamps.push_back(Json{{"site", s.site}, {"matrix", to_json(s.matrix)}});
        terms.push_back(Json{{"coefficient", to_json(t.coefficient)}, {"stamps", stamps}});
    }
    return Json{{"schema", "loopgas.operator"},
                {"version", kFormatVersion},
                {"geometry", op.geometry_ptr() ? op.geometry_ptr()->hash() : ""},
                {"terms", terms}};
}

inline LatticeOperator operator_from_json(const Json &j, const GeometryPtr &g) {
    detail::check_header(j, "loopgas.operator");
    detail::check_geometry(j, *g);
    LatticeOperator op(g);
    for (const auto &t : j.at("terms")) {
        OperatorTerm term{scalar_from_json(t.at("coefficient")), {}};
        for (const auto &s : t.at("stamps")) {
            int site = s.at("site").get<int>();
            if (site < 0 || site >= g->num_edges()) throw std::out_of_range("stamp site out of range");
            term.stamps.push_back({site, site_matrix_from_json(s.at("matrix"))});
        }
        op.add_term(std::move(term));
    }
    return op;
}

inline ProjectorKind parse_projector_kind(const std::string &s) {
    for (auto k : {ProjectorKind::Q1v, ProjectorKind::Q2v, ProjectorKind::Q1p, ProjectorKind::Q2p})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown projector kind: " + s);
}

/// H as a list of (kind, site, J) projector terms.
inline Json hamiltonian_description(const LatticeGeometry &g, const ExactScalar &j = ExactScalar(1)) {
    Json terms = Json::array();
    for (int v = 0; v < g.num_vertices(); ++v)
        for (auto k : {ProjectorKind::Q1v, ProjectorKind::Q2v}) terms.push_back(Json{{"kind", to_string(k)}, {"site", v}, {"J", to_json(j)}});
    for (int p = 0; p < g.num_plaquettes(); ++p)
        for (auto k : {ProjectorKind::Q1p, ProjectorKind::Q2p}) terms.push_back(Json{{"kind", to_string(k)}, {"site", p}, {"J", to_json(j)}});
    return Json{{"schema", "loopgas.hamiltonian"}, {"version", kFormatVersion}, {"geometry", g.hash()}, {"terms", terms}};
}

inline LatticeOperator operator_from_description(const Json &j, const GeometryPtr &g) {
    detail::check_header(j, "loopgas.hamiltonian");
    detail::check_geometry(j, *g);
    LatticeOperator op(g);
    for (const auto &t : j.at("terms")) {
        auto q = projector(g, parse_projector_kind(t.at("kind").get<std::string>()), t.at("site").get<int>());
        op = op + scalar_from_json(t.at("J")) * q;
    }
    return op;
}

// ---------------------------------------------------------------------------
// Matrix triplets
// ---------------------------------------------------------------------------

struct Triplet {
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    ExactScalar value;
};

/// Exact matrix elements of op on the basis, columns in basis order.
inline void write_triplets(std::ostream &os, const LatticeOperator &op, const SpinBasis &basis) {
    const auto &g = basis.geometry_ptr();
    os << "# loopgas-triplets " << kFormatVersion << " dim=" << basis.dim() << " basis=" << to_string(basis.kind())
       << " geometry=" << g->hash() << "\n";
    for (std::uint64_t c = 0; c < basis.dim(); ++c) {
        MergedState e(g);
        e.set(basis.decode(basis.code(c)), ExactScalar(1));
        std::vector<Triplet> col;
        for (const auto &[cfg, amp] : apply(op, e)) {
            if (amp.is_zero()) continue;
            auto r = basis.index(basis.encode(cfg));
            if (!r) throw std::logic_error("operator leaves the basis");
            col.push_back({*r, c, amp});
        }
        std::sort(col.begin(), col.end(), [](const Triplet &x, const Triplet &y) { return x.row < y.row; });
        for (const auto &t : col) os << t.row << ' ' << t.col << ' ' << t.value.a() << ' ' << t.value.b() << ' ' << t.value.k() << '\n';
    }
}

inline std::vector<Triplet> read_triplets(std::istream &is) {
    std::vector<Triplet> out;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# loopgas-triplets", 0) != 0) throw std::invalid_argument("missing triplet header");
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string r, c, a, b;
        long long k = -1;
        if (!(ls >> r >> c >> a >> b >> k) || k < 0) throw std::invalid_argument("bad triplet line: " + line);
        out.push_back({std::stoull(r), std::stoull(c), ExactScalar(BigInt(a), BigInt(b), static_cast<std::uint32_t>(k))});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spectral output
// ---------------------------------------------------------------------------

inline Json to_json(const SpectralReport &r) {
    Json j{{"geometry", r.geometry},
           {"basis", to_string(r.basis)},
           {"dim", r.dim},
           {"method", r.method},
           {"eigenvalues", r.eigenvalues},
           {"residuals", r.residuals},
           {"kernel_dim", r.kernel_dim},
           {"kernel_tol", r.kernel_tol},
           {"residual_tol", r.residual_tol},
           {"norm_estimate", r.norm_estimate},
           {"next_eigenvalue", r.next_eigenvalue ? Json(*r.next_eigenvalue) : Json(nullptr)},
           {"converged", r.converged},
           {"ambiguous", r.ambiguous},
           {"restarts", r.restarts},
           {"matvecs", r.matvecs}};
    if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
    return j;
}

inline void write_eigenvalue_csv(std::ostream &os, const SpectralReport &r) {
    os << "index,eigenvalue,residual,in_kernel\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
        os << i << ',' << r.eigenvalues[i] << ',' << r.residuals[i] << ',' << (static_cast<int>(i) < r.kernel_dim ? 1 : 0) << '\n';
}

}  // namespace loopgas

#endif
