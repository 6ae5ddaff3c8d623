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

#ifndef LOOPGAS_SPIN1OPS_HPP
#define LOOPGAS_SPIN1OPS_HPP

#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "loopgas/lattice.hpp"
#include "loopgas/merge.hpp"
#include "loopgas/scalar.hpp"

namespace loopgas {

/// Row/column index of an edge label in the local basis order (|+>, |0>, |->).
inline int site_index(int label) { return 2 - label; }
inline int site_label(int index) { return 2 - index; }

/// 3x3 matrix with exact entries acting on one spin-1 site, basis (|+>, |0>, |->).
class SiteMatrix {
   public:
    SiteMatrix() = default;
    SiteMatrix(std::initializer_list<ExactScalar> rows_major) {
        if (rows_major.size() != 9) throw std::invalid_argument("site matrix needs 9 entries");
        std::size_t i = 0;
        for (const auto &x : rows_major) m_[i++] = x;
    }

    static SiteMatrix identity() { return diag(1, 1, 1); }
    static SiteMatrix diag(ExactScalar p, ExactScalar z, ExactScalar m) {
        SiteMatrix r;
        r(0, 0) = std::move(p);
        r(1, 1) = std::move(z);
        r(2, 2) = std::move(m);
        return r;
    }

    ExactScalar &operator()(int r, int c) { return m_[static_cast<std::size_t>(3 * r + c)]; }
    const ExactScalar &operator()(int r, int c) const { return m_[static_cast<std::size_t>(3 * r + c)]; }

    friend SiteMatrix operator*(const SiteMatrix &x, const SiteMatrix &y) {
        SiteMatrix r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    if (!x(i, k).is_zero() && !y(k, j).is_zero()) r(i, j) += x(i, k) * y(k, j);
        return r;
    }
    friend SiteMatrix operator+(const SiteMatrix &x, const SiteMatrix &y) {
        SiteMatrix r;
        for (std::size_t i = 0; i < 9; ++i) r.m_[i] = x.m_[i] + y.m_[i];
        return r;
    }
    friend SiteMatrix operator-(const SiteMatrix &x, const SiteMatrix &y) {
        SiteMatrix r;
        for (std::size_t i = 0; i < 9; ++i) r.m_[i] = x.m_[i] - y.m_[i];
        return r;
    }
    friend SiteMatrix operator*(const ExactScalar &s, const SiteMatrix &x) {
        SiteMatrix r;
        for (std::size_t i = 0; i < 9; ++i) r.m_[i] = s * x.m_[i];
        return r;
    }
    friend bool operator==(const SiteMatrix &x, const SiteMatrix &y) { return x.m_ == y.m_; }
    friend bool operator!=(const SiteMatrix &x, const SiteMatrix &y) { return !(x == y); }

    SiteMatrix transpose() const {
        SiteMatrix r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }
    bool is_identity() const { return *this == identity(); }
    bool is_diagonal() const {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j && !(*this)(i, j).is_zero()) return false;
        return true;
    }

    std::array<double, 9> to_double() const {
        std::array<double, 9> r{};
        for (std::size_t i = 0; i < 9; ++i) r[i] = m_[i].to_double();
        return r;
    }

    std::string to_string() const {
        std::string s = "[";
        for (int i = 0; i < 3; ++i) {
            s += i ? "; " : "";
            for (int j = 0; j < 3; ++j) s += (j ? ", " : "") + (*this)(i, j).to_string();
        }
        return s + "]";
    }

   private:
    std::array<ExactScalar, 9> m_{};
};

/// Named single-site matrices of the spin-1 model.
namespace site {

inline SiteMatrix sz() { return SiteMatrix::diag(1, 0, -1); }
inline SiteMatrix sx() {
    ExactScalar r = ExactScalar::inv_sqrt2();
    return SiteMatrix{0, r, 0, r, 0, r, 0, r, 0};
}
inline SiteMatrix sz2() { return sz() * sz(); }
inline SiteMatrix sx2() { return sx() * sx(); }
/// 2 (S^z)^2 - 1 = diag(1, -1, 1).
inline SiteMatrix parity_z() { return SiteMatrix::diag(1, -1, 1); }
/// |+><-| + |-><+| + |0><0|, equal to 2 (S^x)^2 - 1.
inline SiteMatrix x_flip() { return SiteMatrix{0, 0, 1, 0, 1, 0, 1, 0, 0}; }
/// S^+ = sqrt2 (|+><0| + |0><-|).
inline SiteMatrix s_plus() {
    ExactScalar r = ExactScalar::sqrt2();
    return SiteMatrix{0, r, 0, 0, 0, r, 0, 0, 0};
}
/// C^dagger = (1 + S^z)/2 S^+.
inline SiteMatrix c_dagger() { return ExactScalar::half() * ((SiteMatrix::identity() + sz()) * s_plus()); }
/// exp(-i pi/2 S^y) in the standard spin-1 representation (a real Wigner d-matrix).
inline SiteMatrix rotation_y() {
    ExactScalar h = ExactScalar::half();
    ExactScalar r = ExactScalar::inv_sqrt2();
    return SiteMatrix{h, -r, h, r, 0, -r, h, r, h};
}
/// Duality matrix: the rotation composed with diag(1, -1, 1). Real, symmetric,
/// orthogonal and an involution, with U S^z U = S^x and U (2(S^z)^2 - 1) U = X.
inline SiteMatrix duality_u() { return rotation_y() * parity_z(); }

inline std::map<std::string, SiteMatrix> named() {
    return {{"Sz", sz()},         {"Sx", sx()},         {"Sz2", sz2()},       {"Sx2", sx2()},
            {"ParityZ", parity_z()}, {"X", x_flip()},   {"Splus", s_plus()},  {"Cdagger", c_dagger()},
            {"RotY", rotation_y()},  {"U", duality_u()}};
}

}  // namespace site

/// A single-site factor of a product operator.
struct Stamp {
    int site = 0;
    SiteMatrix matrix;
};

/// coefficient * (product of stamps on distinct sites).
struct OperatorTerm {
    ExactScalar coefficient = ExactScalar(1);
    std::vector<Stamp> stamps;
};

/// Sum of stamped product operators on the edges of one geometry.
class LatticeOperator {
   public:
    LatticeOperator() = default;
    explicit LatticeOperator(GeometryPtr g) : geometry_(std::move(g)) {}

    static LatticeOperator identity(const GeometryPtr &g) {
        LatticeOperator op(g);
        op.terms_.push_back({ExactScalar(1), {}});
        return op;
    }
    static LatticeOperator product(const GeometryPtr &g, const std::vector<int> &sites, const SiteMatrix &m,
                                   ExactScalar coefficient = ExactScalar(1)) {
        LatticeOperator op(g);
        OperatorTerm t{std::move(coefficient), {}};
        std::set<int> seen;
        for (int s : sites) {
            if (s < 0 || s >= g->num_edges()) throw std::out_of_range("stamp site out of range");
            if (!seen.insert(s).second) throw std::invalid_argument("stamps must be on distinct sites");
            t.stamps.push_back({s, m});
        }
        op.terms_.push_back(std::move(t));
        return op;
    }

    const GeometryPtr &geometry_ptr() const { return geometry_; }
    const std::vector<OperatorTerm> &terms() const { return terms_; }
    void add_term(OperatorTerm t) { terms_.push_back(std::move(t)); }

    /// Sites touched by any stamp, ascending.
    std::vector<int> support() const {
        std::set<int> s;
        for (const auto &t : terms_)
            for (const auto &st : t.stamps) s.insert(st.site);
        return {s.begin(), s.end()};
    }

    friend LatticeOperator operator+(LatticeOperator x, const LatticeOperator &y) {
        for (const auto &t : y.terms_) x.terms_.push_back(t);
        if (!x.geometry_) x.geometry_ = y.geometry_;
        return x;
    }
    friend LatticeOperator operator-(LatticeOperator x, const LatticeOperator &y) {
        for (auto t : y.terms_) {
            t.coefficient = -t.coefficient;
            x.terms_.push_back(std::move(t));
        }
        if (!x.geometry_) x.geometry_ = y.geometry_;
        return x;
    }
    friend LatticeOperator operator*(const ExactScalar &s, LatticeOperator x) {
        for (auto &t : x.terms_) t.coefficient *= s;
        return x;
    }
    /// Operator product: (x * y) psi = x (y psi).
    friend LatticeOperator operator*(const LatticeOperator &x, const LatticeOperator &y) {
        LatticeOperator r(x.geometry_ ? x.geometry_ : y.geometry_);
        for (const auto &tx : x.terms_) {
            for (const auto &ty : y.terms_) {
                std::map<int, SiteMatrix> m;
                for (const auto &s : ty.stamps) m[s.site] = s.matrix;
                for (const auto &s : tx.stamps) {
                    auto it = m.find(s.site);
                    if (it == m.end()) {
                        m[s.site] = s.matrix;
                    } else {
                        it->second = s.matrix * it->second;
                    }
                }
                OperatorTerm t{tx.coefficient * ty.coefficient, {}};
                for (auto &[site, mat] : m)
                    if (!mat.is_identity()) t.stamps.push_back({site, mat});
                r.terms_.push_back(std::move(t));
            }
        }
        return r;
    }

   private:
    GeometryPtr geometry_;
    std::vector<OperatorTerm> terms_;
};

enum class VertexKind { A1, A2, A3 };
enum class PlaquetteKind { B1, B2, B3 };

inline std::string to_string(VertexKind k) { return k == VertexKind::A1 ? "A1" : (k == VertexKind::A2 ? "A2" : "A3"); }
inline std::string to_string(PlaquetteKind k) {
    return k == PlaquetteKind::B1 ? "B1" : (k == PlaquetteKind::B2 ? "B2" : "B3");
}

/// A1 = prod (2 Sz^2 - 1); A2 = prod (-Sz); A3 = A2^2 = prod Sz^2, over the
/// edges present at v. The (-Sz) factor makes an empty edge contribute +1, so
/// A2 = prod Sz on degree-4 vertices and the vacuum is unexcited at
/// odd-degree boundary vertices.
inline LatticeOperator vertex_op(const GeometryPtr &g, VertexKind kind, int v) {
    if (v < 0 || v >= g->num_vertices()) throw std::out_of_range("vertex index " + std::to_string(v) + " out of range");
    const auto &sites = g->vertex_edges(v);
    switch (kind) {
        case VertexKind::A1:
            return LatticeOperator::product(g, sites, site::parity_z());
        case VertexKind::A2:
            return LatticeOperator::product(g, sites, ExactScalar(-1) * site::sz());
        case VertexKind::A3:
            return LatticeOperator::product(g, sites, site::sz2());
    }
    throw std::invalid_argument("unknown vertex operator");
}

/// B1 = prod X; B2 = prod Sx; B3 = B2^2 = prod Sx^2, over the plaquette's edges.
inline LatticeOperator plaquette_op(const GeometryPtr &g, PlaquetteKind kind, int p) {
    if (p < 0 || p >= g->num_plaquettes()) throw std::out_of_range("plaquette index " + std::to_string(p) + " out of range");
    const auto &sites = g->plaquette_edges(p);
    switch (kind) {
        case PlaquetteKind::B1:
            return LatticeOperator::product(g, sites, site::x_flip());
        case PlaquetteKind::B2:
            return LatticeOperator::product(g, sites, site::sx());
        case PlaquetteKind::B3:
            return LatticeOperator::product(g, sites, site::sx2());
    }
    throw std::invalid_argument("unknown plaquette operator");
}

/// Q1v = (1 - A1v)/2.
inline LatticeOperator q1_vertex(const GeometryPtr &g, int v) {
    return ExactScalar::half() * (LatticeOperator::identity(g) - vertex_op(g, VertexKind::A1, v));
}
/// Q2v = A2v (A2v - 1)/2 = (A3v - A2v)/2.
inline LatticeOperator q2_vertex(const GeometryPtr &g, int v) {
    return ExactScalar::half() * (vertex_op(g, VertexKind::A3, v) - vertex_op(g, VertexKind::A2, v));
}
inline LatticeOperator q1_plaquette(const GeometryPtr &g, int p) {
    return ExactScalar::half() * (LatticeOperator::identity(g) - plaquette_op(g, PlaquetteKind::B1, p));
}
inline LatticeOperator q2_plaquette(const GeometryPtr &g, int p) {
    return ExactScalar::half() * (plaquette_op(g, PlaquetteKind::B3, p) - plaquette_op(g, PlaquetteKind::B2, p));
}

enum class ProjectorKind { Q1v, Q2v, Q1p, Q2p };
inline std::string to_string(ProjectorKind k) {
    switch (k) {
        case ProjectorKind::Q1v:
            return "Q1v";
        case ProjectorKind::Q2v:
            return "Q2v";
        case ProjectorKind::Q1p:
            return "Q1p";
        case ProjectorKind::Q2p:
            return "Q2p";
    }
    return "?";
}
inline LatticeOperator projector(const GeometryPtr &g, ProjectorKind k, int site_id) {
    switch (k) {
        case ProjectorKind::Q1v:
            return q1_vertex(g, site_id);
        case ProjectorKind::Q2v:
            return q2_vertex(g, site_id);
        case ProjectorKind::Q1p:
            return q1_plaquette(g, site_id);
        case ProjectorKind::Q2p:
            return q2_plaquette(g, site_id);
    }
    throw std::invalid_argument("unknown projector");
}

/// H = J sum_v (Q1v + Q2v) + J sum_p (Q1p + Q2p).
inline LatticeOperator hamiltonian(const GeometryPtr &g, const ExactScalar &j = ExactScalar(1)) {
    if (j.sign() <= 0) throw std::invalid_argument("coupling J must be positive");
    LatticeOperator h(g);
    for (int v = 0; v < g->num_vertices(); ++v) h = h + q1_vertex(g, v) + q2_vertex(g, v);
    for (int p = 0; p < g->num_plaquettes(); ++p) h = h + q1_plaquette(g, p) + q2_plaquette(g, p);
    return j * h;
}

/// Exact application of a stamped operator to a sparse merged state.
inline MergedState apply(const LatticeOperator &op, const MergedState &state) {
    if (op.geometry_ptr() && state.geometry_ptr() && op.geometry_ptr()->num_edges() != state.geometry().num_edges())
        throw std::invalid_argument("operator and state belong to different geometries");
    MergedState out(state.geometry_ptr());
    std::vector<std::pair<Spin1Config, ExactScalar>> cur, next;
    for (const auto &term : op.terms()) {
        for (const auto &[c, a] : state) {
            cur.clear();
            cur.emplace_back(c, a * term.coefficient);
            for (const auto &st : term.stamps) {
                next.clear();
                const auto site_e = static_cast<std::size_t>(st.site);
                for (const auto &[cc, aa] : cur) {
                    int in = site_index(cc.label(site_e));
                    for (int r = 0; r < 3; ++r) {
                        const ExactScalar &m = st.matrix(r, in);
                        if (m.is_zero()) continue;
                        Spin1Config nc = cc;
                        nc.set(site_e, site_label(r));
                        next.emplace_back(std::move(nc), aa * m);
                    }
                }
                std::swap(cur, next);
                if (cur.empty()) break;
            }
            for (auto &[cc, aa] : cur) out.add(std::move(cc), aa);
        }
    }
    return out;
}

/// Applies the same site matrix to every edge: M^{(x) N} psi.
inline MergedState apply_global(const SiteMatrix &m, const MergedState &state) {
    MergedState cur = state;
    const auto n = static_cast<int>(state.geometry().num_edges());
    for (int e = 0; e < n; ++e) {
        MergedState next(state.geometry_ptr());
        for (const auto &[c, a] : cur) {
            int in = site_index(c.label(static_cast<std::size_t>(e)));
            for (int r = 0; r < 3; ++r) {
                if (m(r, in).is_zero()) continue;
                Spin1Config nc = c;
                nc.set(static_cast<std::size_t>(e), site_label(r));
                next.add(std::move(nc), a * m(r, in));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

/// U^{(x) N} psi.
inline MergedState transform_u(const MergedState &state) { return apply_global(site::duality_u(), state); }
/// U^{-1 (x) N} psi (U is orthogonal, so U^{-1} is its transpose).
inline MergedState transform_u_inverse(const MergedState &state) {
    return apply_global(site::duality_u().transpose(), state);
}

/// Conjugates every stamp: M (.) Minv. Unstamped sites stay the identity.
inline LatticeOperator conjugate(const LatticeOperator &op, const SiteMatrix &m, const SiteMatrix &minv,
                                 GeometryPtr target = nullptr) {
    LatticeOperator r(target ? std::move(target) : op.geometry_ptr());
    for (const auto &t : op.terms()) {
        OperatorTerm nt{t.coefficient, {}};
        for (const auto &s : t.stamps) nt.stamps.push_back({s.site, m * s.matrix * minv});
        r.add_term(std::move(nt));
    }
    return r;
}

/// True iff the operator vanishes identically. Decided exactly by applying
/// it to every basis configuration of its joint support (other sites are
/// untouched, so their labels are irrelevant).
inline bool is_zero_operator(const LatticeOperator &op) {
    auto sup = op.support();
    if (sup.size() > 12) throw std::length_error("operator support too large for exhaustive check");
    if (!op.geometry_ptr()) throw std::invalid_argument("operator has no geometry");
    const auto n = static_cast<std::size_t>(op.geometry_ptr()->num_edges());
    std::size_t total = 1;
    for (std::size_t i = 0; i < sup.size(); ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        Spin1Config c(n);
        std::size_t x = code;
        for (int s : sup) {
            c.set(static_cast<std::size_t>(s), static_cast<int>(x % 3));
            x /= 3;
        }
        MergedState st(op.geometry_ptr());
        st.set(c, ExactScalar(1));
        if (!apply(op, st).empty()) return false;
    }
    return true;
}

inline bool operators_equal(const LatticeOperator &a, const LatticeOperator &b) { return is_zero_operator(a - b); }
inline LatticeOperator commutator(const LatticeOperator &a, const LatticeOperator &b) { return a * b - b * a; }

/// One row of the commutator table.
struct CommutatorEntry {
    int vertex = 0;
    int plaquette = 0;
    std::string left;
    std::string right;
    bool commutes = false;
    bool expected_commutes = false;
};

/// Exact commutators for every vertex/plaquette pair that share an edge:
/// [A1v, Bip] and [B1p, Aiv] for i = 1..3 (expected zero), [Q1v, Qip] and
/// [Q1p, Qiv] (expected zero) and [Q2v, Q2p] (expected nonzero).
inline std::vector<CommutatorEntry> commutator_table(const GeometryPtr &g) {
    std::vector<CommutatorEntry> out;
    for (int v = 0; v < g->num_vertices(); ++v) {
        std::set<int> ve(g->vertex_edges(v).begin(), g->vertex_edges(v).end());
        for (int p = 0; p < g->num_plaquettes(); ++p) {
            bool adjacent = false;
            for (int e : g->plaquette_edges(p)) adjacent = adjacent || ve.count(e) > 0;
            if (!adjacent) continue;
            auto push = [&](const std::string &l, const LatticeOperator &a, const std::string &r, const LatticeOperator &b,
                            bool expect) {
                out.push_back({v, p, l, r, is_zero_operator(commutator(a, b)), expect});
            };
            auto a1 = vertex_op(g, VertexKind::A1, v);
            auto b1 = plaquette_op(g, PlaquetteKind::B1, p);
            for (auto k : {PlaquetteKind::B1, PlaquetteKind::B2, PlaquetteKind::B3})
                push("A1v", a1, to_string(k) + "p", plaquette_op(g, k, p), true);
            for (auto k : {VertexKind::A2, VertexKind::A3})
                push("B1p", b1, to_string(k) + "v", vertex_op(g, k, v), true);
            auto q1v = q1_vertex(g, v);
            auto q1p = q1_plaquette(g, p);
            push("Q1v", q1v, "Q1p", q1p, true);
            push("Q1v", q1v, "Q2p", q2_plaquette(g, p), true);
            push("Q1p", q1p, "Q2v", q2_vertex(g, v), true);
            push("Q2v", q2_vertex(g, v), "Q2p", q2_plaquette(g, p), false);
        }
    }
    return out;
}

}  // namespace loopgas

#endif
