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

#ifndef LOOPGAS_MERGE_HPP
#define LOOPGAS_MERGE_HPP

#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "loopgas/gf2.hpp"
#include "loopgas/lattice.hpp"
#include "loopgas/state.hpp"
#include "loopgas/toric.hpp"

namespace loopgas {

/// Edge labels of the merged spin-1 model.
enum Label : int {
    kNoLine = 0,      ///< |->
    kSingleLine = 1,  ///< |0>
    kDoubleLine = 2,  ///< |+>
};

/// One ternary label per edge, packed as two bit planes (singles, doubles).
/// The planes are always disjoint.
class Spin1Config {
   public:
    Spin1Config() = default;
    explicit Spin1Config(std::size_t n) : singles_(n), doubles_(n) {}
    Spin1Config(EdgeSubset singles, EdgeSubset doubles) : singles_(std::move(singles)), doubles_(std::move(doubles)) {
        if (singles_.size() != doubles_.size()) throw std::invalid_argument("label planes differ in length");
        if ((singles_ & doubles_).any()) throw std::invalid_argument("an edge cannot carry both a single and a double line");
    }
    /// Label string, one digit 0/1/2 per edge in edge order.
    static Spin1Config from_ternary(const std::string &s) {
        Spin1Config c(s.size());
        for (std::size_t e = 0; e < s.size(); ++e) {
            if (s[e] < '0' || s[e] > '2') throw std::invalid_argument("ternary label must be 0, 1 or 2");
            c.set(e, s[e] - '0');
        }
        return c;
    }

    std::size_t size() const { return singles_.size(); }
    int label(std::size_t e) const { return singles_.test(e) ? kSingleLine : (doubles_.test(e) ? kDoubleLine : kNoLine); }
    void set(std::size_t e, int label) {
        if (label < 0 || label > 2) throw std::invalid_argument("label out of range");
        singles_.set(e, label == kSingleLine);
        doubles_.set(e, label == kDoubleLine);
    }
    const EdgeSubset &singles() const { return singles_; }
    const EdgeSubset &doubles() const { return doubles_; }

    std::string to_ternary() const {
        std::string s(size(), '0');
        for (std::size_t e = 0; e < size(); ++e) s[e] = static_cast<char>('0' + label(e));
        return s;
    }

    friend bool operator==(const Spin1Config &x, const Spin1Config &y) {
        return x.singles_ == y.singles_ && x.doubles_ == y.doubles_;
    }
    friend bool operator!=(const Spin1Config &x, const Spin1Config &y) { return !(x == y); }
    friend bool operator<(const Spin1Config &x, const Spin1Config &y) {
        if (x.singles_ != y.singles_) return x.singles_ < y.singles_;
        return x.doubles_ < y.doubles_;
    }

   private:
    EdgeSubset singles_;
    EdgeSubset doubles_;
};

using MergedState = SparseState<Spin1Config>;

/// Merged label of a pair of copy configurations: c1(e) + c2(e).
inline Spin1Config merge_configs(const SpinHalfConfig &c1, const SpinHalfConfig &c2) {
    return Spin1Config(c1 ^ c2, c1 & c2);
}

/// Brute-force merge: every pair of support configurations contributes
/// ampA * ampB * (1/sqrt2)^(edges where exactly one copy has a line).
inline MergedState merge(const ToricState &a, const ToricState &b) {
    if (a.geometry().hash() != b.geometry().hash()) throw std::invalid_argument("copies belong to different geometries");
    MergedState out(a.geometry_ptr());
    std::map<std::size_t, ExactScalar> factor;
    for (const auto &[c1, a1] : a) {
        for (const auto &[c2, a2] : b) {
            EdgeSubset s = c1 ^ c2;
            std::size_t n = s.count();
            auto it = factor.find(n);
            if (it == factor.end()) it = factor.emplace(n, ExactScalar::inv_sqrt2_pow(static_cast<std::uint32_t>(n))).first;
            out.add(Spin1Config(std::move(s), c1 & c2), a1 * a2 * it->second);
        }
    }
    return out;
}

/// GF(2) system for the pairings of M between sectors windA and windB:
/// unknowns S1 subset of S with boundary(S1) = boundary(D) and the cut
/// parities of D + S1 equal to windA.
inline Gf2System pairing_system(const LatticeGeometry &g, const Spin1Config &m, const std::optional<std::vector<int>> &wind_a) {
    Gf2System sys = Gf2System::boundary_system(g, m.singles(), boundary(g, m.doubles()));
    if (wind_a) {
        const auto &cuts = g.cross_cuts();
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            bool d_par = m.doubles().dot(cuts[i]);
            sys.add_edge_row(cuts[i], ((*wind_a)[i] != 0) != d_par);
        }
    }
    return sys;
}

/// Multiplicity mu(M): number of S1 subset of S such that D + S1 is a closed
/// set of class windA and D + (S - S1) a closed set of class windB.
inline BigInt multiplicity(const LatticeGeometry &g, const Spin1Config &m, const std::vector<int> &wind_a,
                           const std::vector<int> &wind_b) {
    check_wind(g, wind_a);
    check_wind(g, wind_b);
    if (static_cast<int>(m.size()) != g.num_edges()) throw std::invalid_argument("configuration does not belong to this geometry");
    if (!is_closed(g, m.singles())) return 0;
    auto ws = g.winding(m.singles());
    for (std::size_t i = 0; i < ws.size(); ++i)
        if (ws[i] != (wind_a[i] ^ wind_b[i])) return 0;
    return solve_and_count(pairing_system(g, m, wind_a)).num_solutions();
}

/// Exact amplitude mu(M) * (1/sqrt2)^|S| of M in the merged ground state of
/// sectors (windA, windB), without materializing the state.
inline ExactScalar merged_amplitude(const LatticeGeometry &g, const Spin1Config &m, const std::vector<int> &wind_a,
                                    const std::vector<int> &wind_b) {
    BigInt mu = multiplicity(g, m, wind_a, wind_b);
    if (mu.is_zero()) return {};
    return ExactScalar(mu, 0, 0) * ExactScalar::inv_sqrt2_pow(static_cast<std::uint32_t>(m.singles().count()));
}

/// Merged ground state built by multiplicity counting: the support is the set
/// of configurations (S, D) with S closed in class windA + windB and
/// D = c1 - S for c1 in the windA cycle class; each amplitude is
/// mu(M) * (1/sqrt2)^|S|.
inline MergedState merged_ground_state(const GeometryPtr &g, const std::vector<int> &wind_a, const std::vector<int> &wind_b) {
    check_wind(*g, wind_a);
    check_wind(*g, wind_b);
    std::vector<int> wind_s(wind_a.size());
    for (std::size_t i = 0; i < wind_a.size(); ++i) wind_s[i] = wind_a[i] ^ wind_b[i];
    auto basis = contractible_basis(*g);
    if (2 * basis.size() > 24) throw std::length_error("merged ground state support too large to materialize");
    EdgeSubset rep_s = winding_representative(*g, wind_s);
    EdgeSubset rep_a = winding_representative(*g, wind_a);

    std::vector<EdgeSubset> class_a;
    for_each_in_span(basis, rep_a, [&](const BitVector &c) { class_a.push_back(c); });

    MergedState out(g);
    std::set<EdgeSubset> seen_d;
    for_each_in_span(basis, rep_s, [&](const BitVector &s) {
        seen_d.clear();
        ExactScalar unit = ExactScalar::inv_sqrt2_pow(static_cast<std::uint32_t>(s.count()));
        for (const auto &c1 : class_a) {
            EdgeSubset d = c1 - s;
            if (!seen_d.insert(d).second) continue;
            Spin1Config m(s, d);
            auto sol = solve_and_count(pairing_system(*g, m, wind_a));
            if (!sol.solvable) throw std::logic_error("reachable configuration has no pairing");
            out.set(m, ExactScalar(sol.num_solutions(), 0, 0) * unit);
        }
    });
    return out;
}

/// P(dressed copy A (x) dressed copy B).
inline MergedState merged_excited_state(const GeometryPtr &g, const std::vector<StringOp> &strings_a,
                                        const std::vector<StringOp> &strings_b, const std::vector<int> &wind_a,
                                        const std::vector<int> &wind_b) {
    return merge(dressed_toric_state(g, wind_a, strings_a), dressed_toric_state(g, wind_b, strings_b));
}

/// Amplitude of M in P(A (x) B) by summing over the splittings S1 subset of S:
/// (1/sqrt2)^|S| * sum A(D + S1) B(D + S - S1). Avoids materializing the
/// merged state; cost 2^|S|.
inline ExactScalar amplitude_from_copies(const Spin1Config &m, const ToricState &a, const ToricState &b) {
    auto s = m.singles().ones();
    if (s.size() > 30) throw std::length_error("too many single lines to enumerate splittings");
    ExactScalar acc;
    EdgeSubset c1 = m.doubles();
    EdgeSubset c2 = m.doubles() | m.singles();
    const std::uint64_t total = std::uint64_t{1} << s.size();
    for (std::uint64_t i = 0; i < total; ++i) {
        if (i > 0) {
            auto e = static_cast<std::size_t>(s[static_cast<std::size_t>(std::countr_zero(i))]);
            c1.flip(e);
            c2.flip(e);
        }
        ExactScalar x = a.amplitude(c1);
        if (x.is_zero()) continue;
        ExactScalar y = b.amplitude(c2);
        if (!y.is_zero()) acc += x * y;
    }
    return acc * ExactScalar::inv_sqrt2_pow(static_cast<std::uint32_t>(s.size()));
}

/// First Betti number |E(L)| - |V(L)| + c(L) of a closed edge set.
inline int loop_count(const LatticeGeometry &g, const EdgeSubset &l) {
    if (!is_closed(g, l)) throw std::invalid_argument("loop count requires a closed edge set");
    std::vector<int> parent(static_cast<std::size_t>(g.num_vertices()));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    std::set<int> verts;
    int merges = 0;
    auto ones = l.ones();
    for (int e : ones) {
        const auto &ed = g.edge(e);
        verts.insert(ed.u);
        verts.insert(ed.v);
        int a = find(ed.u);
        int b = find(ed.v);
        if (a != b) {
            parent[static_cast<std::size_t>(a)] = b;
            ++merges;
        }
    }
    // c(L) = |V(L)| - merges, so |E| - |V| + c = |E| - merges.
    return static_cast<int>(ones.size()) - merges;
}

/// Rank of the winding map (cut parities) restricted to the cycle space of a
/// closed set L. Zero when every cycle inside L is contractible. Within one
/// sector pair, mu(L) for a pure single-line L is 2^{n_L - rank}.
inline int loop_winding_rank(const LatticeGeometry &g, const EdgeSubset &l) {
    auto sol = solve_and_count(Gf2System::boundary_system(g, l, VertexParity(static_cast<std::size_t>(g.num_vertices()))));
    std::vector<BitVector> images;
    const auto &cuts = g.cross_cuts();
    if (cuts.empty()) return 0;
    for (const auto &z : sol.null_basis) {
        BitVector w(cuts.size());
        for (std::size_t i = 0; i < cuts.size(); ++i)
            if (z.dot(cuts[i])) w.set(i);
        images.push_back(std::move(w));
    }
    return gf2_rank(images);
}

/// True iff M splits into two closed sets D + S1 and D + (S - S1) for some
/// S1 subset of S (any sectors).
inline bool decomposable(const LatticeGeometry &g, const Spin1Config &m) {
    if (static_cast<int>(m.size()) != g.num_edges()) throw std::invalid_argument("configuration does not belong to this geometry");
    if (!is_closed(g, m.singles())) return false;
    return solve_and_count(pairing_system(g, m, std::nullopt)).solvable;
}

/// Coefficient beta_M in the basis |L_s> whose single-line factors are not
/// normalized (<L_s|L_s> = 2^-|S|): beta = amplitude * 2^{|S|/2}. For pure
/// single-line configurations of the (0,0) ground state this is 2^{n_L}.
inline ExactScalar beta_coefficient(const ExactScalar &amplitude, const Spin1Config &m) {
    std::uint32_t n = static_cast<std::uint32_t>(m.singles().count());
    // (sqrt2)^n = 2^{n/2} or sqrt2 * 2^{(n-1)/2}
    ExactScalar f = (n % 2 == 0) ? ExactScalar(BigInt(1) << (n / 2), 0, 0) : ExactScalar(0, BigInt(1) << (n / 2), 0);
    return amplitude * f;
}

}  // namespace loopgas

#endif
