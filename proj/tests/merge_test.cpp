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

#include "loopgas/merge.hpp"

#include <gtest/gtest.h>

#include "loopgas/configs.hpp"

using namespace loopgas;

namespace {

// mu(M) by enumerating every S1 subset of S directly.
std::uint64_t brute_multiplicity(const LatticeGeometry &g, const Spin1Config &m, const std::vector<int> &wa,
                                 const std::vector<int> &wb) {
    auto s = m.singles().ones();
    std::uint64_t n = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s.size()); ++mask) {
        EdgeSubset s1 = g.empty_subset();
        for (std::size_t i = 0; i < s.size(); ++i)
            if ((mask >> i) & 1U) s1.set(static_cast<std::size_t>(s[i]));
        EdgeSubset c1 = m.doubles() | s1;
        EdgeSubset c2 = m.doubles() | (m.singles() - s1);
        if (is_closed(g, c1) && is_closed(g, c2) && g.winding(c1) == wa && g.winding(c2) == wb) ++n;
    }
    return n;
}

bool brute_decomposable(const LatticeGeometry &g, const Spin1Config &m) {
    auto s = m.singles().ones();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s.size()); ++mask) {
        EdgeSubset s1 = g.empty_subset();
        for (std::size_t i = 0; i < s.size(); ++i)
            if ((mask >> i) & 1U) s1.set(static_cast<std::size_t>(s[i]));
        if (is_closed(g, m.doubles() | s1) && is_closed(g, m.doubles() | (m.singles() - s1))) return true;
    }
    return false;
}

bool is_power_of_two(const BigInt &x) { return x > 0 && (x & (x - 1)) == 0; }

}  // namespace

TEST(merge, spin1_config_roundtrip) {
    auto c = Spin1Config::from_ternary("0120210");
    EXPECT_EQ(c.to_ternary(), "0120210");
    EXPECT_EQ(c.singles().ones(), (std::vector<int>{1, 5}));
    EXPECT_EQ(c.doubles().ones(), (std::vector<int>{2, 4}));
    EXPECT_THROW(Spin1Config::from_ternary("013"), std::invalid_argument);
    EXPECT_THROW(Spin1Config(BitVector(3, {1}), BitVector(3, {1})), std::invalid_argument);
}

TEST(merge, vacuum_merges_to_vacuum) {
    auto g = build_lattice(Topology::torus(2, 2));
    ToricState vac(g);
    vac.set(g->empty_subset(), ExactScalar(1));
    auto m = merge(vac, vac);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m.amplitude(Spin1Config(8)), ExactScalar(1));
}

TEST(merge, single_plaquette_loop_has_beta_two) {
    auto g = build_lattice(Topology::sphere(1, 1));
    auto phi = toric_ground_state(g, {});
    auto psi = merge(phi, phi);
    Spin1Config single(g->plaquette_boundary(0), g->empty_subset());
    Spin1Config dbl(g->empty_subset(), g->plaquette_boundary(0));
    EXPECT_EQ(psi.amplitude(Spin1Config(4)), ExactScalar(1));
    EXPECT_EQ(psi.amplitude(dbl), ExactScalar(1));
    EXPECT_EQ(psi.amplitude(single), ExactScalar::half());  // 2 * (1/sqrt2)^4
    EXPECT_EQ(beta_coefficient(psi.amplitude(single), single), ExactScalar(2));
}

TEST(merge, counting_construction_matches_oracle) {
    for (auto topo : {Topology::torus(2, 2), Topology::torus(3, 2), Topology::annulus(2, 2), Topology::sphere(2, 2)}) {
        auto g = build_lattice(topo);
        for (const auto &wa : all_windings(*g)) {
            for (const auto &wb : all_windings(*g)) {
                auto oracle = merge(toric_ground_state(g, wa), toric_ground_state(g, wb));
                auto direct = merged_ground_state(g, wa, wb);
                EXPECT_EQ(direct, oracle);
                for (const auto &[m, a] : direct) {
                    EXPECT_TRUE(decomposable(*g, m));
                    EXPECT_TRUE(is_power_of_two(multiplicity(*g, m, wa, wb)));
                    EXPECT_EQ(merged_amplitude(*g, m, wa, wb), a);
                }
            }
        }
    }
}

TEST(merge, multiplicity_matches_exhaustive_oracle) {
    auto g = build_lattice(Topology::torus(3, 2));
    for (const auto &wa : all_windings(*g)) {
        for (const auto &wb : all_windings(*g)) {
            auto psi = merged_ground_state(g, wa, wb);
            int checked = 0;
            for (const auto &[m, a] : psi) {
                if (++checked > 200) break;
                EXPECT_EQ(multiplicity(*g, m, wa, wb), BigInt(brute_multiplicity(*g, m, wa, wb)));
            }
        }
    }
}

TEST(merge, merge_is_symmetric) {
    auto g = build_lattice(Topology::torus(2, 2));
    auto a = toric_ground_state(g, {1, 0});
    auto b = toric_ground_state(g, {0, 0});
    EXPECT_EQ(merge(a, b), merge(b, a));
    auto x = string_operator(a, StringKind::X, shortest_path(*g, 0, 3));
    EXPECT_EQ(merge(x, b), merge(b, x));
}

TEST(merge, loop_count_is_betti_number) {
    auto g = build_lattice(Topology::torus(4, 4));
    EXPECT_EQ(loop_count(*g, g->empty_subset()), 0);
    auto p0 = g->plaquette_boundary(g->plaquette_at(0, 0));
    auto p1 = g->plaquette_boundary(g->plaquette_at(1, 0));
    auto p2 = g->plaquette_boundary(g->plaquette_at(2, 2));
    auto diag = g->plaquette_boundary(g->plaquette_at(1, 1));
    EXPECT_EQ(loop_count(*g, p0), 1);
    EXPECT_EQ(loop_count(*g, p0 | p2), 2);
    EXPECT_EQ(loop_count(*g, p0 ^ p1), 1);
    // Two plaquettes touching at a corner: 8 edges, 7 vertices, 1 component.
    EXPECT_EQ(loop_count(*g, p0 | diag), 2);
    // Keeping the shared edge of adjacent plaquettes leaves two odd vertices.
    EXPECT_THROW(loop_count(*g, p0 | p1), std::invalid_argument);
    EdgeSubset open = g->empty_subset();
    open.set(0);
    EXPECT_THROW(loop_count(*g, open), std::invalid_argument);
    // Exhaustive check: closed subsets of L number 2^{n_L}.
    for (const auto &l : {p0 | diag, p0 | p2, p0 ^ p1}) {
        auto sol = solve_and_count(Gf2System::boundary_system(*g, l, VertexParity(16)));
        EXPECT_EQ(sol.num_solutions(), BigInt(1) << loop_count(*g, l));
    }
}

TEST(merge, pure_single_line_amplitude_law) {
    for (auto topo : {Topology::torus(2, 2), Topology::torus(3, 2), Topology::sphere(2, 2), Topology::annulus(2, 2)}) {
        auto g = build_lattice(topo);
        std::vector<int> zero(static_cast<std::size_t>(g->num_winding_classes()), 0);
        auto psi = merged_ground_state(g, zero, zero);
        int contractible_only = 0;
        for (const auto &[m, a] : psi) {
            if (m.doubles().any()) continue;
            int n = loop_count(*g, m.singles());
            int r = loop_winding_rank(*g, m.singles());
            auto unit = ExactScalar::inv_sqrt2_pow(static_cast<std::uint32_t>(m.singles().count()));
            // Cycles of L that wind are excluded by the sector constraint.
            EXPECT_EQ(a, ExactScalar(BigInt(1) << (n - r), 0, 0) * unit) << m.to_ternary();
            if (r == 0) {
                ++contractible_only;
                EXPECT_EQ(beta_coefficient(a, m), ExactScalar(BigInt(1) << n, 0, 0));
            }
        }
        EXPECT_GT(contractible_only, 1);
    }
}

TEST(merge, wrapping_pair_has_reduced_multiplicity) {
    auto g = build_lattice(Topology::torus(3, 2));
    // Two parallel wrapping loops: n_L = 2, but only the splittings into
    // non-winding halves survive in the (0,0)/(0,0) sector.
    EdgeSubset l = g->noncontractible()[0];
    for (int x = 0; x < 3; ++x) l.flip(static_cast<std::size_t>(horizontal_edge(*g, x, 1)));
    Spin1Config m(l, g->empty_subset());
    EXPECT_EQ(loop_count(*g, l), 2);
    EXPECT_EQ(loop_winding_rank(*g, l), 1);
    EXPECT_EQ(multiplicity(*g, m, {0, 0}, {0, 0}), 2);
    EXPECT_EQ(multiplicity(*g, m, {1, 0}, {1, 0}), 2);
}

TEST(merge, decomposability_examples) {
    auto g = build_lattice(Topology::torus(4, 4));
    EXPECT_TRUE(decomposable(*g, Spin1Config(32)));
    Spin1Config odd(32);
    odd.set(0, kSingleLine);
    EXPECT_FALSE(decomposable(*g, odd));

    auto bad = configs::three_attachment_configuration(*g);
    EXPECT_FALSE(decomposable(*g, bad));
    EXPECT_FALSE(brute_decomposable(*g, bad));
    EXPECT_FALSE(solve_and_count(Gf2System::boundary_system(*g, bad.singles(), boundary(*g, bad.doubles()))).solvable);

    auto good = configs::rectangle_with_rung(*g);
    EXPECT_TRUE(decomposable(*g, good));
    EXPECT_TRUE(brute_decomposable(*g, good));
    EXPECT_EQ(multiplicity(*g, good, {0, 0}, {0, 0}), BigInt(brute_multiplicity(*g, good, {0, 0}, {0, 0})));
    EXPECT_EQ(merged_amplitude(*g, good, {0, 0}, {0, 0}), ExactScalar(1, 0, 2));
}

TEST(merge, staircase_distinguishes_sector_pairs) {
    auto g = build_lattice(Topology::torus(4, 4));
    auto m = configs::staircase_configuration(*g);
    EXPECT_EQ(m.singles().count(), 8u);
    EXPECT_EQ(multiplicity(*g, m, {1, 1}, {0, 0}), 1);
    EXPECT_EQ(multiplicity(*g, m, {1, 0}, {0, 1}), 0);
    EXPECT_EQ(brute_multiplicity(*g, m, {1, 0}, {0, 1}), 0u);
    EXPECT_EQ(brute_multiplicity(*g, m, {1, 1}, {0, 0}), 1u);
}

TEST(merge, amplitude_from_copies_matches_merge) {
    auto g = build_lattice(Topology::torus(3, 2));
    auto a = string_operator(toric_ground_state(g, {0, 0}), StringKind::X, shortest_path(*g, 0, 4));
    auto b = string_operator(toric_ground_state(g, {1, 0}), StringKind::Z, shortest_dual_path(*g, 0, 2));
    auto psi = merge(a, b);
    for (const auto &[m, amp] : psi) EXPECT_EQ(amplitude_from_copies(m, a, b), amp);
}

TEST(merge, excited_state_vertex_parities) {
    auto g = build_lattice(Topology::torus(3, 2));
    std::vector<StringOp> strings{{StringKind::X, shortest_path(*g, 0, 4)}};
    auto psi = merged_excited_state(g, strings, {}, {0, 0}, {0, 0});
    for (const auto &[m, a] : psi) EXPECT_EQ(boundary(*g, m.singles()).ones(), (std::vector<int>{0, 4}));
    EXPECT_EQ(merged_excited_state(g, {}, {}, {0, 1}, {1, 1}), merged_ground_state(g, {0, 1}, {1, 1}));
}
