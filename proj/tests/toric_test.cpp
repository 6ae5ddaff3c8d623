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

#include "loopgas/toric.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace loopgas;

TEST(toric, ground_state_support_sizes) {
    auto s = build_lattice(Topology::sphere(2, 2));
    auto phi = toric_ground_state(s, {});
    EXPECT_EQ(phi.size(), std::size_t{1} << (s->num_edges() - s->num_vertices() + 1));
    for (const auto &[c, a] : phi) {
        EXPECT_EQ(a, ExactScalar(1));
        EXPECT_TRUE(is_closed(*s, c));
    }
    auto t = build_lattice(Topology::torus(2, 2));
    EXPECT_EQ(toric_ground_state(t, {0, 0}).size(), 8u);
    EXPECT_THROW(toric_ground_state(t, {0}), std::invalid_argument);
    EXPECT_THROW(toric_ground_state(t, {0, 2}), std::invalid_argument);
}

TEST(toric, sectors_have_disjoint_supports) {
    auto t = build_lattice(Topology::torus(3, 2));
    auto a = toric_ground_state(t, {0, 0});
    auto b = toric_ground_state(t, {1, 0});
    for (const auto &[c, amp] : a) EXPECT_TRUE(b.amplitude(c).is_zero());
    EXPECT_TRUE(a.inner(b).is_zero());
}

TEST(toric, stabilizers_fix_ground_states) {
    for (auto topo : {Topology::torus(3, 2), Topology::annulus(2, 2), Topology::sphere(2, 2)}) {
        auto g = build_lattice(topo);
        for (const auto &w : all_windings(*g)) {
            auto phi = toric_ground_state(g, w);
            for (int v = 0; v < g->num_vertices(); ++v) EXPECT_EQ(stabilizer_eigenvalue(phi, Stabilizer::Vertex, v), 1);
            for (int p = 0; p < g->num_plaquettes(); ++p)
                EXPECT_EQ(stabilizer_eigenvalue(phi, Stabilizer::Plaquette, p), 1);
        }
    }
}

TEST(toric, open_x_string_excites_its_endpoints) {
    auto g = build_lattice(Topology::torus(4, 4));
    int e1 = g->vertex_at(0, 0), e2 = g->vertex_at(2, 1);
    auto phi = string_operator(toric_ground_state(g, {0, 0}), StringKind::X, shortest_path(*g, e1, e2));
    for (int v = 0; v < g->num_vertices(); ++v)
        EXPECT_EQ(stabilizer_eigenvalue(phi, Stabilizer::Vertex, v), (v == e1 || v == e2) ? -1 : 1) << v;
    for (int p = 0; p < g->num_plaquettes(); ++p) EXPECT_EQ(stabilizer_eigenvalue(phi, Stabilizer::Plaquette, p), 1);
}

TEST(toric, open_z_string_excites_its_plaquettes) {
    auto g = build_lattice(Topology::torus(3, 3));
    int p1 = g->plaquette_at(0, 0), p2 = g->plaquette_at(1, 2);
    auto phi = string_operator(toric_ground_state(g, {0, 0}), StringKind::Z, shortest_dual_path(*g, p1, p2));
    for (int p = 0; p < g->num_plaquettes(); ++p)
        EXPECT_EQ(stabilizer_eigenvalue(phi, Stabilizer::Plaquette, p), (p == p1 || p == p2) ? -1 : 1);
}

TEST(toric, closed_contractible_x_string_is_identity) {
    auto g = build_lattice(Topology::torus(3, 3));
    auto phi = toric_ground_state(g, {1, 0});
    auto loop = g->plaquette_boundary(0) ^ g->plaquette_boundary(1);
    EXPECT_EQ(string_operator(phi, StringKind::X, loop), phi);
}

TEST(toric, z_loop_around_one_endpoint_gives_minus_one) {
    auto g = build_lattice(Topology::torus(4, 4));
    int e1 = g->vertex_at(1, 1), e2 = g->vertex_at(3, 1);
    auto phi = string_operator(toric_ground_state(g, {0, 0}), StringKind::X, shortest_path(*g, e1, e2));
    auto around = g->vertex_star(e1);
    EXPECT_EQ(string_operator(phi, StringKind::Z, around), phi.scaled(ExactScalar(-1)));
    auto both = g->vertex_star(e1) ^ g->vertex_star(e2);
    EXPECT_EQ(string_operator(phi, StringKind::Z, both), phi);
}

TEST(toric, flux_detector_reads_winding) {
    auto g = build_lattice(Topology::annulus(3, 2));
    auto cut = g->cross_cuts()[0];
    auto phi = toric_ground_state(g, {0});
    auto tphi = toric_ground_state(g, {1});
    EXPECT_EQ(flux_detector(phi, cut), FluxValue::Plus);
    EXPECT_EQ(flux_detector(tphi, cut), FluxValue::Minus);
    EXPECT_EQ(flux_detector(phi + tphi, cut), FluxValue::Mixed);
    EXPECT_EQ(string_operator(phi, StringKind::X, g->noncontractible()[0]), tphi);
    EXPECT_THROW(flux_detector(ToricState(g), cut), std::invalid_argument);
}

TEST(toric, stabilizers_commute_on_random_states) {
    auto g = build_lattice(Topology::torus(3, 2));
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> amp(-3, 3);
    for (int t = 0; t < 20; ++t) {
        ToricState s(g);
        for (int i = 0; i < 30; ++i) {
            EdgeSubset c = g->empty_subset();
            for (int e = 0; e < g->num_edges(); ++e)
                if (rng() & 1U) c.set(static_cast<std::size_t>(e));
            s.add(c, ExactScalar(amp(rng)));
        }
        int v = static_cast<int>(rng() % 6), p = static_cast<int>(rng() % 6);
        auto ab = apply_stabilizer(apply_stabilizer(s, Stabilizer::Vertex, v), Stabilizer::Plaquette, p);
        auto ba = apply_stabilizer(apply_stabilizer(s, Stabilizer::Plaquette, p), Stabilizer::Vertex, v);
        EXPECT_EQ(ab, ba);
    }
}

TEST(toric, hadamard_is_an_involution) {
    auto g = build_lattice(Topology::torus(2, 2));
    auto phi = toric_ground_state(g, {1, 0});
    auto h = hadamard_transform(phi);
    EXPECT_EQ(hadamard_transform(h), phi);
    EXPECT_EQ(h.norm_squared(), phi.norm_squared());
}

TEST(toric, enclosed_vertices_of_a_star_sum) {
    auto g = build_lattice(Topology::torus(4, 4));
    int a = g->vertex_at(1, 1), b = g->vertex_at(2, 1);
    auto r = enclosed_vertices(*g, g->vertex_star(a) ^ g->vertex_star(b));
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->ones(), (std::vector<int>{a, b}));
    EXPECT_FALSE(enclosed_vertices(*g, g->cross_cuts()[0]).has_value());
}
