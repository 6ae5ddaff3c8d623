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

#include "loopgas/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace loopgas;

TEST(io, scalar_roundtrip) {
    BigInt big = BigInt(1) << 200;
    for (const auto &x : {ExactScalar(0), ExactScalar(-7), ExactScalar::inv_sqrt2(), ExactScalar(big + 3, -big, 9)}) {
        auto j = to_json(x);
        EXPECT_EQ(scalar_from_json(Json::parse(j.dump())), x);
    }
    EXPECT_EQ(to_json(ExactScalar::inv_sqrt2()).dump(), R"(["0","1",1])");
    EXPECT_EQ(scalar_from_json(Json::parse("[3, 1, 2]")), ExactScalar(3, 1, 2));
    EXPECT_THROW(scalar_from_json(Json::parse(R"(["1x","0",0])")), std::invalid_argument);
    EXPECT_THROW(scalar_from_json(Json::parse(R"(["1","0"])")), std::invalid_argument);
    EXPECT_THROW(scalar_from_json(Json::parse(R"(["1","0",-1])")), std::invalid_argument);
}

TEST(io, geometry_document) {
    for (auto t : {Topology::torus(3, 2), Topology::annulus(2, 2), Topology::sphere(2, 3)}) {
        auto g = build_lattice(t);
        auto j = to_json(*g);
        EXPECT_EQ(j["schema"], "loopgas.geometry");
        EXPECT_EQ(j["num_edges"], g->num_edges());
        EXPECT_EQ(j["edges"].size(), static_cast<std::size_t>(g->num_edges()));
        EXPECT_EQ(j["cross_cuts"].size(), static_cast<std::size_t>(g->num_winding_classes()));
        auto back = geometry_from_json(Json::parse(j.dump()));
        EXPECT_EQ(back->hash(), g->hash());
        j["hash"] = "0000";
        EXPECT_THROW(geometry_from_json(j), std::invalid_argument);
    }
    auto d = dual_lattice(*build_lattice(Topology::torus(2, 3)));
    EXPECT_EQ(geometry_from_json(to_json(*d))->hash(), d->hash());
}

TEST(io, subset_roundtrip) {
    auto g = build_lattice(Topology::torus(3, 3));
    auto s = g->plaquette_boundary(4);
    EXPECT_EQ(subset_from_json(to_json(s, *g), *g), s);
    auto other = build_lattice(Topology::torus(3, 2));
    EXPECT_THROW(subset_from_json(to_json(s, *g), *other), std::invalid_argument);
}

TEST(io, state_roundtrip) {
    auto g = build_lattice(Topology::torus(2, 2));
    auto phi = string_operator(toric_ground_state(g, {1, 0}), StringKind::Z, shortest_dual_path(*g, 0, 3));
    auto j = to_json(phi);
    EXPECT_EQ(toric_state_from_json(Json::parse(j.dump()), g), phi);
    EXPECT_EQ(state_geometry_from_json(j)->hash(), g->hash());

    auto psi = merged_ground_state(g, {0, 1}, {1, 1});
    auto mj = to_json(psi);
    EXPECT_EQ(mj["entries"][0][0].get<std::string>().size(), 8u);
    EXPECT_EQ(merged_state_from_json(Json::parse(mj.dump()), g), psi);
    EXPECT_THROW(merged_state_from_json(mj, build_lattice(Topology::sphere(2, 2))), std::invalid_argument);
    EXPECT_THROW(toric_state_from_json(mj, g), std::invalid_argument);
    mj["version"] = 2;
    EXPECT_THROW(merged_state_from_json(mj, g), std::invalid_argument);
}

TEST(io, operator_roundtrip) {
    auto g = build_lattice(Topology::torus(2, 2));
    auto op = q2_vertex(g, 1) * q2_plaquette(g, 0) + ExactScalar(3) * plaquette_op(g, PlaquetteKind::B2, 2);
    auto back = operator_from_json(Json::parse(to_json(op).dump()), g);
    EXPECT_TRUE(operators_equal(op, back));
    EXPECT_THROW(operator_from_json(to_json(op), build_lattice(Topology::torus(3, 2))), std::invalid_argument);
}

TEST(io, hamiltonian_description) {
    auto g = build_lattice(Topology::sphere(2, 2));
    ExactScalar j(BigInt(3), 0, 1);
    auto d = hamiltonian_description(*g, j);
    EXPECT_EQ(d["terms"].size(), static_cast<std::size_t>(2 * (g->num_vertices() + g->num_plaquettes())));
    EXPECT_EQ(d["terms"][0]["kind"], "Q1v");
    auto h = operator_from_description(Json::parse(d.dump()), g);
    auto psi = merged_excited_state(g, {{StringKind::X, shortest_path(*g, 0, 4)}}, {}, {}, {});
    EXPECT_EQ(apply(h, psi), apply(hamiltonian(g, j), psi));
    EXPECT_THROW(parse_projector_kind("Q3v"), std::invalid_argument);
}

TEST(io, triplets_match_float_matrix) {
    auto g = build_lattice(Topology::torus(2, 2));
    auto basis = SpinBasis::sector(g);
    auto h = hamiltonian(g);
    std::stringstream ss;
    write_triplets(ss, h, basis);
    auto trips = read_triplets(ss);
    HamiltonianMap map(h, basis, true);
    std::size_t nnz = 0;
    for (std::uint64_t i = 0; i < basis.dim(); ++i) nnz += map.row(i).size();
    EXPECT_EQ(trips.size(), nnz);
    for (std::size_t t = 0; t < trips.size(); t += 97) {
        double expect = 0;
        for (const auto &[c, v] : map.row(trips[t].row))
            if (c == trips[t].col) expect = v;
        EXPECT_NEAR(trips[t].value.to_double(), expect, 1e-14);
    }
    std::istringstream bad("0 0 1 0 0\n");
    EXPECT_THROW(read_triplets(bad), std::invalid_argument);
}

TEST(io, spectral_report_outputs) {
    auto g = build_lattice(Topology::sphere(2, 2));
    SpectralOptions o;
    o.k = 3;
    auto r = lowest_eigenvalues(hamiltonian(g), o);
    auto j = to_json(r);
    EXPECT_EQ(j["kernel_dim"], 1);
    EXPECT_EQ(j["eigenvalues"].size(), 3u);
    EXPECT_EQ(j["basis"], "sector");
    std::ostringstream csv;
    write_eigenvalue_csv(csv, r);
    std::string text = csv.str();
    EXPECT_EQ(text.rfind("index,eigenvalue,residual,in_kernel\n", 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}
