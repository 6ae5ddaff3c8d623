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

#include "loopgas/experiments.hpp"

#include <gtest/gtest.h>

using namespace loopgas;

namespace {

ExperimentSpec make(const std::string &name, Topology t) {
    ExperimentSpec s;
    s.name = name;
    s.topology = t;
    return s;
}

const Assertion *find(const ExperimentReport &r, const std::string &prefix) {
    for (const auto &a : r.assertions)
        if (a.name.rfind(prefix, 0) == 0) return &a;
    return nullptr;
}

}  // namespace

TEST(experiments, exact_from_double) {
    EXPECT_EQ(exact_from_double(1.0), ExactScalar(1));
    EXPECT_EQ(exact_from_double(0.375), ExactScalar(3, 0, 3));
    EXPECT_EQ(exact_from_double(-6.0), ExactScalar(-6));
    EXPECT_DOUBLE_EQ(exact_from_double(0.1).to_double(), 0.1);
    EXPECT_THROW(exact_from_double(std::nan("")), std::invalid_argument);
}

TEST(experiments, validation_rejects_bad_specs) {
    EXPECT_THROW(validate(make("nonsense", Topology::torus(2, 2))), std::invalid_argument);
    EXPECT_THROW(validate(make("braiding", Topology::torus(2, 2))), std::invalid_argument);
    EXPECT_THROW(validate(make("appendixA-check", Topology::sphere(4, 4))), std::invalid_argument);
    auto s = make("fusion", Topology::torus(4, 2));
    s.assignment = "maybe";
    EXPECT_THROW(validate(s), std::invalid_argument);
    s = make("degeneracy", Topology::torus(2, 2));
    s.j = -1;
    EXPECT_THROW(validate(s), std::invalid_argument);
    s = make("degeneracy", Topology::torus(3, 3));
    s.basis = BasisKind::Full;
    EXPECT_THROW(validate(s), std::length_error);
    s = make("groundstate-check", Topology::torus(2, 2));
    s.sector_a = std::vector<int>{1, 0, 1};
    EXPECT_THROW(validate(s), std::invalid_argument);
    EXPECT_THROW(validate(make("groundstate-check", Topology::torus(5, 4))), std::length_error);
    EXPECT_NO_THROW(validate(make("commutators", Topology::torus(2, 2))));
}

TEST(experiments, spec_json_roundtrip) {
    auto s = make("fusion", Topology::torus(4, 2));
    s.sector_a = std::vector<int>{0, 1};
    s.assignment = "same";
    s.j = 2.5;
    auto back = spec_from_json(Json::parse(to_json(s).dump()));
    EXPECT_EQ(back.name, s.name);
    EXPECT_EQ(back.topology, s.topology);
    EXPECT_EQ(back.sector_a, s.sector_a);
    EXPECT_EQ(back.assignment, "same");
    EXPECT_EQ(back.j, 2.5);
    auto batch = specs_from_json(Json::parse(R"({"experiments": [{"name": "commutators", "topology": "torus", "lx": 3, "ly": 2}]})"));
    ASSERT_EQ(batch.size(), 1u);
    EXPECT_EQ(batch[0].topology, Topology::torus(3, 2));
}

TEST(experiments, groundstate_check_passes) {
    for (auto t : {Topology::sphere(2, 2), Topology::annulus(2, 2), Topology::torus(2, 2)}) {
        auto r = run_experiment(make("groundstate-check", t));
        EXPECT_TRUE(r.passed()) << r.to_json().dump(2);
    }
}

TEST(experiments, degeneracy_records_measured_values) {
    auto r = run_experiment(make("degeneracy", Topology::torus(2, 2)));
    EXPECT_EQ(r.results["kernel_dim"], 15);
    EXPECT_EQ(r.results["expected_kernel_dim"], 10);
    EXPECT_EQ(r.results["gram_rank"], 10);
    EXPECT_EQ(r.results["kernel_directions_outside_merged_span"], 5);
    EXPECT_FALSE(find(r, "kernel_dim equals expected")->passed);
    EXPECT_TRUE(find(r, "merged states lie in the computed kernel")->passed);
    EXPECT_TRUE(find(r, "next eigenvalue")->passed);
    EXPECT_FALSE(r.passed());
    EXPECT_FALSE(r.warnings.empty());

    auto sphere = run_experiment(make("degeneracy", Topology::sphere(2, 2)));
    EXPECT_TRUE(sphere.passed()) << sphere.to_json().dump(2);
}

TEST(experiments, reports_are_reproducible) {
    auto s = make("degeneracy", Topology::sphere(2, 2));
    auto a = run_experiment(s).to_json(false).dump();
    auto b = run_experiment(s).to_json(false).dump();
    EXPECT_EQ(a, b);
    EXPECT_TRUE(run_experiment(s).to_json().contains("timing"));
}

TEST(experiments, beta_verify_reports_wrapping_violations) {
    auto r = run_experiment(make("beta-verify", Topology::torus(3, 2)));
    EXPECT_TRUE(find(r, "merge of toric ground states")->passed);
    EXPECT_TRUE(find(r, "amplitude = mu")->passed);
    EXPECT_TRUE(find(r, "pure single-line amplitude = 2^{n_L - r_L}")->passed);
    EXPECT_FALSE(find(r, "pure single-line amplitude = 2^{n_L} ")->passed);
    EXPECT_GT(r.results["literal_law_violations"].get<int>(), 0);

    auto s = make("beta-verify", Topology::torus(2, 2));
    s.sector_a = std::vector<int>{1, 0};
    s.sector_b = std::vector<int>{0, 1};
    EXPECT_TRUE(run_experiment(s).passed());
}

TEST(experiments, excitation_energy_passes) {
    auto r = run_experiment(make("excitation-energy", Topology::torus(3, 2)));
    EXPECT_TRUE(r.passed()) << r.to_json().dump(2);
    auto s = make("excitation-energy", Topology::torus(2, 2));
    s.j = 0.75;
    EXPECT_TRUE(run_experiment(s).passed());
}

TEST(experiments, braiding_signs) {
    auto r = run_experiment(make("braiding", Topology::torus(3, 3)));
    EXPECT_TRUE(r.passed()) << r.to_json().dump(2);
    EXPECT_EQ(r.results["same"]["method"], "materialized overlap");
    EXPECT_EQ(r.results["same"]["ratio"]["value"], -1.0);
    EXPECT_EQ(r.results["different"]["ratio"]["value"], 1.0);
}

TEST(experiments, fusion_channels) {
    auto r = run_experiment(make("fusion", Topology::torus(4, 2)));
    EXPECT_TRUE(r.passed()) << r.to_json().dump(2);
    EXPECT_GT(r.results["different"]["q2"]["value"].get<double>(), 0.0);
}

TEST(experiments, assignment_rank) {
    auto r = run_experiment(make("assignment-rank", Topology::torus(4, 2)));
    EXPECT_TRUE(r.passed()) << r.to_json().dump(2);
}

TEST(experiments, duality_and_commutators) {
    EXPECT_TRUE(run_experiment(make("duality-check", Topology::torus(2, 2))).passed());
    auto c = run_experiment(make("commutators", Topology::torus(2, 2)));
    EXPECT_TRUE(c.passed()) << c.to_json().dump(2);
}

TEST(experiments, non_decomposable_and_staircase) {
    auto a = run_experiment(make("appendixA-check", Topology::torus(4, 4)));
    EXPECT_TRUE(a.passed()) << a.to_json().dump(2);
    auto p = run_experiment(make("psi6-psi7", Topology::torus(4, 4)));
    EXPECT_TRUE(p.passed()) << p.to_json().dump(2);
}

TEST(experiments, gap_estimate_reports_value) {
    auto r = run_experiment(make("gap-estimate", Topology::annulus(2, 2)));
    EXPECT_TRUE(r.passed());
    EXPECT_NEAR(r.results["gap"].get<double>(), 0.0573642, 1e-6);
}
