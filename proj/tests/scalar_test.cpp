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

#include "loopgas/scalar.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using loopgas::BigInt;
using loopgas::ExactRatio;
using loopgas::ExactScalar;

TEST(scalar, products_of_roots) {
    EXPECT_EQ(ExactScalar::inv_sqrt2() * ExactScalar::inv_sqrt2(), ExactScalar::half());
    EXPECT_EQ(ExactScalar::sqrt2() * ExactScalar::sqrt2(), ExactScalar(2));
    EXPECT_EQ(ExactScalar::sqrt2() * ExactScalar::inv_sqrt2(), ExactScalar(1));
}

TEST(scalar, sum_cancels_irrational_part) {
    ExactScalar x(1, 1, 1);
    ExactScalar y(1, -1, 1);
    EXPECT_EQ(x + y, ExactScalar(1));
    EXPECT_TRUE((x - x).is_zero());
}

TEST(scalar, canonical_form) {
    ExactScalar x(BigInt(4), BigInt(2), 3);
    EXPECT_EQ(x.k(), 2u);
    EXPECT_EQ(x.a(), 2);
    EXPECT_EQ(x.b(), 1);
    ExactScalar z(BigInt(0), BigInt(0), 7);
    EXPECT_EQ(z.k(), 0u);
    EXPECT_EQ(z, ExactScalar());
}

TEST(scalar, inv_sqrt2_powers) {
    ExactScalar acc(1);
    for (std::uint32_t n = 0; n < 20; ++n) {
        EXPECT_EQ(ExactScalar::inv_sqrt2_pow(n), acc) << n;
        acc *= ExactScalar::inv_sqrt2();
    }
}

TEST(scalar, to_double_within_one_ulp) {
    double r = ExactScalar::inv_sqrt2().to_double();
    EXPECT_LE(std::abs(r - 0.7071067811865476), std::nextafter(0.7071067811865476, 1.0) - 0.7071067811865476);
    EXPECT_EQ(ExactScalar().to_double(), 0.0);
    // 3 - 2 sqrt2 = 0.171572875253809902396...; the naive double expression loses bits.
    EXPECT_DOUBLE_EQ(ExactScalar(3, -2, 0).to_double(), 0.1715728752538099024);
}

TEST(scalar, to_double_survives_cancellation) {
    // (1 + sqrt2)^20 * (sqrt2 - 1)^20 == 1, and (sqrt2 - 1)^20 is tiny.
    ExactScalar p(1);
    ExactScalar q(-1, 1, 0);
    for (int i = 0; i < 20; ++i) p *= q;
    double expect = std::pow(std::sqrt(2.0) - 1.0, 20);
    EXPECT_NEAR(p.to_double() / expect, 1.0, 1e-14);
}

TEST(scalar, power_of_two_scaling_is_exact) {
    ExactScalar x(3, 5, 4);
    double base = x.to_double();
    for (int n = 0; n <= 30; ++n) EXPECT_EQ(x.scaled_pow2(n).to_double(), std::ldexp(base, n));
    EXPECT_EQ(x.scaled_pow2(-3).scaled_pow2(3), x);
}

TEST(scalar, exact_sign) {
    EXPECT_EQ(ExactScalar(3, -2, 0).sign(), 1);   // 3 > 2 sqrt2
    EXPECT_EQ(ExactScalar(-3, 2, 0).sign(), -1);
    EXPECT_EQ(ExactScalar(2, -2, 5).sign(), -1);  // 2 < 2 sqrt2
    EXPECT_EQ(ExactScalar().sign(), 0);
}

TEST(scalar, ring_axioms_on_random_triples) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> val(-50, 50);
    std::uniform_int_distribution<int> kd(0, 6);
    auto draw = [&] { return ExactScalar(val(rng), val(rng), static_cast<std::uint32_t>(kd(rng))); };
    for (int t = 0; t < 500; ++t) {
        ExactScalar x = draw(), y = draw(), z = draw();
        EXPECT_EQ((x * y) * z, x * (y * z));
        EXPECT_EQ((x + y) + z, x + (y + z));
        EXPECT_EQ(x * (y + z), x * y + x * z);
        EXPECT_EQ(x * y, y * x);
        EXPECT_TRUE((x - x).is_zero());
        ExactScalar renorm(x.a(), x.b(), x.k());
        EXPECT_EQ(renorm, x);
    }
}

TEST(scalar, large_values_do_not_overflow) {
    ExactScalar x(BigInt(1) << 200, 0, 0);
    ExactScalar y = x * x;
    EXPECT_EQ(y.a(), BigInt(1) << 400);
}

TEST(scalar, ratio_compares_by_cross_multiplication) {
    ExactRatio r{ExactScalar(2), ExactScalar::sqrt2()};
    EXPECT_TRUE(r.equals(ExactScalar::sqrt2()));
    EXPECT_EQ(r.sign(), 1);
    ExactRatio s{ExactScalar::sqrt2(), ExactScalar(1)};
    EXPECT_TRUE(r == s);
    EXPECT_NEAR(r.to_double(), std::sqrt(2.0), 1e-15);
}
