/*
 *  Copyright 2026 The symdisc Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "symdisc/lower_bounds.hpp"

using namespace symdisc;

namespace {

Cx random_in_disc(std::mt19937_64& rng, double r) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(r * std::sqrt(u(rng)), 2.0 * M_PI * u(rng));
}

Point random_member(std::mt19937_64& rng, int n, double r = 0.9) {
    RootMultiset x;
    for (int i = 0; i < n; ++i) x.roots.push_back(random_in_disc(rng, r));
    return sigma(x);
}

Direction random_direction(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Cx> x;
    for (int j = 0; j < n; ++j) x.emplace_back(g(rng), g(rng));
    return Direction(x);
}

}  // namespace

TEST(Rho, Examples) {
    for (int n = 1; n <= 6; ++n)
        for (int k = 1; k <= n; ++k) EXPECT_NEAR(rho(Direction::axis(n, k)).value, double(k) / n, 1e-15);
    EXPECT_EQ(rho(Direction(std::vector<Cx>(3, 0.0))).value, 0.0);
    EXPECT_NEAR(rho(Direction({1.0, 0.0, 2.0})).value, 7.0 / 3.0, 1e-15);
}

TEST(Rho, ClosedFormMatchesGrid) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> nd(2, 8);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = nd(rng);
        std::uniform_int_distribution<int> kd(1, n);
        const int k = kd(rng);
        int l = kd(rng);
        if (l == k) l = k % n + 1;
        Direction X(std::vector<Cx>(static_cast<std::size_t>(n), 0.0));
        X.x[static_cast<std::size_t>(k - 1)] = random_in_disc(rng, 2.0);
        X.x[static_cast<std::size_t>(l - 1)] = random_in_disc(rng, 2.0);
        const RhoResult r = rho(X);
        ASSERT_TRUE(r.closed_form.has_value());
        EXPECT_NEAR(r.grid_value, *r.closed_form, 1e-6);
    }
}

TEST(Rho, GeneralSupportUsesGrid) {
    const Direction X({1.0, 1.0, 1.0});
    const RhoResult r = rho(X);
    EXPECT_FALSE(r.closed_form.has_value());
    EXPECT_NEAR(r.value, 2.0, 1e-12);  // |1 + 2 + 3| / 3 at lambda = 1
}

TEST(Rho, HomogeneityAndRotation) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 5;
        const Direction X = random_direction(rng, n);
        const Cx c = random_in_disc(rng, 3.0);
        Direction cX = X;
        for (auto& v : cX.x) v *= c;
        EXPECT_NEAR(rho(cX).value, std::abs(c) * rho(X).value, 1e-10 * (1.0 + rho(X).value));
        const Cx lam = std::polar(1.0, 0.37 * trial);
        Direction R = X;
        Cx pw = lam;
        for (auto& v : R.x) {
            v *= pw;
            pw *= lam;
        }
        EXPECT_NEAR(rho(R).value, rho(X).value, 1e-9);
    }
}

TEST(PLower, Examples) {
    const Point z({Cx{0.1, 0.2}, Cx{0.05, -0.1}});
    EXPECT_EQ(p_lower(z, z).value, 0.0);
    EXPECT_NEAR(p_lower(Point::zero(2), Point({0.0, -0.25})).value, std::atanh(0.25), 1e-10);
    const double a = 0.3;
    EXPECT_NEAR(p_lower(Point::zero(2), Point({2.0 * a, a * a})).value, std::atanh(a), 1e-10);
}

TEST(PLower, Errors) {
    EXPECT_THROW(p_lower(Point::zero(2), Point({2.0, 1.0})), DomainError);
    EXPECT_THROW(p_lower(Point::zero(2), Point::zero(3)), DomainError);
    GridConfig g;
    g.coarse = 4;
    EXPECT_THROW(p_lower(Point::zero(2), Point::zero(2), g), DomainError);
}

TEST(PLower, SymmetryAndWitness) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 2 + trial % 3;
        const Point z = random_member(rng, n), w = random_member(rng, n);
        const PLowerResult a = p_lower(z, w), b = p_lower(w, z);
        EXPECT_NEAR(a.value, b.value, 1e-8);
        EXPECT_FALSE(a.heuristic);
        ASSERT_EQ(static_cast<int>(a.angles.size()), n - 1);
        EXPECT_NEAR(p_objective(z, w, a.angles), a.value, 1e-15);
    }
}

TEST(PLower, HeuristicAboveFour) {
    std::mt19937_64 rng(24);
    const Point z = random_member(rng, 5), w = random_member(rng, 5);
    const PLowerResult r = p_lower(z, w);
    EXPECT_TRUE(r.heuristic);
    EXPECT_NEAR(p_objective(z, w, r.angles), r.value, 1e-15);
    EXPECT_GT(r.value, 0.0);
}

TEST(PLower, DominatesDiagonal) {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 6; ++trial) {
        const Point z = random_member(rng, 3), w = random_member(rng, 3);
        const double v = p_lower(z, w).value;
        for (int k = 0; k < 64; ++k) {
            const Cx lam = std::polar(1.0, 2.0 * M_PI * k / 64.0);
            EXPECT_LE(poincare(f_diag(z, lam), f_diag(w, lam)), v + 1e-12);
        }
    }
}

TEST(RhoSecant, Examples) {
    EXPECT_NEAR(rho_secant(Direction::axis(2, 1), 1e-3), 0.5, 5e-3);
    EXPECT_EQ(rho_secant(Direction(std::vector<Cx>(2, 0.0)), 1e-3), 0.0);
    EXPECT_NEAR(rho_secant(Direction::axis(3, 3), 1e-3), 1.0, 1e-2);
    EXPECT_THROW(rho_secant(Direction::axis(2, 1), 0.0), DomainError);
    EXPECT_THROW(rho_secant(Direction::axis(2, 1), 5.0), DomainError);
}

TEST(RhoSecant, Convergence) {
    std::mt19937_64 rng(26);
    double worst_c = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
        const Direction X = random_direction(rng, 2 + trial % 2);
        const double r = rho(X).value;
        for (double t : {1e-2, 1e-3, 1e-4}) {
            const double err = std::abs(rho_secant(X, t) - r);
            worst_c = std::max(worst_c, err / t);
        }
    }
    // secant error is O(t)
    EXPECT_LT(worst_c, 50.0);
}
