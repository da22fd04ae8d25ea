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

#include "symdisc/domain_gn.hpp"

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

Point scaled(Point z, double s) {
    for (auto& c : z.z) c *= s;
    return z;
}

}  // namespace

TEST(Point, Invariants) {
    EXPECT_THROW(Point(std::vector<Cx>{}), DomainError);
    EXPECT_THROW(Point({Cx{NAN, 0.0}}), DomainError);
    EXPECT_EQ(Point::zero(3).n(), 3);
}

TEST(Sigma, Examples) {
    EXPECT_EQ(sigma({{1.0, 1.0}}), Point({2.0, 1.0}));
    EXPECT_EQ(sigma({{0.0, 0.0, 0.0}}), Point::zero(3));
    EXPECT_EQ(sigma({{1.0, -1.0}}), Point({0.0, -1.0}));
}

TEST(Sigma, PermutationInvariant) {
    const Point a = sigma({{Cx{0.1, 0.2}, -0.5, Cx{0.0, 0.7}}});
    const Point b = sigma({{Cx{0.0, 0.7}, Cx{0.1, 0.2}, -0.5}});
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(a[j] - b[j]), 0.0, 1e-15);
}

TEST(RootsOf, Examples) {
    for (const Cx& r : roots_of(Point({Cx{0.0, 2.0}, -1.0})).roots) EXPECT_NEAR(std::abs(r - Cx{0.0, 1.0}), 0.0, 1e-10);
    for (const Cx& r : roots_of(Point::zero(4)).roots) EXPECT_EQ(r, Cx(0.0));
}

TEST(RootsOf, RoundTrip) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const Point z = random_member(rng, 1 + trial % 6);
        const Point back = sigma(roots_of(z));
        for (int j = 0; j < z.n(); ++j) EXPECT_NEAR(std::abs(back[j] - z[j]), 0.0, 1e-10);
    }
}

TEST(MemberRoots, Examples) {
    const Verdict b = member_roots(Point({2.0, 1.0}));
    EXPECT_EQ(b.cls, Membership::Boundary);
    EXPECT_NEAR(b.margin, 0.0, 1e-10);
    const Verdict o = member_roots(Point({Cx{1.0, 1.0}, 0.0}));
    EXPECT_EQ(o.cls, Membership::Outside);
    EXPECT_NEAR(o.margin, 1.0 - std::sqrt(2.0), 1e-12);
    const Verdict i = member_roots(Point::zero(5));
    EXPECT_EQ(i.cls, Membership::Inside);
    EXPECT_EQ(i.margin, 1.0);
    EXPECT_EQ(member_roots(Point({Cx{0.0, 2.0}, -1.0})).cls, Membership::Boundary);
}

TEST(MemberRoots, BandMustBePositive) {
    EXPECT_THROW(member_roots(Point::zero(2), 0.0), DomainError);
    EXPECT_THROW(classify(0.5, -1.0), DomainError);
}

TEST(Verdict, ClassConsistentWithMargin) {
    EXPECT_EQ(classify(1e-10, 1e-9).cls, Membership::Boundary);
    EXPECT_EQ(classify(-1e-10, 1e-9).cls, Membership::Boundary);
    EXPECT_EQ(classify(2e-9, 1e-9).cls, Membership::Inside);
    EXPECT_EQ(classify(-2e-9, 1e-9).cls, Membership::Outside);
}

TEST(FDiag, Examples) {
    EXPECT_EQ(f_diag(Point::zero(3), Cx{0.3, 0.4}), Cx(0.0));
    EXPECT_NEAR(std::abs(f_diag(Point({0.0, -0.25}), 1.0) - (-0.25)), 0.0, 1e-15);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        const Cx zeta = random_in_disc(rng, 0.99), lam = random_in_disc(rng, 1.0);
        EXPECT_NEAR(std::abs(f_diag(Point({2.0 * zeta, zeta * zeta}), lam) - zeta), 0.0, 1e-12);
    }
}

TEST(FDiag, Errors) {
    EXPECT_THROW(f_diag(Point({-2.0, 0.0}), 1.0), PoleError);
    EXPECT_THROW(f_diag(Point({0.0, 0.0}), Cx{NAN, 0.0}), DomainError);
}

TEST(Project, Examples) {
    EXPECT_EQ(project(Point::zero(3), 0.5), Point::zero(2));
    const Point z({Cx{0.3, 0.1}, Cx{-0.2, 0.05}});
    const Cx lam = std::polar(1.0, 0.7);
    EXPECT_NEAR(std::abs(project(z, lam)[0] - f_diag(z, lam)), 0.0, 1e-15);
    const Point p = project(Point({0.0, 0.0, Cx{0.4, 0.2}}), 1.0);
    EXPECT_NEAR(std::abs(p[0]), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(p[1] - Cx{0.4, 0.2}), 0.0, 1e-15);
}

TEST(Project, Errors) {
    EXPECT_THROW(project(Point({0.5}), 0.5), DomainError);
    EXPECT_THROW(project(Point::zero(2), 1.5), DomainError);
    EXPECT_THROW(project(Point({-2.0, 0.0}), 1.0), PoleError);
}

TEST(FChain, DiagonalCoincidenceAndBounds) {
    std::mt19937_64 rng(5);
    EXPECT_EQ(f_chain(Point::zero(4), std::vector<Cx>(3, Cx{0.5, 0.5})), Cx(0.0));
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + trial % 4;
        const Point z = random_member(rng, n);
        const Cx lam = std::polar(1.0, 2.0 * M_PI * trial / 300.0);
        EXPECT_NEAR(std::abs(f_chain(z, std::vector<Cx>(static_cast<std::size_t>(n - 1), lam)) - f_diag(z, lam)), 0.0, 1e-12);
        if (n == 4) {
            std::vector<Cx> ls;
            for (int i = 0; i < 3; ++i) ls.push_back(std::polar(1.0, 2.0 * M_PI * std::uniform_real_distribution<double>()(rng)));
            EXPECT_LT(std::abs(f_chain(z, ls)), 1.0);
        }
    }
    EXPECT_THROW(f_chain(Point::zero(3), std::vector<Cx>(1, 0.0)), DomainError);
}

TEST(MemberSup, Examples) {
    EXPECT_EQ(member_sup(Point::zero(3)).cls, Membership::Inside);
    // (2,1): the circle pole is removable, |f_lambda| = 1
    const Verdict v = member_sup(Point({2.0, 1.0}));
    EXPECT_EQ(v.cls, Membership::Boundary);
    EXPECT_FALSE(v.pole);
    EXPECT_EQ(member_sup(Point({Cx{1.0, 1.0}, 0.0})).cls, Membership::Outside);
}

TEST(MemberSup, BoundaryWithoutPole) {
    // (1, 0): roots {0, 1}; |f_lambda| = 1 / |2 + lambda| ... max 1 at lambda = -1
    const Verdict v = member_sup(Point({1.0, 0.0}));
    EXPECT_EQ(v.cls, Membership::Boundary);
    EXPECT_NEAR(v.margin, 0.0, 1e-6);
}

TEST(MemberSup, GridValidation) {
    GridConfig g;
    g.coarse = 8;
    EXPECT_THROW(member_sup(Point::zero(2), g), DomainError);
    g = GridConfig{};
    g.tol = 0.0;
    EXPECT_THROW(member_sup(Point::zero(2), g), DomainError);
}

TEST(MemberSup, OracleEquivalenceSample) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> s(0.3, 2.5);
    int disagreements = 0, compared = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 2 + trial % 4;
        Point z = random_member(rng, n, 1.0);
        if (trial % 2) z = scaled(z, s(rng));
        const Verdict r = member_roots(z), p = member_sup(z);
        if (std::abs(r.margin) <= 1e-6 || std::abs(p.margin) <= 1e-6) continue;
        ++compared;
        if (r.cls != p.cls) ++disagreements;
    }
    EXPECT_GT(compared, 1500);
    EXPECT_EQ(disagreements, 0);
}

TEST(MemberSup, MaximumPrinciple) {
    std::mt19937_64 rng(12);
    GridConfig closed;
    closed.closed_disc = true;
    for (int trial = 0; trial < 40; ++trial) {
        const Point z = random_member(rng, 2 + trial % 4);
        EXPECT_NEAR(member_sup(z).margin, member_sup(z, closed).margin, 1e-12);
    }
}

TEST(Project, MembershipCriterion) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> s(0.5, 1.6);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + trial % 3;
        const Point z = scaled(random_member(rng, n, 1.0), s(rng));
        const Verdict v = member_roots(z);
        if (std::abs(v.margin) < 1e-3) continue;
        bool all_inside = true, near_band = false;
        for (int k = 0; k < 64 && all_inside; ++k) {
            try {
                const Verdict pv = member_roots(project(z, std::polar(1.0, 2.0 * M_PI * k / 64.0)));
                near_band = near_band || std::abs(pv.margin) < 1e-9;
                all_inside = pv.cls == Membership::Inside;
            } catch (const PoleError&) {
                all_inside = false;
            }
        }
        if (near_band) continue;
        ++checked;
        // inside implies every projection is inside
        if (v.cls == Membership::Inside) EXPECT_TRUE(all_inside);
        if (all_inside) EXPECT_EQ(v.cls, Membership::Inside) << "trial " << trial;
    }
    EXPECT_GT(checked, 150);
}

TEST(RotateWeighted, Properties) {
    std::mt19937_64 rng(9);
    EXPECT_EQ(rotate_weighted(Point({Cx{0.1, 0.2}, 0.3}), 1.0), Point({Cx{0.1, 0.2}, 0.3}));
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 5;
        const Point z = scaled(random_member(rng, n), 1.0 + 0.2 * (trial % 3));
        const Cx lam = std::polar(1.0, 0.1 * trial);
        const Point rz = rotate_weighted(z, lam);
        EXPECT_NEAR(member_roots(rz).margin, member_roots(z).margin, 1e-10);
        // roots scale by lambda
        auto a = roots_of(rz).roots;
        for (const Cx& r : roots_of(z).roots) {
            double best = 1e9;
            for (const Cx& b : a) best = std::min(best, std::abs(b - lam * r));
            EXPECT_LE(best, 1e-8);
        }
    }
    EXPECT_THROW(rotate_weighted(Point::zero(2), 0.9), DomainError);
}

TEST(H1, Examples) {
    EXPECT_NEAR(h1(Point({2.0, 1.0})), 1.0, 1e-10);
    EXPECT_NEAR(h1(Point({Cx{0.0, 1.0}, 4.0})), (1.0 + std::sqrt(17.0)) / 2.0, 1e-10);
    EXPECT_EQ(h1(Point::zero(2)), 0.0);
    EXPECT_THROW(h1(Point::zero(3)), DomainError);
}

TEST(ProductGauge, Examples) {
    EXPECT_EQ(product_gauge(Point::zero(5), GaugeKind::Polydisc, 3), 0.0);
    EXPECT_NEAR(product_gauge(Point({2.0, 1.0, 0.0, 0.0}), GaugeKind::Ball, 2), 1.0, 1e-10);
    EXPECT_NEAR(product_gauge(Point({0.0, 0.0, 0.3, Cx{0.0, 0.4}}), GaugeKind::Ball, 2), 0.5, 1e-15);
    EXPECT_NEAR(product_gauge(Point({0.0, 0.0, 0.3, Cx{0.0, 0.4}}), GaugeKind::Polydisc, 2), 0.4, 1e-15);
    EXPECT_THROW(product_gauge(Point::zero(3), GaugeKind::Ball, 2), DomainError);
    EXPECT_THROW(parse_gauge("simplex"), DomainError);
}

TEST(ProductGauge, Homogeneity) {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = 1 + trial % 3;
        std::vector<Cx> c;
        for (int j = 0; j < m + 2; ++j) c.emplace_back(g(rng), g(rng));
        const Point p(c);
        const Cx lam = random_in_disc(rng, 1.0);
        for (GaugeKind k : {GaugeKind::Polydisc, GaugeKind::Ball})
            EXPECT_NEAR(product_gauge(pi_lambda(p, lam), k, m), std::abs(lam) * product_gauge(p, k, m), 1e-10 * (1.0 + product_gauge(p, k, m)));
    }
}
