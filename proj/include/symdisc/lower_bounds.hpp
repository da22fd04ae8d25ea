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

// Lower bounds for the Caratheodory distance and metric of G_n.
//
// Every evaluated point of the torus certifies a lower bound on its own, so
// the searches below only ever improve a valid value; their witnesses are the
// maximising torus parameters.

#pragma once

#include <optional>
#include <random>
#include <vector>

#include "symdisc/domain_gn.hpp"
#include "symdisc/search.hpp"

namespace symdisc {

/// Tangent vector at the origin of C^n.
struct Direction {
    std::vector<Cx> x;

    Direction() = default;
    explicit Direction(std::vector<Cx> v) : x(std::move(v)) {
        if (x.empty()) throw DomainError("Direction: dimension must be >= 1");
        for (const Cx& c : x) require_finite(c, "Direction");
    }
    static Direction axis(int n, int k, Cx value = {1.0, 0.0}) {
        Direction d(std::vector<Cx>(static_cast<std::size_t>(n), Cx{0.0, 0.0}));
        d.x[static_cast<std::size_t>(k - 1)] = value;
        return d;
    }
    [[nodiscard]] int n() const { return static_cast<int>(x.size()); }
    [[nodiscard]] bool is_zero() const {
        return std::all_of(x.begin(), x.end(), [](Cx c) { return c == Cx{0.0, 0.0}; });
    }
    /// 1-based indices of nonzero components.
    [[nodiscard]] std::vector<int> support() const {
        std::vector<int> s;
        for (int j = 0; j < n(); ++j)
            if (x[static_cast<std::size_t>(j)] != Cx{0.0, 0.0}) s.push_back(j + 1);
        return s;
    }
    [[nodiscard]] Point as_point(double t = 1.0) const {
        std::vector<Cx> p(x);
        for (auto& c : p) c *= t;
        return Point(std::move(p));
    }
};

/// |sum_j j X_j lambda^{j-1}| / n at lambda = e^{i angle}.
inline double rho_objective(const Direction& X, double angle) {
    const Cx lambda = std::polar(1.0, angle);
    Cx acc{0.0, 0.0};
    for (int j = X.n(); j >= 1; --j) acc = acc * lambda + double(j) * X.x[static_cast<std::size_t>(j - 1)];
    return std::abs(acc) / X.n();
}

/// (k|X_k| + l|X_l|) / n when the support has at most two indices.
inline std::optional<double> rho_closed_form(const Direction& X) {
    const auto s = X.support();
    if (s.size() > 2) return std::nullopt;
    double v = 0.0;
    for (int k : s) v += k * std::abs(X.x[static_cast<std::size_t>(k - 1)]);
    return v / X.n();
}

struct RhoResult {
    double value = 0.0;       // reported rho_n(X)
    double grid_value = 0.0;  // refined sweep maximum
    double angle = 0.0;       // maximising lambda = e^{i angle}
    std::optional<double> closed_form;
};

inline RhoResult rho(const Direction& X, const GridConfig& grid = GridConfig::rho()) {
    grid.validate();
    RhoResult r;
    const CircleMax m = maximize_on_circle([&](double t) { return rho_objective(X, t); }, grid.coarse, grid.refine);
    r.grid_value = m.value;
    r.angle = m.angle;
    r.closed_form = rho_closed_form(X);
    r.value = r.closed_form ? *r.closed_form : r.grid_value;
    return r;
}

namespace detail {

// f_chain evaluated at torus angles without per-call allocation.
class ChainEvaluator {
public:
    explicit ChainEvaluator(const Point& z) : z_(z.z), buf_(z.z.size()) {}

    Cx operator()(std::span<const Cx> lambdas) {
        const int n = static_cast<int>(z_.size());
        std::copy(z_.begin(), z_.end(), buf_.begin());
        for (int m = n; m >= 2; --m) {
            const Cx lam = lambdas[static_cast<std::size_t>(m - 2)];
            const Cx den = double(m) + lam * buf_[0];
            if (std::abs(den) <= kDenominatorEps * m) throw PoleError("f_chain: denominator vanishes");
            for (int j = 1; j <= m - 1; ++j)
                buf_[static_cast<std::size_t>(j - 1)] =
                    (double(m - j) * buf_[static_cast<std::size_t>(j - 1)] + lam * double(j + 1) * buf_[static_cast<std::size_t>(j)]) / den;
        }
        return buf_[0];
    }

private:
    std::vector<Cx> z_;
    std::vector<Cx> buf_;
};

}  // namespace detail

struct PLowerResult {
    double value = 0.0;
    std::vector<double> angles;  // lambda_i = e^{i angles[i]}
    bool heuristic = false;      // multi-start search (n >= 5)
    long evaluations = 0;
};

/// Poincare distance of f_{lambda}(z), f_{lambda}(w) at explicit torus angles.
inline double p_objective(const Point& z, const Point& w, std::span<const double> angles) {
    std::vector<Cx> l(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) l[i] = std::polar(1.0, angles[i]);
    return poincare(f_chain(z, l), f_chain(w, l));
}

/// max over the (n-1)-torus of the Poincare distance between f_{lambda}(z)
/// and f_{lambda}(w): a lower bound for the Caratheodory distance.
///
/// n <= 4: tensor grid (at most 2^18 points) then coordinate golden-section
/// passes and a simplex polish from the best grid points. n >= 5: 64 seeded
/// random starts with coordinate passes; reported as heuristic.
inline PLowerResult p_lower(const Point& z, const Point& w, const GridConfig& grid = GridConfig{}) {
    grid.validate();
    if (z.n() != w.n()) throw DomainError("p_lower: dimension mismatch");
    if (member_roots(z).cls != Membership::Inside || member_roots(w).cls != Membership::Inside)
        throw DomainError("p_lower: both points must lie inside G_n");
    const int n = z.n();
    PLowerResult res;
    res.angles.assign(static_cast<std::size_t>(n - 1), 0.0);
    if (z == w) return res;
    if (n == 1) {
        res.value = poincare(z[0], w[0]);
        return res;
    }

    detail::ChainEvaluator fz(z), fw(w);
    const std::size_t dim = static_cast<std::size_t>(n - 1);
    std::vector<Cx> lam(dim);
    std::vector<double> best_angles(dim, 0.0);
    double best = -1.0;
    auto eval = [&](std::span<const double> a) {
        for (std::size_t i = 0; i < dim; ++i) lam[i] = std::polar(1.0, a[i]);
        ++res.evaluations;
        const double v = poincare(fz(lam), fw(lam));
        if (v > best) {
            best = v;
            best_angles.assign(a.begin(), a.end());
        }
        return v;
    };

    // Coordinate golden-section passes from a start, bracket halving per pass.
    auto coordinate_passes = [&](std::vector<double> a, double h, bool scan) {
        double cur = eval(a);
        for (int pass = 0; pass < 40; ++pass) {
            const double before = cur;
            for (std::size_t i = 0; i < dim; ++i) {
                auto line = [&](double t) {
                    std::vector<double> b = a;
                    b[i] = t;
                    return eval(b);
                };
                double v = 0.0;
                double t = a[i];
                if (scan && pass == 0) {
                    const CircleMax cm = maximize_on_circle(line, 32, grid.refine);
                    t = cm.angle;
                    v = cm.value;
                } else {
                    t = golden_max(line, a[i] - h, a[i] + h, std::max(grid.refine / 2, 20), v);
                }
                if (v > cur) {
                    cur = v;
                    a[i] = wrap_angle(t);
                }
            }
            if (cur - before < grid.tol && h < 1e-8) break;
            if (cur - before < grid.tol) h *= 0.5;
        }
        return a;
    };

    if (n <= 4) {
        const long budget = 1L << 18;
        int per = grid.coarse;
        while (per > 16 && std::pow(double(per), double(dim)) > double(budget)) per /= 2;
        const double h = kTwoPi / per;
        std::vector<int> idx(dim, 0);
        std::vector<double> a(dim, 0.0);
        struct Cand {
            double v;
            std::vector<double> a;
        };
        std::vector<Cand> top;
        const std::size_t keep = 4;
        while (true) {
            for (std::size_t i = 0; i < dim; ++i) a[i] = h * idx[i];
            const double v = eval(a);
            if (top.size() < keep || v > top.back().v) {
                top.push_back({v, a});
                std::stable_sort(top.begin(), top.end(), [](const Cand& x, const Cand& y) { return x.v > y.v; });
                if (top.size() > keep) top.pop_back();
            }
            std::size_t d = dim;
            while (d > 0) {
                --d;
                if (++idx[d] < per) break;
                idx[d] = 0;
                if (d == 0) {
                    d = dim + 1;
                    break;
                }
            }
            if (d == dim + 1) break;
        }
        for (const Cand& c : top) coordinate_passes(c.a, h, false);
    } else {
        res.heuristic = true;
        std::mt19937_64 rng(grid.seed);
        std::uniform_real_distribution<double> u(0.0, kTwoPi);
        for (int s = 0; s < 64; ++s) {
            std::vector<double> a(dim);
            for (auto& t : a) t = u(rng);
            coordinate_passes(a, kTwoPi / 32, true);
        }
    }
    // simplex polish from the incumbent
    if (dim >= 2) {
        auto neg = [&](const std::vector<double>& a) { return -eval(a); };
        nelder_mead(neg, best_angles, 1e-3, 300);
    }
    res.value = best;
    for (auto& t : best_angles) t = wrap_angle(t);
    res.angles = best_angles;
    return res;
}

/// p_lower(0, tX) / t, which tends to rho(X) as t -> 0.
inline double rho_secant(const Direction& X, double t, const GridConfig& grid = GridConfig{}) {
    if (!(t > 0.0)) throw DomainError("rho_secant: t must be positive");
    if (X.is_zero()) return 0.0;
    const Point target = X.as_point(t);
    if (member_roots(target).cls != Membership::Inside) throw DomainError("rho_secant: tX lies outside G_n");
    return p_lower(Point::zero(X.n()), target, grid).value / t;
}

}  // namespace symdisc
