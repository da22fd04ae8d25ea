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

// Geometry of the symmetrized polydisc G_n = sigma_n(D^n).
//
// A point z = (z_1, ..., z_n) is identified with the monic polynomial
//     t^n - z_1 t^{n-1} + z_2 t^{n-2} - ... + (-1)^n z_n,
// whose roots have elementary symmetric functions z_1, ..., z_n. Membership
// is decided twice: through those roots, and through the rational functions
//     f_lambda(z) = sum_j j z_j lambda^{j-1} / (n + sum_{j<n} (n-j) z_j lambda^j)
// whose supremum over the closed disc is < 1 exactly on G_n.

#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "symdisc/config.hpp"
#include "symdisc/cx_poly.hpp"
#include "symdisc/search.hpp"

namespace symdisc {

/// Raised when a rational map of the f_lambda family is evaluated at a pole.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A point of C^n.
struct Point {
    std::vector<Cx> z;

    Point() = default;
    explicit Point(std::vector<Cx> coords) : z(std::move(coords)) {
        if (z.empty()) throw DomainError("Point: dimension must be >= 1");
        for (const Cx& c : z) require_finite(c, "Point");
    }
    static Point zero(int n) { return Point(std::vector<Cx>(static_cast<std::size_t>(n), Cx{0.0, 0.0})); }

    [[nodiscard]] int n() const { return static_cast<int>(z.size()); }
    Cx& operator[](std::size_t i) { return z[i]; }
    const Cx& operator[](std::size_t i) const { return z[i]; }
    bool operator==(const Point&) const = default;
};

/// Roots with multiplicity; order carries no meaning.
struct RootMultiset {
    std::vector<Cx> roots;

    [[nodiscard]] int size() const { return static_cast<int>(roots.size()); }
    [[nodiscard]] double max_modulus() const {
        double m = 0.0;
        for (const Cx& r : roots) m = std::max(m, std::abs(r));
        return m;
    }
};

enum class Membership { Inside, Boundary, Outside };

inline const char* to_string(Membership m) {
    switch (m) {
        case Membership::Inside: return "Inside";
        case Membership::Boundary: return "Boundary";
        case Membership::Outside: return "Outside";
    }
    return "?";
}

/// Membership classification with a signed margin (positive inside).
struct Verdict {
    Membership cls = Membership::Inside;
    double margin = 0.0;
    bool pole = false;
};

inline constexpr double kRootBand = 1e-9;
inline constexpr double kSupBand = 1e-6;
inline constexpr double kDenominatorEps = 1e-12;

inline Verdict classify(double margin, double band) {
    if (!(band > 0.0)) throw DomainError("classify: band must be positive");
    Verdict v;
    v.margin = margin;
    if (std::abs(margin) <= band)
        v.cls = Membership::Boundary;
    else
        v.cls = margin > 0.0 ? Membership::Inside : Membership::Outside;
    return v;
}

inline Point sigma(const RootMultiset& x) { return Point(elementary_symmetric(x.roots)); }

inline MonicPoly polynomial_of(const Point& z) {
    std::vector<Cx> c(z.z);
    for (std::size_t k = 0; k < c.size(); ++k)
        if (k % 2 == 0) c[k] = -c[k];
    return MonicPoly(std::move(c));
}

inline RootMultiset roots_of(const Point& z, const RootSolverOptions& opt = {}) {
    return RootMultiset{solve_roots(polynomial_of(z), opt)};
}

inline Verdict member_roots(const Point& z, double band = kRootBand) {
    return classify(1.0 - roots_of(z).max_modulus(), band);
}

inline Cx f_diag(const Point& z, Cx lambda) {
    require_finite(lambda, "f_diag");
    if (std::abs(lambda) > 1.0 + 1e-12) throw DomainError("f_diag: |lambda| must be <= 1");
    const int n = z.n();
    Cx num{0.0, 0.0}, den{double(n), 0.0};
    Cx pw{1.0, 0.0};  // lambda^{j-1}
    for (int j = 1; j <= n; ++j) {
        const Cx zj = z[static_cast<std::size_t>(j - 1)];
        num += double(j) * zj * pw;
        if (j < n) den += double(n - j) * zj * pw * lambda;
        pw *= lambda;
    }
    if (std::abs(den) <= kDenominatorEps * n) throw PoleError("f_diag: denominator vanishes");
    return num / den;
}

/// p_{n,lambda}: C^n -> C^{n-1}.
inline Point project(const Point& z, Cx lambda) {
    require_finite(lambda, "project");
    const int n = z.n();
    if (n < 2) throw DomainError("project: dimension must be >= 2");
    if (std::abs(lambda) > 1.0 + 1e-12) throw DomainError("project: |lambda| must be <= 1");
    const Cx den = double(n) + lambda * z[0];
    if (std::abs(den) <= kDenominatorEps * n) throw PoleError("project: denominator vanishes");
    std::vector<Cx> out(static_cast<std::size_t>(n - 1));
    for (int j = 1; j <= n - 1; ++j)
        out[static_cast<std::size_t>(j - 1)] =
            (double(n - j) * z[static_cast<std::size_t>(j - 1)] + lambda * double(j + 1) * z[static_cast<std::size_t>(j)]) / den;
    return Point(std::move(out));
}

/// f_{lambda_1..lambda_{n-1}} = p_{2,lambda_1} o ... o p_{n,lambda_{n-1}}.
inline Cx f_chain(const Point& z, std::span<const Cx> lambdas) {
    const int n = z.n();
    if (static_cast<int>(lambdas.size()) != n - 1) throw DomainError("f_chain: need n-1 parameters");
    Point cur = z;
    for (int m = n; m >= 2; --m) cur = project(cur, lambdas[static_cast<std::size_t>(m - 2)]);
    return cur[0];
}

/// Same as f_chain with parameters given as angles on the circle.
inline Cx f_chain_angles(const Point& z, std::span<const double> angles) {
    std::vector<Cx> l(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) l[i] = std::polar(1.0, angles[i]);
    return f_chain(z, l);
}

namespace detail {

inline Cx f_denominator(const Point& z, Cx lambda) {
    const int n = z.n();
    Cx den{double(n), 0.0};
    Cx pw = lambda;
    for (int j = 1; j < n; ++j) {
        den += double(n - j) * z[static_cast<std::size_t>(j - 1)] * pw;
        pw *= lambda;
    }
    return den;
}

// Winding number of the f_lambda denominator along the unit circle, i.e. the
// number of its zeros in the open disc. Segments are subdivided until the
// argument increment is small.
inline int denominator_winding(const Point& z, int coarse, double radius = 1.0) {
    double total = 0.0;
    const double h = kTwoPi / coarse;
    const double eps = kDenominatorEps * z.n();
    auto den = [&](double t) {
        const Cx d = f_denominator(z, std::polar(radius, t));
        if (std::abs(d) <= eps) throw PoleError("denominator vanishes on the circle");
        return d;
    };
    for (int k = 0; k < coarse; ++k) {
        double t0 = h * k;
        Cx d0 = den(t0);
        std::vector<double> stack{h * (k + 1)};
        std::vector<Cx> dstack{den(h * (k + 1))};
        int guard = 0;
        while (!stack.empty()) {
            const double t1 = stack.back();
            const Cx d1 = dstack.back();
            if (std::abs(d0) == 0.0 || std::abs(d1) == 0.0) throw PoleError("denominator zero on circle");
            const double step = std::arg(d1 / d0);
            if (std::abs(step) > 0.5 && t1 - t0 > 1e-9 && ++guard < 4096) {
                const double tm = 0.5 * (t0 + t1);
                stack.push_back(tm);
                dstack.push_back(den(tm));
                continue;
            }
            total += step;
            t0 = t1;
            d0 = d1;
            stack.pop_back();
            dstack.pop_back();
        }
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace detail

/// Sup-based membership: refined maximum of |f_lambda(z)| over |lambda| = 1.
///
/// The denominator's zeros inside the disc are counted by the argument
/// principle first; any such zero places z outside (pole flag). Otherwise
/// f_lambda(z) is holomorphic on the closed disc and its maximum modulus is
/// attained on the circle. A denominator zero on the circle itself (e.g. the
/// removable one of (2,1) at lambda = -1) is handled by sweeping the circle
/// of radius 1 - 1e-7 instead. grid.closed_disc adds an interior sweep for
/// debugging.
inline Verdict member_sup(const Point& z, const GridConfig& grid = GridConfig::membership(),
                          double band = kSupBand) {
    grid.validate();
    auto pole_verdict = [&] {
        Verdict v = classify(-1.0, band);
        v.pole = true;
        return v;
    };
    auto sweep = [&](double radius) -> Verdict {
        if (z.n() >= 2 && detail::denominator_winding(z, grid.coarse, radius) != 0) return pole_verdict();
        auto obj = [&](double t) { return std::abs(f_diag(z, std::polar(radius, t))); };
        double sup = maximize_on_circle(obj, grid.coarse, grid.refine, 8).value;
        if (grid.closed_disc) {
            const int radii = 32;
            for (int i = 1; i < radii; ++i) {
                const double r = radius * double(i) / radii;
                for (int k = 0; k < grid.coarse; ++k)
                    sup = std::max(sup, std::abs(f_diag(z, std::polar(r, kTwoPi * k / grid.coarse))));
            }
        }
        return classify(1.0 - sup, band);
    };
    try {
        return sweep(1.0);
    } catch (const PoleError&) {
    }
    try {
        return sweep(1.0 - 1e-7);
    } catch (const PoleError&) {
        return pole_verdict();
    }
}

/// (z_1, ..., z_n) -> (lambda z_1, lambda^2 z_2, ..., lambda^n z_n), |lambda| = 1.
inline Point rotate_weighted(const Point& z, Cx lambda) {
    if (std::abs(std::abs(lambda) - 1.0) > 1e-12) throw DomainError("rotate_weighted: |lambda| must be 1");
    Point out = z;
    Cx pw = lambda;
    for (auto& c : out.z) {
        c *= pw;
        pw *= lambda;
    }
    return out;
}

/// Max root modulus of t^2 - w_1 t + w_2; h1 < 1 exactly on G_2.
inline double h1(const Point& w) {
    if (w.n() != 2) throw DomainError("h1: point must lie in C^2");
    return roots_of(w).max_modulus();
}

enum class GaugeKind { Polydisc, Ball };

inline const char* to_string(GaugeKind g) { return g == GaugeKind::Polydisc ? "polydisc" : "ball"; }

inline GaugeKind parse_gauge(const std::string& s) {
    if (s == "polydisc") return GaugeKind::Polydisc;
    if (s == "ball") return GaugeKind::Ball;
    throw DomainError("unknown gauge '" + s + "' (expected polydisc or ball)");
}

/// Minkowski function of G_2 x G for G the unit polydisc or ball of C^m:
/// max(h1(p_1, p_2), gauge of (p_3, ..., p_{m+2})).
inline double product_gauge(const Point& p, GaugeKind kind, int m) {
    if (m < 0 || p.n() != m + 2) throw DomainError("product_gauge: point must lie in C^{2+m}");
    const double g1 = h1(Point({p[0], p[1]}));
    double g2 = 0.0;
    for (int j = 2; j < p.n(); ++j) {
        const double a = std::abs(p[static_cast<std::size_t>(j)]);
        g2 = kind == GaugeKind::Polydisc ? std::max(g2, a) : g2 + a * a;
    }
    if (kind == GaugeKind::Ball) g2 = std::sqrt(g2);
    return std::max(g1, g2);
}

/// (lambda z_1, lambda^2 z_2, lambda z_3, ..., lambda z_{m+2}).
inline Point pi_lambda(const Point& p, Cx lambda) {
    if (p.n() < 2) throw DomainError("pi_lambda: dimension must be >= 2");
    Point out = p;
    for (std::size_t j = 0; j < out.z.size(); ++j) out[j] *= (j == 1 ? lambda * lambda : lambda);
    return out;
}

/// sigma of n roots drawn uniformly from the disc of the given radius.
template <class Rng>
Point sample_member(int n, Rng& rng, double radius = 0.9) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RootMultiset x;
    for (int i = 0; i < n; ++i) {
        const double r = radius * std::sqrt(u(rng));
        x.roots.push_back(std::polar(r, kTwoPi * u(rng)));
    }
    return sigma(x);
}

}  // namespace symdisc
