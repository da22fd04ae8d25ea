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

// Complex scalar and monic polynomial primitives: disc distances, Horner
// evaluation and an Aberth-Ehrlich simultaneous root solver.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace symdisc {

using Cx = std::complex<double>;

/// Thrown when an input lies outside the domain an operation accepts.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown when the root solver exhausts its iteration cap.
class RootSolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool is_finite(Cx a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }

inline void require_finite(Cx a, const char* what) {
    if (!is_finite(a)) throw DomainError(std::string(what) + ": non-finite complex value");
}

/// Pseudo-hyperbolic (Moebius) distance |a-b| / |1 - conj(a) b| on the unit disc.
inline double mobius(Cx a, Cx b) {
    require_finite(a, "mobius");
    require_finite(b, "mobius");
    if (std::abs(a) >= 1.0 || std::abs(b) >= 1.0)
        throw DomainError("mobius: arguments must lie in the open unit disc");
    if (a == b) return 0.0;
    return std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
}

/// Largest argument accepted by guarded_atanh.
inline constexpr double kAtanhGuard = 1.0 - 1e-15;

/// atanh through 0.5 ln((1+x)/(1-x)); x beyond 1 - 1e-15 is rejected so
/// that no infinity reaches the bound arithmetic.
inline double guarded_atanh(double x) {
    if (!(x >= 0.0) || x > kAtanhGuard)
        throw DomainError("guarded_atanh: argument outside [0, 1 - 1e-15]");
    if (x == 0.0) return 0.0;
    return 0.5 * std::log((1.0 + x) / (1.0 - x));
}

/// Poincare distance on the unit disc.
inline double poincare(Cx a, Cx b) { return guarded_atanh(mobius(a, b)); }

/// Disc automorphism x -> (x - c) / (1 - conj(c) x).
inline Cx disc_automorphism(Cx c, Cx x) { return (x - c) / (1.0 - std::conj(c) * x); }

/// Monic polynomial t^n + c_1 t^{n-1} + ... + c_n.
struct MonicPoly {
    std::vector<Cx> coeffs;  // c_1 .. c_n

    MonicPoly() = default;
    explicit MonicPoly(std::vector<Cx> c) : coeffs(std::move(c)) {
        if (coeffs.empty()) throw DomainError("MonicPoly: degree must be >= 1");
        for (const Cx& v : coeffs) require_finite(v, "MonicPoly");
    }

    [[nodiscard]] int degree() const { return static_cast<int>(coeffs.size()); }
};

inline Cx eval_poly(const MonicPoly& p, Cx t) {
    Cx acc{1.0, 0.0};
    for (const Cx& c : p.coeffs) acc = acc * t + c;
    return acc;
}

namespace detail {

// Coefficients in descending order, leading coefficient included.
inline std::vector<Cx> dense_coeffs(const MonicPoly& p) {
    std::vector<Cx> a;
    a.reserve(p.coeffs.size() + 1);
    a.emplace_back(1.0, 0.0);
    a.insert(a.end(), p.coeffs.begin(), p.coeffs.end());
    return a;
}

inline std::vector<Cx> derivative(std::span<const Cx> a) {
    const int deg = static_cast<int>(a.size()) - 1;
    if (deg <= 0) return {Cx{0.0, 0.0}};
    std::vector<Cx> d(static_cast<std::size_t>(deg));
    for (int k = 0; k < deg; ++k) d[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k)] * double(deg - k);
    return d;
}

struct HornerResult {
    Cx value;
    double noise;  // running rounding-error bound of the evaluation
};

inline HornerResult horner(std::span<const Cx> a, Cx t) {
    Cx acc = a[0];
    double mag = std::abs(a[0]);
    const double r = std::abs(t);
    for (std::size_t k = 1; k < a.size(); ++k) {
        acc = acc * t + a[k];
        mag = mag * r + std::abs(a[k]);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    return {acc, 4.0 * eps * double(a.size()) * mag};
}

// value and first derivative together
inline void horner2(std::span<const Cx> a, Cx t, Cx& p, Cx& dp, double& noise) {
    p = a[0];
    dp = Cx{0.0, 0.0};
    double mag = std::abs(a[0]);
    const double r = std::abs(t);
    for (std::size_t k = 1; k < a.size(); ++k) {
        dp = dp * t + p;
        p = p * t + a[k];
        mag = mag * r + std::abs(a[k]);
    }
    noise = 4.0 * std::numeric_limits<double>::epsilon() * double(a.size()) * mag;
}

// Single-linkage components of `idx` using edges shorter than `thresh`.
inline std::vector<std::vector<int>> link_components(const std::vector<Cx>& r, const std::vector<int>& idx,
                                                      double thresh) {
    const std::size_t m = idx.size();
    std::vector<int> parent(m);
    for (std::size_t i = 0; i < m; ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (std::abs(r[static_cast<std::size_t>(idx[i])] - r[static_cast<std::size_t>(idx[j])]) < thresh)
                parent[static_cast<std::size_t>(find(static_cast<int>(i)))] = find(static_cast<int>(j));
    std::vector<std::vector<int>> out;
    std::vector<int> slot(m, -1);
    for (std::size_t i = 0; i < m; ++i) {
        const int root = find(static_cast<int>(i));
        if (slot[static_cast<std::size_t>(root)] < 0) {
            slot[static_cast<std::size_t>(root)] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].push_back(idx[i]);
    }
    return out;
}

// Longest edge of the minimum spanning tree of a cluster.
inline double mst_longest_edge(const std::vector<Cx>& r, const std::vector<int>& idx) {
    const std::size_t m = idx.size();
    std::vector<double> best(m, std::numeric_limits<double>::infinity());
    std::vector<bool> used(m, false);
    best[0] = 0.0;
    double longest = 0.0;
    for (std::size_t it = 0; it < m; ++it) {
        std::size_t u = m;
        for (std::size_t i = 0; i < m; ++i)
            if (!used[i] && (u == m || best[i] < best[u])) u = i;
        used[u] = true;
        longest = std::max(longest, best[u]);
        for (std::size_t v = 0; v < m; ++v)
            if (!used[v])
                best[v] = std::min(best[v], std::abs(r[static_cast<std::size_t>(idx[u])] - r[static_cast<std::size_t>(idx[v])]));
    }
    return longest;
}

// Try to replace a cluster of m approximate roots by one m-fold root: the
// centroid is polished by Newton on p^(m-1), and accepted only if p and its
// first m-2 derivatives vanish there to rounding level.
inline bool merge_cluster(const std::vector<Cx>& a, std::vector<Cx>& r, const std::vector<int>& idx) {
    const int m = static_cast<int>(idx.size());
    std::vector<std::vector<Cx>> ders{a};
    for (int j = 1; j < m; ++j) ders.push_back(derivative(ders.back()));
    Cx c{0.0, 0.0};
    for (int i : idx) c += r[static_cast<std::size_t>(i)];
    c /= double(m);
    const std::vector<Cx> q = ders[static_cast<std::size_t>(m - 1)];
    const std::vector<Cx> dq = derivative(q);
    for (int it = 0; it < 30; ++it) {
        const Cx qv = horner(q, c).value;
        const Cx dv = horner(dq, c).value;
        if (dv == Cx{0.0, 0.0}) break;
        const Cx step = qv / dv;
        c -= step;
        if (std::abs(step) <= 1e-17 * (1.0 + std::abs(c))) break;
    }
    if (!is_finite(c)) return false;
    double spread = 0.0;
    double diameter = 0.0;
    for (int i : idx) {
        spread = std::max(spread, std::abs(r[static_cast<std::size_t>(i)] - c));
        for (int j : idx) diameter = std::max(diameter, std::abs(r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(j)]));
    }
    if (spread > diameter + 1e-12 * (1.0 + std::abs(c))) return false;
    for (int j = 0; j + 1 < m; ++j) {
        const HornerResult h = horner(ders[static_cast<std::size_t>(j)], c);
        if (std::abs(h.value) > 64.0 * h.noise) return false;
    }
    for (int i : idx) r[static_cast<std::size_t>(i)] = c;
    return true;
}

inline void polish_cluster(const std::vector<Cx>& a, std::vector<Cx>& r, const std::vector<int>& idx) {
    if (idx.size() < 2) return;
    if (merge_cluster(a, r, idx)) return;
    const double longest = mst_longest_edge(r, idx);
    if (longest <= 0.0) return;
    // split along the longest spanning-tree edge
    for (const auto& part : link_components(r, idx, longest))
        if (part.size() < idx.size()) polish_cluster(a, r, part);
}

}  // namespace detail

/// Settings for solve_roots.
struct RootSolverOptions {
    double tol = 1e-12;
    int max_iterations = 200;
    double cluster_radius = 0.1;  // relative linkage radius for multiple-root detection
};

/// Roots of a monic polynomial, with multiplicity.
///
/// Aberth-Ehrlich iteration started on a rotated circle of radius |c_n|^{1/n}.
/// Exact zero roots are deflated first. Clusters of approximate roots that are
/// numerically a single multiple root are collapsed onto that root, so a
/// double root is returned as two equal values rather than a pair split by
/// sqrt(eps).
///
/// Post: each root satisfies |p(r)| <= tol (1+|r|)^n max(1, max|c_k|).
inline std::vector<Cx> solve_roots(const MonicPoly& p, const RootSolverOptions& opt = {}) {
    if (!(opt.tol > 0.0)) throw DomainError("solve_roots: tol must be positive");
    std::vector<Cx> coeffs = p.coeffs;
    std::vector<Cx> roots;
    roots.reserve(coeffs.size());
    while (!coeffs.empty() && coeffs.back() == Cx{0.0, 0.0}) {
        coeffs.pop_back();
        roots.emplace_back(0.0, 0.0);
    }
    const int n = static_cast<int>(coeffs.size());
    if (n == 0) return roots;
    std::vector<Cx> a{Cx{1.0, 0.0}};
    a.insert(a.end(), coeffs.begin(), coeffs.end());
    if (n == 1) {
        roots.push_back(-coeffs[0]);
        return roots;
    }

    const double radius = std::pow(std::abs(coeffs.back()), 1.0 / n);
    std::vector<Cx> z(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        z[static_cast<std::size_t>(j)] = std::polar(radius, 2.0 * std::numbers::pi * j / n + 0.4);

    std::vector<bool> done(static_cast<std::size_t>(n), false);
    bool converged = false;
    for (int iter = 0; iter < opt.max_iterations && !converged; ++iter) {
        converged = true;
        for (int i = 0; i < n; ++i) {
            const std::size_t ui = static_cast<std::size_t>(i);
            if (done[ui]) continue;
            Cx pv, dp;
            double noise;
            detail::horner2(a, z[ui], pv, dp, noise);
            if (std::abs(pv) <= noise) {
                done[ui] = true;
                continue;
            }
            Cx s{0.0, 0.0};
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (z[ui] - z[static_cast<std::size_t>(j)]);
            Cx w;
            if (dp == Cx{0.0, 0.0}) {
                w = Cx{1e-3 * (1.0 + std::abs(z[ui])), 0.0};
            } else {
                const Cx ratio = pv / dp;
                w = ratio / (1.0 - ratio * s);
            }
            if (!is_finite(w)) w = Cx{1e-3 * (1.0 + std::abs(z[ui])), 0.0};
            z[ui] -= w;
            if (std::abs(w) <= opt.tol * 1e-3 * (1.0 + std::abs(z[ui])))
                done[ui] = true;
            else
                converged = false;
        }
    }
    if (!converged && !std::all_of(done.begin(), done.end(), [](bool b) { return b; }))
        throw RootSolverError("solve_roots: no convergence within " + std::to_string(opt.max_iterations) +
                              " iterations");

    double scale = 1.0;
    for (const Cx& zi : z) scale = std::max(scale, std::abs(zi));
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    for (const auto& cluster : detail::link_components(z, all, opt.cluster_radius * scale))
        detail::polish_cluster(a, z, cluster);

    double cmax = 1.0;
    for (const Cx& c : coeffs) cmax = std::max(cmax, std::abs(c));
    for (const Cx& zi : z) {
        const double bound = opt.tol * std::pow(1.0 + std::abs(zi), n) * cmax;
        if (!(std::abs(detail::horner(a, zi).value) <= bound))
            throw RootSolverError("solve_roots: residual bound violated");
    }
    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

inline std::vector<Cx> solve_roots(const MonicPoly& p, double tol) {
    RootSolverOptions opt;
    opt.tol = tol;
    return solve_roots(p, opt);
}

/// Elementary symmetric functions e_1..e_n of the given values.
inline std::vector<Cx> elementary_symmetric(std::span<const Cx> x) {
    std::vector<Cx> e(x.size() + 1, Cx{0.0, 0.0});
    e[0] = Cx{1.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = i + 1; k >= 1; --k) e[k] += x[i] * e[k - 1];
    return {e.begin() + 1, e.end()};
}

/// Monic polynomial with the given roots: prod (t - r_i).
inline MonicPoly poly_from_roots(std::span<const Cx> roots) {
    std::vector<Cx> e = elementary_symmetric(roots);
    for (std::size_t k = 0; k < e.size(); ++k)
        if (k % 2 == 0) e[k] = -e[k];
    return MonicPoly(std::move(e));
}

}  // namespace symdisc
