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

// Upper bounds for the Lempert function and the Kobayashi-Royden metric of
// G_n, certified by explicit analytic discs.
//
// Disc families:
//   * constant disc (z == w);
//   * lift: sigma of Moebius discs joining matched roots (bottleneck value);
//   * branched lift: two roots are carried by h(u), h(-u) over the double
//     cover u^2 = lambda, with h a Schur-algorithm Nevanlinna-Pick
//     interpolant; the remaining roots by Moebius discs;
//   * polynomial discs with the interpolation constraints eliminated.
// Every witness is re-validated on boundary samples before it is accepted.

#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "symdisc/config.hpp"
#include "symdisc/domain_gn.hpp"
#include "symdisc/lower_bounds.hpp"
#include "symdisc/pick.hpp"
#include "symdisc/search.hpp"

namespace symdisc {

/// Thrown when a disc search ends without any validated candidate.
class SearchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Polynomial discs

/// Polynomial disc D -> C^n; coeffs[j][e] multiplies zeta^e in component j.
struct DiscMap {
    int n = 0;
    int degree = 0;
    std::vector<std::vector<Cx>> coeffs;

    static DiscMap zero(int n, int degree) {
        DiscMap d;
        d.n = n;
        d.degree = degree;
        d.coeffs.assign(static_cast<std::size_t>(n), std::vector<Cx>(static_cast<std::size_t>(degree + 1), Cx{0.0, 0.0}));
        return d;
    }

    static DiscMap constant(const Point& z) {
        DiscMap d = zero(z.n(), 0);
        for (int j = 0; j < z.n(); ++j) d.coeffs[static_cast<std::size_t>(j)][0] = z[static_cast<std::size_t>(j)];
        return d;
    }
};

inline Point disc_eval(const DiscMap& phi, Cx zeta) {
    std::vector<Cx> out(static_cast<std::size_t>(phi.n));
    for (std::size_t j = 0; j < out.size(); ++j) {
        Cx acc{0.0, 0.0};
        const auto& c = phi.coeffs[j];
        for (std::size_t e = c.size(); e-- > 0;) acc = acc * zeta + c[e];
        out[j] = acc;
    }
    return Point(std::move(out));
}

/// zeta -> phi(u zeta).
inline DiscMap rotate_argument(const DiscMap& phi, Cx u) {
    DiscMap out = phi;
    for (auto& comp : out.coeffs) {
        Cx pw{1.0, 0.0};
        for (auto& c : comp) {
            c *= pw;
            pw *= u;
        }
    }
    return out;
}

/// Minimum over `samples` points of the circle |zeta| = radius of the root
/// membership margin of phi(zeta). No lower limit on samples (search use).
template <class Map>
double boundary_margin(const Map& phi, int samples, double radius) {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const Point p = phi(std::polar(radius, kTwoPi * k / samples));
        worst = std::min(worst, 1.0 - roots_of(p).max_modulus());
    }
    return worst;
}

/// Validation margin of a polynomial disc: min over boundary samples of the
/// root margin of its image. The maximal root modulus of phi(zeta) is the
/// exponential of a subharmonic function of zeta, so a positive margin on the
/// circle places the whole closed disc in G_n.
inline double validate_disc(const DiscMap& phi, int samples, double radius = 1.0) {
    if (samples < 256) throw DomainError("validate_disc: samples must be >= 256");
    if (!(radius > 0.0 && radius <= 1.0)) throw DomainError("validate_disc: radius must lie in (0, 1]");
    return boundary_margin([&](Cx zeta) { return disc_eval(phi, zeta); }, samples, radius);
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return std::round(r);
}

/// Extremal disc for the metric at 0 in direction e_k, k | n: component j is
/// C(n/k, j/k) zeta^{j/k} when k | j and 0 otherwise.
inline DiscMap extremal_disc(int n, int k) {
    if (n < 1 || k < 1 || k > n) throw DomainError("extremal_disc: need 1 <= k <= n");
    if (n % k != 0) throw DomainError("extremal_disc: k must divide n");
    const int q = n / k;
    DiscMap d = DiscMap::zero(n, q);
    for (int m = 1; m <= q; ++m) d.coeffs[static_cast<std::size_t>(m * k - 1)][static_cast<std::size_t>(m)] = binomial(q, m);
    return d;
}

/// Validation radius for discs that touch the boundary along the circle.
inline constexpr double kNearBoundaryRadius = 1.0 - 1e-6;

// ---------------------------------------------------------------------------
// Moebius pieces and bottleneck matching

/// Holomorphic self-map of the disc with psi(0) = a and psi(alpha) = b;
/// requires mobius(a, b) <= alpha.
inline Cx mobius_interpolant(Cx a, Cx b, double alpha, Cx zeta) {
    if (a == b) return a;
    const double rho = mobius(a, b);
    const Cx u = disc_automorphism(a, b) / rho;
    const Cx t = u * zeta * (rho / alpha);
    return (t + a) / (1.0 + std::conj(a) * t);
}

struct MatchingResult {
    double value = 0.0;     // Poincare-distance bottleneck
    double alpha = 0.0;     // Moebius-distance bottleneck
    std::vector<int> perm;  // root i of z is matched to root perm[i] of w
    RootMultiset a, b;
};

namespace detail {

inline bool has_perfect_matching(const std::vector<std::vector<double>>& cost, double thr) {
    const std::size_t n = cost.size();
    std::vector<int> match(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<bool> seen(n, false);
        std::function<bool(std::size_t)> augment = [&](std::size_t u) {
            for (std::size_t v = 0; v < n; ++v) {
                if (cost[u][v] > thr || seen[v]) continue;
                seen[v] = true;
                if (match[v] < 0 || augment(static_cast<std::size_t>(match[v]))) {
                    match[v] = static_cast<int>(u);
                    return true;
                }
            }
            return false;
        };
        if (!augment(i)) return false;
    }
    return true;
}

}  // namespace detail

/// Bottleneck assignment by threshold search over the sorted costs with an
/// augmenting-path perfect-matching test. Returns the bottleneck cost and the
/// matching (row -> column).
inline std::pair<double, std::vector<int>> bottleneck_assignment(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    if (n == 0) return {0.0, {}};
    std::vector<double> all;
    for (const auto& row : cost) all.insert(all.end(), row.begin(), row.end());
    std::sort(all.begin(), all.end());
    std::size_t lo = 0, hi = all.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (detail::has_perfect_matching(cost, all[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    const double thr = all[lo];
    std::vector<int> match(n, -1), perm(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<bool> seen(n, false);
        std::function<bool(std::size_t)> augment = [&](std::size_t u) {
            for (std::size_t v = 0; v < n; ++v) {
                if (cost[u][v] > thr || seen[v]) continue;
                seen[v] = true;
                if (match[v] < 0 || augment(static_cast<std::size_t>(match[v]))) {
                    match[v] = static_cast<int>(u);
                    return true;
                }
            }
            return false;
        };
        augment(i);
    }
    for (std::size_t v = 0; v < n; ++v) perm[static_cast<std::size_t>(match[v])] = static_cast<int>(v);
    return {thr, perm};
}

/// Exhaustive bottleneck assignment (first optimum in lexicographic order).
inline std::pair<double, std::vector<int>> bottleneck_exhaustive(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> arg = perm;
    do {
        double v = 0.0;
        for (std::size_t i = 0; i < n && v < best; ++i) v = std::max(v, cost[i][static_cast<std::size_t>(perm[i])]);
        if (v < best) {
            best = v;
            arg = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {n == 0 ? 0.0 : best, arg};
}

inline std::pair<double, std::vector<int>> bottleneck(const std::vector<std::vector<double>>& cost) {
    return cost.size() <= 8 ? bottleneck_exhaustive(cost) : bottleneck_assignment(cost);
}

inline void require_inside(const Point& z, const char* what) {
    if (member_roots(z).cls != Membership::Inside) throw DomainError(std::string(what) + ": point must lie inside G_n");
}

/// min over matchings of max_i p_D(a_i, b_sigma(i)) for the roots a of z and
/// b of w. The matched Moebius discs, pushed through sigma, form a disc in
/// G_n through z and w, so this bounds the Lempert function from above.
inline MatchingResult matching_upper(const Point& z, const Point& w) {
    if (z.n() != w.n()) throw DomainError("matching_upper: dimension mismatch");
    require_inside(z, "matching_upper");
    require_inside(w, "matching_upper");
    MatchingResult r;
    r.a = roots_of(z);
    r.b = roots_of(w);
    const std::size_t n = static_cast<std::size_t>(z.n());
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost[i][j] = mobius(r.a.roots[i], r.b.roots[j]);
    auto [alpha, perm] = bottleneck(cost);
    r.alpha = alpha;
    r.perm = perm;
    r.value = guarded_atanh(alpha);
    return r;
}

// ---------------------------------------------------------------------------
// Witnesses

struct ConstantWitness {
    Point z;
};

/// sigma of Moebius discs a_i -> b_i (b already permuted).
struct LiftWitness {
    std::vector<Cx> a, b;
    double alpha = 0.0;
};

/// sigma(h(u), h(-u), psi_1, ..., psi_{n-2}) where u^2 = tau(zeta), tau the
/// disc automorphism with tau(0) = c, tau(alpha) = lw, h the Schur
/// interpolant of (nodes, values), psi_i Moebius discs rest_a[i] -> rest_b[i].
struct BranchedWitness {
    Cx c, lw;
    double alpha = 0.0;
    std::vector<Cx> nodes, values;
    std::vector<Cx> rest_a, rest_b;
};

/// Polynomial disc with its parameter: phi(0) = z and phi(alpha) = w for the
/// two-point problem, or phi(0) = 0 and alpha phi'(0) = X for the metric.
struct PolyDiscWitness {
    DiscMap disc;
    double alpha = 0.0;
    double radius = 1.0;  // validation radius
    double margin = 0.0;  // validation margin at that radius
};

using DiscWitness = std::variant<ConstantWitness, LiftWitness, BranchedWitness, PolyDiscWitness>;

inline const char* witness_family(const DiscWitness& w) {
    switch (w.index()) {
        case 0: return "constant";
        case 1: return "lift";
        case 2: return "branched";
        default: return "polynomial";
    }
}

inline double witness_alpha(const DiscWitness& w) {
    return std::visit(
        [](const auto& x) -> double {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ConstantWitness>)
                return 0.0;
            else
                return x.alpha;
        },
        w);
}

/// Evaluates a witness disc; prepares the Schur interpolant once.
class DiscEvaluator {
public:
    explicit DiscEvaluator(DiscWitness w) : w_(std::move(w)) {
        if (const auto* b = std::get_if<BranchedWitness>(&w_)) {
            h_ = SchurInterpolant::build(b->nodes, b->values);
            if (!h_) throw DomainError("DiscEvaluator: branched witness is not Pick-solvable");
            const double rho = b->alpha > 0.0 ? std::abs(disc_automorphism(b->c, b->lw)) : 0.0;
            rot_ = rho > 0.0 ? disc_automorphism(b->c, b->lw) / rho : Cx{1.0, 0.0};
            scale_ = b->alpha > 0.0 ? rho / b->alpha : 0.0;
        }
    }

    [[nodiscard]] Point operator()(Cx zeta) const {
        return std::visit(
            [&](const auto& x) -> Point {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, ConstantWitness>) {
                    return x.z;
                } else if constexpr (std::is_same_v<T, LiftWitness>) {
                    RootMultiset r;
                    for (std::size_t i = 0; i < x.a.size(); ++i) r.roots.push_back(mobius_interpolant(x.a[i], x.b[i], x.alpha, zeta));
                    return sigma(r);
                } else if constexpr (std::is_same_v<T, BranchedWitness>) {
                    const Cx t = rot_ * zeta * scale_;
                    const Cx lambda = (t + x.c) / (1.0 + std::conj(x.c) * t);
                    const Cx u = std::sqrt(lambda);
                    RootMultiset r;
                    r.roots.push_back((*h_)(u));
                    r.roots.push_back((*h_)(-u));
                    for (std::size_t i = 0; i < x.rest_a.size(); ++i)
                        r.roots.push_back(mobius_interpolant(x.rest_a[i], x.rest_b[i], x.alpha, zeta));
                    return sigma(r);
                } else {
                    return disc_eval(x.disc, zeta);
                }
            },
            w_);
    }

    [[nodiscard]] const DiscWitness& witness() const { return w_; }

private:
    DiscWitness w_;
    std::optional<SchurInterpolant> h_;
    Cx rot_{1.0, 0.0};
    double scale_ = 1.0;
};

inline double max_coord_diff(const Point& a, const Point& b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.z.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
    return d;
}

/// Result of re-validating a serialized witness without any search.
struct WitnessCheck {
    bool ok = false;
    double alpha = 0.0;
    double margin = 0.0;
    double constraint_error = 0.0;
    std::string reason;
};

/// Re-validates a two-point witness: interpolation at 0 and alpha, and a
/// positive boundary margin (or exact Moebius feasibility for lift pieces).
inline WitnessCheck check_two_point_witness(const DiscWitness& wit, const Point& z, const Point& w, int samples = 512,
                                            double constraint_tol = 1e-8) {
    WitnessCheck r;
    try {
        const DiscEvaluator ev(wit);
        r.alpha = witness_alpha(wit);
        if (std::holds_alternative<ConstantWitness>(wit)) {
            r.constraint_error = std::max(max_coord_diff(ev(0.0), z), max_coord_diff(ev(0.0), w));
            r.margin = member_roots(z).margin;
            r.ok = r.constraint_error <= constraint_tol && r.margin > 0.0;
            if (!r.ok) r.reason = "constant disc does not join the points";
            return r;
        }
        if (!(r.alpha > 0.0 && r.alpha < 1.0)) {
            r.reason = "alpha outside (0, 1)";
            return r;
        }
        auto pieces_ok = [&](const std::vector<Cx>& a, const std::vector<Cx>& b) {
            for (std::size_t i = 0; i < a.size(); ++i)
                if (mobius(a[i], b[i]) > r.alpha * (1.0 + 1e-12)) return false;
            return true;
        };
        if (const auto* l = std::get_if<LiftWitness>(&wit); l && !pieces_ok(l->a, l->b)) {
            r.reason = "lift piece exceeds alpha";
            return r;
        }
        if (const auto* b = std::get_if<BranchedWitness>(&wit); b && !pieces_ok(b->rest_a, b->rest_b)) {
            r.reason = "branched rest piece exceeds alpha";
            return r;
        }
        r.constraint_error = std::max(max_coord_diff(ev(0.0), z), max_coord_diff(ev(r.alpha), w));
        // Moebius pieces at the bottleneck touch the circle; lift and
        // branched discs map D into G_n by construction and are sampled
        // just inside it.
        const double radius =
            std::holds_alternative<PolyDiscWitness>(wit) ? std::get<PolyDiscWitness>(wit).radius : kNearBoundaryRadius;
        r.margin = boundary_margin(ev, samples, radius);
        r.ok = r.constraint_error <= constraint_tol && r.margin > 0.0;
        if (!r.ok) r.reason = r.margin > 0.0 ? "interpolation constraint violated" : "disc leaves G_n";
    } catch (const std::exception& e) {
        r.ok = false;
        r.reason = e.what();
    }
    return r;
}

/// Re-validates an infinitesimal witness: phi(0) = 0, alpha phi'(0) = X and
/// a positive margin at the witness radius.
inline WitnessCheck check_metric_witness(const DiscWitness& wit, const Direction& X, int samples = 512,
                                         double constraint_tol = 1e-10) {
    WitnessCheck r;
    const auto* p = std::get_if<PolyDiscWitness>(&wit);
    if (!p) {
        r.reason = "metric witness must be a polynomial disc";
        return r;
    }
    try {
        r.alpha = p->alpha;
        if (p->disc.n != X.n() || p->disc.degree < 1) {
            r.reason = "disc shape mismatch";
            return r;
        }
        for (std::size_t j = 0; j < X.x.size(); ++j) {
            r.constraint_error = std::max(r.constraint_error, std::abs(p->disc.coeffs[j][0]));
            r.constraint_error = std::max(r.constraint_error, std::abs(p->alpha * p->disc.coeffs[j][1] - X.x[j]));
        }
        r.margin = validate_disc(p->disc, std::max(samples, 256), p->radius);
        r.ok = r.constraint_error <= constraint_tol && r.margin > 0.0;
        if (!r.ok) r.reason = r.margin > 0.0 ? "derivative constraint violated" : "disc leaves G_n";
    } catch (const std::exception& e) {
        r.ok = false;
        r.reason = e.what();
    }
    return r;
}

// ---------------------------------------------------------------------------
// Branched lift search

namespace detail {

struct BranchedProblem {
    Cx a0, a1, b0, b1;
    std::vector<Cx> rest_a, rest_b;
    double rest_alpha = 0.0;
};

struct BranchedConfig {
    Cx u;      // node for z (c = u^2)
    Cx lw;     // preimage of w
    int sign;  // branch of sqrt(lw) carrying b0
    double eig;
};

inline BranchedConfig branched_eval(const BranchedProblem& P, double alpha, const std::vector<double>& x) {
    BranchedConfig out{Cx(x[0], x[1]), Cx{}, 1, -1e9};
    const double ru = std::abs(out.u);
    if (ru >= 0.999) {
        out.eig = -2.0 - ru;
        return out;
    }
    const Cx c = out.u * out.u;
    const Cx t = std::polar(alpha, x[2]);
    out.lw = (t + c) / (1.0 + std::conj(c) * t);
    const Cx uw = std::sqrt(out.lw);
    const std::vector<Cx> values{P.a0, P.a1, P.b0, P.b1};
    for (int s : {1, -1}) {
        const std::vector<Cx> nodes{out.u, -out.u, double(s) * uw, -double(s) * uw};
        const double e = pick_min_eigenvalue(nodes, values);
        if (e > out.eig) {
            out.eig = e;
            out.sign = s;
        }
    }
    return out;
}

inline std::optional<BranchedWitness> branched_witness(const BranchedProblem& P, double alpha, const BranchedConfig& cfg) {
    BranchedWitness w;
    w.c = cfg.u * cfg.u;
    w.lw = cfg.lw;
    w.alpha = alpha;
    const Cx uw = double(cfg.sign) * std::sqrt(cfg.lw);
    w.nodes = {cfg.u, -cfg.u, uw, -uw};
    w.values = {P.a0, P.a1, P.b0, P.b1};
    w.rest_a = P.rest_a;
    w.rest_b = P.rest_b;
    if (!SchurInterpolant::build(w.nodes, w.values)) return std::nullopt;
    return w;
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    x ^= x >> 31;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    return x;
}

}  // namespace detail

struct BranchedResult {
    double alpha = 1.0;
    std::optional<BranchedWitness> witness;
};

/// Branched-lift search for a disc through z (at 0) and w (at alpha) with
/// alpha in [alpha_floor, alpha_hi); bisection on alpha, and at each alpha a
/// multi-start simplex maximisation of the normalised Pick eigenvalue.
inline BranchedResult branched_upper(const Point& z, const Point& w, double alpha_floor, double alpha_hi,
                                     const SearchConfig& cfg, const Point* require_z = nullptr) {
    BranchedResult best;
    best.alpha = alpha_hi;
    const int n = z.n();
    if (n < 2 || n > 4) return best;
    const RootMultiset a = roots_of(z), b = roots_of(w);
    const Point& zz = require_z ? *require_z : z;

    std::vector<detail::BranchedProblem> problems;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    detail::BranchedProblem P;
                    P.a0 = a.roots[static_cast<std::size_t>(i)];
                    P.a1 = a.roots[static_cast<std::size_t>(j)];
                    P.b0 = b.roots[static_cast<std::size_t>(k)];
                    P.b1 = b.roots[static_cast<std::size_t>(l)];
                    std::vector<Cx> ra, rb;
                    for (int t = 0; t < n; ++t) {
                        if (t != i && t != j) ra.push_back(a.roots[static_cast<std::size_t>(t)]);
                        if (t != k && t != l) rb.push_back(b.roots[static_cast<std::size_t>(t)]);
                    }
                    std::vector<std::vector<double>> cost(ra.size(), std::vector<double>(rb.size()));
                    for (std::size_t p = 0; p < ra.size(); ++p)
                        for (std::size_t q = 0; q < rb.size(); ++q) cost[p][q] = mobius(ra[p], rb[q]);
                    auto [ralpha, perm] = bottleneck(cost);
                    P.rest_alpha = ralpha;
                    P.rest_a = ra;
                    for (int p : perm) P.rest_b.push_back(rb[static_cast<std::size_t>(p)]);
                    problems.push_back(std::move(P));
                }
    std::stable_sort(problems.begin(), problems.end(),
                     [](const auto& x, const auto& y) { return x.rest_alpha < y.rest_alpha; });

    for (std::size_t pi = 0; pi < problems.size(); ++pi) {
        const auto& P = problems[pi];
        double lo = std::max(alpha_floor, P.rest_alpha);
        double hi = best.alpha;
        if (lo >= hi) continue;
        std::mt19937_64 rng(detail::mix_seed(cfg.grid.seed, 1000 + pi));
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        std::optional<std::vector<double>> warm;

        auto feasible = [&](double alpha) -> std::optional<BranchedWitness> {
            std::vector<std::vector<double>> starts;
            if (warm) starts.push_back(*warm);
            for (int s = 0; s < cfg.branched_starts; ++s) {
                const double r = 0.95 * std::sqrt(u01(rng));
                const double t = kTwoPi * u01(rng);
                starts.push_back({r * std::cos(t), r * std::sin(t), kTwoPi * u01(rng)});
            }
            for (const auto& x0 : starts) {
                auto obj = [&](const std::vector<double>& x) { return -detail::branched_eval(P, alpha, x).eig; };
                const auto res = nelder_mead(obj, x0, 0.15, cfg.max_evals, -1e-9);
                const auto conf = detail::branched_eval(P, alpha, res.x);
                if (conf.eig < 1e-10) continue;
                auto wit = detail::branched_witness(P, alpha, conf);
                if (!wit) continue;
                const WitnessCheck chk = check_two_point_witness(*wit, zz, w, cfg.search_samples);
                if (!chk.ok) continue;
                warm = res.x;
                return wit;
            }
            return std::nullopt;
        };

        std::optional<BranchedWitness> found;
        const double probe = lo + std::max(1e-10, 1e-9 * lo);
        if (probe < hi) {
            if (auto wit = feasible(probe)) {
                found = wit;
                hi = probe;
            }
        }
        for (int step = 0; !found || (step < cfg.bisection_steps && hi - lo > 1e-10); ++step) {
            if (!found && step >= cfg.bisection_steps) break;
            const double mid = 0.5 * (lo + hi);
            if (auto wit = feasible(mid)) {
                found = wit;
                hi = mid;
            } else {
                lo = mid;
            }
            if (found && hi - lo <= 1e-10) break;
        }
        if (found && hi < best.alpha) {
            const WitnessCheck chk = check_two_point_witness(*found, zz, w, cfg.validate_samples);
            if (chk.ok) {
                best.alpha = hi;
                best.witness = found;
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Polynomial disc searches

namespace detail {

// phi(zeta) = z + zeta (w - z)/alpha + zeta (zeta - alpha) Q(zeta), deg Q = d - 2.
inline DiscMap two_point_disc(const Point& z, const Point& w, double alpha, const std::vector<double>& q, int d) {
    const int n = z.n();
    DiscMap phi = DiscMap::zero(n, d);
    const int nq = d - 1;
    for (int j = 0; j < n; ++j) {
        auto& c = phi.coeffs[static_cast<std::size_t>(j)];
        auto qc = [&](int e) -> Cx {
            if (e < 0 || e >= nq) return {0.0, 0.0};
            const std::size_t base = static_cast<std::size_t>(2 * (j * nq + e));
            return {q[base], q[base + 1]};
        };
        c[0] = z[static_cast<std::size_t>(j)];
        c[1] = (w[static_cast<std::size_t>(j)] - z[static_cast<std::size_t>(j)]) / alpha - alpha * qc(0);
        for (int e = 2; e <= d; ++e) c[static_cast<std::size_t>(e)] = qc(e - 2) - alpha * qc(e - 1);
    }
    return phi;
}

// phi(zeta) = zeta X / alpha + sum_{e >= 2} c_e zeta^e.
inline DiscMap metric_disc(const Direction& X, double alpha, const std::vector<double>& q, int d) {
    const int n = X.n();
    DiscMap phi = DiscMap::zero(n, d);
    const int nq = d - 1;
    for (int j = 0; j < n; ++j) {
        auto& c = phi.coeffs[static_cast<std::size_t>(j)];
        c[1] = X.x[static_cast<std::size_t>(j)] / alpha;
        for (int e = 2; e <= d; ++e) {
            const std::size_t base = static_cast<std::size_t>(2 * (j * nq + e - 2));
            c[static_cast<std::size_t>(e)] = Cx{q[base], q[base + 1]};
        }
    }
    return phi;
}

// Q for a target disc T (Taylor coefficients), by exact division of
// T - z - zeta (w - z)/alpha by zeta (zeta - alpha), remainder dropped.
inline std::vector<double> fit_two_point(const Point& z, const Point& w, double alpha,
                                         const std::vector<std::vector<Cx>>& taylor, int d) {
    const int n = z.n();
    const int nq = d - 1;
    std::vector<double> q(static_cast<std::size_t>(2 * n * nq), 0.0);
    for (int j = 0; j < n; ++j) {
        std::vector<Cx> r(static_cast<std::size_t>(d + 1));
        for (int e = 0; e <= d; ++e) r[static_cast<std::size_t>(e)] = taylor[static_cast<std::size_t>(j)][static_cast<std::size_t>(e)];
        r[0] -= z[static_cast<std::size_t>(j)];
        r[1] -= (w[static_cast<std::size_t>(j)] - z[static_cast<std::size_t>(j)]) / alpha;
        // S = (R - r0) / zeta has coefficients r[1..d]; divide S by (zeta - alpha)
        std::vector<Cx> quo(static_cast<std::size_t>(nq), Cx{0.0, 0.0});
        Cx carry{0.0, 0.0};
        for (int e = d; e >= 2; --e) {
            carry = r[static_cast<std::size_t>(e)] + alpha * carry;
            quo[static_cast<std::size_t>(e - 2)] = carry;
        }
        for (int e = 0; e < nq; ++e) {
            const std::size_t base = static_cast<std::size_t>(2 * (j * nq + e));
            q[base] = quo[static_cast<std::size_t>(e)].real();
            q[base + 1] = quo[static_cast<std::size_t>(e)].imag();
        }
    }
    return q;
}

// Taylor coefficients up to degree d of a disc holomorphic near the closed disc.
template <class Map>
std::vector<std::vector<Cx>> taylor_coefficients(const Map& phi, int n, int d, int samples = 64) {
    std::vector<std::vector<Cx>> t(static_cast<std::size_t>(n), std::vector<Cx>(static_cast<std::size_t>(d + 1), Cx{0.0, 0.0}));
    for (int k = 0; k < samples; ++k) {
        const double th = kTwoPi * k / samples;
        const Point p = phi(std::polar(1.0, th));
        for (int e = 0; e <= d; ++e) {
            const Cx wk = std::polar(1.0 / samples, -th * e);
            for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j)][static_cast<std::size_t>(e)] += p[static_cast<std::size_t>(j)] * wk;
        }
    }
    return t;
}

// Outcome of one polynomial restart.
struct PolyRun {
    double alpha = 2.0;
    std::optional<PolyDiscWitness> witness;
};

// Shared restart driver: probe just below alpha_hi, then bisection, each
// feasibility test a simplex run on max(0, 2 delta_min - margin).
template <class Build>
PolyRun poly_restart(Build&& build, std::vector<double> q, double alpha_floor, double alpha_hi, const SearchConfig& cfg,
                     double radius) {
    PolyRun run;
    auto feasible = [&](double alpha) -> std::optional<PolyDiscWitness> {
        auto obj = [&](const std::vector<double>& x) {
            try {
                const DiscMap phi = build(alpha, x);
                return std::max(0.0, 2.0 * cfg.delta_min - boundary_margin([&](Cx t) { return disc_eval(phi, t); },
                                                                         cfg.search_samples, radius));
            } catch (const std::exception&) {
                return 1e3;
            }
        };
        const auto res = nelder_mead(obj, q, 0.05, cfg.max_evals, 0.0);
        if (res.value > 0.0) return std::nullopt;
        const DiscMap phi = build(alpha, res.x);
        double margin = -1.0;
        try {
            margin = validate_disc(phi, std::max(cfg.validate_samples, 256), radius);
        } catch (const std::exception&) {
            return std::nullopt;
        }
        if (margin < cfg.delta_min) return std::nullopt;
        q = res.x;
        return PolyDiscWitness{phi, alpha, radius, margin};
    };
    double lo = alpha_floor, hi = alpha_hi;
    const double probe = hi - std::max(1e-9, 1e-3 * (hi - lo));
    if (!(probe > lo)) return run;
    auto wit = feasible(probe);
    if (!wit) return run;
    run.alpha = probe;
    run.witness = wit;
    hi = probe;
    for (int step = 0; step < cfg.bisection_steps && hi - lo > 1e-10; ++step) {
        const double mid = 0.5 * (lo + hi);
        if (auto w2 = feasible(mid)) {
            run.alpha = mid;
            run.witness = w2;
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return run;
}

}  // namespace detail

/// Result of a two-point upper bound search.
struct LempertResult {
    double value = 0.0;  // atanh(alpha)
    double alpha = 0.0;
    double lower = 0.0;  // p_lower used as the bisection floor
    DiscWitness witness = ConstantWitness{};
    double matching = 0.0;
};

/// Polynomial-disc search for the two-point problem in [alpha_floor, alpha_hi).
inline detail::PolyRun polynomial_two_point(const Point& z, const Point& w, double alpha_floor, double alpha_hi,
                                            const SearchConfig& cfg, const std::optional<LiftWitness>& seed_lift) {
    const int d = std::max(cfg.degree, 2);
    const int n = z.n();
    const std::size_t dim = static_cast<std::size_t>(2 * n * (d - 1));
    std::vector<double> base(dim, 0.0);
    if (seed_lift) {
        const DiscEvaluator ev(*seed_lift);
        const auto taylor = detail::taylor_coefficients(ev, n, d);
        base = detail::fit_two_point(z, w, alpha_hi, taylor, d);
    }
    std::vector<detail::PolyRun> runs(static_cast<std::size_t>(std::max(cfg.restarts, 0)));
    parallel_for(runs.size(), [&](std::size_t r) {
        std::vector<double> q = base;
        if (r == 1) std::fill(q.begin(), q.end(), 0.0);
        if (r >= 2) {
            std::mt19937_64 rng(detail::mix_seed(cfg.grid.seed, 5000 + r));
            std::normal_distribution<double> g(0.0, 0.01 * double(std::min<std::size_t>(r, 16)));
            for (auto& v : q) v += g(rng);
        }
        auto build = [&](double alpha, const std::vector<double>& x) { return detail::two_point_disc(z, w, alpha, x, d); };
        runs[r] = detail::poly_restart(build, q, alpha_floor, alpha_hi, cfg, 1.0);
    });
    detail::PolyRun best;
    for (auto& r : runs)
        if (r.witness && r.alpha < best.alpha) best = r;
    return best;
}

/// Upper bound for the Lempert function k~(z, w): the best validated disc
/// over the constant, lift, branched-lift and polynomial families. The
/// bisection floor is tanh(p_lower(z, w)); searching stops once the gap is
/// below cfg.collapse_tol.
inline LempertResult lempert_upper(const Point& z, const Point& w, const SearchConfig& cfg = {}) {
    if (z.n() != w.n()) throw DomainError("lempert_upper: dimension mismatch");
    require_inside(z, "lempert_upper");
    require_inside(w, "lempert_upper");
    LempertResult res;
    if (z == w) {
        res.witness = ConstantWitness{z};
        return res;
    }
    const PLowerResult lower = p_lower(z, w, cfg.grid);
    res.lower = lower.value;
    const double floor_alpha = std::tanh(lower.value);

    const MatchingResult m = matching_upper(z, w);
    res.matching = m.value;
    LiftWitness lift;
    lift.a = m.a.roots;
    for (int p : m.perm) lift.b.push_back(m.b.roots[static_cast<std::size_t>(p)]);
    lift.alpha = m.alpha;
    res.alpha = m.alpha;
    res.witness = lift;

    auto collapsed = [&] { return guarded_atanh(res.alpha) - res.lower <= cfg.collapse_tol; };
    if (!collapsed()) {
        const BranchedResult br = branched_upper(z, w, floor_alpha, res.alpha, cfg);
        if (br.witness && br.alpha < res.alpha) {
            res.alpha = br.alpha;
            res.witness = *br.witness;
        }
    }
    if (!collapsed() && cfg.restarts > 0) {
        const detail::PolyRun pr = polynomial_two_point(z, w, floor_alpha, res.alpha, cfg, lift);
        if (pr.witness && pr.alpha < res.alpha) {
            res.alpha = pr.alpha;
            res.witness = *pr.witness;
        }
    }
    res.value = guarded_atanh(res.alpha);
    return res;
}

// ---------------------------------------------------------------------------
// Infinitesimal bounds

struct KappaResult {
    double value = 0.0;  // alpha with alpha phi'(0) = X
    double lower = 0.0;  // rho_n(X)
    DiscWitness witness = PolyDiscWitness{};
    std::string family;
};

/// Smallest alpha (by bisection) with zeta X / alpha validated inside G_n.
inline std::optional<PolyDiscWitness> linear_metric_disc(const Direction& X, double alpha_lo, const SearchConfig& cfg) {
    const std::vector<double> none(static_cast<std::size_t>(2 * X.n()), 0.0);
    auto disc = [&](double alpha) { return detail::metric_disc(X, alpha, none, 2); };
    auto ok = [&](double alpha) {
        try {
            return validate_disc(disc(alpha), std::max(cfg.validate_samples, 256)) >= cfg.delta_min;
        } catch (const std::exception&) {
            return false;
        }
    };
    double lo = std::max(alpha_lo, 1e-300), hi = std::max(alpha_lo, 1e-12) * 1.5;
    int guard = 0;
    while (!ok(hi)) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 80) return std::nullopt;
    }
    for (int i = 0; i < 50 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    const DiscMap phi = disc(hi);
    return PolyDiscWitness{phi, hi, 1.0, validate_disc(phi, std::max(cfg.validate_samples, 256))};
}

namespace detail {

inline Direction rotate_direction(const Direction& X, Cx lambda) {
    Direction out = X;
    Cx pw = lambda;
    for (auto& c : out.x) {
        c *= pw;
        pw *= lambda;
    }
    return out;
}

// Weighted rotation lambda bringing X to a canonical representative of its
// orbit: the lowest nonzero component real positive, ties among the k-th
// roots broken by the smallest arguments of the later components.
inline Cx canonical_rotation(const Direction& X) {
    const auto supp = X.support();
    const int k = supp.front();
    const double theta = std::arg(X.x[static_cast<std::size_t>(k - 1)]);
    Cx best{1.0, 0.0};
    std::vector<double> best_key;
    for (int r = 0; r < k; ++r) {
        const Cx lam = std::polar(1.0, -(theta + kTwoPi * r) / k);
        const Direction Y = rotate_direction(X, lam);
        std::vector<double> key;
        for (std::size_t i = 1; i < supp.size(); ++i) {
            double a = std::arg(Y.x[static_cast<std::size_t>(supp[i] - 1)]);
            if (a < -1e-9) a += kTwoPi;
            key.push_back(std::round(a * 1e8));
        }
        if (r == 0 || key < best_key) {
            best = lam;
            best_key = key;
        }
    }
    return best;
}

inline KappaResult kappa_search(const Direction& X, const SearchConfig& cfg) {
    const int n = X.n();
    KappaResult res;
    res.lower = rho(X).value;
    const auto supp = X.support();
    if (supp.size() == 1 && n % supp[0] == 0) {
        const int k = supp[0];
        const Cx xk = X.x[static_cast<std::size_t>(k - 1)];
        const DiscMap phi = rotate_argument(extremal_disc(n, k), xk / std::abs(xk));
        PolyDiscWitness w{DiscMap{}, std::abs(xk) * double(k) / double(n), kNearBoundaryRadius, 0.0};
        // pin the derivative coefficient to X_k / alpha exactly
        w.disc = phi;
        w.disc.coeffs[static_cast<std::size_t>(k - 1)][1] = xk / w.alpha;
        w.margin = validate_disc(w.disc, std::max(cfg.validate_samples, 256), w.radius);
        if (w.margin <= 0.0) throw SearchError("kappa_upper: extremal disc failed validation");
        res.value = w.alpha;
        res.witness = w;
        res.family = "extremal";
        return res;
    }
    auto lin = linear_metric_disc(X, res.lower, cfg);
    if (!lin) throw SearchError("kappa_upper: no feasible disc found");
    res.value = lin->alpha;
    res.witness = *lin;
    res.family = "linear";
    if (res.value - res.lower <= cfg.collapse_tol || cfg.restarts <= 0) return res;

    const int d = std::max(cfg.degree, 2);
    const std::size_t dim = static_cast<std::size_t>(2 * n * (d - 1));
    std::vector<detail::PolyRun> runs(static_cast<std::size_t>(cfg.restarts));
    const double hi0 = res.value;
    parallel_for(runs.size(), [&](std::size_t r) {
        std::vector<double> q(dim, 0.0);
        if (r > 0) {
            std::mt19937_64 rng(detail::mix_seed(cfg.grid.seed, 9000 + r));
            std::normal_distribution<double> g(0.0, 0.01 * double(std::min<std::size_t>(r, 16)));
            for (auto& v : q) v += g(rng);
        }
        auto build = [&](double alpha, const std::vector<double>& x) { return detail::metric_disc(X, alpha, x, d); };
        runs[r] = detail::poly_restart(build, q, res.lower, hi0, cfg, 1.0);
    });
    for (auto& r : runs)
        if (r.witness && r.alpha < res.value) {
            res.value = r.alpha;
            res.witness = *r.witness;
            res.family = "polynomial";
        }
    return res;
}

}  // namespace detail

/// Upper bound for the Kobayashi-Royden metric at 0 in direction X.
///
/// A single-index direction X = X_k e_k with k | n is certified by the
/// rotated extremal disc with alpha = |X_k| k / n (validated at radius
/// 1 - 1e-6, where its image touches the boundary). Otherwise the search
/// runs on the canonical representative of X under the weighted rotations
/// (automorphisms fixing 0), so rotated directions get the same value, and
/// the witness is rotated back: the linear disc gives a first bound,
/// improved by the polynomial search.
inline KappaResult kappa_upper(const Direction& X, const SearchConfig& cfg = {}) {
    if (X.is_zero()) throw DomainError("kappa_upper: X must be nonzero");
    const int n = X.n();
    const auto supp = X.support();
    if (supp.size() == 1 && n % supp[0] == 0) return detail::kappa_search(X, cfg);
    const Cx lam = detail::canonical_rotation(X);
    KappaResult res = detail::kappa_search(detail::rotate_direction(X, lam), cfg);
    res.lower = rho(X).value;
    auto& w = std::get<PolyDiscWitness>(res.witness);
    const Cx inv = std::conj(lam);
    Cx pw = inv;
    for (int j = 0; j < n; ++j) {
        for (auto& c : w.disc.coeffs[static_cast<std::size_t>(j)]) c *= pw;
        // pin the derivative coefficient to X_j / alpha
        w.disc.coeffs[static_cast<std::size_t>(j)][1] = X.x[static_cast<std::size_t>(j)] / w.alpha;
        pw *= inv;
    }
    w.margin = validate_disc(w.disc, std::max(cfg.validate_samples, 256), w.radius);
    if (w.margin <= 0.0) throw SearchError("kappa_upper: rotated witness failed validation");
    return res;
}

struct Decomposition {
    std::vector<Direction> parts;
};

struct KappaMResult {
    double value = 0.0;
    double lower = 0.0;
    int m = 1;
    bool buseman = false;  // m >= 2n: the Kobayashi-Buseman relaxation
    Decomposition decomposition;
    std::vector<KappaResult> parts;
};

/// Memoising driver for the decomposition relaxations of the metric, so that
/// successive m reuse identical part bounds (monotone in m by construction).
class KappaMSearch {
public:
    KappaMSearch(Direction X, SearchConfig cfg) : X_(std::move(X)), cfg_(std::move(cfg)) {
        if (X_.is_zero()) throw DomainError("kappa_m_upper: X must be nonzero");
        lower_ = rho(X_).value;
        support_ = X_.support();
        cheap_ = cfg_;
        cheap_.restarts = std::min(cfg_.restarts, 1);
        cheap_.bisection_steps = std::min(cfg_.bisection_steps, 8);
        cheap_.max_evals = std::min(cfg_.max_evals, 150);
    }

    KappaMResult evaluate(int m) {
        if (m < 1) throw DomainError("kappa_m_upper: m must be >= 1");
        KappaMResult best;
        best.m = m;
        best.lower = lower_;
        best.buseman = m >= 2 * X_.n();
        best.value = std::numeric_limits<double>::infinity();
        const int s = static_cast<int>(support_.size());
        // set partitions of the support via restricted growth strings,
        // fewest blocks first
        std::vector<std::vector<int>> partitions;
        std::vector<int> rgs(static_cast<std::size_t>(s), 0);
        std::function<void(int, int)> gen = [&](int i, int used) {
            if (i == s) {
                if (used <= m) partitions.push_back(rgs);
                return;
            }
            for (int b = 0; b <= std::min(used, m - 1); ++b) {
                rgs[static_cast<std::size_t>(i)] = b;
                gen(i + 1, std::max(used, b + 1));
            }
        };
        gen(0, 0);
        std::stable_sort(partitions.begin(), partitions.end(), [](const auto& a, const auto& b) {
            return *std::max_element(a.begin(), a.end()) > *std::max_element(b.begin(), b.end());
        });
        for (const auto& part : partitions) {
            const int blocks = 1 + *std::max_element(part.begin(), part.end());
            std::vector<unsigned> masks(static_cast<std::size_t>(blocks), 0u);
            for (int i = 0; i < s; ++i) masks[static_cast<std::size_t>(part[static_cast<std::size_t>(i)])] |= 1u << i;
            double total = 0.0;
            KappaMResult cand;
            for (unsigned mask : masks) {
                const KappaResult& kr = block(mask);
                total += kr.value;
                cand.decomposition.parts.push_back(block_direction(mask));
                cand.parts.push_back(kr);
            }
            if (total < best.value) {
                best.value = total;
                best.decomposition = cand.decomposition;
                best.parts = cand.parts;
            }
            if (best.value - lower_ <= cfg_.collapse_tol) return best;
        }
        if (m >= 2) {
            const auto& refined = refinement();
            if (refined.value < best.value) {
                best.value = refined.value;
                best.decomposition = refined.decomposition;
                best.parts = refined.parts;
            }
        }
        return best;
    }

private:
    Direction block_direction(unsigned mask) const {
        Direction d(std::vector<Cx>(X_.x.size(), Cx{0.0, 0.0}));
        for (std::size_t i = 0; i < support_.size(); ++i)
            if (mask & (1u << i)) d.x[static_cast<std::size_t>(support_[i] - 1)] = X_.x[static_cast<std::size_t>(support_[i] - 1)];
        return d;
    }

    const KappaResult& block(unsigned mask) {
        auto it = cache_.find(mask);
        if (it == cache_.end()) it = cache_.emplace(mask, kappa_upper(block_direction(mask), cfg_)).first;
        return it->second;
    }

    // Simplex search over the first part of a two-part decomposition, started
    // from X/2, with cheap part bounds; computed once and shared by all m >= 2.
    const KappaMResult& refinement() {
        if (refined_) return *refined_;
        KappaMResult r;
        r.value = std::numeric_limits<double>::infinity();
        const std::size_t n = X_.x.size();
        std::vector<double> x0(2 * n);
        for (std::size_t j = 0; j < n; ++j) {
            x0[2 * j] = 0.5 * X_.x[j].real();
            x0[2 * j + 1] = 0.5 * X_.x[j].imag();
        }
        auto split = [&](const std::vector<double>& x) {
            Direction a{std::vector<Cx>(n)}, b{std::vector<Cx>(n)};
            for (std::size_t j = 0; j < n; ++j) {
                a.x[j] = Cx{x[2 * j], x[2 * j + 1]};
                b.x[j] = X_.x[j] - a.x[j];
            }
            return std::pair{a, b};
        };
        auto cost = [&](const std::vector<double>& x) {
            auto [a, b] = split(x);
            double total = 0.0;
            std::vector<KappaResult> parts;
            for (const Direction& d : {a, b}) {
                if (d.is_zero()) continue;
                try {
                    parts.push_back(kappa_upper(d, cheap_));
                } catch (const std::exception&) {
                    return 1e9;
                }
                total += parts.back().value;
            }
            if (total < r.value) {
                r.value = total;
                r.decomposition.parts.clear();
                for (const Direction& d : {a, b})
                    if (!d.is_zero()) r.decomposition.parts.push_back(d);
                r.parts = parts;
            }
            return total;
        };
        double scale = 0.0;
        for (const Cx& c : X_.x) scale = std::max(scale, std::abs(c));
        if (cfg_.chain_evals > 0) nelder_mead(cost, x0, 0.25 * scale, cfg_.chain_evals);
        refined_ = r;
        return *refined_;
    }

    Direction X_;
    SearchConfig cfg_, cheap_;
    double lower_ = 0.0;
    std::vector<int> support_;
    std::map<unsigned, KappaResult> cache_;
    std::optional<KappaMResult> refined_;
};

/// Upper bound for the m-th decomposition relaxation of the metric at 0.
inline KappaMResult kappa_m_upper(const Direction& X, int m, const SearchConfig& cfg = {}) {
    if (m < 1) throw DomainError("kappa_m_upper: m must be >= 1");
    KappaMSearch s(X, cfg);
    KappaMResult best = s.evaluate(1);
    for (int k = 2; k <= m; ++k) {
        KappaMResult r = s.evaluate(k);
        if (r.value < best.value) best = r;
        best.m = k;
        best.buseman = k >= 2 * X.n();
    }
    return best;
}

struct Chain {
    std::vector<Point> points;  // z = points.front(), w = points.back()
};

struct KmResult {
    double value = 0.0;
    int m = 1;
    Chain chain;
    std::vector<LempertResult> segments;
};

/// Upper bound for the m-th chain relaxation k^(m)(z, w). Intermediate
/// points are found by a simplex search on the sum of matching bounds,
/// seeded at root-geodesic and straight-line points; each segment is then
/// bounded by lempert_upper. Never exceeds the value for m - 1.
inline KmResult k_m_upper(const Point& z, const Point& w, int m, const SearchConfig& cfg = {}) {
    if (m < 1) throw DomainError("k_m_upper: m must be >= 1");
    KmResult best;
    best.m = 1;
    best.chain.points = {z, w};
    best.segments = {lempert_upper(z, w, cfg)};
    best.value = best.segments[0].value;
    if (z == w) {
        best.m = m;
        return best;
    }
    const int n = z.n();
    const MatchingResult mt = matching_upper(z, w);
    for (int k = 2; k <= m; ++k) {
        // seeds: roots moved along their Poincare geodesics, and straight line
        std::vector<Point> seeds;
        RootMultiset mid;
        for (int s = 1; s < k; ++s) {
            const double frac = double(s) / k;
            RootMultiset r;
            for (int i = 0; i < n; ++i) {
                const Cx a = mt.a.roots[static_cast<std::size_t>(i)];
                const Cx b = mt.b.roots[static_cast<std::size_t>(mt.perm[static_cast<std::size_t>(i)])];
                if (a == b) {
                    r.roots.push_back(a);
                    continue;
                }
                // point at hyperbolic fraction frac from a towards b
                const double d = poincare(a, b);
                const Cx u = disc_automorphism(a, b) / std::abs(disc_automorphism(a, b));
                const Cx t = u * std::tanh(frac * d);
                r.roots.push_back((t + a) / (1.0 + std::conj(a) * t));
            }
            seeds.push_back(sigma(r));
        }
        std::vector<double> x0;
        for (const Point& p : seeds)
            for (const Cx& c : p.z) {
                x0.push_back(c.real());
                x0.push_back(c.imag());
            }
        auto unpack = [&](const std::vector<double>& x) {
            std::vector<Point> pts{z};
            for (int s = 0; s < k - 1; ++s) {
                std::vector<Cx> c(static_cast<std::size_t>(n));
                for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = {x[static_cast<std::size_t>(2 * (s * n + j))], x[static_cast<std::size_t>(2 * (s * n + j) + 1)]};
                pts.emplace_back(std::move(c));
            }
            pts.push_back(w);
            return pts;
        };
        auto cost = [&](const std::vector<double>& x) {
            const auto pts = unpack(x);
            double total = 0.0;
            try {
                for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
                    if (member_roots(pts[s + 1]).cls != Membership::Inside) return 1e9;
                    total += pts[s] == pts[s + 1] ? 0.0 : matching_upper(pts[s], pts[s + 1]).value;
                }
            } catch (const std::exception&) {
                return 1e9;
            }
            return total;
        };
        const auto res = nelder_mead(cost, x0, 0.02, cfg.chain_evals);
        const auto pts = unpack(res.x);
        KmResult cand;
        cand.m = k;
        cand.chain.points = pts;
        bool ok = true;
        for (std::size_t s = 0; s + 1 < pts.size() && ok; ++s) {
            try {
                cand.segments.push_back(lempert_upper(pts[s], pts[s + 1], cfg));
                cand.value += cand.segments.back().value;
            } catch (const std::exception&) {
                ok = false;
            }
        }
        if (ok && cand.value < best.value) best = cand;
        best.m = k;
    }
    best.m = m;
    return best;
}

}  // namespace symdisc
