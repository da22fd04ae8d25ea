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

// Experiment reports.
//
// A report is a JSON document holding quantities and assertions. Each
// quantity has a kind, its inputs and a witness; its value is always computed
// from the witness by evaluate_quantity, both when the report is built and by
// recheck, so a report can be re-validated without running any search.
// Assertions are relations between quantity values and constants.

#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "symdisc/disc_upper.hpp"
#include "symdisc/io.hpp"

namespace symdisc {

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Factor domains of G_2 x G

inline Cx inner(const std::vector<Cx>& x, const std::vector<Cx>& a) {
    Cx s{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(a[i]);
    return s;
}

inline double norm2(const std::vector<Cx>& x) { return std::sqrt(std::max(0.0, inner(x, x).real())); }

/// Involutive automorphism of the unit ball exchanging a and 0.
inline std::vector<Cx> ball_automorphism(const std::vector<Cx>& a, const std::vector<Cx>& x) {
    const double aa = inner(a, a).real();
    if (aa >= 1.0) throw DomainError("ball_automorphism: centre outside the ball");
    std::vector<Cx> out(x.size());
    if (aa == 0.0) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = -x[i];
        return out;
    }
    const Cx xa = inner(x, a);
    const double s = std::sqrt(1.0 - aa);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Cx p = xa / aa * a[i];  // projection of x on a
        out[i] = (a[i] - p - s * (x[i] - p)) / (1.0 - xa);
    }
    return out;
}

/// tanh of the Caratheodory distance of the factor G (polydisc or ball).
inline double factor_mobius(GaugeKind kind, const std::vector<Cx>& a, const std::vector<Cx>& b) {
    if (a.empty()) return 0.0;
    if (kind == GaugeKind::Polydisc) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, mobius(a[i], b[i]));
        return m;
    }
    if (norm2(a) >= 1.0 || norm2(b) >= 1.0) throw DomainError("factor_mobius: point outside the ball");
    return norm2(ball_automorphism(a, b));
}

/// Disc in G through a (at 0) and b (at alpha), alpha >= factor_mobius(a, b).
inline std::vector<Cx> factor_geodesic(GaugeKind kind, const std::vector<Cx>& a, const std::vector<Cx>& b, double alpha,
                                       Cx zeta) {
    std::vector<Cx> out(a.size());
    if (kind == GaugeKind::Polydisc) {
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = mobius_interpolant(a[i], b[i], alpha, zeta);
        return out;
    }
    std::vector<Cx> v = ball_automorphism(a, b);
    for (auto& c : v) c *= zeta / alpha;
    return ball_automorphism(a, v);
}

inline std::pair<Point, std::vector<Cx>> split_product(const Point& p) {
    if (p.n() < 2) throw DomainError("product point needs at least two coordinates");
    return {Point(std::vector<Cx>(p.z.begin(), p.z.begin() + 2)), std::vector<Cx>(p.z.begin() + 2, p.z.end())};
}

// ---------------------------------------------------------------------------
// The line L_{n,2n} in G_{2n}

/// (s, p) -> point of C^{2n} with z_n = sign s, z_{2n} = p, other coordinates 0.
inline Point embed_line(const Point& g2, int n, int sign) {
    if (g2.n() != 2 || n < 1) throw DomainError("embed_line: needs a point of C^2 and n >= 1");
    Point out = Point::zero(2 * n);
    out.z[static_cast<std::size_t>(n - 1)] += double(sign) * g2[0];
    out.z[static_cast<std::size_t>(2 * n - 1)] += g2[1];
    return out;
}

struct EmbeddingSign {
    int sign = 0;
    bool plus = false, minus = false;                        // root structure reproduced
    bool plus_membership = false, minus_membership = false;  // membership preserved
};

/// Finds the sign for which embed_line is compatible with the root oracle on
/// seeded samples: the n-th powers of the roots of the embedded point must be
/// the roots of the G_2 point, each n times, and membership must be
/// preserved. Membership alone cannot decide, since flipping the sign maps
/// the roots u to -u. Throws when no sign is consistent.
inline EmbeddingSign detect_embedding_sign(int n, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Point> inside, outside;
    for (int i = 0; i < samples; ++i) {
        inside.push_back(sample_member(2, rng, 0.9));
        RootMultiset r;
        r.roots.push_back(std::polar(1.05 + 0.5 * u01(rng), kTwoPi * u01(rng)));
        r.roots.push_back(std::polar(0.9 * std::sqrt(u01(rng)), kTwoPi * u01(rng)));
        outside.push_back(sigma(r));
    }
    auto membership = [&](int s) {
        for (const Point& p : inside)
            if (member_roots(embed_line(p, n, s)).cls != Membership::Inside) return false;
        for (const Point& p : outside)
            if (member_roots(embed_line(p, n, s)).cls != Membership::Outside) return false;
        return true;
    };
    auto structure = [&](int s) {
        for (const Point& p : inside) {
            const auto u = roots_of(p).roots;
            for (const Cx& t : roots_of(embed_line(p, n, s)).roots) {
                const Cx tn = std::pow(t, n);
                if (std::min(std::abs(tn - u[0]), std::abs(tn - u[1])) > 1e-6) return false;
            }
        }
        return true;
    };
    EmbeddingSign e;
    e.plus_membership = membership(1);
    e.minus_membership = membership(-1);
    e.plus = e.plus_membership && structure(1);
    e.minus = e.minus_membership && structure(-1);
    if (e.plus)
        e.sign = 1;
    else if (e.minus)
        e.sign = -1;
    else
        throw DomainError("detect_embedding_sign: no consistent sign");
    return e;
}

// ---------------------------------------------------------------------------
// Quantities

struct QuantityValue {
    double value = 0.0;
    bool valid = true;
    std::string cls;  // verdict class, when applicable
    std::string reason;
};

namespace detail {

// Condition number of evaluating f_lambda(z) as a quotient of sums.
inline double f_condition(const Point& z, Cx lambda) {
    const int n = z.n();
    double num = 0.0, den = double(n);
    for (int j = 1; j <= n; ++j) num += j * std::abs(z[static_cast<std::size_t>(j - 1)]);
    for (int j = 1; j < n; ++j) den += (n - j) * std::abs(z[static_cast<std::size_t>(j - 1)]);
    const double d = std::abs(f_denominator(z, lambda));
    return (num + std::abs(f_diag(z, lambda)) * den) / d;
}

// max |f_lambda(phi(zeta)) - lambda^(k-1) zeta| over seeded (lambda, zeta) in
// T x D; with `conditioned`, each error is divided by max(1, condition).
inline double extremal_identity_error(int n, int k, int samples, std::uint64_t seed, bool conditioned = false) {
    const DiscMap phi = extremal_disc(n, k);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Cx lambda = std::polar(1.0, kTwoPi * u01(rng));
        const Cx zeta = std::polar(std::sqrt(u01(rng)) * 0.999, kTwoPi * u01(rng));
        const Point p = disc_eval(phi, zeta);
        double e = std::abs(f_diag(p, lambda) - std::pow(lambda, k - 1) * zeta);
        if (conditioned) e /= std::max(1.0, f_condition(p, lambda));
        worst = std::max(worst, e);
    }
    return worst;
}

// max |h(pi_lambda p) - |lambda| h(p)| over random p in C^{2+m} and |lambda| <= 1.
inline double pi_scaling_error(GaugeKind kind, int m, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        RootMultiset r;
        for (int i = 0; i < 2; ++i) r.roots.push_back(std::polar(1.5 * std::sqrt(u01(rng)), kTwoPi * u01(rng)));
        Point p = sigma(r);
        for (int i = 0; i < m; ++i) p.z.push_back(std::polar(1.5 * std::sqrt(u01(rng)), kTwoPi * u01(rng)));
        const Cx lambda = s == 0 ? Cx{0.5, 0.0} : std::polar(std::sqrt(u01(rng)), kTwoPi * u01(rng));
        const double lhs = product_gauge(pi_lambda(p, lambda), kind, m);
        worst = std::max(worst, std::abs(lhs - std::abs(lambda) * product_gauge(p, kind, m)));
    }
    return worst;
}

inline QuantityValue invalid(std::string why) {
    QuantityValue q;
    q.valid = false;
    q.value = std::numeric_limits<double>::quiet_NaN();
    q.reason = std::move(why);
    return q;
}

inline QuantityValue from_check(const WitnessCheck& c, double value) {
    if (!c.ok) return invalid(c.reason);
    QuantityValue q;
    q.value = value;
    return q;
}

inline QuantityValue eval_product_upper(const json& in, const json& wit) {
    const Point z = point_from_json(in.at("z")), w = point_from_json(in.at("w"));
    const GaugeKind kind = parse_gauge(in.at("gauge").get<std::string>());
    const int m = in.at("m").get<int>();
    if (z.n() != m + 2 || w.n() != m + 2) return invalid("product point dimension mismatch");
    auto [z2, zg] = split_product(z);
    auto [w2, wg] = split_product(w);
    const DiscWitness g2 = witness_from_json(wit.at("g2"));
    const WitnessCheck c = check_two_point_witness(g2, z2, w2);
    if (!c.ok) return invalid("G_2 factor: " + c.reason);
    const double a1 = c.alpha;
    const double a2 = factor_mobius(kind, zg, wg);
    const double alpha = std::max(a1, a2);
    if (alpha == 0.0) return QuantityValue{};
    const DiscEvaluator ev(g2);
    auto disc = [&](Cx zeta) {
        Point p = a1 > 0.0 ? ev(zeta * (a1 / alpha)) : z2;
        const auto g = a2 > 0.0 ? factor_geodesic(kind, zg, wg, alpha, zeta) : zg;
        p.z.insert(p.z.end(), g.begin(), g.end());
        return p;
    };
    if (max_coord_diff(disc(0.0), z) > 1e-8 || max_coord_diff(disc(alpha), w) > 1e-8)
        return invalid("product disc does not interpolate");
    double worst = 1.0;
    for (int s = 0; s < 512; ++s)
        worst = std::min(worst, 1.0 - product_gauge(disc(std::polar(kNearBoundaryRadius, kTwoPi * s / 512)), kind, m));
    if (!(worst > 0.0)) return invalid("product disc leaves the domain");
    QuantityValue q;
    q.value = guarded_atanh(alpha);
    return q;
}

inline QuantityValue eval_embedded_upper(const json& in, const json& wit) {
    const Point z = point_from_json(in.at("z")), w = point_from_json(in.at("w"));
    const int n = in.at("n").get<int>();
    const int sign = in.at("sign").get<int>();
    const Point z2 = point_from_json(wit.at("z2")), w2 = point_from_json(wit.at("w2"));
    if (max_coord_diff(embed_line(z2, n, sign), z) > 1e-12 || max_coord_diff(embed_line(w2, n, sign), w) > 1e-12)
        return invalid("embedding does not reproduce the endpoints");
    const DiscWitness g2 = witness_from_json(wit.at("g2"));
    const WitnessCheck c = check_two_point_witness(g2, z2, w2);
    if (!c.ok) return invalid("G_2 disc: " + c.reason);
    if (std::holds_alternative<ConstantWitness>(g2)) return QuantityValue{};
    // the embedded disc itself, validated in G_{2n}
    const DiscEvaluator ev(g2);
    const double radius =
        std::holds_alternative<PolyDiscWitness>(g2) ? std::get<PolyDiscWitness>(g2).radius : kNearBoundaryRadius;
    const double margin = boundary_margin([&](Cx t) { return embed_line(ev(t), n, sign); }, 512, radius);
    if (!(margin > 0.0)) return invalid("embedded disc leaves G_2n");
    QuantityValue q;
    q.value = guarded_atanh(c.alpha);
    return q;
}

}  // namespace detail

/// Value of a quantity recomputed from its inputs and witness, without search.
inline QuantityValue evaluate_quantity(const std::string& kind, const json& in, const json& wit) {
    try {
        if (kind == "rho") {
            const Direction X = direction_from_json(in.at("X"));
            QuantityValue q;
            const auto cf = rho_closed_form(X);
            q.value = cf ? *cf : rho_objective(X, wit.at("angle").get<double>());
            return q;
        }
        if (kind == "p_lower") {
            const Point z = point_from_json(in.at("z")), w = point_from_json(in.at("w"));
            if (member_roots(z).cls != Membership::Inside || member_roots(w).cls != Membership::Inside)
                return detail::invalid("endpoint not inside");
            QuantityValue q;
            if (z == w)
                q.value = 0.0;
            else if (z.n() == 1)
                q.value = poincare(z[0], w[0]);
            else
                q.value = p_objective(z, w, wit.at("angles").get<std::vector<double>>());
            return q;
        }
        if (kind == "lempert_upper") {
            const Point z = point_from_json(in.at("z")), w = point_from_json(in.at("w"));
            if (member_roots(z).cls != Membership::Inside || member_roots(w).cls != Membership::Inside)
                return detail::invalid("endpoint not inside");
            const WitnessCheck c = check_two_point_witness(witness_from_json(wit), z, w);
            return detail::from_check(c, c.ok ? guarded_atanh(c.alpha) : 0.0);
        }
        if (kind == "kappa_upper") {
            const WitnessCheck c = check_metric_witness(witness_from_json(wit), direction_from_json(in.at("X")));
            return detail::from_check(c, c.alpha);
        }
        if (kind == "kappa_decomp") {
            const Direction X = direction_from_json(in.at("X"));
            std::vector<Cx> sum(X.x.size(), Cx{0.0, 0.0});
            QuantityValue q;
            for (const auto& part : wit.at("parts")) {
                const Direction Xi = direction_from_json(part.at("X"));
                if (Xi.n() != X.n()) return detail::invalid("part dimension mismatch");
                for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += Xi.x[j];
                const WitnessCheck c = check_metric_witness(witness_from_json(part.at("witness")), Xi);
                if (!c.ok) return detail::invalid("part: " + c.reason);
                q.value += c.alpha;
            }
            for (std::size_t j = 0; j < sum.size(); ++j)
                if (std::abs(sum[j] - X.x[j]) > 1e-12) return detail::invalid("parts do not sum to X");
            return q;
        }
        if (kind == "chain") {
            const Point z = point_from_json(in.at("z")), w = point_from_json(in.at("w"));
            std::vector<Point> pts;
            for (const auto& p : wit.at("points")) pts.push_back(point_from_json(p));
            const auto& segs = wit.at("segments");
            if (pts.size() < 2 || segs.size() + 1 != pts.size()) return detail::invalid("malformed chain");
            if (!(pts.front() == z) || !(pts.back() == w)) return detail::invalid("chain endpoints differ");
            QuantityValue q;
            for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
                if (member_roots(pts[s + 1]).cls != Membership::Inside) return detail::invalid("chain point not inside");
                const WitnessCheck c = check_two_point_witness(witness_from_json(segs[s]), pts[s], pts[s + 1]);
                if (!c.ok) return detail::invalid("segment: " + c.reason);
                q.value += guarded_atanh(c.alpha);
            }
            return q;
        }
        if (kind == "verdict") {
            const Point z = point_from_json(in.at("z"));
            const std::string oracle = in.at("oracle").get<std::string>();
            const Verdict v = oracle == "sup" ? member_sup(z) : member_roots(z);
            QuantityValue q;
            q.value = v.margin;
            q.cls = to_string(v.cls);
            return q;
        }
        if (kind == "h1") return QuantityValue{h1(point_from_json(in.at("point"))), true, "", ""};
        if (kind == "h1_formula") {
            const double c = std::abs(cx_from_json(in.at("c")));
            return QuantityValue{(1.0 + std::sqrt(1.0 + 16.0 * c)) / 2.0, true, "", ""};
        }
        if (kind == "constant") return QuantityValue{in.at("value").get<double>(), true, "", ""};
        if (kind == "extremal_identity_error") {
            return QuantityValue{detail::extremal_identity_error(in.at("n").get<int>(), in.at("k").get<int>(),
                                                                 in.at("samples").get<int>(), in.at("seed").get<std::uint64_t>(),
                                                                 in.value("conditioned", false)),
                                 true, "", ""};
        }
        if (kind == "pi_scaling_error") {
            return QuantityValue{detail::pi_scaling_error(parse_gauge(in.at("gauge").get<std::string>()), in.at("m").get<int>(),
                                                          in.at("samples").get<int>(), in.at("seed").get<std::uint64_t>()),
                                 true, "", ""};
        }
        if (kind == "embedding_sign") {
            const EmbeddingSign e = detect_embedding_sign(in.at("n").get<int>(), in.at("samples").get<int>(),
                                                          in.at("seed").get<std::uint64_t>());
            return QuantityValue{double(e.sign), true, "", ""};
        }
        if (kind == "product_lower") {
            const Point z = point_from_json(in.at("z")), w = point_from_json(in.at("w"));
            const GaugeKind gk = parse_gauge(in.at("gauge").get<std::string>());
            auto [z2, zg] = split_product(z);
            auto [w2, wg] = split_product(w);
            if (product_gauge(z, gk, in.at("m").get<int>()) >= 1.0 || product_gauge(w, gk, in.at("m").get<int>()) >= 1.0)
                return detail::invalid("endpoint not inside");
            const double pg = z2 == w2 ? 0.0 : p_objective(z2, w2, wit.at("angles").get<std::vector<double>>());
            return QuantityValue{std::max(pg, guarded_atanh(factor_mobius(gk, zg, wg))), true, "", ""};
        }
        if (kind == "product_upper") return detail::eval_product_upper(in, wit);
        if (kind == "embedded_upper") return detail::eval_embedded_upper(in, wit);
        return detail::invalid("unknown quantity kind '" + kind + "'");
    } catch (const std::exception& e) {
        return detail::invalid(e.what());
    }
}

// ---------------------------------------------------------------------------
// Assertions

/// An operand: a quantity reference or a constant.
struct Ref {
    std::string id;
    double constant = 0.0;

    static Ref q(std::string id) { return Ref{std::move(id), 0.0}; }
    static Ref c(double v) { return Ref{"", v}; }
    [[nodiscard]] json to_json() const { return id.empty() ? json{{"const", constant}} : json{{"ref", id}}; }
};

namespace detail {

inline std::optional<double> operand(const json& r, const std::map<std::string, QuantityValue>& qs) {
    if (r.contains("const")) return r.at("const").get<double>();
    const auto it = qs.find(r.at("ref").get<std::string>());
    if (it == qs.end() || !it->second.valid) return std::nullopt;
    return it->second.value;
}

}  // namespace detail

/// Pass flag of an assertion given the quantity values.
///   le:        a <= b + tol
///   abs_le:    |a - b| <= tol
///   class_eq:  class of quantity a equals `expected`
///   valid:     witness of quantity a re-validates
inline bool evaluate_assertion(const json& a, const std::map<std::string, QuantityValue>& qs) {
    const std::string op = a.at("op").get<std::string>();
    if (op == "class_eq" || op == "valid") {
        const auto it = qs.find(a.at("a").at("ref").get<std::string>());
        if (it == qs.end() || !it->second.valid) return false;
        return op == "valid" || it->second.cls == a.at("expected").get<std::string>();
    }
    const auto x = detail::operand(a.at("a"), qs), y = detail::operand(a.at("b"), qs);
    if (!x || !y) return false;
    const double tol = a.at("tol").get<double>();
    if (op == "le") return *x <= *y + tol;
    if (op == "abs_le") return std::abs(*x - *y) <= tol;
    throw DomainError("unknown assertion op '" + op + "'");
}

// ---------------------------------------------------------------------------
// Reports

struct ExperimentReport {
    json doc;

    [[nodiscard]] bool passed() const {
        for (const auto& a : doc.at("assertions"))
            if (!a.at("pass").get<bool>()) return false;
        return true;
    }
    [[nodiscard]] double value(const std::string& id) const {
        for (const auto& q : doc.at("quantities"))
            if (q.at("id") == id) return q.at("valid").get<bool>() ? q.at("value").get<double>() : std::numeric_limits<double>::quiet_NaN();
        throw DomainError("no quantity '" + id + "'");
    }
    [[nodiscard]] const json& quantity(const std::string& id) const {
        for (const auto& q : doc.at("quantities"))
            if (q.at("id") == id) return q;
        throw DomainError("no quantity '" + id + "'");
    }
};

class ReportBuilder {
public:
    ReportBuilder(std::string experiment, json inputs, const SearchConfig& cfg)
        : start_(std::chrono::steady_clock::now()) {
        doc_["experiment"] = std::move(experiment);
        doc_["version"] = kVersion;
        doc_["inputs"] = std::move(inputs);
        doc_["config"] = to_json(cfg);
        doc_["fingerprint"] = fingerprint(cfg);
        doc_["seed"] = cfg.grid.seed;
        doc_["quantities"] = json::array();
        doc_["assertions"] = json::array();
        doc_["intervals"] = json::array();
        doc_["notes"] = json::array();
    }

    QuantityValue quantity(const std::string& id, const std::string& kind, json inputs, json witness) {
        if (values_.count(id)) throw DomainError("duplicate quantity id '" + id + "'");
        const QuantityValue v = evaluate_quantity(kind, inputs, witness);
        json q = {{"id", id}, {"kind", kind}, {"inputs", std::move(inputs)}, {"witness", std::move(witness)}, {"valid", v.valid}};
        q["value"] = v.valid ? json(v.value) : json(nullptr);
        if (!v.cls.empty()) q["class"] = v.cls;
        if (!v.reason.empty()) q["reason"] = v.reason;
        doc_["quantities"].push_back(std::move(q));
        values_[id] = v;
        return v;
    }

    void check_le(const std::string& id, const std::string& what, const Ref& a, const Ref& b, double tol) {
        add({{"id", id}, {"what", what}, {"op", "le"}, {"a", a.to_json()}, {"b", b.to_json()}, {"tol", tol}});
    }
    void check_abs(const std::string& id, const std::string& what, const Ref& a, const Ref& b, double tol) {
        add({{"id", id}, {"what", what}, {"op", "abs_le"}, {"a", a.to_json()}, {"b", b.to_json()}, {"tol", tol}});
    }
    void check_class(const std::string& id, const std::string& what, const std::string& q, const std::string& expected) {
        add({{"id", id}, {"what", what}, {"op", "class_eq"}, {"a", Ref::q(q).to_json()}, {"expected", expected}});
    }
    void check_valid(const std::string& id, const std::string& what, const std::string& q) {
        add({{"id", id}, {"what", what}, {"op", "valid"}, {"a", Ref::q(q).to_json()}});
    }

    /// Records [lower, upper]; `collapsed` when upper - lower <= tol.
    void interval(const std::string& label, const std::string& lower, const std::string& upper, double tol,
                  const std::string& note = "") {
        const QuantityValue& lo = values_.at(lower);
        const QuantityValue& hi = values_.at(upper);
        json iv = {{"label", label}, {"lower", lower}, {"upper", upper}, {"collapse_tol", tol}};
        iv["lower_value"] = lo.valid ? json(lo.value) : json(nullptr);
        iv["upper_value"] = hi.valid ? json(hi.value) : json(nullptr);
        const bool collapsed = lo.valid && hi.valid && hi.value - lo.value <= tol;
        iv["collapsed"] = collapsed;
        iv["width"] = lo.valid && hi.valid ? json(hi.value - lo.value) : json(nullptr);
        if (!note.empty()) iv["note"] = note;
        doc_["intervals"].push_back(std::move(iv));
    }

    [[nodiscard]] bool collapsed(const std::string& lower, const std::string& upper, double tol) const {
        const auto& lo = values_.at(lower);
        const auto& hi = values_.at(upper);
        return lo.valid && hi.valid && hi.value - lo.value <= tol;
    }

    void note(const std::string& s) { doc_["notes"].push_back(s); }
    void set(const std::string& key, json v) { doc_[key] = std::move(v); }

    ExperimentReport finish(bool timing) {
        doc_["pass"] = true;
        for (const auto& a : doc_["assertions"])
            if (!a["pass"].get<bool>()) doc_["pass"] = false;
        if (timing)
            doc_["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        return ExperimentReport{std::move(doc_)};
    }

private:
    void add(json a) {
        a["pass"] = evaluate_assertion(a, values_);
        doc_["assertions"].push_back(std::move(a));
    }

    json doc_;
    std::map<std::string, QuantityValue> values_;
    std::chrono::steady_clock::time_point start_;
};

struct RecheckResult {
    bool identical = true;  // every pass flag reproduced
    bool all_pass = true;
    std::vector<std::string> mismatches;
    int assertions = 0;
};

/// Re-evaluates all quantities from their serialized witnesses, then all
/// assertions, and compares the pass flags with the stored ones.
inline RecheckResult recheck(const json& doc) {
    RecheckResult r;
    std::map<std::string, QuantityValue> qs;
    for (const auto& q : doc.at("quantities")) {
        QuantityValue v = evaluate_quantity(q.at("kind").get<std::string>(), q.at("inputs"), q.at("witness"));
        qs[q.at("id").get<std::string>()] = v;
    }
    for (const auto& a : doc.at("assertions")) {
        ++r.assertions;
        const bool now = evaluate_assertion(a, qs);
        const bool stored = a.at("pass").get<bool>();
        r.all_pass = r.all_pass && now;
        if (now != stored) {
            r.identical = false;
            r.mismatches.push_back(a.at("id").get<std::string>());
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Bound intervals

/// Certified [lower, upper] with the witnesses of both sides.
struct BoundInterval {
    double lower = 0.0;
    double upper = 0.0;
    json lower_witness;
    json upper_witness;
    json metadata;
};

namespace detail {

inline json decomposition_witness(const KappaMResult& r) {
    json parts = json::array();
    for (std::size_t i = 0; i < r.parts.size(); ++i)
        parts.push_back({{"X", to_json(r.decomposition.parts[i])}, {"witness", to_json(r.parts[i].witness)}});
    return {{"parts", parts}};
}

inline json chain_witness(const KmResult& r) {
    json pts = json::array(), segs = json::array();
    for (const Point& p : r.chain.points) pts.push_back(to_json(p));
    for (const auto& s : r.segments) segs.push_back(to_json(s.witness));
    return {{"points", pts}, {"segments", segs}};
}

inline std::uint64_t experiment_seed(const SearchConfig& cfg, std::uint64_t salt) { return mix_seed(cfg.grid.seed, salt); }

}  // namespace detail

/// [p_lower, lempert_upper] for a pair of points of G_n.
inline BoundInterval bounds_two_point(const Point& z, const Point& w, const SearchConfig& cfg = {}) {
    BoundInterval b;
    const LempertResult up = lempert_upper(z, w, cfg);
    const PLowerResult lo = p_lower(z, w, cfg.grid);
    b.lower = lo.value;
    b.upper = up.value;
    b.lower_witness = {{"angles", lo.angles}};
    b.upper_witness = to_json(up.witness);
    b.metadata = {{"heuristic_lower", lo.heuristic}, {"matching_upper", up.matching}, {"fingerprint", fingerprint(cfg)}};
    return b;
}

/// [rho, kappa_upper] for a direction at the origin.
inline BoundInterval bounds_metric(const Direction& X, const SearchConfig& cfg = {}) {
    BoundInterval b;
    const RhoResult r = rho(X);
    const KappaResult k = kappa_upper(X, cfg);
    b.lower = r.value;
    b.upper = k.value;
    b.lower_witness = {{"angle", r.angle}};
    b.upper_witness = to_json(k.witness);
    b.metadata = {{"family", k.family}, {"fingerprint", fingerprint(cfg)}};
    return b;
}

// ---------------------------------------------------------------------------
// Experiments

/// Adds rho and the kappa^(m) table for m = 1..max_m to a report, with the
/// sandwich and monotonicity assertions.
inline void add_metric_table(ReportBuilder& rb, const std::string& tag, const Direction& X, int max_m,
                             const SearchConfig& cfg) {
    const RhoResult r = rho(X);
    const std::string rid = "rho_" + tag;
    rb.quantity(rid, "rho", {{"X", to_json(X)}}, {{"angle", r.angle}});
    KappaMSearch search(X, cfg);
    std::optional<KappaMResult> prev;
    for (int m = 1; m <= max_m; ++m) {
        KappaMResult km = search.evaluate(m);
        if (prev && prev->value < km.value) km = *prev;  // min over m' <= m
        const std::string id = "kappa" + std::to_string(m) + "_" + tag;
        rb.quantity(id, "kappa_decomp", {{"X", to_json(X)}, {"m", m}}, detail::decomposition_witness(km));
        rb.check_le("sandwich_" + id, "rho <= kappa^(" + std::to_string(m) + ") upper", Ref::q(rid), Ref::q(id), 1e-9);
        if (m > 1)
            rb.check_le("monotone_" + id, "kappa^(m) upper non-increasing in m", Ref::q(id),
                        Ref::q("kappa" + std::to_string(m - 1) + "_" + tag), 1e-12);
        prev = km;
    }
}

struct ThmOneOptions {
    bool collapse = true;      // k | n directions and L_{k,l} samples
    bool gaps = true;          // k not dividing n, and L_{1,n}
    int lkl_samples = 20;
    int identity_samples = 1000;
    int max_m = 0;             // 0: 2n
    bool timing = false;
};

/// Extremal collapse for k | n, kappa^(2) collapse on L_{k,l}, and
/// non-asserted intervals elsewhere.
inline ExperimentReport verify_thm1(int n, const SearchConfig& cfg = {}, const ThmOneOptions& opt = {}) {
    if (n < 2) throw DomainError("verify_thm1: n must be >= 2");
    ReportBuilder rb("verify-thm1", {{"n", n}, {"collapse", opt.collapse}, {"gaps", opt.gaps}, {"lkl_samples", opt.lkl_samples}}, cfg);
    std::vector<int> divisors;
    for (int k = 1; k <= n; ++k)
        if (n % k == 0) divisors.push_back(k);

    if (opt.collapse) {
        for (int k : divisors) {
            const std::string t = "e" + std::to_string(k);
            const Direction X = Direction::axis(n, k);
            const RhoResult r = rho(X);
            const KappaResult kr = kappa_upper(X, cfg);
            rb.quantity("rho_" + t, "rho", {{"X", to_json(X)}}, {{"angle", r.angle}});
            rb.quantity("kappa_" + t, "kappa_upper", {{"X", to_json(X)}}, to_json(kr.witness));
            rb.check_valid("witness_" + t, "extremal disc re-validates at radius 1-1e-6", "kappa_" + t);
            rb.check_le("sandwich_" + t, "rho <= kappa upper", Ref::q("rho_" + t), Ref::q("kappa_" + t), 1e-9);
            rb.check_abs("collapse_" + t, "kappa upper equals k/n", Ref::q("kappa_" + t), Ref::q("rho_" + t), 1e-6);
            rb.interval("kappa(0;e_" + std::to_string(k) + ")", "rho_" + t, "kappa_" + t, 1e-6);
            // absolute error recorded; the assertion is on the error relative
            // to the conditioning of the quotient, which grows like
            // |1 + lambda zeta|^(1-n) for k = 1
            const std::uint64_t iseed = detail::experiment_seed(cfg, 100 + k);
            rb.quantity("identity_" + t, "extremal_identity_error",
                        {{"n", n}, {"k", k}, {"samples", opt.identity_samples}, {"seed", iseed}}, json::object());
            rb.quantity("identity_rel_" + t, "extremal_identity_error",
                        {{"n", n}, {"k", k}, {"samples", opt.identity_samples}, {"seed", iseed}, {"conditioned", true}},
                        json::object());
            rb.check_le("identity_" + t, "f_lambda(phi(zeta)) = lambda^(k-1) zeta up to conditioning",
                        Ref::q("identity_rel_" + t), Ref::c(0.0), 1e-12);
        }
        std::vector<std::pair<int, int>> kl;
        for (std::size_t a = 0; a < divisors.size(); ++a)
            for (std::size_t b = a + 1; b < divisors.size(); ++b) kl.emplace_back(divisors[a], divisors[b]);
        std::mt19937_64 rng(detail::experiment_seed(cfg, 200));
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (int s = 0; s < opt.lkl_samples && !kl.empty(); ++s) {
            const auto [k, l] = kl[static_cast<std::size_t>(s) % kl.size()];
            std::vector<Cx> x(static_cast<std::size_t>(n), Cx{0.0, 0.0});
            x[static_cast<std::size_t>(k - 1)] = std::polar(0.2 + 1.3 * u01(rng), kTwoPi * u01(rng));
            x[static_cast<std::size_t>(l - 1)] = std::polar(0.2 + 1.3 * u01(rng), kTwoPi * u01(rng));
            const Direction X(x);
            const std::string t = "L" + std::to_string(k) + "_" + std::to_string(l) + "_" + std::to_string(s);
            const RhoResult r = rho(X);
            KappaMSearch search(X, cfg);
            const KappaMResult km = search.evaluate(2);
            rb.quantity("rho_" + t, "rho", {{"X", to_json(X)}}, {{"angle", r.angle}});
            rb.quantity("kappa2_" + t, "kappa_decomp", {{"X", to_json(X)}, {"m", 2}}, detail::decomposition_witness(km));
            rb.check_le("sandwich_" + t, "rho <= kappa^(2) upper", Ref::q("rho_" + t), Ref::q("kappa2_" + t), 1e-9);
            rb.check_le("collapse_" + t, "kappa^(2) upper - rho <= 1e-6", Ref::q("kappa2_" + t), Ref::q("rho_" + t), 1e-6);
        }
    }

    if (opt.gaps) {
        const int max_m = opt.max_m > 0 ? opt.max_m : 2 * n;
        std::vector<std::pair<std::string, Direction>> dirs;
        for (int k = 1; k <= n; ++k)
            if (n % k != 0) dirs.emplace_back("e" + std::to_string(k), Direction::axis(n, k));
        if (n >= 3) {
            std::vector<Cx> x(static_cast<std::size_t>(n), Cx{0.0, 0.0});
            x.front() = 1.0;
            x.back() = 1.0;
            dirs.emplace_back("L1_n", Direction(x));
        }
        for (const auto& [tag, X] : dirs) {
            add_metric_table(rb, tag, X, max_m, cfg);
            const std::string k1 = "kappa1_" + tag;
            const std::string khat = "kappa" + std::to_string(max_m) + "_" + tag;
            const bool col = rb.collapsed("rho_" + tag, k1, 1e-4);
            rb.interval("kappa(0;" + tag + ")", "rho_" + tag, k1, 1e-4,
                        col ? "collapsed within 1e-4" : "interval did not collapse below lower + 1e-4 at search budget " + fingerprint(cfg));
            if (max_m >= 2) {
                rb.interval("kappa^(2)(0;" + tag + ")", "rho_" + tag, "kappa2_" + tag, 1e-4);
            }
            if (max_m >= 2 * n) {
                rb.interval("kappa_hat(0;" + tag + ")", "rho_" + tag, khat, 1e-4, "recorded only");
                rb.interval("gamma(0;" + tag + ")", "rho_" + tag, khat, 1e-4,
                            "recorded only: gamma lies between rho and kappa_hat");
            }
        }
    }
    return rb.finish(opt.timing);
}

struct ThmTwoOptions {
    int pairs = 5;
    int pi_samples = 1000;
    std::vector<Cx> c_values = {Cx{0.5, 0.0}, Cx{1.0, 0.0}, Cx{2.0, 0.0}, Cx{0.0, 0.75}};
    bool timing = false;
};

/// Concrete checks on G_2 and on G_2 x G with G the unit polydisc or ball of C^m.
inline ExperimentReport verify_thm2(int m, GaugeKind gauge, const SearchConfig& cfg = {}, const ThmTwoOptions& opt = {}) {
    if (m < 1) throw DomainError("verify_thm2: m must be >= 1");
    json cvals = json::array();
    for (const Cx& c : opt.c_values) cvals.push_back(to_json_cx(c));
    ReportBuilder rb("verify-thm2", {{"m", m}, {"gauge", to_string(gauge)}, {"pairs", opt.pairs}, {"c_values", cvals}}, cfg);

    const Point p1(std::vector<Cx>{2.0, 1.0});
    const Point p2(std::vector<Cx>{Cx{0.0, 2.0}, -1.0});
    const Point mid(std::vector<Cx>{0.5 * (p1[0] + p2[0]), 0.5 * (p1[1] + p2[1])});
    const std::vector<std::pair<std::string, Point>> pts = {{"p21", p1}, {"p2i", p2}, {"midpoint", mid}};
    for (const auto& [tag, p] : pts) {
        rb.quantity("roots_" + tag, "verdict", {{"z", to_json(p)}, {"oracle", "roots"}}, json::object());
        rb.quantity("sup_" + tag, "verdict", {{"z", to_json(p)}, {"oracle", "sup"}}, json::object());
    }
    rb.check_class("boundary_p21", "(2,1) lies on the boundary", "roots_p21", "Boundary");
    rb.check_abs("margin_p21", "|margin(2,1)| <= 1e-9", Ref::q("roots_p21"), Ref::c(0.0), 1e-9);
    rb.check_class("boundary_p2i", "(2i,-1) lies on the boundary", "roots_p2i", "Boundary");
    rb.check_abs("margin_p2i", "|margin(2i,-1)| <= 1e-9", Ref::q("roots_p2i"), Ref::c(0.0), 1e-9);
    rb.check_class("outside_midpoint", "midpoint (1+i,0) lies outside the closure", "roots_midpoint", "Outside");
    rb.check_class("outside_midpoint_sup", "sup oracle agrees on the midpoint", "sup_midpoint", "Outside");
    rb.check_abs("margin_midpoint", "midpoint margin is 1 - sqrt(2)", Ref::q("roots_midpoint"), Ref::c(1.0 - std::sqrt(2.0)), 1e-9);

    for (std::size_t i = 0; i < opt.c_values.size(); ++i) {
        const Cx c = opt.c_values[i];
        const Cx alpha = c.imag() == 0.0 && c.real() > 0.0 ? Cx{0.0, 1.0} : std::polar(1.0, (std::arg(c) + std::numbers::pi) / 2.0);
        const Point conf(std::vector<Cx>{alpha, 4.0 * c});
        const std::string t = std::to_string(i);
        rb.quantity("h1_" + t, "h1", {{"point", to_json(conf)}}, json::object());
        rb.quantity("h1_formula_" + t, "h1_formula", {{"c", to_json_cx(c)}}, json::object());
        rb.check_abs("h1_" + t, "h1 of the configuration equals (1+sqrt(1+16|c|))/2", Ref::q("h1_" + t),
                     Ref::q("h1_formula_" + t), 1e-10);
    }

    rb.quantity("pi_scaling", "pi_scaling_error",
                {{"gauge", to_string(gauge)}, {"m", m}, {"samples", opt.pi_samples}, {"seed", detail::experiment_seed(cfg, 300)}},
                json::object());
    rb.check_le("pi_scaling", "h(pi_lambda p) = |lambda| h(p)", Ref::q("pi_scaling"), Ref::c(0.0), 1e-10);

    std::mt19937_64 rng(detail::experiment_seed(cfg, 301));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto factor_point = [&] {
        std::vector<Cx> g(static_cast<std::size_t>(m));
        for (auto& c : g) c = std::polar(0.85 * std::sqrt(u01(rng)), kTwoPi * u01(rng));
        if (gauge == GaugeKind::Ball) {
            const double r = norm2(g);
            const double target = 0.85 * std::sqrt(u01(rng));
            if (r > 0.0)
                for (auto& c : g) c *= target / r;
        }
        return g;
    };
    for (int s = 0; s < opt.pairs; ++s) {
        Point a2 = sample_member(2, rng, 0.9), b2 = sample_member(2, rng, 0.9);
        const auto ag = factor_point(), bg = factor_point();
        Point a = a2, b = b2;
        a.z.insert(a.z.end(), ag.begin(), ag.end());
        b.z.insert(b.z.end(), bg.begin(), bg.end());
        const std::string t = std::to_string(s);
        const json in = {{"z", to_json(a)}, {"w", to_json(b)}, {"m", m}, {"gauge", to_string(gauge)}};
        const PLowerResult lo = p_lower(a2, b2, cfg.grid);
        const LempertResult up = lempert_upper(a2, b2, cfg);
        rb.quantity("g2_lower_" + t, "p_lower", {{"z", to_json(a2)}, {"w", to_json(b2)}}, {{"angles", lo.angles}});
        rb.quantity("g2_upper_" + t, "lempert_upper", {{"z", to_json(a2)}, {"w", to_json(b2)}}, to_json(up.witness));
        rb.quantity("factor_" + t, "constant", {{"value", guarded_atanh(factor_mobius(gauge, ag, bg))}, {"label", "c_G"}},
                    json::object());
        rb.quantity("prod_lower_" + t, "product_lower", in, {{"angles", lo.angles}});
        rb.quantity("prod_upper_" + t, "product_upper", in, {{"g2", to_json(up.witness)}});
        rb.check_le("prod_sandwich_" + t, "product lower <= product upper", Ref::q("prod_lower_" + t), Ref::q("prod_upper_" + t), 1e-9);
        rb.check_le("prod_lower_g2_" + t, "product lower >= G_2 lower", Ref::q("g2_lower_" + t), Ref::q("prod_lower_" + t), 1e-12);
        rb.check_le("prod_lower_g_" + t, "product lower >= G lower", Ref::q("factor_" + t), Ref::q("prod_lower_" + t), 1e-12);
        rb.check_le("prod_collapse_" + t, "product interval width <= 1e-3", Ref::q("prod_upper_" + t), Ref::q("prod_lower_" + t), 1e-3);
        rb.interval("G_2 x G pair " + t, "prod_lower_" + t, "prod_upper_" + t, 1e-3);
    }
    return rb.finish(opt.timing);
}

struct RemarkTwoOptions {
    int sign_samples = 200;
    bool timing = false;
};

/// Sandwich collapse on L_{n,2n} in G_{2n} through embedded G_2 discs.
inline ExperimentReport verify_remark2(int n, int pairs, const SearchConfig& cfg = {}, const RemarkTwoOptions& opt = {}) {
    if (n < 1) throw DomainError("verify_remark2: n must be >= 1");
    if (pairs < 0) throw DomainError("verify_remark2: pairs must be >= 0");
    ReportBuilder rb("verify-remark2", {{"n", n}, {"pairs", pairs}}, cfg);
    const std::uint64_t sseed = detail::experiment_seed(cfg, 400);
    const EmbeddingSign es = detect_embedding_sign(n, opt.sign_samples, sseed);
    rb.quantity("sign", "embedding_sign", {{"n", n}, {"samples", opt.sign_samples}, {"seed", sseed}}, json::object());
    rb.set("embedding", {{"sign", es.sign}, {"plus_consistent", es.plus}, {"minus_consistent", es.minus},
                         {"plus_preserves_membership", es.plus_membership},
                         {"minus_preserves_membership", es.minus_membership},
                         {"map", "(s,p) -> z_n = sign*s, z_2n = p"}});
    rb.check_abs("sign_stable", "embedding sign reproduces", Ref::q("sign"), Ref::c(double(es.sign)), 0.0);

    std::mt19937_64 rng(detail::experiment_seed(cfg, 401));
    std::vector<std::pair<Point, Point>> g2pairs;
    g2pairs.emplace_back(Point::zero(2), Point(std::vector<Cx>{0.0, -0.25}));  // axis pair
    while (static_cast<int>(g2pairs.size()) < pairs + 1) {
        Point a = sample_member(2, rng, 0.95), b = sample_member(2, rng, 0.95);
        if (member_roots(a).margin < 0.05 || member_roots(b).margin < 0.05) continue;
        g2pairs.emplace_back(a, b);
    }
    for (std::size_t s = 0; s < g2pairs.size(); ++s) {
        const auto& [a2, b2] = g2pairs[s];
        const Point a = embed_line(a2, n, es.sign), b = embed_line(b2, n, es.sign);
        const std::string t = s == 0 ? "axis" : std::to_string(s);
        const PLowerResult lo = p_lower(a, b, cfg.grid);
        const LempertResult up = lempert_upper(a2, b2, cfg);
        rb.quantity("lower_" + t, "p_lower", {{"z", to_json(a)}, {"w", to_json(b)}}, {{"angles", lo.angles}});
        rb.quantity("upper_" + t, "embedded_upper", {{"z", to_json(a)}, {"w", to_json(b)}, {"n", n}, {"sign", es.sign}},
                    {{"g2", to_json(up.witness)}, {"z2", to_json(a2)}, {"w2", to_json(b2)}});
        rb.check_le("sandwich_" + t, "p_lower <= embedded upper", Ref::q("lower_" + t), Ref::q("upper_" + t), 1e-9);
        rb.check_le("collapse_" + t, "embedded upper - p_lower <= 5e-3", Ref::q("upper_" + t), Ref::q("lower_" + t), 5e-3);
        rb.interval("pair " + t, "lower_" + t, "upper_" + t, 5e-3);
    }
    return rb.finish(opt.timing);
}

}  // namespace symdisc
