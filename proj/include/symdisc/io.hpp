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

// JSON conversions. Complex numbers are two-element arrays [re, im].

#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "symdisc/config.hpp"
#include "symdisc/disc_upper.hpp"

namespace symdisc {

using json = nlohmann::json;

inline json to_json_cx(Cx c) { return json::array({c.real(), c.imag()}); }

inline Cx cx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw DomainError("complex numbers must be [re, im] arrays");
    const Cx c{j[0].get<double>(), j[1].get<double>()};
    require_finite(c, "complex literal");
    return c;
}

inline json to_json_cx(const std::vector<Cx>& v) {
    json a = json::array();
    for (const Cx& c : v) a.push_back(to_json_cx(c));
    return a;
}

inline std::vector<Cx> cx_vector_from_json(const json& j) {
    if (!j.is_array()) throw DomainError("expected an array of complex numbers");
    std::vector<Cx> v;
    for (const auto& e : j) v.push_back(cx_from_json(e));
    return v;
}

inline json to_json(const Point& p) { return to_json_cx(p.z); }
inline Point point_from_json(const json& j) { return Point(cx_vector_from_json(j)); }
inline json to_json(const Direction& d) { return to_json_cx(d.x); }
inline Direction direction_from_json(const json& j) { return Direction(cx_vector_from_json(j)); }

inline json to_json(const GridConfig& g) {
    return {{"coarse", g.coarse}, {"refine", g.refine}, {"tol", g.tol}, {"seed", g.seed}, {"closed_disc", g.closed_disc}};
}

inline json to_json(const SearchConfig& c) {
    return {{"grid", to_json(c.grid)},
            {"degree", c.degree},
            {"restarts", c.restarts},
            {"bisection_steps", c.bisection_steps},
            {"max_evals", c.max_evals},
            {"search_samples", c.search_samples},
            {"validate_samples", c.validate_samples},
            {"delta_min", c.delta_min},
            {"collapse_tol", c.collapse_tol},
            {"branched_starts", c.branched_starts},
            {"chain_evals", c.chain_evals}};
}

namespace detail {

template <class T>
void read_field(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) throw DomainError(std::string(what) + ": unknown key '" + it.key() + "'");
    }
}

}  // namespace detail

/// Overlays the keys present in j onto g; unknown keys are rejected. On
/// error the target is left unchanged.
inline void merge_json(const json& j, GridConfig& target) {
    if (!j.is_object()) throw DomainError("grid config must be an object");
    GridConfig g = target;
    detail::reject_unknown(j, {"coarse", "refine", "tol", "seed", "closed_disc"}, "grid config");
    detail::read_field(j, "coarse", g.coarse);
    detail::read_field(j, "refine", g.refine);
    detail::read_field(j, "tol", g.tol);
    detail::read_field(j, "seed", g.seed);
    detail::read_field(j, "closed_disc", g.closed_disc);
    g.validate();
    target = g;
}

inline void merge_json(const json& j, SearchConfig& target) {
    if (!j.is_object()) throw DomainError("search config must be an object");
    SearchConfig c = target;
    detail::reject_unknown(j,
                           {"grid", "degree", "restarts", "bisection_steps", "max_evals", "search_samples",
                            "validate_samples", "delta_min", "collapse_tol", "branched_starts", "chain_evals"},
                           "search config");
    if (j.contains("grid")) merge_json(j.at("grid"), c.grid);
    detail::read_field(j, "degree", c.degree);
    detail::read_field(j, "restarts", c.restarts);
    detail::read_field(j, "bisection_steps", c.bisection_steps);
    detail::read_field(j, "max_evals", c.max_evals);
    detail::read_field(j, "search_samples", c.search_samples);
    detail::read_field(j, "validate_samples", c.validate_samples);
    detail::read_field(j, "delta_min", c.delta_min);
    detail::read_field(j, "collapse_tol", c.collapse_tol);
    detail::read_field(j, "branched_starts", c.branched_starts);
    detail::read_field(j, "chain_evals", c.chain_evals);
    if (c.degree < 2) throw DomainError("search config: degree must be >= 2");
    if (c.validate_samples < 256) throw DomainError("search config: validate_samples must be >= 256");
    if (c.restarts < 0 || c.bisection_steps < 0 || c.max_evals < 1 || c.search_samples < 8)
        throw DomainError("search config: sizes out of range");
    target = c;
}

/// FNV-1a (64 bit) of the compact JSON form, as 16 hex digits.
inline std::string fingerprint(const json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string fingerprint(const SearchConfig& c) { return fingerprint(to_json(c)); }

inline json to_json(const DiscMap& d) {
    json rows = json::array();
    for (const auto& comp : d.coeffs) rows.push_back(to_json_cx(comp));
    return {{"n", d.n}, {"degree", d.degree}, {"coeffs", rows}};
}

inline DiscMap disc_from_json(const json& j) {
    DiscMap d;
    d.n = j.at("n").get<int>();
    d.degree = j.at("degree").get<int>();
    for (const auto& row : j.at("coeffs")) d.coeffs.push_back(cx_vector_from_json(row));
    if (d.n < 1 || static_cast<int>(d.coeffs.size()) != d.n) throw DomainError("disc: component count mismatch");
    for (const auto& row : d.coeffs)
        if (static_cast<int>(row.size()) != d.degree + 1) throw DomainError("disc: coefficient count mismatch");
    return d;
}

inline json to_json(const DiscWitness& w) {
    json j = {{"family", witness_family(w)}};
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ConstantWitness>) {
                j["point"] = to_json(x.z);
            } else if constexpr (std::is_same_v<T, LiftWitness>) {
                j["alpha"] = x.alpha;
                j["a"] = to_json_cx(x.a);
                j["b"] = to_json_cx(x.b);
            } else if constexpr (std::is_same_v<T, BranchedWitness>) {
                j["alpha"] = x.alpha;
                j["c"] = to_json_cx(x.c);
                j["lw"] = to_json_cx(x.lw);
                j["nodes"] = to_json_cx(x.nodes);
                j["values"] = to_json_cx(x.values);
                j["rest_a"] = to_json_cx(x.rest_a);
                j["rest_b"] = to_json_cx(x.rest_b);
            } else {
                j["alpha"] = x.alpha;
                j["radius"] = x.radius;
                j["margin"] = x.margin;
                j["disc"] = to_json(x.disc);
            }
        },
        w);
    return j;
}

inline DiscWitness witness_from_json(const json& j) {
    const std::string f = j.at("family").get<std::string>();
    if (f == "constant") return ConstantWitness{point_from_json(j.at("point"))};
    if (f == "lift") {
        LiftWitness w{cx_vector_from_json(j.at("a")), cx_vector_from_json(j.at("b")), j.at("alpha").get<double>()};
        if (w.a.size() != w.b.size()) throw DomainError("lift witness: size mismatch");
        return w;
    }
    if (f == "branched") {
        BranchedWitness w;
        w.alpha = j.at("alpha").get<double>();
        w.c = cx_from_json(j.at("c"));
        w.lw = cx_from_json(j.at("lw"));
        w.nodes = cx_vector_from_json(j.at("nodes"));
        w.values = cx_vector_from_json(j.at("values"));
        w.rest_a = cx_vector_from_json(j.at("rest_a"));
        w.rest_b = cx_vector_from_json(j.at("rest_b"));
        if (w.nodes.size() != 4 || w.values.size() != 4 || w.rest_a.size() != w.rest_b.size())
            throw DomainError("branched witness: malformed");
        return w;
    }
    if (f == "polynomial") {
        return PolyDiscWitness{disc_from_json(j.at("disc")), j.at("alpha").get<double>(), j.at("radius").get<double>(),
                               j.at("margin").get<double>()};
    }
    throw DomainError("unknown witness family '" + f + "'");
}

inline json to_json(const Verdict& v) {
    return {{"class", to_string(v.cls)}, {"margin", v.margin}, {"pole", v.pole}};
}

}  // namespace symdisc
