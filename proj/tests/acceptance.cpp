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

// Acceptance suite: one PASS/FAIL line per criterion, with its runtime.
// Exit status 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "symdisc/symdisc.hpp"

using namespace symdisc;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt <= limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d: %s (%.1f s, limit %.0f s)%s; %s\n", pass ? "PASS" : "FAIL", id, title, dt, limit_s,
                in_time ? "" : " TIME LIMIT EXCEEDED", o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

Point random_member_margin(std::mt19937_64& rng, int n, double min_margin) {
    for (;;) {
        const Point z = sample_member(n, rng, 1.0);
        if (member_roots(z).margin >= min_margin) return z;
    }
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> scale(0.5, 2.0);
    long compared = 0, disagree = 0;
    for (int n = 2; n <= 5; ++n) {
        for (int i = 0; i < 10000; ++i) {
            Point z = sample_member(n, rng, 1.0);
            if (i % 2 == 1) {
                const double s = scale(rng);
                for (auto& c : z.z) c *= s;
            }
            const Verdict r = member_roots(z);
            if (std::abs(r.margin) <= 1e-6) continue;
            ++compared;
            if (member_sup(z).cls != r.cls) ++disagree;
        }
    }
    return {disagree == 0 && compared >= 4 * 9000,
            std::to_string(compared) + " points compared, " + std::to_string(disagree) + " disagreements"};
}

Outcome rho_closed_form_check() {
    std::mt19937_64 rng(1002);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
        const int n = 2 + s % 7;
        const int k = 1 + static_cast<int>(u01(rng) * n);
        int l = 1 + static_cast<int>(u01(rng) * (n - 1));
        if (l >= k) ++l;
        std::vector<Cx> x(static_cast<std::size_t>(n), Cx{0.0, 0.0});
        x[static_cast<std::size_t>(k - 1)] = std::polar(0.1 + 2.0 * u01(rng), kTwoPi * u01(rng));
        x[static_cast<std::size_t>(l - 1)] = std::polar(0.1 + 2.0 * u01(rng), kTwoPi * u01(rng));
        const RhoResult r = rho(Direction(x));
        if (!r.closed_form) return {false, "closed form missing"};
        worst = std::max(worst, std::abs(r.grid_value - *r.closed_form));
    }
    return {worst <= 1e-6, fmt("worst |grid - closed form| = %.3g", worst)};
}

Outcome thm1a_collapse() {
    double worst_width = 0.0, worst_split = 0.0, min_margin = 1.0;
    const SearchConfig cfg;
    std::vector<std::tuple<int, int, int>> kl;
    for (int n : {2, 3, 4, 6}) {
        for (int k = 1; k <= n; ++k) {
            if (n % k) continue;
            const Direction X = Direction::axis(n, k);
            const KappaResult kr = kappa_upper(X, cfg);
            const WitnessCheck c = check_metric_witness(kr.witness, X);
            if (!c.ok || std::get<PolyDiscWitness>(kr.witness).radius != kNearBoundaryRadius)
                return {false, "extremal witness rejected for n=" + std::to_string(n) + " k=" + std::to_string(k)};
            min_margin = std::min(min_margin, c.margin);
            worst_width = std::max(worst_width, kr.value - rho(X).value);
            for (int l = k + 1; l <= n; ++l)
                if (n % l == 0) kl.emplace_back(n, k, l);
        }
    }
    std::mt19937_64 rng(1003);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int s = 0; s < 20; ++s) {
        const auto [n, k, l] = kl[static_cast<std::size_t>(s) % kl.size()];
        std::vector<Cx> x(static_cast<std::size_t>(n), Cx{0.0, 0.0});
        x[static_cast<std::size_t>(k - 1)] = std::polar(0.2 + 1.3 * u01(rng), kTwoPi * u01(rng));
        x[static_cast<std::size_t>(l - 1)] = std::polar(0.2 + 1.3 * u01(rng), kTwoPi * u01(rng));
        const Direction X(x);
        KappaMSearch search(X, cfg);
        const KappaMResult km = search.evaluate(2);
        for (std::size_t i = 0; i < km.parts.size(); ++i)
            if (!check_metric_witness(km.parts[i].witness, km.decomposition.parts[i]).ok) return {false, "split witness rejected"};
        worst_split = std::max(worst_split, km.value - rho(X).value);
    }
    return {worst_width <= 1e-6 && worst_split <= 1e-6 && min_margin > 0.0,
            fmt("worst width %.3g, worst kappa^(2) - rho %.3g", worst_width, worst_split) + fmt(", min margin %.3g", min_margin)};
}

Outcome extremal_identity() {
    double worst = 0.0;
    for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 3}, {4, 2}, {6, 3}})
        worst = std::max(worst, detail::extremal_identity_error(n, k, 1000, 1004 + n * 10 + k));
    return {worst <= 1e-10, fmt("worst |f_lambda(phi) - lambda^(k-1) zeta| = %.3g", worst)};
}

Outcome g2_ground_truth() {
    std::mt19937_64 rng(1005);
    double worst = 0.0, worst_sandwich = 0.0;
    for (int s = 0; s < 20; ++s) {
        const Point z = random_member_margin(rng, 2, 0.05), w = random_member_margin(rng, 2, 0.05);
        const LempertResult up = lempert_upper(z, w);
        if (!check_two_point_witness(up.witness, z, w).ok) return {false, "witness rejected for pair " + std::to_string(s)};
        const double lo = p_lower(z, w).value;
        worst = std::max(worst, up.value - lo);
        worst_sandwich = std::max(worst_sandwich, lo - up.value);
    }
    return {worst <= 1e-3 && worst_sandwich <= 1e-9, fmt("worst lempert_upper - p_lower = %.3g, worst lower - upper = %.3g", worst, worst_sandwich)};
}

Outcome thm1bc_evidence() {
    ThmOneOptions o;
    o.collapse = false;
    o.max_m = 6;
    const ExperimentReport r = verify_thm1(3, SearchConfig{}, o);
    const double rho_e2 = r.value("rho_e2"), rho_l = r.value("rho_L1_n");
    const bool exact = rho_e2 == 2.0 / 3.0 && rho_l == 4.0 / 3.0;
    int sandwich = 0, monotone = 0;
    for (const auto& a : r.doc.at("assertions")) {
        const std::string id = a.at("id");
        if (!a.at("pass").get<bool>()) return {false, "assertion " + id + " failed"};
        sandwich += id.rfind("sandwich_", 0) == 0;
        monotone += id.rfind("monotone_", 0) == 0;
    }
    std::string rec;
    for (const auto& iv : r.doc.at("intervals")) {
        const std::string label = iv.at("label");
        if (label == "kappa(0;e2)" || label == "kappa(0;L1_n)")
            rec += " " + label + "=[" + fmt("%.9g, %.9g", iv.at("lower_value").get<double>(), iv.at("upper_value").get<double>()) + "]" +
                   (iv.at("collapsed").get<bool>() ? " collapsed" : " not collapsed below lower+1e-4");
    }
    const RecheckResult rc = recheck(r.doc);
    return {exact && sandwich == 12 && monotone == 10 && rc.identical && rc.all_pass,
            std::to_string(sandwich) + " sandwich and " + std::to_string(monotone) + " monotonicity checks (m=1..6);" + rec};
}

Outcome thm2_checks() {
    ThmTwoOptions o;
    o.pairs = 0;
    o.c_values = {0.5, 1.0, 2.0};
    bool ok = true;
    std::string det;
    for (GaugeKind g : {GaugeKind::Polydisc, GaugeKind::Ball}) {
        const ExperimentReport r = verify_thm2(2, g, SearchConfig{}, o);
        ok = ok && r.passed();
        ok = ok && std::abs(r.value("roots_midpoint") - (1.0 - std::sqrt(2.0))) <= 1e-9;
        for (int i = 0; i < 3; ++i) {
            const double c = o.c_values[static_cast<std::size_t>(i)].real();
            ok = ok && std::abs(r.value("h1_" + std::to_string(i)) - (1.0 + std::sqrt(1.0 + 16.0 * c)) / 2.0) <= 1e-10;
        }
        det += std::string(to_string(g)) + fmt(": margins %.3g, %.3g", r.value("roots_p21"), r.value("roots_p2i")) +
               fmt(", pi scaling error %.3g; ", r.value("pi_scaling"));
    }
    return {ok, det};
}

Outcome remark2() {
    const ExperimentReport r = verify_remark2(2, 10, SearchConfig{});
    double worst = 0.0;
    for (int s = 1; s <= 10; ++s) {
        const std::string t = std::to_string(s);
        worst = std::max(worst, r.value("upper_" + t) - r.value("lower_" + t));
    }
    const double axis = r.value("upper_axis") - r.value("lower_axis");
    return {r.passed() && worst <= 5e-3 && axis <= 5e-3, "embedding sign " + std::to_string(r.doc.at("embedding").at("sign").get<int>()) +
                            fmt(", worst embedded upper - p_lower %.3g over 10 pairs", worst)};
}

Outcome determinism() {
    SearchConfig cfg;
    cfg.restarts = 4;
    ThmTwoOptions o2;
    o2.pairs = 2;
    ThmOneOptions o1;
    o1.gaps = false;
    o1.lkl_samples = 4;
    std::mt19937_64 rng(1009);
    const Point z = random_member_margin(rng, 3, 0.1), w = random_member_margin(rng, 3, 0.1);
    const std::vector<std::function<json()>> runs = {
        [&] { return verify_thm2(2, GaugeKind::Ball, cfg, o2).doc; },
        [&] { return verify_thm1(4, cfg, o1).doc; },
        [&] { return verify_remark2(2, 2, cfg).doc; },
        [&] {
            const LempertResult up = lempert_upper(z, w, cfg);
            return json{{"value", up.value}, {"witness", to_json(up.witness)}};
        },
        [&] {
            SearchConfig c = cfg;
            c.restarts = 1;
            const KappaMResult km = kappa_m_upper(Direction::axis(3, 2), 2, c);
            return json{{"value", km.value}, {"witness", detail::decomposition_witness(km)}};
        },
    };
    int same = 0;
    for (const auto& f : runs) same += f().dump() == f().dump();
    return {same == static_cast<int>(runs.size()), std::to_string(same) + "/" + std::to_string(runs.size()) + " reports identical"};
}

}  // namespace

int main() {
    run(1, "oracle equivalence", 60, oracle_equivalence);
    run(2, "rho closed form", 10, rho_closed_form_check);
    run(3, "extremal collapse for k | n", 120, thm1a_collapse);
    run(4, "extremal identity", 5, extremal_identity);
    run(5, "G_2 ground truth", 300, g2_ground_truth);
    run(6, "non-collapsing intervals are consistent", 600, thm1bc_evidence);
    run(7, "G_2 x G concrete checks", 10, thm2_checks);
    run(8, "L_{n,2n} collapse", 300, remark2);
    run(9, "determinism", 600, determinism);
    std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
