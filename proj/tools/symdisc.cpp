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

// symdisc command-line front end.
//
// Exit status: 0 when every assertion of the report passes, 1 when some
// assertion fails (or recheck disagrees with the stored flags), 2 on input or
// configuration errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "symdisc/symdisc.hpp"

using namespace symdisc;

namespace {

struct Globals {
    int n = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int grid = 0;
    int degree = 0;
    int restarts = -1;
    bool json_out = false;
    bool csv_out = false;
    bool timing = false;
    std::string config;
    std::string out;
};

SearchConfig make_config(const Globals& g) {
    SearchConfig cfg;
    if (!g.config.empty()) {
        std::ifstream f(g.config);
        if (!f) throw ParseError("cannot open config file '" + g.config + "'");
        json j;
        try {
            f >> j;
        } catch (const json::exception& e) {
            throw ParseError(std::string("config file: ") + e.what());
        }
        merge_json(j, cfg);
    }
    if (g.seed_set) cfg.grid.seed = g.seed;
    if (g.grid > 0) cfg.grid.coarse = g.grid;
    if (g.degree > 0) cfg.degree = g.degree;
    if (g.restarts >= 0) cfg.restarts = g.restarts;
    cfg.grid.validate();
    if (cfg.degree < 2) throw DomainError("degree must be >= 2");
    return cfg;
}

Point read_point(const std::string& s, int n) {
    Point p(parse_cx_list(s));
    if (n > 0 && p.n() != n) throw ParseError("point '" + s + "' has dimension " + std::to_string(p.n()) + ", expected " + std::to_string(n));
    return p;
}

Direction read_direction(const std::string& s, int n) {
    Direction d(parse_cx_list(s));
    if (n > 0 && d.n() != n) throw ParseError("direction '" + s + "' has dimension " + std::to_string(d.n()) + ", expected " + std::to_string(n));
    return d;
}

std::string fmt(const json& v) {
    if (v.is_null()) return "-";
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
        return buf;
    }
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void print_human(const json& d, std::ostream& os) {
    os << "experiment  " << d.at("experiment").get<std::string>() << "\n";
    os << "seed        " << d.at("seed").get<std::uint64_t>() << "\n";
    os << "fingerprint " << d.at("fingerprint").get<std::string>() << "\n";
    if (d.contains("roots")) os << "roots       " << d.at("roots").dump() << "\n";
    if (d.contains("verdicts"))
        for (const auto& [k, v] : d.at("verdicts").items())
            os << "verdict     " << k << " " << v.at("class").get<std::string>() << (v.at("pole").get<bool>() ? " (pole)" : "") << "\n";
    if (d.contains("embedding")) os << "embedding   " << d.at("embedding").dump() << "\n";
    os << "\nquantities\n";
    for (const auto& q : d.at("quantities")) {
        char line[256];
        std::snprintf(line, sizeof line, "  %-24s %-24s %-20s", q.at("id").get<std::string>().c_str(),
                      q.at("kind").get<std::string>().c_str(), fmt(q.at("value")).c_str());
        os << line;
        if (q.contains("class")) os << " " << q.at("class").get<std::string>();
        if (!q.at("valid").get<bool>()) os << " INVALID: " << q.value("reason", "");
        os << "\n";
    }
    if (!d.at("intervals").empty()) {
        os << "\nintervals\n";
        for (const auto& iv : d.at("intervals")) {
            os << "  " << iv.at("label").get<std::string>() << "  [" << fmt(iv.at("lower_value")) << ", "
               << fmt(iv.at("upper_value")) << "]  width " << fmt(iv.at("width"))
               << (iv.at("collapsed").get<bool>() ? "  collapsed" : "  open");
            if (iv.contains("note")) os << "  (" << iv.at("note").get<std::string>() << ")";
            os << "\n";
        }
    }
    if (!d.at("assertions").empty()) {
        os << "\nassertions\n";
        for (const auto& a : d.at("assertions"))
            os << "  " << (a.at("pass").get<bool>() ? "PASS " : "FAIL ") << a.at("id").get<std::string>() << "  "
               << a.at("what").get<std::string>() << "\n";
    }
    for (const auto& n : d.at("notes")) os << "note: " << n.get<std::string>() << "\n";
    if (d.contains("runtime_seconds")) os << "runtime " << fmt(d.at("runtime_seconds")) << " s\n";
    os << "\nresult " << (d.at("pass").get<bool>() ? "PASS" : "FAIL") << "\n";
}

void print_csv(const json& d, std::ostream& os) {
    os << "section,id,kind,value,valid,pass,detail\n";
    for (const auto& q : d.at("quantities"))
        os << "quantity," << csv_field(q.at("id").get<std::string>()) << "," << q.at("kind").get<std::string>() << ","
           << fmt(q.at("value")) << "," << (q.at("valid").get<bool>() ? "true" : "false") << ",,"
           << csv_field(q.value("class", q.value("reason", ""))) << "\n";
    for (const auto& iv : d.at("intervals"))
        os << "interval," << csv_field(iv.at("label").get<std::string>()) << ",," << fmt(iv.at("width")) << ",,"
           << (iv.at("collapsed").get<bool>() ? "collapsed" : "open") << "," << fmt(iv.at("lower_value")) << ";"
           << fmt(iv.at("upper_value")) << "\n";
    for (const auto& a : d.at("assertions"))
        os << "assertion," << csv_field(a.at("id").get<std::string>()) << "," << a.at("op").get<std::string>() << ",,,"
           << (a.at("pass").get<bool>() ? "true" : "false") << "," << csv_field(a.at("what").get<std::string>()) << "\n";
}

int emit(const ExperimentReport& r, const Globals& g) {
    std::ostringstream os;
    if (g.json_out)
        os << r.doc.dump(2) << "\n";
    else if (g.csv_out)
        print_csv(r.doc, os);
    else
        print_human(r.doc, os);
    if (g.out.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(g.out);
        if (!f) throw ParseError("cannot write '" + g.out + "'");
        f << os.str();
    }
    return r.passed() ? 0 : 1;
}

json angles_witness(const PLowerResult& r) { return {{"angles", r.angles}}; }

void add_two_point(ReportBuilder& rb, const Point& z, const Point& w, const SearchConfig& cfg, int max_m) {
    const PLowerResult lo = p_lower(z, w, cfg.grid);
    const json in = {{"z", to_json(z)}, {"w", to_json(w)}};
    rb.quantity("p_lower", "p_lower", in, angles_witness(lo));
    if (lo.heuristic) rb.note("p_lower from multi-start search (heuristic, still a valid lower bound)");
    const MatchingResult mt = matching_upper(z, w);
    LiftWitness lift{mt.a.roots, {}, mt.alpha};
    for (int p : mt.perm) lift.b.push_back(mt.b.roots[static_cast<std::size_t>(p)]);
    if (z == w)
        rb.quantity("matching_upper", "lempert_upper", in, to_json(DiscWitness{ConstantWitness{z}}));
    else
        rb.quantity("matching_upper", "lempert_upper", in, to_json(DiscWitness{lift}));
    const LempertResult up = lempert_upper(z, w, cfg);
    rb.quantity("lempert_upper", "lempert_upper", in, to_json(up.witness));
    rb.check_le("sandwich", "p_lower <= lempert upper", Ref::q("p_lower"), Ref::q("lempert_upper"), 1e-9);
    rb.check_le("matching", "lempert upper <= matching upper", Ref::q("lempert_upper"), Ref::q("matching_upper"), 1e-9);
    rb.interval("lempert", "p_lower", "lempert_upper", 1e-3);
    std::string prev = "lempert_upper";
    for (int m = 2; m <= max_m; ++m) {
        const KmResult km = k_m_upper(z, w, m, cfg);
        const std::string id = "k" + std::to_string(m) + "_upper";
        rb.quantity(id, "chain", in, detail::chain_witness(km));
        rb.check_le("sandwich_" + id, "p_lower <= k^(m) upper", Ref::q("p_lower"), Ref::q(id), 1e-9);
        rb.check_le("monotone_" + id, "k^(m) upper non-increasing in m", Ref::q(id), Ref::q(prev), 1e-12);
        rb.interval("k^(" + std::to_string(m) + ")", "p_lower", id, 1e-3);
        prev = id;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symdisc: bounds for invariant functions of the symmetrized polydisc"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--n", g.n, "dimension (checked against parsed points; experiment size)");
    app.add_option("--seed", g.seed, "RNG seed")->each([&](const std::string&) { g.seed_set = true; });
    app.add_option("--grid", g.grid, "coarse grid points per angle");
    app.add_option("--degree", g.degree, "polynomial disc degree");
    app.add_option("--restarts", g.restarts, "polynomial search restarts");
    app.add_option("--config", g.config, "JSON config file (grid and search settings)");
    app.add_option("--out", g.out, "write the report to a file");
    app.add_flag("--timing", g.timing, "include the runtime in the report");
    auto* fmt_group = app.add_option_group("format");
    fmt_group->add_flag("--json", g.json_out, "JSON output");
    fmt_group->add_flag("--csv", g.csv_out, "CSV output");
    fmt_group->require_option(0, 1);

    std::string z_s, w_s, x_s, file, gauge_s = "polydisc";
    int m = 1, pairs = 10, max_m = 1, lkl = 20;
    bool no_gaps = false, no_collapse = false;

    auto* member = app.add_subcommand("member", "membership verdicts of both oracles");
    member->add_option("z", z_s, "point, e.g. \"(2;1)\"")->required();

    auto* bounds = app.add_subcommand("bounds", "certified interval for a pair of points or a direction");
    bounds->add_option("--z", z_s, "first point");
    bounds->add_option("--w", w_s, "second point");
    bounds->add_option("--X", x_s, "direction at the origin");
    bounds->add_option("--m", max_m, "also tabulate k^(m) or kappa^(m) up to this m");

    auto* rho_c = app.add_subcommand("rho", "rho_n(X)");
    rho_c->add_option("X", x_s, "direction")->required();

    auto* plower = app.add_subcommand("plower", "p_{G_n}(z, w)");
    plower->add_option("z", z_s)->required();
    plower->add_option("w", w_s)->required();

    auto* lempert = app.add_subcommand("lempert", "disc upper bound for the Lempert function");
    lempert->add_option("z", z_s)->required();
    lempert->add_option("w", w_s)->required();

    auto* kappa = app.add_subcommand("kappa", "disc upper bound for the metric at 0");
    kappa->add_option("X", x_s)->required();
    kappa->add_option("--m", max_m, "tabulate kappa^(m) up to this m");

    auto* thm1 = app.add_subcommand("verify-thm1", "extremal discs and metric intervals at the origin");
    thm1->add_option("--lkl-samples", lkl, "random directions in L_{k,l}");
    thm1->add_option("--max-m", max_m, "largest m of the kappa^(m) table (default 2n)");
    thm1->add_flag("--no-gaps", no_gaps, "skip directions with k not dividing n");
    thm1->add_flag("--no-collapse", no_collapse, "skip the k | n checks");

    auto* thm2 = app.add_subcommand("verify-thm2", "concrete checks on G_2 and G_2 x G");
    thm2->add_option("--m", m, "dimension of G");
    thm2->add_option("--gauge", gauge_s, "polydisc or ball");
    thm2->add_option("--pairs", pairs, "random pairs for the product sandwich");

    auto* rem2 = app.add_subcommand("verify-remark2", "sandwich collapse on L_{n,2n}");
    rem2->add_option("--pairs", pairs, "random pairs");

    auto* rc = app.add_subcommand("recheck", "re-validate a JSON report from its witnesses");
    rc->add_option("file", file, "report file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (rc->parsed()) {
            std::ifstream f(file);
            if (!f) throw ParseError("cannot open '" + file + "'");
            json doc;
            f >> doc;
            const RecheckResult r = recheck(doc);
            json out = {{"experiment", doc.at("experiment")}, {"identical", r.identical}, {"all_pass", r.all_pass},
                        {"assertions", r.assertions}, {"mismatches", r.mismatches}};
            if (g.json_out) {
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << "recheck " << doc.at("experiment").get<std::string>() << ": " << r.assertions
                          << " assertions, " << (r.identical ? "identical pass/fail" : "MISMATCH") << ", "
                          << (r.all_pass ? "all pass" : "failures present") << "\n";
                for (const auto& id : r.mismatches) std::cout << "  mismatch " << id << "\n";
            }
            return r.identical && r.all_pass ? 0 : 1;
        }

        const SearchConfig cfg = make_config(g);

        if (member->parsed()) {
            const Point z = read_point(z_s, g.n);
            ReportBuilder rb("member", {{"z", to_json(z)}}, cfg);
            rb.quantity("roots", "verdict", {{"z", to_json(z)}, {"oracle", "roots"}}, json::object());
            rb.quantity("sup", "verdict", {{"z", to_json(z)}, {"oracle", "sup"}}, json::object());
            rb.set("roots", to_json_cx(roots_of(z).roots));
            rb.set("verdicts", {{"roots", to_json(member_roots(z))}, {"sup", to_json(member_sup(z))}});
            return emit(rb.finish(g.timing), g);
        }
        if (rho_c->parsed()) {
            const Direction X = read_direction(x_s, g.n);
            const RhoResult r = rho(X);
            ReportBuilder rb("rho", {{"X", to_json(X)}}, cfg);
            rb.quantity("rho", "rho", {{"X", to_json(X)}}, {{"angle", r.angle}});
            if (r.closed_form) {
                rb.quantity("rho_grid", "constant", {{"value", r.grid_value}, {"label", "refined grid maximum"}}, json::object());
                rb.check_abs("closed_form", "grid value matches the closed form", Ref::q("rho_grid"), Ref::q("rho"), 1e-6);
            }
            return emit(rb.finish(g.timing), g);
        }
        if (plower->parsed()) {
            const Point z = read_point(z_s, g.n), w = read_point(w_s, z.n());
            const PLowerResult r = p_lower(z, w, cfg.grid);
            ReportBuilder rb("plower", {{"z", to_json(z)}, {"w", to_json(w)}}, cfg);
            rb.quantity("p_lower", "p_lower", {{"z", to_json(z)}, {"w", to_json(w)}}, angles_witness(r));
            if (r.heuristic) rb.note("multi-start search (heuristic, still a valid lower bound)");
            return emit(rb.finish(g.timing), g);
        }
        if (lempert->parsed()) {
            const Point z = read_point(z_s, g.n), w = read_point(w_s, z.n());
            ReportBuilder rb("lempert", {{"z", to_json(z)}, {"w", to_json(w)}}, cfg);
            add_two_point(rb, z, w, cfg, 1);
            return emit(rb.finish(g.timing), g);
        }
        if (bounds->parsed() && !x_s.empty()) {
            if (!z_s.empty() || !w_s.empty()) throw ParseError("bounds: give either --X or --z/--w");
            const Direction X = read_direction(x_s, g.n);
            ReportBuilder rb("bounds", {{"X", to_json(X)}, {"m", max_m}}, cfg);
            add_metric_table(rb, "X", X, std::max(max_m, 1), cfg);
            rb.interval("kappa(0;X)", "rho_X", "kappa1_X", 1e-6);
            if (max_m >= 2) rb.interval("kappa^(" + std::to_string(max_m) + ")(0;X)", "rho_X", "kappa" + std::to_string(max_m) + "_X", 1e-6);
            if (!rb.collapsed("rho_X", "kappa1_X", 1e-6)) rb.note("interval did not collapse at search budget " + fingerprint(cfg));
            return emit(rb.finish(g.timing), g);
        }
        if (bounds->parsed()) {
            if (z_s.empty() || w_s.empty()) throw ParseError("bounds: give --z and --w, or --X");
            const Point z = read_point(z_s, g.n), w = read_point(w_s, z.n());
            ReportBuilder rb("bounds", {{"z", to_json(z)}, {"w", to_json(w)}, {"m", max_m}}, cfg);
            add_two_point(rb, z, w, cfg, max_m);
            return emit(rb.finish(g.timing), g);
        }
        if (kappa->parsed()) {
            const Direction X = read_direction(x_s, g.n);
            ReportBuilder rb("kappa", {{"X", to_json(X)}, {"m", max_m}}, cfg);
            add_metric_table(rb, "X", X, std::max(max_m, 1), cfg);
            rb.interval("kappa(0;X)", "rho_X", "kappa1_X", 1e-6);
            return emit(rb.finish(g.timing), g);
        }
        if (thm1->parsed()) {
            ThmOneOptions o;
            o.collapse = !no_collapse;
            o.gaps = !no_gaps;
            o.lkl_samples = lkl;
            o.max_m = max_m > 1 ? max_m : 0;
            o.timing = g.timing;
            return emit(verify_thm1(g.n > 0 ? g.n : 3, cfg, o), g);
        }
        if (thm2->parsed()) {
            ThmTwoOptions o;
            o.pairs = pairs;
            o.timing = g.timing;
            return emit(verify_thm2(m, parse_gauge(gauge_s), cfg, o), g);
        }
        if (rem2->parsed()) {
            RemarkTwoOptions o;
            o.timing = g.timing;
            return emit(verify_remark2(g.n > 0 ? g.n : 2, pairs, cfg, o), g);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
