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

#include <gtest/gtest.h>

#include "symdisc/symdisc.hpp"

using namespace symdisc;

namespace {

SearchConfig quick() {
    SearchConfig c;
    c.restarts = 2;
    c.max_evals = 150;
    return c;
}

const json& find_assertion(const json& doc, const std::string& id) {
    for (const auto& a : doc.at("assertions"))
        if (a.at("id") == id) return a;
    throw std::runtime_error("missing assertion " + id);
}

}  // namespace

TEST(Parse, ComplexLiterals) {
    EXPECT_EQ(parse_complex("3"), Cx(3.0, 0.0));
    EXPECT_EQ(parse_complex("-2.5"), Cx(-2.5, 0.0));
    EXPECT_EQ(parse_complex("i"), Cx(0.0, 1.0));
    EXPECT_EQ(parse_complex("-i"), Cx(0.0, -1.0));
    EXPECT_EQ(parse_complex("2i"), Cx(0.0, 2.0));
    EXPECT_EQ(parse_complex("1+i"), Cx(1.0, 1.0));
    EXPECT_EQ(parse_complex("1-2.5i"), Cx(1.0, -2.5));
    EXPECT_EQ(parse_complex(" 1e-3 + 2e-2i "), Cx(1e-3, 2e-2));
    EXPECT_EQ(parse_complex("-1e+2-1e-1i"), Cx(-100.0, -0.1));
    for (const char* bad : {"", "x", "1+", "1+2", "ii", "1..2", "nan", "inf"}) EXPECT_THROW(parse_complex(bad), ParseError) << bad;
}

TEST(Parse, PointLists) {
    EXPECT_EQ(parse_cx_list("(2;1)"), (std::vector<Cx>{2.0, 1.0}));
    EXPECT_EQ(parse_cx_list("(2,1)"), (std::vector<Cx>{2.0, 1.0}));
    EXPECT_EQ(parse_cx_list("[1+i; 0]"), (std::vector<Cx>{Cx(1.0, 1.0), 0.0}));
    EXPECT_EQ(parse_cx_list("0;0;0").size(), 3u);
    EXPECT_THROW(parse_cx_list("(1;;2)"), ParseError);
    EXPECT_THROW(parse_cx_list("()"), ParseError);
}

TEST(Json, ComplexAndPoint) {
    EXPECT_EQ(to_json_cx(Cx(1.5, -2.0)), json::parse("[1.5,-2.0]"));
    EXPECT_EQ(cx_from_json(json::parse("[0.25, 3]")), Cx(0.25, 3.0));
    EXPECT_THROW(cx_from_json(json::parse("[1]")), DomainError);
    EXPECT_THROW(cx_from_json(json::parse("\"1+i\"")), DomainError);
    const Point p({Cx(0.1, 0.2), -0.3});
    EXPECT_EQ(point_from_json(to_json(p)), p);
}

TEST(Json, ConfigRoundTripAndValidation) {
    SearchConfig c;
    c.degree = 5;
    c.grid.seed = 99;
    SearchConfig d;
    merge_json(to_json(c), d);
    EXPECT_EQ(to_json(c), to_json(d));
    EXPECT_EQ(fingerprint(c), fingerprint(d));
    EXPECT_NE(fingerprint(c), fingerprint(SearchConfig{}));
    EXPECT_EQ(fingerprint(SearchConfig{}).size(), 16u);
    SearchConfig e;
    EXPECT_THROW(merge_json(json::parse(R"({"degre": 4})"), e), DomainError);
    EXPECT_THROW(merge_json(json::parse(R"({"degree": 1})"), e), DomainError);
    EXPECT_THROW(merge_json(json::parse(R"({"validate_samples": 100})"), e), DomainError);
    EXPECT_THROW(merge_json(json::parse(R"({"grid": {"coarse": 4}})"), e), DomainError);
    EXPECT_EQ(to_json(e), to_json(SearchConfig{}));  // unchanged after errors
    merge_json(json::parse(R"({"grid": {"seed": 5}, "restarts": 3})"), e);
    EXPECT_EQ(e.grid.seed, 5u);
    EXPECT_EQ(e.restarts, 3);
    EXPECT_EQ(e.degree, 6);
}

TEST(Json, WitnessRoundTrip) {
    const Point z = Point::zero(2), w({0.3, -0.1});
    const LempertResult r = lempert_upper(z, w, quick());
    const DiscWitness back = witness_from_json(to_json(r.witness));
    EXPECT_EQ(to_json(back), to_json(r.witness));
    EXPECT_TRUE(check_two_point_witness(back, z, w).ok);
    const KappaResult k = kappa_upper(Direction::axis(4, 2));
    EXPECT_TRUE(check_metric_witness(witness_from_json(to_json(k.witness)), Direction::axis(4, 2)).ok);
    EXPECT_THROW(witness_from_json(json::parse(R"({"family": "spline"})")), DomainError);
}

TEST(Report, MemberQuantities) {
    const Point z({2.0, 1.0});
    ReportBuilder rb("member", {{"z", to_json(z)}}, SearchConfig{});
    rb.quantity("roots", "verdict", {{"z", to_json(z)}, {"oracle", "roots"}}, json::object());
    rb.check_class("b", "boundary", "roots", "Boundary");
    const ExperimentReport r = rb.finish(false);
    EXPECT_TRUE(r.passed());
    EXPECT_FALSE(r.doc.contains("runtime_seconds"));
    EXPECT_EQ(r.doc.at("version"), kVersion);
    EXPECT_TRUE(rb.finish(true).doc.contains("runtime_seconds"));
}

TEST(Report, DuplicateIdsRejected) {
    ReportBuilder rb("x", json::object(), SearchConfig{});
    rb.quantity("a", "constant", {{"value", 1.0}}, json::object());
    EXPECT_THROW(rb.quantity("a", "constant", {{"value", 2.0}}, json::object()), DomainError);
}

TEST(Report, InvalidQuantityFailsAssertions) {
    ReportBuilder rb("x", json::object(), SearchConfig{});
    rb.quantity("bad", "no_such_kind", json::object(), json::object());
    rb.quantity("one", "constant", {{"value", 1.0}}, json::object());
    rb.check_le("le", "bad <= one", Ref::q("bad"), Ref::q("one"), 0.0);
    rb.check_valid("valid", "bad valid", "bad");
    const ExperimentReport r = rb.finish(false);
    EXPECT_FALSE(r.passed());
    EXPECT_TRUE(std::isnan(r.value("bad")));
}

TEST(Recheck, DetectsTamperedWitness) {
    const Point z = Point::zero(2), w({0.0, -0.25});
    ReportBuilder rb("lempert", {{"z", to_json(z)}, {"w", to_json(w)}}, quick());
    const LempertResult up = lempert_upper(z, w, quick());
    const PLowerResult lo = p_lower(z, w);
    rb.quantity("lo", "p_lower", {{"z", to_json(z)}, {"w", to_json(w)}}, {{"angles", lo.angles}});
    rb.quantity("up", "lempert_upper", {{"z", to_json(z)}, {"w", to_json(w)}}, to_json(up.witness));
    rb.check_le("sandwich", "lo <= up", Ref::q("lo"), Ref::q("up"), 1e-9);
    rb.check_valid("valid", "up valid", "up");
    ExperimentReport r = rb.finish(false);
    ASSERT_TRUE(r.passed());
    const RecheckResult ok = recheck(r.doc);
    EXPECT_TRUE(ok.identical);
    EXPECT_TRUE(ok.all_pass);
    EXPECT_EQ(ok.assertions, 2);
    // move the target point: the witness no longer interpolates
    json doc = r.doc;
    doc["quantities"][1]["inputs"]["w"] = json::parse("[[0,0],[-0.3,0]]");
    const RecheckResult bad = recheck(doc);
    EXPECT_FALSE(bad.identical);
    EXPECT_FALSE(bad.all_pass);
    EXPECT_EQ(bad.mismatches, (std::vector<std::string>{"sandwich", "valid"}));
}

TEST(VerifyThm2, PolydiscAndBall) {
    ThmTwoOptions o;
    o.pairs = 2;
    for (GaugeKind g : {GaugeKind::Polydisc, GaugeKind::Ball}) {
        const ExperimentReport r = verify_thm2(2, g, quick(), o);
        EXPECT_TRUE(r.passed()) << r.doc.dump(1);
        EXPECT_NEAR(r.value("roots_midpoint"), 1.0 - std::sqrt(2.0), 1e-9);
        EXPECT_NEAR(r.value("h1_1"), (1.0 + std::sqrt(17.0)) / 2.0, 1e-10);
        const RecheckResult rc = recheck(r.doc);
        EXPECT_TRUE(rc.identical && rc.all_pass);
    }
}

TEST(VerifyThm1, SmallCollapse) {
    ThmOneOptions o;
    o.gaps = false;
    o.lkl_samples = 3;
    o.identity_samples = 200;
    for (int n : {2, 4}) {
        const ExperimentReport r = verify_thm1(n, quick(), o);
        EXPECT_TRUE(r.passed());
        for (int k = 1; k <= n; ++k)
            if (n % k == 0) EXPECT_NEAR(r.value("kappa_e" + std::to_string(k)), double(k) / n, 1e-9);
        EXPECT_TRUE(recheck(r.doc).identical);
    }
    EXPECT_THROW(verify_thm1(1), DomainError);
}

TEST(VerifyThm1, GapsAreIntervalsOnly) {
    ThmOneOptions o;
    o.collapse = false;
    o.max_m = 2;
    SearchConfig c = quick();
    c.restarts = 1;
    const ExperimentReport r = verify_thm1(3, c, o);
    EXPECT_TRUE(r.passed());
    for (const auto& a : r.doc.at("assertions")) {
        const std::string op = a.at("op");
        EXPECT_EQ(op, "le");  // no strict-gap assertion is ever made
    }
    EXPECT_NEAR(r.value("rho_e2"), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(r.value("rho_L1_n"), 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(r.value("kappa2_L1_n"), 4.0 / 3.0, 1e-6);
}

TEST(VerifyRemark2, SignAndCollapse) {
    const ExperimentReport r = verify_remark2(2, 2, quick());
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.doc.at("embedding").at("sign"), -1);
    EXPECT_TRUE(r.doc.at("embedding").at("plus_preserves_membership").get<bool>());
    EXPECT_TRUE(r.doc.at("embedding").at("minus_preserves_membership").get<bool>());
    EXPECT_TRUE(find_assertion(r.doc, "sign_stable").at("pass").get<bool>());
    EXPECT_EQ(detect_embedding_sign(3, 50, 1).sign, 1);
    EXPECT_TRUE(recheck(r.doc).identical);
}

TEST(Determinism, SameSeedSameReport) {
    ThmTwoOptions o;
    o.pairs = 1;
    const json a = verify_thm2(1, GaugeKind::Ball, quick(), o).doc;
    const json b = verify_thm2(1, GaugeKind::Ball, quick(), o).doc;
    EXPECT_EQ(a.dump(), b.dump());
    SearchConfig other = quick();
    other.grid.seed += 1;
    EXPECT_NE(verify_thm2(1, GaugeKind::Ball, other, o).doc.at("fingerprint"), a.at("fingerprint"));
}
