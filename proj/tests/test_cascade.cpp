#include <doctest.h>

#include "sic/cascade.hpp"
#include "sic/parse.hpp"

#include <set>

using namespace sic;

namespace {

const CascadeNode* byLabel(const CascadeResult& r, const std::string& label) {
    for (const CascadeNode& n : r.nodes)
        if (n.label == label) return &n;
    return nullptr;
}

std::string chartName(const CascadeResult& r, const CascadeNode& n) {
    return r.surface->chart(n.point.chartId).name;
}

std::set<std::string> conditionTexts(const CascadeResult& r) {
    std::set<std::string> out;
    for (const QPCondition& c : r.conditions) out.insert(c.text);
    return out;
}

void checkCenter(const CascadeResult& r, const std::string& label,
                 const std::string& chart, const std::string& a, const std::string& b) {
    CAPTURE(label);
    const CascadeNode* n = byLabel(r, label);
    REQUIRE(n != nullptr);
    CHECK(chartName(r, *n) == chart);
    CHECK(n->point.a.str() == a);
    CHECK(n->point.b.str() == b);
}

}  // namespace

TEST_CASE("P2.H1 cascade: nine base points with exact coordinates") {
    GenContext ctx;
    CascadeResult r = runCascades(makeSystem(ctx, "P2.H1"));
    CHECK(r.blowups == 9);
    CHECK(!r.unresolved);
    CHECK(!r.depthLimited);
    CHECK(r.conditions.empty());
    REQUIRE(r.roots.size() == 2);

    checkCenter(r, "E1", "u0v0", "0", "0");
    checkCenter(r, "E2", "U1V1", "0", "0");
    checkCenter(r, "E3", "u2v2", "0", "1/2");
    checkCenter(r, "E4", "u3v3", "0", "0");
    checkCenter(r, "E5", "u4v4", "0", "-1/4*z");
    checkCenter(r, "E6", "u5v5", "0", "-1/4*alpha + 1/8");
    checkCenter(r, "E7", "U0V0", "0", "0");
    checkCenter(r, "E8", "U1V1", "0", "0");
    checkCenter(r, "E9", "U2V2", "-alpha - 1/2", "0");

    // both cascades end in plain poles: k = 1 leaves, no conditions needed
    for (const std::string& l : {"E6", "E9"}) {
        const CascadeNode* n = byLabel(r, l);
        REQUIRE(n != nullptr);
        CHECK(n->status == LeafStatus::Regular);
        CHECK(n->k == 1);
    }
}

TEST_CASE("P2.H3 cascade: branching into two chains") {
    GenContext ctx;
    CascadeResult r = runCascades(makeSystem(ctx, "P2.H3"));
    CHECK(r.blowups == 10);
    CHECK(!r.unresolved);
    CHECK(r.conditions.empty());
    REQUIRE(r.roots.size() == 1);

    checkCenter(r, "E1", "u0v0", "0", "0");
    checkCenter(r, "E2", "U1V1", "0", "0");
    checkCenter(r, "E3-", "u2v2", "0", "-1");
    checkCenter(r, "E4-", "u3v3", "0", "0");
    checkCenter(r, "E5-", "u4v4", "0", "1/2*z");
    checkCenter(r, "E6-", "u5v5", "0", "alpha + 1/2");
    checkCenter(r, "E3+", "u2v2", "0", "1");
    checkCenter(r, "E4+", "u3v3", "0", "0");
    checkCenter(r, "E5+", "u4v4", "0", "-1/2*z");
    checkCenter(r, "E6+", "u5v5", "0", "-alpha + 1/2");

    for (const std::string& l : {"E6-", "E6+"}) {
        const CascadeNode* n = byLabel(r, l);
        REQUIRE(n != nullptr);
        CHECK(n->k == 1);
        CHECK((n->status == LeafStatus::Regular ||
               n->status == LeafStatus::RegularExchanged));
    }
}

TEST_CASE("qP2.H1 conditions and square-root leaves") {
    GenContext ctx;
    CascadeResult r = runCascades(makeSystem(ctx, "qP2.H1"));
    CHECK(r.blowups == 15);
    CHECK(!r.unresolved);
    CHECK(conditionTexts(r) ==
          std::set<std::string>{"a3(z)*a3'(z) - 8*a1'(z)", "a3''(z)"});

    checkCenter(r, "E6-", "u5v5", "0", "1/4*a3(z)");
    checkCenter(r, "E8-", "u7v7", "0", "-3/32*a3(z)^2 + 1/2*a1(z) + 1/8*a3'(z)");
    checkCenter(r, "E9-", "u8v8", "0", "-1/4*a3(z)*a2(z) + a0(z) + 1/3*a2'(z)");
    for (const std::string& l : {"E9-", "E9+"}) {
        const CascadeNode* n = byLabel(r, l);
        REQUIRE(n != nullptr);
        CHECK(n->status == LeafStatus::ConditionRequired);
        CHECK(n->k == 2);  // algebraic poles of square-root type
    }
}

TEST_CASE("qP2.H3 conditions combine to independent derivatives") {
    GenContext ctx;
    CascadeResult r = runCascades(makeSystem(ctx, "qP2.H3"));
    CHECK(r.blowups == 13);
    CHECK(!r.unresolved);
    CHECK(conditionTexts(r) == std::set<std::string>{"c1'(z)", "c3''(z)"});
    checkCenter(r, "E13", "U3V3", "1/3*c3(z)*c2(z) - c0(z) - 1/3*c2'(z)", "0");
    for (const std::string& l : {"E9", "E13"}) {
        const CascadeNode* n = byLabel(r, l);
        REQUIRE(n != nullptr);
        CHECK(n->status == LeafStatus::ConditionRequired);
        CHECK(n->k == 2);
    }
}

TEST_CASE("qP4.H1: three branches, mixed pole types, decoupled conditions") {
    GenContext ctx;
    CascadeResult r = runCascades(makeSystem(ctx, "qP4.H1"));
    CHECK(r.blowups == 14);
    CHECK(!r.unresolved);
    CHECK(conditionTexts(r) ==
          std::set<std::string>{
              "9*alpha4(z)^2*alpha4'(z) - 32*alpha4(z)*alpha3'(z) - "
              "32*alpha3(z)*alpha4'(z) + 192*alpha2'(z)",
              "alpha0'(z)", "alpha4''(z)"});

    // long minus branch
    checkCenter(r, "E3--", "u2v2", "0", "-1");
    checkCenter(r, "E4--", "u3v3", "0", "1/4*alpha4(z)");
    checkCenter(r, "E5--", "u4v4", "0", "-3/32*alpha4(z)^2 + 1/3*alpha3(z)");
    checkCenter(r, "E6--", "u5v5",
                "0",
                "5/128*alpha4(z)^3 - 1/4*alpha4(z)*alpha3(z) + 1/2*alpha2(z) - "
                "alpha0(z) + 1/8*alpha4'(z)");
    checkCenter(r, "E7--", "u6v6",
                "0",
                "-35/2048*alpha4(z)^4 + 5/32*alpha4(z)^2*alpha3(z) - "
                "3/8*alpha4(z)*alpha2(z) + 1/2*alpha4(z)*alpha0(z) - "
                "5/32*alpha4(z)*alpha4'(z) - 1/6*alpha3(z)^2 + alpha1(z) + "
                "1/3*alpha3'(z)");
    // short branch: ends with an ordinary pole once alpha0 is constant
    checkCenter(r, "E2+", "u1v1", "0", "0");
    checkCenter(r, "E3+", "u2v2", "0", "2*alpha0(z)");

    const CascadeNode* shortLeaf = byLabel(r, "E3+");
    REQUIRE(shortLeaf != nullptr);
    CHECK(shortLeaf->status == LeafStatus::ConditionRequired);
    CHECK(shortLeaf->k == 1);
    for (const std::string& l : {"E7--", "E7-+"}) {
        const CascadeNode* n = byLabel(r, l);
        REQUIRE(n != nullptr);
        CHECK(n->status == LeafStatus::ConditionRequired);
        CHECK(n->k == 2);
    }
}

TEST_CASE("qP4.H2: thirteen blow-ups and three constancy conditions") {
    GenContext ctx;
    CascadeResult r = runCascades(makeSystem(ctx, "qP4.H2"));
    CHECK(r.blowups == 13);
    CHECK(!r.unresolved);
    CHECK(conditionTexts(r) ==
          std::set<std::string>{"beta0'(z)", "beta2'(z)", "beta4''(z)"});
    checkCenter(r, "E3+", "u2v2", "0", "2*beta0(z)");
    checkCenter(r, "E10", "U2V2", "-1/2*beta2(z)", "0");
    checkCenter(r, "E11", "U3V3", "1/8*beta4(z)*beta2(z) - beta1(z)", "0");
    const CascadeNode* shortLeaf = byLabel(r, "E3+");
    REQUIRE(shortLeaf != nullptr);
    CHECK(shortLeaf->k == 1);
    const CascadeNode* n = byLabel(r, "E11");
    REQUIRE(n != nullptr);
    CHECK(n->status == LeafStatus::ConditionRequired);
    CHECK(n->k == 2);
}

TEST_CASE("combineConditions eliminates linear combinations") {
    GenContext ctx;
    int f = ctx.func("f"), g = ctx.func("g");
    Mpoly E = Mpoly::var(&ctx, ctx.func("f", 1)) + Mpoly::var(&ctx, g);
    Mpoly F = Mpoly::var(&ctx, ctx.func("g", 2));
    std::vector<QPCondition> in{makeCondition(E), makeCondition(E * Q(-1) + F * Q(2))};
    std::vector<QPCondition> out = combineConditions(in);
    REQUIRE(out.size() == 2);
    std::set<std::string> texts{out[0].text, out[1].text};
    CHECK(texts == std::set<std::string>{"g(z) + f'(z)", "g''(z)"});
    (void)f;
}

TEST_CASE("conditionRule solves for the highest derivative") {
    GenContext ctx;
    int a1 = ctx.func("a", 1);
    int b0 = ctx.func("b");
    // 2 a'(z) b(z) - b(z)^2 = 0  ->  a' = b/2
    Mpoly e = Mpoly::var(&ctx, a1) * Mpoly::var(&ctx, b0) * Q(2) -
              Mpoly::var(&ctx, b0) * Mpoly::var(&ctx, b0);
    RewriteRule rule;
    REQUIRE(conditionRule(e, rule));
    CHECK(rule.func == "a");
    CHECK(rule.order == 1);
    CHECK(rule.rhs.str() == "1/2*b(z)");
    // constant and function-free expressions are not solvable
    CHECK(!conditionRule(Mpoly(&ctx, Q(1)), rule));
    CHECK(!conditionRule(Mpoly::var(&ctx, ctx.depvar("w")), rule));
}

TEST_CASE("cascades are deterministic") {
    auto snapshot = [](const CascadeResult& r) {
        std::string s = std::to_string(r.blowups);
        for (const CascadeNode& n : r.nodes)
            s += "|" + n.label + "@" + n.point.a.str() + "," + n.point.b.str() +
                 ":" + leafStatusName(n.status) + ":" + std::to_string(n.k);
        for (const QPCondition& c : r.conditions) s += "|" + c.text;
        return s;
    };
    GenContext c1, c2;
    CascadeResult r1 = runCascades(makeSystem(c1, "qP2.H3"));
    CascadeResult r2 = runCascades(makeSystem(c2, "qP2.H3"));
    CHECK(snapshot(r1) == snapshot(r2));
}
