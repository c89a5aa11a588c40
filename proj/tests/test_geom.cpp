#include <doctest.h>

#include "sic/geom.hpp"
#include "sic/parse.hpp"

using namespace sic;

namespace {

Rat rq(GenContext* c, long n, long d = 1) { return Rat(c, Q(n, d)); }

// transport the u-style chart field to the U-style chart via U = 1/v, V = uv
// and compare with the directly computed twin field
void checkTwinConsistency(const Surface& s, int uId, int UId) {
    const Chart& cu = s.chart(uId);
    const Chart& cU = s.chart(UId);
    GenContext* ctx = s.ctx();
    Rat U = Rat::var(ctx, cU.uvar), V = Rat::var(ctx, cU.vvar);
    std::map<int, Rat> m{{cu.uvar, U * V}, {cu.vvar, rq(ctx, 1) / U}};
    Rat fu = substitute(cu.fieldU, m), fv = substitute(cu.fieldV, m);
    CHECK(cU.fieldU == -fv * U * U);          // U' = -v'/v^2
    CHECK(cU.fieldV == fu / U + U * V * fv);  // V' = u'v + uv'
    // f du^dv chart-independence: f_u = (f_U o map) * d(U,V)/d(u,v) = (f_U o map)/v
    Rat u = Rat::var(ctx, cu.uvar), v = Rat::var(ctx, cu.vvar);
    std::map<int, Rat> minv{{cU.uvar, rq(ctx, 1) / v}, {cU.vvar, u * v}};
    CHECK(cu.f == substitute(cU.f, minv) / v);
}

}  // namespace

TEST_CASE("CP2 atlas charts for a Painleve-II system") {
    GenContext ctx;
    System sys = makeSystem(ctx, "P2.H1");
    Surface s(sys);
    REQUIRE(s.nCharts() == 3);
    const Chart& c1 = s.chart(1);
    const Chart& c2 = s.chart(2);
    CHECK(c1.X == parseExpr(&ctx, "1/u0"));
    CHECK(c1.Y == parseExpr(&ctx, "v0/u0"));
    CHECK(c2.X == parseExpr(&ctx, "U0/V0"));
    CHECK(c2.Y == parseExpr(&ctx, "1/V0"));
    CHECK(c1.depth == 0);
    // f = f0 * Jacobian d(x,y)/d(u,v)
    CHECK(c1.f == parseExpr(&ctx, "-1/u0^3"));
    CHECK(c2.f == parseExpr(&ctx, "-1/V0^3"));
    CHECK(c1.curve("Linf") != nullptr);
    CHECK(c2.curve("Linf") != nullptr);
    CHECK(*c1.curve("Ay") == Mpoly::var(&ctx, c1.vvar));

    // overlap u0v0 <-> U0V0: U0 = 1/v0, V0 = u0/v0
    Rat u = Rat::var(&ctx, c1.uvar), v = Rat::var(&ctx, c1.vvar);
    std::map<int, Rat> m{{c1.uvar, Rat::var(&ctx, c2.vvar) / Rat::var(&ctx, c2.uvar)},
                         {c1.vvar, rq(&ctx, 1) / Rat::var(&ctx, c2.uvar)}};
    Rat fu = substitute(c1.fieldU, m), fv = substitute(c1.fieldV, m);
    Rat U = Rat::var(&ctx, c2.uvar), V = Rat::var(&ctx, c2.vvar);
    CHECK(c2.fieldU == -fv * U * U);
    CHECK(c2.fieldV == fu * U - U * V * fv);
}

TEST_CASE("base-point candidates at infinity for P2.H1") {
    GenContext ctx;
    Surface s(makeSystem(ctx, "P2.H1"));
    BasePointScan scan = findBasePoints(s, 1, 2);
    CHECK(!scan.degenerateLine);
    CHECK(scan.residual.isConstant());
    REQUIRE(scan.points.size() == 2);
    for (const BasePoint& p : scan.points) {
        CHECK(p.a.isZero());
        CHECK(p.b.isZero());
        CHECK(!p.visibleInTwin);
    }
    CHECK(scan.points[0].chartId == 1);
    CHECK(scan.points[1].chartId == 2);
}

TEST_CASE("linear flow has no base points at infinity") {
    GenContext ctx;
    System sys = loadSystemJson(ctx, R"({"vars":["x","y"],"H":"x"})");
    Surface s(sys);
    BasePointScan scan = findBasePoints(s, 1, 2);
    CHECK(scan.points.empty());
    CHECK(!scan.degenerateLine);
    CHECK(scan.residual.isConstant());
}

TEST_CASE("degeneracy test discriminates 0/0 equilibria") {
    // x' = (x^2+y+xy)/(x y^2), y' = (1+xy-y^2)/x^2 : (0,0) is a base point
    // x' = (x^2+y+xy)/x,       y' = (1+xy-y^2)/x^2 : (0,0) is not
    GenContext ctx;
    int x = ctx.depvar("x"), y = ctx.depvar("y");
    Chart ind;
    ind.uvar = x;
    ind.vvar = y;
    ind.fieldU = parseExpr(&ctx, "(x^2 + y + x*y)/(x*y^2)");
    ind.fieldV = parseExpr(&ctx, "(1 + x*y - y^2)/x^2");
    Chart nonind = ind;
    nonind.fieldU = parseExpr(&ctx, "(x^2 + y + x*y)/x");
    Rat zero = rq(&ctx, 0);
    CHECK(isBasePoint(ind, zero, zero));
    CHECK(!isBasePoint(nonind, zero, zero));
    // both fields are 0/0 at (0,0); only the multiplied-field test separates them
    CHECK(pointIndeterminate(ind, zero, zero));
    CHECK(pointIndeterminate(nonind, zero, zero));
}

TEST_CASE("blow-up of the first base point of P2.H1") {
    GenContext ctx;
    Surface s(makeSystem(ctx, "P2.H1"));
    Rat zero = rq(&ctx, 0);
    auto [uId, UId] = s.blowUp(1, zero, zero, "E1");
    CHECK(uId == 3);
    CHECK(UId == 4);
    const Chart& cu = s.chart(uId);
    const Chart& cU = s.chart(UId);
    CHECK(cu.name == "u1v1");
    CHECK(cU.name == "U1V1");
    CHECK(cu.depth == 1);
    CHECK(s.blowDown(uId) == 1);
    CHECK(s.blowDown(UId) == 1);

    // exceptional curve recorded; Linf strict transform survives only in the
    // U-style chart (the center lies on Linf)
    CHECK(*cu.curve("E1") == Mpoly::var(&ctx, cu.uvar));
    CHECK(*cU.curve("E1") == Mpoly::var(&ctx, cU.vvar));
    CHECK(cu.curve("Linf") == nullptr);
    REQUIRE(cU.curve("Linf") != nullptr);
    CHECK(*cU.curve("Linf") == Mpoly::var(&ctx, cU.uvar));

    checkTwinConsistency(s, uId, UId);

    // back-substitution: X,Y composed through the blow-up
    CHECK(cu.X == parseExpr(&ctx, "1/u1"));
    CHECK(cu.Y == parseExpr(&ctx, "v1"));

    // next base point appears at the origin of the U-style chart
    BasePointScan scan = findBasePoints(s, uId, UId);
    REQUIRE(scan.points.size() == 1);
    CHECK(scan.points[0].chartId == UId);
    CHECK(scan.points[0].a.isZero());
    CHECK(scan.points[0].b.isZero());
}

TEST_CASE("P2.H3 cascade start splits into two branches") {
    GenContext ctx;
    Surface s(makeSystem(ctx, "P2.H3"));
    Rat zero = rq(&ctx, 0);

    BasePointScan s0 = findBasePoints(s, 1, 2);
    REQUIRE(s0.points.size() == 1);
    CHECK(s0.points[0].chartId == 1);  // q1: (u0,v0) = (0,0)

    auto [u1, U1] = s.blowUp(1, zero, zero, "E1");
    BasePointScan s1 = findBasePoints(s, u1, U1);
    REQUIRE(s1.points.size() == 1);
    CHECK(s1.points[0].chartId == U1);  // q2: (U1,V1) = (0,0)

    auto [u2, U2] = s.blowUp(U1, zero, zero, "E2");
    CHECK(s.chart(u2).name == "u2v2");
    checkTwinConsistency(s, u2, U2);
    BasePointScan s2 = findBasePoints(s, u2, U2);
    REQUIRE(s2.points.size() == 2);  // q3^{+-}: (u2,v2) = (0,+-1)
    std::vector<Rat> bs{s2.points[0].b, s2.points[1].b};
    CHECK(((bs[0] == rq(&ctx, 1) && bs[1] == rq(&ctx, -1)) ||
           (bs[0] == rq(&ctx, -1) && bs[1] == rq(&ctx, 1))));
    for (const BasePoint& p : s2.points) {
        CHECK(p.chartId == u2);
        CHECK(p.visibleInTwin);
        CHECK(isBasePoint(s.chart(u2), p.a, p.b));
    }
}

TEST_CASE("blow-up of a regular point produces no base points") {
    // x' = y, y' = -x : regular everywhere; candidates (0,+-i) on E are
    // excluded because the twin chart field is polynomial there
    GenContext ctx;
    System sys = loadSystemJson(ctx, R"({"vars":["x","y"],"H":"-1/2*x^2-1/2*y^2"})");
    Surface s(sys);
    Rat zero = rq(&ctx, 0);
    auto [uId, UId] = s.blowUp(0, zero, zero, "E1");
    BasePointScan scan = findBasePoints(s, uId, UId);
    CHECK(scan.points.empty());
    CHECK(!scan.degenerateLine);
    CHECK(scan.residual.isConstant());
    checkTwinConsistency(s, uId, UId);
}
