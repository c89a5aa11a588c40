#include "sic/ham.hpp"

#include "sic/parse.hpp"
#include "sic/poly2.hpp"

#include <json.hpp>

namespace sic {

std::pair<Rat, Rat> System::vectorField() const {
    return {-H.derivPartial(yv) / f, H.derivPartial(xv) / f};
}

// ------------------------------------------------------------------ catalog

namespace {

struct Entry {
    const char* name;
    const char* x;
    const char* y;
    const char* H;
    std::vector<const char*> params;
    std::vector<const char*> funcs;
};

const std::vector<Entry>& entries() {
    static const std::vector<Entry> t = {
        {"P2.H1", "x1", "y1",
         "1/2*x1^2 - (y1^2 + z/2)*x1 - (alpha + 1/2)*y1", {"alpha"}, {}},
        {"P2.H2", "x2", "y2",
         "1/2*x2^2 - y2^2*x2 - z/2*y2^2 - alpha*y2", {"alpha"}, {}},
        {"P2.H3", "x3", "y3",
         "1/2*x3^2 - 1/2*y3^4 - z/2*y3^2 - alpha*y3", {"alpha"}, {}},
        {"P2.H4", "x4", "y4",
         "3/4*x4^2 - 2*x4*y4^2 + y4^4 - z/4*x4 - (1 + 4*alpha)/6*y4", {"alpha"}, {}},
        {"qP2.H1", "x1", "y1",
         "1/2*x1^2 - 1/2*y1^6 - 1/4*a3(z)*y1^4 - 1/3*a2(z)*y1^3"
         " - 1/2*a1(z)*y1^2 - a0(z)*y1",
         {}, {"a3", "a2", "a1", "a0"}},
        {"qP2.H2", "x2", "y2",
         "1/2*x2^2 - x2*y2^3 - 1/4*b3(z)*y2^4 - 1/3*b2(z)*y2^3"
         " - 1/2*b1(z)*y2^2 - b0(z)*y2",
         {}, {"b3", "b2", "b1", "b0"}},
        {"qP2.H3", "x3", "y3",
         "1/2*x3^2 - x3*(y3^3 + c3(z)*y3) - 1/3*c2(z)*y3^3"
         " - 1/2*c1(z)*y3^2 - c0(z)*y3",
         {}, {"c3", "c2", "c1", "c0"}},
        {"qP4.H1", "x1", "y1",
         "1/2*x1^2*y1 - 1/2*y1^5 - alpha4(z)/4*y1^4 - alpha3(z)/3*y1^3"
         " - alpha2(z)/2*y1^2 - alpha1(z)*y1 - alpha0(z)*x1",
         {}, {"alpha4", "alpha3", "alpha2", "alpha1", "alpha0"}},
        {"qP4.H2", "x2", "y2",
         "1/2*x2^2*y2 - x2*(y2^3 + beta4(z)/4*y2^2 + beta3(z)/3*y2 + beta0(z))"
         " - beta2(z)/2*y2^2 - beta1(z)*y2",
         {}, {"beta4", "beta3", "beta2", "beta1", "beta0"}},
        {"FH.N4", "x", "y",
         "1/2*x^2 - 1/5*y^5 - 1/3*a2(z)*y^3 - 1/2*a1(z)*y^2 - a0(z)*y",
         {}, {"a2", "a1", "a0"}},
        {"FH.N5", "x", "y",
         "1/2*x^2 - 1/6*y^6 - 1/4*b3(z)*y^4 - 1/3*b2(z)*y^3 - 1/2*b1(z)*y^2"
         " - b0(z)*y",
         {}, {"b3", "b2", "b1", "b0"}},
    };
    return t;
}

}  // namespace

std::vector<std::string> catalogNames() {
    std::vector<std::string> out;
    for (const Entry& e : entries()) out.push_back(e.name);
    return out;
}

System makeSystem(GenContext& ctx, const std::string& name) {
    for (const Entry& e : entries()) {
        if (name != e.name) continue;
        System s;
        s.name = name;
        s.xv = ctx.depvar(e.x);
        s.yv = ctx.depvar(e.y);
        for (const char* p : e.params) s.params.push_back(ctx.param(p));
        for (const char* fn : e.funcs) s.funcs.push_back(fn);
        s.H = parseExpr(&ctx, e.H);
        s.f = Rat(&ctx, Q(1));
        Rat z = Rat::var(&ctx, ctx.z());
        if (name == "qP2.H1") {
            Rat c = Rat::var(&ctx, ctx.param("c"));
            s.params.push_back(ctx.param("c"));
            s.normalization = {{"a3", 0, z},
                               {"a1", 0, z * z * Rat(&ctx, Q(1, 16)) + c}};
            s.expectedConditions = {"a3''(z)", "(a3(z)^2 - 16*a1(z))'"};
        } else if (name == "qP2.H3") {
            s.expectedConditions = {"c1'(z)", "c3''(z)"};
        } else if (name == "qP4.H1") {
            Rat c = Rat::var(&ctx, ctx.param("c"));
            s.params.push_back(ctx.param("c"));
            Rat a3 = Rat::var(&ctx, ctx.func("alpha3", 0));
            s.normalization = {
                {"alpha4", 0, z * Rat(&ctx, Q(4))},
                {"alpha2", 0, c + z * Rat(&ctx, Q(2, 3)) * a3 - z.pow(3)}};
            s.expectedConditions = {"alpha0'(z)"};
        } else if (name == "FH.N4") {
            s.expectedConditions = {"a2''(z)"};
        } else if (name == "FH.N5") {
            s.expectedConditions = {"b3''(z)", "(b3(z)^2 + 4*b1(z))'"};
        }
        return s;
    }
    throw Error("unknown catalog system '" + name + "'");
}

System loadSystemJson(GenContext& ctx, const std::string& jsonText) {
    nlohmann::json j = nlohmann::json::parse(jsonText);
    System s;
    s.name = j.value("name", "user");
    auto vars = j.at("vars");
    if (!vars.is_array() || vars.size() != 2) throw Error("vars must list two names");
    s.xv = ctx.depvar(vars[0].get<std::string>());
    s.yv = ctx.depvar(vars[1].get<std::string>());
    if (j.contains("params"))
        for (const auto& p : j["params"]) s.params.push_back(ctx.param(p.get<std::string>()));
    if (j.contains("funcs"))
        for (const auto& fn : j["funcs"]) s.funcs.push_back(fn.get<std::string>());
    if (j.contains("H")) {
        s.H = parseExpr(&ctx, j["H"].get<std::string>());
    } else if (j.contains("terms")) {
        Rat H(&ctx, Q(0));
        for (const auto& t : j["terms"]) {
            Rat c = parseExpr(&ctx, t.at("c").get<std::string>());
            H += c * Rat::var(&ctx, s.xv).pow(t.at("i").get<int>()) *
                 Rat::var(&ctx, s.yv).pow(t.at("j").get<int>());
        }
        s.H = H;
    } else {
        throw Error("system document needs H or terms");
    }
    s.f = j.contains("f") ? parseExpr(&ctx, j["f"].get<std::string>()) : Rat(&ctx, Q(1));
    return s;
}

// --------------------------------------------------------------- correction

namespace {

// antiderivative in var of an expression polynomial in var
bool intPoly(const Rat& g, int var, Rat& out) {
    if (g.den().uses(var)) return false;
    GenContext* ctx = g.ctx();
    Mpoly acc(ctx);
    for (int k = 0; k <= g.num().degree(var); ++k) {
        Mpoly ck = g.num().coeffOf(var, k);
        if (ck.isZero()) continue;
        acc += ck * Mpoly::var(ctx, var, k + 1) * Q(1, k + 1);
    }
    out = Rat(acc) / Rat(g.den());
    return true;
}

}  // namespace

Correction correctionTerm(const System& sys, const Rat& X, const Rat& Y, int wv, int tv) {
    Correction c;
    Rat ft = substitute(sys.f, {{sys.xv, X}, {sys.yv, Y}});
    Rat Xw = X.derivPartial(wv), Xt = X.derivPartial(tv), Xz = X.derivZ();
    Rat Yw = Y.derivPartial(wv), Yt = Y.derivPartial(tv), Yz = Y.derivZ();
    Rat gw = ft * (Yw * Xz - Xw * Yz);
    Rat gt = ft * (Yt * Xz - Xt * Yz);
    c.defect = gw.derivPartial(tv) - gt.derivPartial(wv);
    if (!c.defect.isZero()) return c;
    Rat h1;
    if (!intPoly(gw, wv, h1)) {
        c.defect = gw;
        return c;
    }
    Rat rest = gt - h1.derivPartial(tv);
    if (rest.uses(wv)) {
        c.defect = rest;
        return c;
    }
    Rat h2;
    if (!intPoly(rest, tv, h2)) {
        c.defect = rest;
        return c;
    }
    c.h = h1 + h2;
    c.ok = true;
    return c;
}

EquivCheck checkSymplecticEquivalence(const System& A, const System& B,
                                      const Rat& X, const Rat& Y) {
    EquivCheck r;
    int wv = B.xv, tv = B.yv;
    Correction corr = correctionTerm(A, X, Y, wv, tv);
    Rat J = X.derivPartial(wv) * Y.derivPartial(tv) -
            X.derivPartial(tv) * Y.derivPartial(wv);
    Rat F = J * substitute(A.f, {{A.xv, X}, {A.yv, Y}});
    r.factorDefect = F - B.f;
    Rat K = substitute(A.H, {{A.xv, X}, {A.yv, Y}}) + (corr.ok ? corr.h : Rat(A.ctx(), Q(0)));
    Rat D = K - B.H;
    if (!D.den().uses(wv) && !D.den().uses(tv)) {
        Rat pure = Rat(coeffXY(D.num(), wv, tv, 0, 0)) / Rat(D.den());
        r.hamDefect = D - pure;
    } else {
        r.hamDefect = D;
    }
    r.ok = corr.ok && r.factorDefect.isZero() && r.hamDefect.isZero();
    return r;
}

Rat secondOrderODE(const System& sys, int ypVar) {
    auto [xp, yp] = sys.vectorField();
    if (yp.den().uses(sys.xv) || yp.num().degree(sys.xv) > 1)
        throw Error("y' equation not linear in x");
    Rat P1 = Rat(yp.num().coeffOf(sys.xv, 1)) / Rat(yp.den());
    Rat P0 = Rat(yp.num().coeffOf(sys.xv, 0)) / Rat(yp.den());
    if (P1.isZero()) throw Error("y' equation does not involve x");
    Rat YP = Rat::var(sys.ctx(), ypVar);
    Rat xVal = (YP - P0) / P1;
    Rat ypp = yp.derivPartial(sys.xv) * xp + yp.derivPartial(sys.yv) * YP + yp.derivZ();
    return substitute(ypp, {{sys.xv, xVal}});
}

}  // namespace sic
