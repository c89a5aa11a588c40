#include "sic/geom.hpp"

#include "sic/poly2.hpp"

namespace sic {

const Mpoly* Chart::curve(const std::string& label) const {
    for (const auto& [l, p] : curves)
        if (l == label) return &p;
    return nullptr;
}

// ------------------------------------------------------------------ Surface

Surface::Surface(System sys, std::vector<RewriteRule> rules)
    : sys_(std::move(sys)), rules_(std::move(rules)) {
    GenContext* ctx = sys_.ctx();
    Rat one(ctx, Q(1));

    Chart aff;
    aff.id = 0;
    aff.name = "xy";
    aff.uvar = sys_.xv;
    aff.vvar = sys_.yv;
    aff.X = Rat::var(ctx, sys_.xv);
    aff.Y = Rat::var(ctx, sys_.yv);
    auto [xp, yp] = sys_.vectorField();
    aff.fieldU = applyRewrites(xp, rules_);
    aff.fieldV = applyRewrites(yp, rules_);
    aff.f = sys_.f;
    aff.curves = {{"Ax", Mpoly::var(ctx, sys_.xv)}, {"Ay", Mpoly::var(ctx, sys_.yv)}};
    charts_.push_back(aff);

    // (u0,v0): x = 1/u0, y = v0/u0
    int u0 = ctx->depvar("u0"), v0 = ctx->depvar("v0");
    Rat U0r = Rat::var(ctx, u0), V0r = Rat::var(ctx, v0);
    Chart c1 = makeChild(aff, one / U0r, V0r / U0r, u0, v0, "u0v0");
    c1.id = 1;
    c1.parent = -1;
    c1.depth = 0;
    c1.twin = 2;
    c1.curves = {{"Linf", Mpoly::var(ctx, u0)}, {"Ay", Mpoly::var(ctx, v0)}};
    charts_.push_back(c1);

    // (U0,V0): x = U0/V0, y = 1/V0
    int U0 = ctx->depvar("U0"), V0 = ctx->depvar("V0");
    Rat UU = Rat::var(ctx, U0), VV = Rat::var(ctx, V0);
    Chart c2 = makeChild(aff, UU / VV, one / VV, U0, V0, "U0V0");
    c2.id = 2;
    c2.parent = -1;
    c2.depth = 0;
    c2.twin = 1;
    c2.Ustyle = true;
    c2.curves = {{"Linf", Mpoly::var(ctx, V0)}, {"Ax", Mpoly::var(ctx, U0)}};
    charts_.push_back(c2);
}

Chart Surface::makeChild(const Chart& parent, const Rat& pu, const Rat& pv,
                         int uvar, int vvar, const std::string& name) {
    GenContext* ctx = sys_.ctx();
    Chart c;
    c.name = name;
    c.uvar = uvar;
    c.vvar = vvar;
    c.parent = parent.id;
    c.depth = parent.depth + 1;

    std::map<int, Rat> repl{{parent.uvar, pu}, {parent.vvar, pv}};
    Rat puU = pu.derivPartial(uvar), puV = pu.derivPartial(vvar), puZ = pu.derivZ();
    Rat pvU = pv.derivPartial(uvar), pvV = pv.derivPartial(vvar), pvZ = pv.derivZ();
    Rat J0 = puU * pvV - puV * pvU;
    Rat rhsU = substitute(parent.fieldU, repl) - puZ;
    Rat rhsV = substitute(parent.fieldV, repl) - pvZ;
    c.fieldU = applyRewrites((pvV * rhsU - puV * rhsV) / J0, rules_);
    c.fieldV = applyRewrites((puU * rhsV - pvU * rhsU) / J0, rules_);
    c.X = substitute(parent.X, repl);
    c.Y = substitute(parent.Y, repl);
    Rat f0 = substitute(sys_.f, {{sys_.xv, c.X}, {sys_.yv, c.Y}});
    c.f = f0 * (c.X.derivPartial(uvar) * c.Y.derivPartial(vvar) -
                c.X.derivPartial(vvar) * c.Y.derivPartial(uvar));
    return c;
}

std::pair<int, int> Surface::blowUp(int chartId, const Rat& a, const Rat& b,
                                    const std::string& excLabel) {
    const Chart parent = chart(chartId);
    GenContext* ctx = sys_.ctx();
    int sfx = parent.depth + 1;
    auto fresh = [&](const std::string& base) {
        std::string n = base;
        while (ctx->find(n) >= 0) n += "_";
        return ctx->depvar(n);
    };
    std::string us = std::to_string(sfx);
    int un = fresh("u" + us), vn = fresh("v" + us);
    int Un = fresh("U" + us), Vn = fresh("V" + us);
    ++nblow_;

    Rat u = Rat::var(ctx, un), v = Rat::var(ctx, vn);
    Rat U = Rat::var(ctx, Un), V = Rat::var(ctx, Vn);

    Chart cu = makeChild(parent, u + a, u * v + b, un, vn, "u" + us + "v" + us);
    Chart cU = makeChild(parent, U * V + a, V + b, Un, Vn, "U" + us + "V" + us);
    cU.Ustyle = true;
    cu.centerA = a;
    cu.centerB = b;
    cU.centerA = a;
    cU.centerB = b;

    auto transformCurves = [&](Chart& c, const Rat& pu, const Rat& pv) {
        for (const auto& [label, P] : parent.curves) {
            Rat sub = substitute(P, {{parent.uvar, pu}, {parent.vvar, pv}});
            if (!sub.isPoly()) throw Error("curve transform not polynomial");
            Mpoly p = sub.asPoly();
            int ex = c.excVar();
            int m = p.lowDegree(ex);
            if (m > 0) p = divExact(p, Mpoly::var(ctx, ex, m));
            if (p.isConstant()) continue;  // curve does not meet this chart
            p = p.primitivePart();
            c.curves.emplace_back(label, p);
        }
        c.curves.emplace_back(excLabel, Mpoly::var(ctx, c.excVar()));
    };
    transformCurves(cu, u + a, u * v + b);
    transformCurves(cU, U * V + a, V + b);

    cu.id = int(charts_.size());
    cU.id = cu.id + 1;
    cu.twin = cU.id;
    cU.twin = cu.id;
    charts_.push_back(cu);
    charts_.push_back(cU);
    return {cu.id, cU.id};
}

int Surface::blowDown(int chartId) const { return chart(chartId).parent; }

// -------------------------------------------------------------- base points

bool pointIndeterminate(const Chart& c, const Rat& a, const Rat& b) {
    std::map<int, Rat> at{{c.uvar, a}, {c.vvar, b}};
    for (const Rat* r : {&c.fieldU, &c.fieldV})
        if (vanishesAt(r->num(), at) && vanishesAt(r->den(), at)) return true;
    return false;
}

namespace {

// numerators of the g-multiplied field, g = lcm of the two denominators
std::pair<Mpoly, Mpoly> multipliedField(const Chart& c) {
    Mpoly d1 = c.fieldU.den(), d2 = c.fieldV.den();
    Mpoly g = gcd(d1, d2);
    return {c.fieldU.num() * divExact(d2, g), c.fieldV.num() * divExact(d1, g)};
}

// identically-zero restricted numerators: a whole line of multiplied-field
// equilibria.  Harmless if the field itself is regular there (constant
// denominators on the line); otherwise the scan cannot isolate points.
bool lineDegenerate(const Chart& c, int lineVar) {
    Mpoly d = (c.fieldU.den() * c.fieldV.den()).setZero(lineVar);
    return d.isZero() || !d.isConstant();
}

}  // namespace

bool isBasePoint(const Chart& c, const Rat& a, const Rat& b) {
    auto [G1, G2] = multipliedField(c);
    std::map<int, Rat> at{{c.uvar, a}, {c.vvar, b}};
    if (!vanishesAt(G1, at)) return false;
    if (!vanishesAt(G2, at)) return false;
    return pointIndeterminate(c, a, b);
}

BasePointScan findBasePoints(const Surface& s, int uId, int UId) {
    BasePointScan out;
    GenContext* ctx = s.ctx();
    out.residual = Mpoly(ctx, Q(1));
    const Chart& cu = s.chart(uId);
    const Chart& cV = s.chart(UId);
    Rat zero(ctx, Q(0));

    auto [G1, G2] = multipliedField(cu);
    Mpoly g1 = G1.setZero(cu.uvar);
    Mpoly g2 = G2.setZero(cu.uvar);
    if (g1.isZero() && g2.isZero()) {
        out.degenerateLine = lineDegenerate(cu, cu.uvar);
        return out;
    }
    const Mpoly* base = &g1;
    const Mpoly* other = &g2;
    if (g1.isZero() || (!g2.isZero() && g2.degree(cu.vvar) < g1.degree(cu.vvar))) {
        base = &g2;
        other = &g1;
    }
    LineRoots lr = solveOnLine(*base, cu.vvar);
    if (!lr.residual.isConstant()) out.residual = lr.residual;
    for (const Rat& rho : lr.roots) {
        if (!other->isZero() && !vanishesAt(*other, {{cu.vvar, rho}})) continue;
        BasePoint p;
        p.chartId = uId;
        p.a = zero;
        p.b = rho;
        if (rho.isZero()) {
            if (!pointIndeterminate(cu, zero, zero)) continue;
            p.visibleInTwin = false;
        } else {
            Rat one(ctx, Q(1));
            if (!pointIndeterminate(cu, zero, rho)) continue;
            if (!pointIndeterminate(cV, one / rho, zero)) continue;
            p.visibleInTwin = true;
            // record in the chart where the point has polynomial coordinates
            if (!rho.isPoly() && (one / rho).isPoly()) {
                p.chartId = UId;
                p.a = one / rho;
                p.b = zero;
            }
        }
        out.points.push_back(p);
    }

    // origin of the U-style chart (v = infinity side)
    auto [H1, H2] = multipliedField(cV);
    Mpoly h1 = H1.setZero(cV.vvar);
    Mpoly h2 = H2.setZero(cV.vvar);
    if (h1.isZero() && h2.isZero()) {
        out.degenerateLine = out.degenerateLine || lineDegenerate(cV, cV.vvar);
        return out;
    }
    if (evalAt(h1, cV.uvar, zero).isZero() && evalAt(h2, cV.uvar, zero).isZero() &&
        pointIndeterminate(cV, zero, zero)) {
        BasePoint p;
        p.chartId = UId;
        p.a = zero;
        p.b = zero;
        p.visibleInTwin = false;
        out.points.push_back(p);
    }
    return out;
}

}  // namespace sic
