#include "sic/poly2.hpp"

#include <algorithm>

namespace sic {

Rat adjoinSqrt(GenContext* ctx, const Q& s) {
    if (s == 0) return Rat(ctx, Q(0));
    bool neg = s < 0;
    Z a = numerator(neg ? Q(-s) : s);
    Z b = denominator(s);
    Z n = a * b;  // sqrt(a/b) = sqrt(a*b)/b
    Z sq = 1, sf = 1;
    for (Z d = 2; d * d <= n && d < 1000000; ++d) {
        while (n % (d * d) == 0) {
            sq *= d;
            n /= d * d;
        }
        if (n % d == 0) {
            sf *= d;
            n /= d;
        }
    }
    Z r = boost::multiprecision::sqrt(n);
    if (r * r == n)
        sq *= r;
    else
        sf *= n;
    Rat out(ctx, Q(sq, b));
    if (sf != 1) out *= Rat::var(ctx, ctx->alg("sqrt" + sf.str(), Q(sf)));
    if (neg) out *= Rat::var(ctx, ctx->alg("i", Q(-1)));
    return out;
}

std::optional<Rat> sqrtRat(const Rat& r) {
    if (r.isZero()) return Rat(r.ctx(), Q(0));
    Mpoly w = r.num() * r.den();
    Q cont = w.content();
    if (w.terms().rbegin()->second < 0) cont = -cont;
    Mpoly pp = w.primitivePart();
    auto sp = sqrtExact(pp);
    if (!sp) return std::nullopt;
    Rat s = adjoinSqrt(r.ctx(), cont) * Rat(*sp) / Rat(r.den());
    if (s * s != r) return std::nullopt;
    return s;
}

Mpoly coeffXY(const Mpoly& p, int xu, int xv, int i, int j) {
    Mpoly r(p.ctx());
    for (const auto& [e, c] : p.terms()) {
        int32_t eu = size_t(xu) < e.size() ? e[size_t(xu)] : 0;
        int32_t ev = size_t(xv) < e.size() ? e[size_t(xv)] : 0;
        if (eu != i || ev != j) continue;
        Exp e2 = e;
        if (size_t(xu) < e2.size()) e2[size_t(xu)] = 0;
        if (size_t(xv) < e2.size()) e2[size_t(xv)] = 0;
        while (!e2.empty() && e2.back() == 0) e2.pop_back();
        r.addTerm(e2, c);
    }
    return r;
}

Rat evalAt(const Rat& r, int var, const Rat& value) {
    return substitute(r, {{var, value}});
}
Rat evalAt(const Mpoly& p, int var, const Rat& value) {
    return substitute(p, {{var, value}});
}

// ----------------------------------------------------------- solve_on_line

namespace {

// distinct positive divisors, ascending
std::vector<Z> divisors(Z n) {
    if (n < 0) n = -n;
    std::vector<Z> lo, hi;
    for (Z d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            lo.push_back(d);
            if (d * d != n) hi.push_back(n / d);
        }
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

Q horner(const std::vector<Q>& c, const Q& x) {
    Q v = 0;
    for (size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

void solveQuadratic(const Mpoly& p, int var, LineRoots& out) {
    GenContext* ctx = p.ctx();
    Rat c2(p.coeffOf(var, 2)), c1(p.coeffOf(var, 1)), c0(p.coeffOf(var, 0));
    Rat disc = c1 * c1 - Rat(ctx, Q(4)) * c2 * c0;
    Rat two_c2 = Rat(ctx, Q(2)) * c2;
    if (disc.isZero()) {
        out.roots.push_back(-c1 / two_c2);
        return;
    }
    auto s = sqrtRat(disc);
    if (!s) {
        out.residual *= p.primitivePart();
        return;
    }
    out.roots.push_back((-c1 + *s) / two_c2);
    out.roots.push_back((-c1 - *s) / two_c2);
}

}  // namespace

LineRoots solveOnLine(const Mpoly& p0, int var) {
    LineRoots out;
    GenContext* ctx = p0.ctx();
    out.residual = Mpoly(ctx, Q(1));
    if (p0.isZero()) {
        out.degenerate = true;
        return out;
    }
    Mpoly p = p0;
    int m = p.lowDegree(var);
    if (m > 0) {
        out.roots.push_back(Rat(ctx, Q(0)));
        p = divExact(p, Mpoly::var(ctx, var, m));
    }
    int d = p.degree(var);
    if (d == 0) return out;
    if (d == 1) {
        out.roots.push_back(-Rat(p.coeffOf(var, 0)) / Rat(p.coeffOf(var, 1)));
        return out;
    }
    if (d == 2) {
        solveQuadratic(p, var, out);
        return out;
    }
    // degree >= 3: rational-root peeling when all coefficients are constants
    bool constCoeffs = true;
    std::vector<Q> c(size_t(d) + 1);
    for (int k = 0; k <= d; ++k) {
        Mpoly ck = p.coeffOf(var, k);
        if (!ck.isConstant()) {
            constCoeffs = false;
            break;
        }
        c[size_t(k)] = ck.constant();
    }
    if (!constCoeffs) {
        out.residual *= p.primitivePart();
        return out;
    }
    while (c.size() > 3) {
        Z den = 1;
        for (const Q& q : c) den = boost::multiprecision::lcm(den, Z(denominator(q)));
        Z a0 = Z(numerator(c.front()) * den / denominator(c.front()));
        Z ad = Z(numerator(c.back()) * den / denominator(c.back()));
        bool found = false;
        for (const Z& pnum : divisors(a0)) {
            for (const Z& qden : divisors(ad)) {
                for (int sgn : {1, -1}) {
                    Q cand(sgn * pnum, qden);
                    if (horner(c, cand) != 0) continue;
                    out.roots.push_back(Rat(ctx, cand));
                    // deflate
                    std::vector<Q> q(c.size() - 1);
                    Q carry = 0;
                    for (size_t k = c.size(); k-- > 1;) {
                        carry = c[k] + carry * cand;
                        q[k - 1] = carry;
                    }
                    c = q;
                    found = true;
                    break;
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found) break;
    }
    Mpoly rem(ctx);
    for (size_t k = 0; k < c.size(); ++k) {
        if (c[k] != 0) rem += Mpoly::var(ctx, var, int(k)) * c[k];
    }
    if (c.size() > 3) {
        out.residual *= rem.primitivePart();
        return out;
    }
    if (rem.degree(var) == 2)
        solveQuadratic(rem, var, out);
    else if (rem.degree(var) == 1)
        out.roots.push_back(-Rat(rem.coeffOf(var, 0)) / Rat(rem.coeffOf(var, 1)));
    return out;
}

// ----------------------------------------------------------------- printing

namespace {

std::string biStrPoly(const Mpoly& num, const Mpoly& den, int xu, int xv) {
    GenContext* ctx = num.ctx();
    int du = num.degree(xu), dv = num.degree(xv);
    struct Term {
        int i, j;
        std::string coeff;
    };
    std::vector<Term> ts;
    for (int i = 0; i <= du; ++i) {
        for (int j = 0; j <= dv; ++j) {
            Mpoly cij = coeffXY(num, xu, xv, i, j);
            if (cij.isZero()) continue;
            Rat coeff = Rat(cij) / Rat(den);
            ts.push_back({i, j, coeff.str()});
        }
    }
    std::sort(ts.begin(), ts.end(), [](const Term& a, const Term& b) {
        if (a.i + a.j != b.i + b.j) return a.i + a.j > b.i + b.j;
        return a.i > b.i;
    });
    std::string s;
    for (const Term& t : ts) {
        std::string cs = t.coeff;
        bool composite = cs.find(" + ") != std::string::npos ||
                         cs.find(" - ") != std::string::npos;
        if (composite) cs = "(" + cs + ")";
        bool hasVars = t.i > 0 || t.j > 0;
        std::string part;
        if (hasVars && cs == "1")
            part = "";
        else if (hasVars && cs == "-1")
            part = "-";
        else
            part = cs;
        if (t.i > 0) {
            if (!part.empty() && part != "-") part += "*";
            part += ctx->display(xu);
            if (t.i > 1) part += "^" + std::to_string(t.i);
        }
        if (t.j > 0) {
            if (!part.empty() && part.back() != '-') part += "*";
            part += ctx->display(xv);
            if (t.j > 1) part += "^" + std::to_string(t.j);
        }
        if (!s.empty()) s += " + ";
        s += part;
    }
    return s.empty() ? "0" : s;
}

}  // namespace

std::string biStr(const Rat& r, int xu, int xv) {
    if (!r.den().uses(xu) && !r.den().uses(xv))
        return biStrPoly(r.num(), r.den(), xu, xv);
    Mpoly one(r.ctx(), Q(1));
    return "(" + biStrPoly(r.num(), one, xu, xv) + ") / (" +
           biStrPoly(r.den(), one, xu, xv) + ")";
}

}  // namespace sic
