#include "sic/identify.hpp"

#include "sic/poly2.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace sic {

// ------------------------------------------------------------ analyzeSystem

SystemAnalysis analyzeSystem(System sys) {
    SystemAnalysis a;
    a.sys = sys;
    a.cascade = runCascades(a.sys);
    a.diagram = buildDiagram(a.cascade);
    return a;
}

SystemAnalysis analyzeSystem(GenContext& ctx, const std::string& catalogName,
                             bool normalized) {
    System s = makeSystem(ctx, catalogName);
    if (normalized && !s.normalization.empty()) {
        s.H = applyRewrites(s.H, s.normalization);
        s.f = applyRewrites(s.f, s.normalization);
    }
    return analyzeSystem(std::move(s));
}

// ---------------------------------------------------------- LatticeIsometry

DivisorClass LatticeIsometry::apply(const DivisorClass& v) const {
    DivisorClass out;
    for (size_t j = 0; j < v.c.size(); ++j) {
        if (v.c[j] == 0) continue;
        if (j >= image.size()) throw Error("isometry: class outside basis");
        out = out + image[j] * v.c[j];
    }
    return out;
}

// ------------------------------------------------------------ alignDiagrams

std::vector<DiagramAlignment> alignDiagrams(const IntersectionDiagram& A,
                                            const IntersectionDiagram& B) {
    std::vector<DiagramAlignment> out;
    int gap = A.rank() - B.rank();
    if (gap == 0) {
        if (diagramsIsomorphic(A, B)) out.push_back({A, B, {}, {}});
        return out;
    }
    bool raiseA = gap < 0;
    const IntersectionDiagram& low = raiseA ? A : B;
    const IntersectionDiagram& high = raiseA ? B : A;
    gap = std::abs(gap);
    if (gap > 3) return out;

    struct St {
        IntersectionDiagram d;
        std::vector<std::string> added;
    };
    std::vector<St> frontier{{low, {}}};
    for (int step = 0; step < gap; ++step) {
        std::vector<St> next;
        std::string lab = "N" + std::to_string(step + 1);
        for (const St& st : frontier)
            for (size_t i = 0; i < st.d.nodes().size(); ++i) {
                if (st.d.nodes()[i].accessible) continue;
                St n{st.d, st.added};
                n.d.antiBlowup(int(i), lab);
                n.added.push_back(lab + " on " + st.d.nodes()[i].label);
                next.push_back(std::move(n));
            }
        frontier = std::move(next);
    }
    for (St& st : frontier) {
        if (!diagramsIsomorphic(st.d, high)) continue;
        DiagramAlignment al;
        if (raiseA) {
            al.A = st.d;
            al.B = B;
            al.addedA = st.added;
        } else {
            al.A = A;
            al.B = st.d;
            al.addedB = st.added;
        }
        out.push_back(std::move(al));
    }
    return out;
}

// ------------------------------------------------------------ matchDiagrams

namespace {

struct CompGraph {
    std::vector<int> idx;  // indices into diagram.nodes()
    std::vector<int> self;
    std::vector<std::vector<int>> w;
};

CompGraph compGraph(const IntersectionDiagram& d) {
    CompGraph g;
    const auto& nodes = d.nodes();
    for (size_t i = 0; i < nodes.size(); ++i)
        if (!nodes[i].accessible) g.idx.push_back(int(i));
    size_t n = g.idx.size();
    g.w.assign(n, std::vector<int>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        g.self.push_back(selfIntersection(nodes[size_t(g.idx[i])].cls));
        for (size_t j = 0; j < n; ++j)
            if (i != j)
                g.w[i][j] = intersect(nodes[size_t(g.idx[i])].cls,
                                      nodes[size_t(g.idx[j])].cls);
    }
    return g;
}

void enumIso(const CompGraph& A, const CompGraph& B, size_t i, std::vector<int>& map,
             std::vector<bool>& used, std::vector<std::vector<int>>& out) {
    size_t n = A.idx.size();
    if (i == n) {
        out.push_back(map);
        return;
    }
    for (size_t j = 0; j < n; ++j) {
        if (used[j] || A.self[i] != B.self[j]) continue;
        bool ok = true;
        for (size_t k = 0; k < i && ok; ++k) ok = A.w[i][k] == B.w[j][size_t(map[k])];
        if (!ok) continue;
        map[i] = int(j);
        used[j] = true;
        enumIso(A, B, i + 1, map, used, out);
        used[j] = false;
    }
}

// accessible leaf components (exceptional curves of cascade leaves)
std::vector<int> leafNodes(const IntersectionDiagram& d) {
    std::vector<int> out;
    const auto& nodes = d.nodes();
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].accessible && nodes[i].label != "Ax" && nodes[i].label != "Ay")
            out.push_back(int(i));
    return out;
}

// indices (into the comp graph) of inaccessible neighbours of a node
std::vector<int> compNeighbours(const IntersectionDiagram& d, const CompGraph& g,
                                int nodeIdx) {
    std::vector<int> out;
    for (size_t k = 0; k < g.idx.size(); ++k)
        if (intersect(d.nodes()[size_t(nodeIdx)].cls,
                      d.nodes()[size_t(g.idx[k])].cls) != 0)
            out.push_back(int(k));
    return out;
}

using Vec = std::vector<Q>;
using Mat = std::vector<Vec>;

bool invertMat(Mat m, Mat& inv) {
    size_t n = m.size();
    inv.assign(n, Vec(n, 0));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return false;
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        Q d = m[col][col];
        for (size_t j = 0; j < n; ++j) {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Q f = m[r][col];
            for (size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return true;
}

Vec padVec(const DivisorClass& c, size_t n) {
    Vec v(n, 0);
    for (size_t i = 0; i < c.c.size() && i < n; ++i) v[i] = c.c[i];
    return v;
}

std::string isoKey(const LatticeIsometry& iso) {
    std::ostringstream os;
    for (const DivisorClass& d : iso.image) {
        for (int x : d.c) os << x << ",";
        os << ";";
    }
    return os.str();
}

}  // namespace

std::vector<LatticeIsometry> matchDiagrams(const IntersectionDiagram& A,
                                           const IntersectionDiagram& B) {
    std::vector<LatticeIsometry> out;
    if (A.rank() != B.rank()) return out;
    size_t r = size_t(A.rank());
    CompGraph ga = compGraph(A), gb = compGraph(B);
    if (ga.idx.size() != gb.idx.size()) return out;
    std::vector<int> la = leafNodes(A), lb = leafNodes(B);
    if (la.size() != lb.size()) return out;
    // the component equations must determine the basis matrix exactly
    if (ga.idx.size() + lb.size() != r) return out;

    // enumerate B-component -> A-component graph isomorphisms
    std::vector<std::vector<int>> isos;
    std::vector<int> map(gb.idx.size(), -1);
    std::vector<bool> used(ga.idx.size(), false);
    enumIso(gb, ga, 0, map, used, isos);

    std::set<std::string> seen;
    for (const std::vector<int>& iso : isos) {
        // match leaves through their inaccessible neighbours
        std::vector<std::vector<int>> cand(lb.size());
        for (size_t i = 0; i < lb.size(); ++i) {
            std::vector<int> nb = compNeighbours(B, gb, lb[i]);
            std::vector<int> nbA;
            for (int k : nb) nbA.push_back(iso[size_t(k)]);
            std::sort(nbA.begin(), nbA.end());
            for (size_t j = 0; j < la.size(); ++j) {
                std::vector<int> na = compNeighbours(A, ga, la[j]);
                std::sort(na.begin(), na.end());
                if (na == nbA) cand[i].push_back(int(j));
            }
            if (cand[i].empty()) break;
        }
        if (!lb.empty() && cand.back().empty()) continue;

        // enumerate leaf bijections
        std::vector<int> leafMap(lb.size(), -1);
        std::vector<bool> lused(la.size(), false);
        std::function<void(size_t)> rec = [&](size_t i) {
            if (i == lb.size()) {
                // solve M * vB = vA over the matched pairs
                Mat VA, VB;
                std::vector<std::pair<std::string, std::string>> comps;
                for (size_t k = 0; k < gb.idx.size(); ++k) {
                    const LatticeNode& nb2 = B.nodes()[size_t(gb.idx[k])];
                    const LatticeNode& na2 = A.nodes()[size_t(ga.idx[size_t(iso[k])])];
                    VB.push_back(padVec(nb2.cls, r));
                    VA.push_back(padVec(na2.cls, r));
                    comps.emplace_back(nb2.label, na2.label);
                }
                for (size_t k = 0; k < lb.size(); ++k) {
                    const LatticeNode& nb2 = B.nodes()[size_t(lb[k])];
                    const LatticeNode& na2 = A.nodes()[size_t(la[size_t(leafMap[k])])];
                    VB.push_back(padVec(nb2.cls, r));
                    VA.push_back(padVec(na2.cls, r));
                    comps.emplace_back(nb2.label, na2.label);
                }
                if (VB.size() != r) return;
                // columns of M: M = VA^T * (VB^T)^{-1}; build as row systems
                Mat vbT(r, Vec(r, 0)), vaT(r, Vec(r, 0));
                for (size_t i2 = 0; i2 < r; ++i2)
                    for (size_t j2 = 0; j2 < r; ++j2) {
                        vbT[j2][i2] = VB[i2][j2];
                        vaT[j2][i2] = VA[i2][j2];
                    }
                Mat inv;
                if (!invertMat(vbT, inv)) return;
                // M[i][j] = sum_k vaT[i][k] * inv[k][j]
                Mat M(r, Vec(r, 0));
                for (size_t i2 = 0; i2 < r; ++i2)
                    for (size_t j2 = 0; j2 < r; ++j2)
                        for (size_t k2 = 0; k2 < r; ++k2)
                            M[i2][j2] += vaT[i2][k2] * inv[k2][j2];
                // integrality
                for (size_t i2 = 0; i2 < r; ++i2)
                    for (size_t j2 = 0; j2 < r; ++j2)
                        if (boost::multiprecision::denominator(M[i2][j2]) != 1) return;
                // form preservation: (M e_i) . (M e_j) == e_i . e_j
                auto dot = [&](size_t i2, size_t j2) {
                    Q s = M[0][i2] * M[0][j2];
                    for (size_t k2 = 1; k2 < r; ++k2) s -= M[k2][i2] * M[k2][j2];
                    return s;
                };
                for (size_t i2 = 0; i2 < r; ++i2)
                    for (size_t j2 = i2; j2 < r; ++j2) {
                        Q want = i2 != j2 ? Q(0) : (i2 == 0 ? Q(1) : Q(-1));
                        if (dot(i2, j2) != want) return;
                    }
                LatticeIsometry li;
                for (size_t j2 = 0; j2 < r; ++j2) {
                    std::vector<int> col;
                    for (size_t i2 = 0; i2 < r; ++i2)
                        col.push_back(int(M[i2][j2].convert_to<long>()));
                    while (!col.empty() && col.back() == 0) col.pop_back();
                    li.image.emplace_back(DivisorClass(col));
                }
                li.components = comps;
                if (seen.insert(isoKey(li)).second) out.push_back(std::move(li));
                return;
            }
            for (int j : cand[i]) {
                if (lused[size_t(j)]) continue;
                leafMap[i] = j;
                lused[size_t(j)] = true;
                rec(i + 1);
                lused[size_t(j)] = false;
            }
        };
        rec(0);
    }
    return out;
}

// ---------------------------------------------------------------- axisClass

DivisorClass axisClass(const IntersectionDiagram& d, const std::string& label) {
    const LatticeNode* n = d.find(label);
    if (!n) throw Error("no axis component '" + label + "'");
    return n->cls;
}

// ------------------------------------------------------- curveThroughPoints

namespace {

const CascadeNode* nodeByLabel(const CascadeResult& r, const std::string& label) {
    for (const CascadeNode& n : r.nodes)
        if (n.label == label) return &n;
    return nullptr;
}

}  // namespace

CurveFamily curveThroughPoints(const SystemAnalysis& S, const DivisorClass& D,
                               const std::string& tag) {
    CurveFamily fam;
    GenContext* ctx = S.sys.ctx();
    int deg = D.coeff(0);
    if (deg < 1 || deg > 3) {
        fam.error = "unsupported curve degree " + std::to_string(deg);
        return fam;
    }
    // multiplicities per cascade node label
    std::map<std::string, int> mult;
    for (size_t j = 1; j < D.c.size(); ++j) {
        if (D.c[j] == 0) continue;
        if (j >= S.diagram.basis().size() || D.c[j] > 0) {
            fam.error = "class not realizable over the cascade";
            return fam;
        }
        const std::string& label = S.diagram.basis()[j];
        if (!nodeByLabel(S.cascade, label)) {
            fam.error = "class meets a curve with no blow-up record";
            return fam;
        }
        mult[label] = -D.c[j];
    }

    // generic polynomial of the given degree
    std::vector<int> params;
    Mpoly F(ctx);
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; i + j <= deg; ++j) {
            int p = ctx->param(tag + "_a" + std::to_string(i) + std::to_string(j));
            params.push_back(p);
            F += Mpoly::var(ctx, p) * Mpoly::var(ctx, S.sys.xv, i) *
                 Mpoly::var(ctx, S.sys.yv, j);
        }

    std::map<int, Rat> solvedRepl;
    std::map<int, Rat> exprs;  // chartId -> transform of the family
    Rat Ffam = Rat(F);

    auto applySolution = [&](int p, const Rat& val) {
        std::map<int, Rat> one{{p, val}};
        for (auto& [k, v] : solvedRepl) v = substitute(v, one);
        solvedRepl[p] = val;
        for (auto& [cid, e] : exprs) e = substitute(e, one);
        Ffam = substitute(Ffam, one);
    };

    // solve a linear vanishing condition for one free coefficient
    auto impose = [&](Mpoly c) -> bool {
        Rat cr = substitute(c, solvedRepl);
        Mpoly cn = cr.num();
        if (cn.isZero()) return true;
        for (int p : params) {
            if (solvedRepl.count(p) || cn.degree(p) != 1) continue;
            Mpoly A = cn.coeffOf(p, 1);
            bool clean = true;
            for (int q2 : params)
                if (A.uses(q2)) clean = false;
            if (!clean) continue;
            Mpoly R = cn - A * Mpoly::var(ctx, p);
            applySolution(p, Rat(-R) / Rat(A));
            return true;
        }
        fam.error = "over-constrained or non-linear point condition";
        return false;
    };

    auto getExpr = [&](int chartId) -> const Rat* {
        auto it = exprs.find(chartId);
        if (it != exprs.end()) return &it->second;
        const Chart& ch = S.cascade.surface->chart(chartId);
        if (ch.parent != -1) return nullptr;
        Rat sub = substitute(Ffam, {{S.sys.xv, ch.X}, {S.sys.yv, ch.Y}});
        return &exprs.emplace(chartId, Rat(sub.num())).first->second;
    };

    for (const CascadeNode& n : S.cascade.nodes) {
        const Chart& ch = S.cascade.surface->chart(n.point.chartId);
        const Rat* ep = getExpr(ch.id);
        if (!ep) {
            fam.error = "missing chart transform";
            return fam;
        }
        Rat e = *ep;
        int m = 0;
        if (auto it = mult.find(n.label); it != mult.end()) m = it->second;
        if (m > 0) {
            Rat u = Rat::var(ctx, ch.uvar), v = Rat::var(ctx, ch.vvar);
            Rat shifted = substitute(e, {{ch.uvar, u + n.point.a}, {ch.vvar, v + n.point.b}});
            Mpoly N = shifted.num();
            for (int t = 0; t < m; ++t)
                for (int i = 0; i <= t; ++i)
                    if (!impose(coeffXY(N, ch.uvar, ch.vvar, i, t - i))) return fam;
            e = substitute(e, solvedRepl);
        }
        // descend into the two charts created by this blow-up
        for (int cid : {n.uChart, n.UChart}) {
            if (cid < 0) continue;
            const Chart& c = S.cascade.surface->chart(cid);
            Rat pu, pv;
            Rat u = Rat::var(ctx, c.uvar), v = Rat::var(ctx, c.vvar);
            if (!c.Ustyle) {
                pu = u + c.centerA;
                pv = u * v + c.centerB;
            } else {
                pu = u * v + c.centerA;
                pv = v + c.centerB;
            }
            Rat ce = substitute(e, {{ch.uvar, pu}, {ch.vvar, pv}});
            Mpoly nn = ce.num();
            int exc = c.excVar();
            if (m > 0) {
                if (!nn.isZero() && nn.lowDegree(exc) < m) {
                    fam.error = "imposed multiplicity not attained";
                    return fam;
                }
                if (!nn.isZero()) nn = divExact(nn, Mpoly::var(ctx, exc, m));
            }
            exprs[cid] = Rat(nn) / Rat(ce.den());
        }
    }

    fam.expr = substitute(Ffam, solvedRepl);
    if (fam.expr.isZero()) {
        fam.error = "empty family";
        return fam;
    }
    for (int p : params)
        if (!solvedRepl.count(p) && fam.expr.uses(p)) fam.freeParams.push_back(p);
    fam.ok = true;
    return fam;
}

// ------------------------------------------------------- fixByHamiltonicity

namespace {

struct SolveState {
    std::vector<Mpoly> eqs;
    std::map<int, Rat> assign;
};

bool usesAny(const Mpoly& p, const std::vector<int>& gens) {
    for (int g : gens)
        if (p.uses(g)) return true;
    return false;
}

void substState(SolveState& st, GenContext* /*ctx*/, int p, const Rat& val) {
    std::map<int, Rat> one{{p, val}};
    for (auto& [k, v] : st.assign) v = substitute(v, one);
    st.assign[p] = val;
    std::vector<Mpoly> next;
    for (const Mpoly& e : st.eqs) {
        Mpoly n = substitute(e, one).num().primitivePart();
        if (!n.isZero()) next.push_back(std::move(n));
    }
    st.eqs = std::move(next);
}

void solveAll(SolveState st, GenContext* ctx, const std::vector<int>& unknowns,
              std::vector<SolveState>& solutions, int depth = 0) {
    if (depth > 64) return;
    for (;;) {
        // drop zeros / contradictions, dedupe
        std::vector<Mpoly> eqs;
        std::set<std::string> seen;
        for (Mpoly& e : st.eqs) {
            Mpoly p = e.primitivePart();
            if (p.isZero()) continue;
            if (!usesAny(p, unknowns)) return;  // inconsistent branch
            if (seen.insert(p.str()).second) eqs.push_back(std::move(p));
        }
        st.eqs = std::move(eqs);
        if (st.eqs.empty()) {
            // constant parameters must have received constant values
            for (const auto& [g, v] : st.assign) {
                if (ctx->gen(g).kind != GenKind::Param) continue;
                if (v.uses(ctx->z())) return;
                for (int u2 : v.num().usedVars())
                    if (ctx->gen(u2).kind == GenKind::Func) return;
                for (int u2 : v.den().usedVars())
                    if (ctx->gen(u2).kind == GenKind::Func) return;
            }
            solutions.push_back(std::move(st));
            return;
        }
        // linear elimination
        bool progressed = false;
        for (const Mpoly& e : st.eqs) {
            for (int u : unknowns) {
                if (st.assign.count(u) || e.degree(u) != 1) continue;
                Mpoly A = e.coeffOf(u, 1);
                if (usesAny(A, unknowns)) continue;
                Mpoly R = e - A * Mpoly::var(ctx, u);
                substState(st, ctx, u, Rat(-R) / Rat(A));
                progressed = true;
                break;
            }
            if (progressed) break;
        }
        if (progressed) continue;
        // branch over the roots of an equation involving a single unknown
        for (const Mpoly& e : st.eqs) {
            int only = -1;
            bool single = true;
            for (int u : unknowns) {
                if (!e.uses(u)) continue;
                if (only != -1) single = false;
                only = u;
            }
            if (!single || only < 0) continue;
            LineRoots lr = solveOnLine(e, only);
            if (lr.degenerate || lr.roots.empty()) continue;
            for (const Rat& rv : lr.roots) {
                SolveState br = st;
                substState(br, ctx, only, rv);
                solveAll(std::move(br), ctx, unknowns, solutions, depth + 1);
            }
            return;  // roots outside the field (nonconstant residual) dropped
        }
        return;  // stuck: give the branch up
    }
}

// triangular inversion of the map (X, Y) in the source variables
bool invertBirational(const System& S, const System& T, const Rat& X, const Rat& Y,
                      Rat& invX, Rat& invY) {
    GenContext* ctx = S.ctx();
    auto solveVar = [&](const Rat& expr, int var, int tvar,
                        Rat& out) -> bool {  // expr == tvar, solve for var
        if (expr.den().uses(var)) return false;
        if (expr.num().degree(var) != 1) return false;
        Mpoly A = expr.num().coeffOf(var, 1), B = expr.num().coeffOf(var, 0);
        out = (Rat::var(ctx, tvar) * Rat(expr.den()) - Rat(B)) / Rat(A);
        return true;
    };
    for (int order = 0; order < 2; ++order) {
        const Rat& first = order == 0 ? Y : X;
        const Rat& second = order == 0 ? X : Y;
        int tv1 = order == 0 ? T.yv : T.xv, tv2 = order == 0 ? T.xv : T.yv;
        for (int v1 : {S.yv, S.xv}) {
            int v2 = v1 == S.yv ? S.xv : S.yv;
            Rat s1;
            if (first.uses(v2) || !solveVar(first, v1, tv1, s1)) continue;
            Rat sec = substitute(second, {{v1, s1}});
            Rat s2;
            if (!solveVar(sec, v2, tv2, s2)) continue;
            Rat s1full = substitute(s1, {{v2, s2}});
            std::map<int, Rat> inv{{S.xv, v1 == S.xv ? s1full : s2},
                                   {S.yv, v1 == S.yv ? s1full : s2}};
            if (substitute(X, inv) != Rat::var(ctx, T.xv)) continue;
            if (substitute(Y, inv) != Rat::var(ctx, T.yv)) continue;
            invX = inv[S.xv];
            invY = inv[S.yv];
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<BirationalMap> fixByHamiltonicity(const System& S, const System& T,
                                              const CurveFamily& xFam,
                                              const CurveFamily& yFam, int timeRel) {
    std::vector<BirationalMap> out;
    GenContext* ctx = S.ctx();
    Rat X = xFam.expr, Y = yFam.expr;

    std::vector<int> unknowns = xFam.freeParams;
    for (int p : yFam.freeParams) unknowns.push_back(p);
    std::vector<int> tfuncs;
    for (const std::string& fn : T.funcs) {
        int g = ctx->func(fn, 0);
        tfuncs.push_back(g);
        unknowns.push_back(g);
    }

    auto [s1, s2] = S.vectorField();
    auto [t1, t2] = T.vectorField();
    if (timeRel == -1) {
        Rat mz = -Rat::var(ctx, ctx->z());
        t1 = substitute(t1, {{ctx->z(), mz}});
        t2 = substitute(t2, {{ctx->z(), mz}});
    }
    std::map<int, Rat> toSource{{T.xv, X}, {T.yv, Y}};
    Rat trel(ctx, Q(timeRel));
    Rat defX = trel * (X.derivPartial(S.xv) * s1 + X.derivPartial(S.yv) * s2 +
                       X.derivZ()) -
               substitute(t1, toSource);
    Rat defY = trel * (Y.derivPartial(S.xv) * s1 + Y.derivPartial(S.yv) * s2 +
                       Y.derivZ()) -
               substitute(t2, toSource);

    SolveState st;
    for (const Rat* d : {&defX, &defY}) {
        if (d->den().uses(S.xv) || d->den().uses(S.yv))
            throw Error("defect not polynomial in the source variables");
        const Mpoly& n = d->num();
        for (int i = 0; i <= std::max(0, n.degree(S.xv)); ++i)
            for (int j = 0; j <= std::max(0, n.degree(S.yv)); ++j) {
                Mpoly c = coeffXY(n, S.xv, S.yv, i, j);
                if (!c.isZero()) st.eqs.push_back(c.primitivePart());
            }
    }
    std::vector<SolveState> solutions;
    solveAll(std::move(st), ctx, unknowns, solutions);

    for (SolveState& sol : solutions) {
        BirationalMap m;
        m.sourceName = S.name;
        m.targetName = T.name;
        m.timeRel = timeRel;
        m.X = substitute(X, sol.assign);
        m.Y = substitute(Y, sol.assign);
        for (size_t k = 0; k < T.funcs.size(); ++k)
            if (auto it = sol.assign.find(tfuncs[k]); it != sol.assign.end())
                m.dict.emplace_back(T.funcs[k], it->second);
        for (int p : unknowns) {
            if (std::find(tfuncs.begin(), tfuncs.end(), p) != tfuncs.end()) continue;
            if (auto it = sol.assign.find(p); it != sol.assign.end())
                m.solved.emplace_back(ctx->display(p), it->second);
        }
        m.hasInverse = invertBirational(S, T, m.X, m.Y, m.invX, m.invY);

        // certificate: symplectic equivalence of the dictionary-bound target
        System Td = T;
        std::map<int, Rat> frepl;
        for (size_t k = 0; k < T.funcs.size(); ++k)
            if (auto it = sol.assign.find(tfuncs[k]); it != sol.assign.end())
                frepl[tfuncs[k]] = it->second;
        Td.H = substitute(Td.H, frepl);
        Td.f = substitute(Td.f, frepl);
        bool canCert = true;
        if (timeRel == -1) {
            // t -> -z is only formalized for explicit-z Hamiltonians
            for (const std::string& fn : T.funcs)
                if (Td.H.uses(ctx->func(fn, 0))) canCert = false;
            for (const std::string& fn : S.funcs)
                if (Td.H.uses(ctx->func(fn, 0))) canCert = false;
            if (canCert) {
                Rat mz = -Rat::var(ctx, ctx->z());
                Td.H = -substitute(Td.H, {{ctx->z(), mz}});
                Td.f = substitute(Td.f, {{ctx->z(), mz}});
            }
        }
        if (canCert) {
            EquivCheck ec = checkSymplecticEquivalence(Td, S, m.X, m.Y);
            m.certFactor = ec.factorDefect;
            m.certHam = ec.hamDefect;
            m.certified = ec.ok;
        }
        out.push_back(std::move(m));
    }
    return out;
}

// ---------------------------------------------------------- identifySystems

namespace {

std::string mapKey(const BirationalMap& m) {
    std::ostringstream os;
    os << m.timeRel << "|" << m.X.str() << "|" << m.Y.str() << "|";
    for (const auto& [k, v] : m.dict) os << k << "=" << v.str() << ";";
    return os.str();
}

}  // namespace

IdentifyResult identifySystems(const SystemAnalysis& S, const SystemAnalysis& T) {
    IdentifyResult r;
    std::vector<DiagramAlignment> aligns = alignDiagrams(S.diagram, T.diagram);
    if (aligns.empty()) {
        r.error = "surface types differ";
        return r;
    }
    std::set<std::string> seenIso, seenMap;
    for (const DiagramAlignment& al : aligns) {
        for (LatticeIsometry& iso : matchDiagrams(al.A, al.B)) {
            if (!seenIso.insert(isoKey(iso)).second) continue;
            r.isometries.push_back(iso);
            CurveFamily fx, fy;
            try {
                fx = curveThroughPoints(S, iso.apply(axisClass(T.diagram, "Ax")), "cx");
                fy = curveThroughPoints(S, iso.apply(axisClass(T.diagram, "Ay")), "cy");
            } catch (const Error&) {
                continue;
            }
            if (!fx.ok || !fy.ok) continue;
            for (int tr : {1, -1})
                for (BirationalMap& m : fixByHamiltonicity(S.sys, T.sys, fx, fy, tr))
                    if (seenMap.insert(mapKey(m)).second) r.maps.push_back(std::move(m));
        }
    }
    if (r.isometries.empty()) r.error = "no isometry";
    return r;
}

}  // namespace sic
