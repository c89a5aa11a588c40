#include "sic/cascade.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <iostream>

namespace sic {

std::string leafStatusName(LeafStatus s) {
    switch (s) {
        case LeafStatus::Inner: return "inner";
        case LeafStatus::Regular: return "regular";
        case LeafStatus::RegularExchanged: return "regular-after-exchange";
        case LeafStatus::ConditionRequired: return "condition-required";
        case LeafStatus::Unresolved: return "unresolved";
        case LeafStatus::DepthLimit: return "depth-limit";
    }
    return "?";
}

namespace {

bool traceOn() {
    static const bool on = std::getenv("SIC_TRACE") != nullptr;
    return on;
}

int ordAt(const Rat& r, int var) {
    if (r.isZero()) return INT_MAX;
    return r.num().lowDegree(var) - r.den().lowDegree(var);
}

// coefficient polynomials of p with respect to all dependent variables
void splitCoeffs(const Mpoly& p, std::vector<Mpoly>& out) {
    if (p.isZero()) return;
    GenContext* c = p.ctx();
    for (int v : p.usedVars()) {
        if (c->gen(v).kind != GenKind::DepVar) continue;
        for (int k = 0; k <= p.degree(v); ++k) splitCoeffs(p.coeffOf(v, k), out);
        return;
    }
    out.push_back(p);
}

struct LeafInfo {
    LeafStatus status = LeafStatus::Unresolved;
    int k = 0;
    std::vector<Mpoly> obstructions;  // must vanish identically
};

// regularity of the flow across the exceptional line of chart c
LeafInfo analyzeChart(const Chart& c) {
    LeafInfo out;
    int e = c.excVar();
    const Rat& excF = c.Ustyle ? c.fieldV : c.fieldU;
    const Rat& othF = c.Ustyle ? c.fieldU : c.fieldV;
    out.k = 1 + ordAt(c.f, e);

    if (ordAt(excF, e) >= 0 && ordAt(othF, e) >= 0) {
        if (!excF.num().setZero(e).isZero()) {
            out.status = LeafStatus::Regular;
            return out;
        }
        // exceptional line invariant under the flow: not a final chart
        return out;
    }

    // hodographic exchange: u as independent variable,
    // dz/du = 1/u', dv/du = v'/u' must be analytic at u = 0
    Rat one(c.f.ctx(), Q(1));
    Rat R0 = one / excF, R1 = othF / excF;
    if (ordAt(R0, e) >= 0 && ordAt(R1, e) >= 0) {
        out.status = LeafStatus::RegularExchanged;
        return out;
    }
    for (const Rat* R : {&R0, &R1}) {
        if (ordAt(*R, e) >= 0) continue;
        Mpoly n = R->num();
        int ln = n.lowDegree(e);
        if (ln > 0) n = divExact(n, Mpoly::var(n.ctx(), e, ln));
        splitCoeffs(n.setZero(e), out.obstructions);
    }
    out.status = LeafStatus::ConditionRequired;
    return out;
}

int highestFunc(const Mpoly& p) {
    GenContext* c = p.ctx();
    int best = -1;
    for (int i : p.usedVars()) {
        const Generator& g = c->gen(i);
        if (g.kind != GenKind::Func) continue;
        if (best < 0 || g.order > c->gen(best).order ||
            (g.order == c->gen(best).order && i > best))
            best = i;
    }
    return best;
}

int signOfLeading(const Rat& r) {
    if (r.isZero()) return 0;
    const Q& q = r.num().terms().rbegin()->second;
    return q > 0 ? 1 : -1;
}

struct BlowOp {
    int chartId;
    Rat a, b;
    std::string label;
};

struct Builder {
    const System& sys;
    int maxDepth;
    std::shared_ptr<Surface> s;
    std::vector<CascadeNode> nodes;
    std::vector<int> roots;
    std::vector<BlowOp> ops;
    std::vector<Mpoly> newConds;  // raw obstruction expressions (canonical)
    bool unresolved = false, depthLimited = false;
    int labelOffset = 0, labelMax = 0;

    Builder(const System& sy, const std::vector<RewriteRule>& rules, int md)
        : sys(sy), maxDepth(md), s(std::make_shared<Surface>(sy, rules)) {}

    int addNode(const BasePoint& p, int parent, const std::string& label) {
        CascadeNode n;
        n.id = int(nodes.size());
        n.parent = parent;
        n.point = p;
        n.label = label;
        if (parent >= 0) nodes[size_t(parent)].children.push_back(n.id);
        nodes.push_back(n);
        return n.id;
    }

    void run() {
        BasePointScan init = findBasePoints(*s, 1, 2);
        if (init.degenerateLine || !init.residual.isConstant()) unresolved = true;
        for (const BasePoint& p : init.points) {
            labelOffset = labelMax;
            int id = addNode(p, -1, "E" + std::to_string(labelOffset + 1));
            roots.push_back(id);
            resolve(id, 1, "");
        }
    }

    void resolve(int nodeId, int depth, const std::string& suffix) {
        labelMax = std::max(labelMax, labelOffset + depth);
        if (depth > maxDepth) {
            nodes[size_t(nodeId)].status = LeafStatus::DepthLimit;
            depthLimited = true;
            return;
        }
        const BasePoint pt = nodes[size_t(nodeId)].point;
        const std::string label = nodes[size_t(nodeId)].label;
        if (traceOn())
            std::cerr << "[cascade] blow " << label << " at (" << pt.a.str() << ", "
                      << pt.b.str() << ") in " << s->chart(pt.chartId).name << "\n";
        auto [uId, UId] = s->blowUp(pt.chartId, pt.a, pt.b, label);
        ops.push_back({pt.chartId, pt.a, pt.b, label});
        nodes[size_t(nodeId)].uChart = uId;
        nodes[size_t(nodeId)].UChart = UId;

        BasePointScan scan = findBasePoints(*s, uId, UId);
        if (scan.degenerateLine || !scan.residual.isConstant()) {
            nodes[size_t(nodeId)].status = LeafStatus::Unresolved;
            unresolved = true;
            return;
        }
        if (scan.points.empty()) {
            analyzeLeaf(nodeId, uId, UId);
            return;
        }
        std::vector<std::string> sfx(scan.points.size(), suffix);
        if (scan.points.size() == 2) {
            int s0 = signOfLeading(scan.points[0].b + scan.points[0].a);
            int s1 = signOfLeading(scan.points[1].b + scan.points[1].a);
            if (s0 != s1 && s0 != 0 && s1 != 0) {
                sfx[0] = suffix + (s0 > 0 ? "+" : "-");
                sfx[1] = suffix + (s1 > 0 ? "+" : "-");
            } else {
                sfx[0] = suffix + "+";
                sfx[1] = suffix + "-";
            }
        } else if (scan.points.size() > 2) {
            for (size_t i = 0; i < sfx.size(); ++i)
                sfx[i] = suffix + std::string(1, char('a' + i));
        }
        bool stuck = false;
        for (size_t i = 0; i < scan.points.size(); ++i) {
            std::string lbl = "E" + std::to_string(labelOffset + depth + 1) + sfx[i];
            int child = addNode(scan.points[i], nodeId, lbl);
            resolve(child, depth + 1, sfx[i]);
            stuck = stuck || subtreeStuck(child);
        }
        if (stuck) recoverFromStuck(uId, UId);
    }

    void analyzeLeaf(int nodeId, int uId, int UId) {
        CascadeNode& n = nodes[size_t(nodeId)];
        LeafInfo lu = analyzeChart(s->chart(uId));
        if (lu.status == LeafStatus::Regular || lu.status == LeafStatus::RegularExchanged) {
            n.status = lu.status;
            n.finalChart = uId;
            n.k = lu.k;
            return;
        }
        LeafInfo lU = analyzeChart(s->chart(UId));
        if (lU.status == LeafStatus::Regular || lU.status == LeafStatus::RegularExchanged) {
            n.status = lU.status;
            n.finalChart = UId;
            n.k = lU.k;
            return;
        }
        const LeafInfo& li = lu.obstructions.empty() ? lU : lu;
        n.finalChart = lu.obstructions.empty() ? UId : uId;
        if (li.obstructions.empty()) {
            n.status = LeafStatus::Unresolved;
            unresolved = true;
            return;
        }
        std::vector<Mpoly> conds;
        for (const Mpoly& o : li.obstructions) {
            Mpoly c = o.primitivePart();
            if (c.isZero()) continue;
            if (c.isConstant()) {
                // a nonzero constant obstruction cannot be made to vanish
                n.status = LeafStatus::Unresolved;
                unresolved = true;
                return;
            }
            conds.push_back(c);
        }
        n.status = LeafStatus::ConditionRequired;
        n.k = li.k;
        for (const Mpoly& c : conds) {
            if (traceOn())
                std::cerr << "[cascade] leaf " << n.label << " condition: " << c.str() << "\n";
            newConds.push_back(c);
        }
    }

    bool subtreeStuck(int id) const {
        const CascadeNode& n = nodes[size_t(id)];
        if (n.status == LeafStatus::Unresolved) return true;
        for (int c : n.children)
            if (subtreeStuck(c)) return true;
        return false;
    }

    // A base point that only exists for generic coefficient functions leads
    // to a dead end: its resolution hits an unsatisfiable obstruction.  The
    // conditions under which the point disappears are read off from the
    // regularity analysis of the chart the point sits on.
    void recoverFromStuck(int uId, int UId) {
        for (int cid : {uId, UId}) {
            LeafInfo li = analyzeChart(s->chart(cid));
            if (li.status != LeafStatus::ConditionRequired || li.obstructions.empty())
                continue;
            std::vector<Mpoly> conds;
            bool usable = true;
            for (const Mpoly& o : li.obstructions) {
                Mpoly c = o.primitivePart();
                if (c.isZero()) continue;
                if (c.isConstant()) {
                    usable = false;
                    break;
                }
                conds.push_back(c);
            }
            if (!usable || conds.empty()) continue;
            for (const Mpoly& c : conds) {
                if (traceOn())
                    std::cerr << "[cascade] fallback condition in "
                              << s->chart(cid).name << ": " << c.str() << "\n";
                newConds.push_back(c);
            }
            return;
        }
    }
};

bool sameExpr(const Mpoly& a, const Mpoly& b) { return a == b; }

}  // namespace

QPCondition makeCondition(const Mpoly& e, int leaf) {
    QPCondition c;
    c.expr = e.primitivePart();
    c.text = c.expr.str();
    c.leaf = leaf;
    return c;
}

bool conditionRule(const Mpoly& e, RewriteRule& out) {
    int g = highestFunc(e);
    if (g < 0 || e.degree(g) != 1) return false;
    Mpoly A = e.coeffOf(g, 1), B = e.coeffOf(g, 0);
    GenContext* c = e.ctx();
    out = {c->gen(g).name, c->gen(g).order, -Rat(B) / Rat(A)};
    return true;
}

std::vector<QPCondition> combineConditions(const std::vector<QPCondition>& conds) {
    // linear elimination over Q with monomials as coordinates
    std::vector<Mpoly> basis;
    auto leading = [](const Mpoly& p) { return p.terms().rbegin()->first; };
    auto reduceBy = [&](Mpoly p, size_t skip) {
        bool changed = true;
        while (changed && !p.isZero()) {
            changed = false;
            for (size_t i = 0; i < basis.size(); ++i) {
                if (i == skip || basis[i].isZero()) continue;
                auto it = p.terms().find(leading(basis[i]));
                if (it == p.terms().end()) continue;
                Q factor = it->second / basis[i].terms().rbegin()->second;
                p -= basis[i] * factor;
                changed = true;
                break;
            }
        }
        return p;
    };
    for (const QPCondition& c : conds) {
        Mpoly p = reduceBy(c.expr, size_t(-1));
        if (p.isZero()) continue;
        basis.push_back(p.primitivePart());
    }
    // back-substitution to reduced echelon form
    for (size_t i = 0; i < basis.size(); ++i)
        basis[i] = reduceBy(basis[i], i).primitivePart();
    basis.erase(std::remove_if(basis.begin(), basis.end(),
                               [](const Mpoly& p) { return p.isZero(); }),
                basis.end());
    std::sort(basis.begin(), basis.end(), [&](const Mpoly& a, const Mpoly& b) {
        return DegLexLess{}(leading(b), leading(a));
    });
    std::vector<QPCondition> out;
    for (const Mpoly& p : basis) {
        bool dup = false;
        for (const QPCondition& q : out) dup = dup || sameExpr(q.expr, p);
        if (!dup) out.push_back(makeCondition(p));
    }
    return out;
}

CascadeResult runCascades(const System& sys, int maxDepth) {
    std::vector<RewriteRule> rules;
    std::vector<QPCondition> found;
    const int maxIter = 8;
    for (int iter = 0;; ++iter) {
        if (traceOn())
            std::cerr << "[cascade] iteration " << iter << " with " << rules.size()
                      << " imposed rule(s)\n";
        Builder b(sys, rules, maxDepth);
        b.run();

        bool fresh = false;
        bool extractionFailed = false;
        if (iter < maxIter) {
            for (const Mpoly& e : b.newConds) {
                bool known = false;
                for (const QPCondition& c : found) known = known || sameExpr(c.expr, e);
                if (known) continue;
                RewriteRule r;
                if (!conditionRule(e, r)) {
                    extractionFailed = true;
                    continue;
                }
                found.push_back(makeCondition(e));
                rules.push_back(r);
                fresh = true;
            }
        }
        if (fresh) continue;

        CascadeResult res;
        res.surface = b.s;
        res.nodes = std::move(b.nodes);
        res.roots = std::move(b.roots);
        res.conditions = combineConditions(found);
        res.imposed = rules;
        res.blowups = int(b.ops.size());
        res.depthLimited = b.depthLimited;
        res.unresolved = b.unresolved || extractionFailed;
        // a leaf still failing with all known conditions imposed is stuck
        for (CascadeNode& n : res.nodes) {
            if (n.status == LeafStatus::ConditionRequired) {
                n.status = LeafStatus::Unresolved;
                res.unresolved = true;
            }
        }
        // leaves whose regularity needed the imposed conditions: replay the
        // same blow-ups without rules and re-test
        if (!rules.empty()) {
            if (traceOn()) std::cerr << "[cascade] bare replay of " << b.ops.size() << " blow-ups\n";
            Surface bare(sys);
            for (const BlowOp& op : b.ops) bare.blowUp(op.chartId, op.a, op.b, op.label);
            for (CascadeNode& n : res.nodes) {
                if (n.status != LeafStatus::Regular &&
                    n.status != LeafStatus::RegularExchanged)
                    continue;
                LeafInfo l = analyzeChart(bare.chart(n.finalChart));
                if (l.status != n.status) n.status = LeafStatus::ConditionRequired;
            }
        }
        return res;
    }
}

}  // namespace sic
