#include "sic/algebra.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace sic {

// ---------------------------------------------------------------- GenContext

GenContext::GenContext() {
    Generator g;
    g.kind = GenKind::IndepVar;
    g.name = "z";
    add(g);
}

int GenContext::add(const Generator& g) {
    int idx = int(gens_.size());
    if (g.kind == GenKind::AlgConst) hasAlg_ = true;
    gens_.push_back(g);
    byname_[display(idx)] = idx;
    return idx;
}

static std::string primes(int order) { return std::string(size_t(order), '\''); }

std::string GenContext::display(int i) const {
    const Generator& g = gens_.at(size_t(i));
    switch (g.kind) {
        case GenKind::Func:   return g.name + primes(g.order) + "(z)";
        case GenKind::Frozen: return g.name + primes(g.order) + "(z*)";
        default:              return g.name;
    }
}

int GenContext::find(const std::string& display_name) const {
    auto it = byname_.find(display_name);
    return it == byname_.end() ? -1 : it->second;
}

int GenContext::param(const std::string& name) {
    int i = find(name);
    if (i >= 0) {
        if (gens_[size_t(i)].kind != GenKind::Param)
            throw Error("generator '" + name + "' redeclared with different kind");
        return i;
    }
    Generator g;
    g.kind = GenKind::Param;
    g.name = name;
    return add(g);
}

int GenContext::func(const std::string& name, int order) {
    int i = find(name + primes(order) + "(z)");
    if (i >= 0) return i;
    Generator g;
    g.kind = GenKind::Func;
    g.name = name;
    g.order = order;
    return add(g);
}

int GenContext::alg(const std::string& name, const Q& square) {
    int i = find(name);
    if (i >= 0) {
        if (gens_[size_t(i)].kind != GenKind::AlgConst || gens_[size_t(i)].square != square)
            throw Error("generator '" + name + "' redeclared with different kind");
        return i;
    }
    Generator g;
    g.kind = GenKind::AlgConst;
    g.name = name;
    g.square = square;
    return add(g);
}

int GenContext::depvar(const std::string& name) {
    int i = find(name);
    if (i >= 0) {
        if (gens_[size_t(i)].kind != GenKind::DepVar)
            throw Error("generator '" + name + "' redeclared with different kind");
        return i;
    }
    Generator g;
    g.kind = GenKind::DepVar;
    g.name = name;
    return add(g);
}

int GenContext::frozen(const std::string& name, int order) {
    int i = find(name + primes(order) + "(z*)");
    if (i >= 0) return i;
    Generator g;
    g.kind = GenKind::Frozen;
    g.name = name;
    g.order = order;
    return add(g);
}

std::pair<Q, int> GenContext::derivation(int i) {
    const Generator g = gens_.at(size_t(i));
    switch (g.kind) {
        case GenKind::IndepVar: return {Q(1), -1};
        case GenKind::Func:     return {Q(1), func(g.name, g.order + 1)};
        default:                return {Q(0), -1};
    }
}

// --------------------------------------------------------------- Exp helpers

int totalDegree(const Exp& e) {
    int d = 0;
    for (int32_t x : e) d += x;
    return d;
}

static int32_t expAt(const Exp& e, size_t i) { return i < e.size() ? e[i] : 0; }

static void trim(Exp& e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
}

bool DegLexLess::operator()(const Exp& a, const Exp& b) const {
    int da = totalDegree(a), db = totalDegree(b);
    if (da != db) return da < db;
    size_t n = std::max(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        int32_t x = expAt(a, i), y = expAt(b, i);
        if (x != y) return x < y;
    }
    return false;
}

// -------------------------------------------------------------------- Mpoly

Mpoly::Mpoly(GenContext* ctx, const Q& c) : ctx_(ctx) {
    if (c != 0) terms_[Exp{}] = c;
}

Mpoly Mpoly::var(GenContext* ctx, int gen, int exp) {
    Mpoly p(ctx);
    Exp e(size_t(gen) + 1, 0);
    e[size_t(gen)] = exp;
    p.addTerm(e, Q(1));
    return p;
}

bool Mpoly::isConstant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Q Mpoly::constant() const {
    if (terms_.empty()) return Q(0);
    if (!isConstant()) throw Error("constant() on non-constant polynomial");
    return terms_.begin()->second;
}

void Mpoly::addTerm(const Exp& e0, const Q& c0) {
    if (c0 == 0) return;
    Exp e = e0;
    Q c = c0;
    if (ctx_ && ctx_->hasAlgConst()) {
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] >= 2 && ctx_->gen(int(i)).kind == GenKind::AlgConst) {
                const Q& s = ctx_->gen(int(i)).square;
                int32_t k = e[i] / 2;
                for (int32_t j = 0; j < k; ++j) c *= s;
                e[i] %= 2;
            }
        }
    }
    trim(e);
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Mpoly Mpoly::operator-() const {
    Mpoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

Mpoly Mpoly::operator+(const Mpoly& o) const {
    const Mpoly& big = terms_.size() >= o.terms_.size() ? *this : o;
    const Mpoly& small = terms_.size() >= o.terms_.size() ? o : *this;
    Mpoly r = big;
    if (!r.ctx_) r.ctx_ = small.ctx_;
    for (const auto& [e, c] : small.terms_) {
        auto [it, fresh] = r.terms_.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) r.terms_.erase(it);
        }
    }
    return r;
}

Mpoly Mpoly::operator-(const Mpoly& o) const { return *this + (-o); }

Mpoly& Mpoly::addScaled(const Mpoly& o, const Q& s) {
    if (!ctx_) ctx_ = o.ctx_;
    if (s == 0) return *this;
    if (this == &o) {
        Q f = s + 1;
        if (f == 0) terms_.clear();
        else for (auto& [e, c] : terms_) c *= f;
        return *this;
    }
    for (const auto& [e, c] : o.terms_) {
        Q v = c * s;
        auto [it, fresh] = terms_.try_emplace(e, v);
        if (!fresh) {
            it->second += v;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

namespace {

using TermVec = std::vector<std::pair<Exp, Q>>;

Exp expSum(const Exp& a, const Exp& b) {
    Exp e(std::max(a.size(), b.size()));
    for (size_t i = 0; i < e.size(); ++i)
        e[i] = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
    return e;
}

}  // namespace

Mpoly Mpoly::operator*(const Mpoly& o) const {
    GenContext* ctx = ctx_ ? ctx_ : o.ctx_;
    if (ctx && ctx->hasAlgConst()) {  // folding s^2 -> value can reorder terms
        Mpoly r(ctx);
        for (const auto& [e1, c1] : terms_) {
            for (const auto& [e2, c2] : o.terms_) r.addTerm(expSum(e1, e2), c1 * c2);
        }
        return r;
    }
    // shifting every exponent by a fixed monomial preserves the deg-lex order,
    // so the product is a k-way merge of pre-sorted streams (one per term of
    // the smaller factor); a heap keeps memory at the size of the result
    const Mpoly& big = terms_.size() >= o.terms_.size() ? *this : o;
    const Mpoly& small = terms_.size() >= o.terms_.size() ? o : *this;
    if (small.terms_.empty() || big.terms_.empty()) return Mpoly(ctx);
    std::vector<std::map<Exp, Q, DegLexLess>::const_iterator> sit, bpos;
    sit.reserve(small.terms_.size());
    for (auto it = small.terms_.begin(); it != small.terms_.end(); ++it) sit.push_back(it);
    bpos.assign(sit.size(), big.terms_.begin());
    struct Head {
        Exp e;
        size_t i;
    };
    DegLexLess lt;
    auto headGreater = [&lt](const Head& a, const Head& b) { return lt(b.e, a.e); };
    std::vector<Head> heap;
    heap.reserve(sit.size());
    for (size_t i = 0; i < sit.size(); ++i)
        heap.push_back({expSum(sit[i]->first, bpos[i]->first), i});
    std::make_heap(heap.begin(), heap.end(), headGreater);
    TermVec out;
    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), headGreater);
        Head h = std::move(heap.back());
        heap.pop_back();
        Q c = sit[h.i]->second * bpos[h.i]->second;
        if (!out.empty() && out.back().first == h.e) {
            out.back().second += c;
            if (out.back().second == 0) out.pop_back();
        } else {
            out.emplace_back(std::move(h.e), std::move(c));
        }
        if (++bpos[h.i] != big.terms_.end()) {
            heap.push_back({expSum(sit[h.i]->first, bpos[h.i]->first), h.i});
            std::push_heap(heap.begin(), heap.end(), headGreater);
        }
    }
    Mpoly r(ctx);
    r.terms_ = std::map<Exp, Q, DegLexLess>(
        std::make_move_iterator(out.begin()), std::make_move_iterator(out.end()));
    return r;
}

Mpoly Mpoly::operator*(const Q& c) const {
    if (c == 0) return Mpoly(ctx_);
    Mpoly r = *this;
    for (auto& [e, cc] : r.terms_) cc *= c;
    return r;
}

Mpoly Mpoly::pow(int n) const {
    if (n < 0) throw Error("Mpoly::pow negative exponent");
    Mpoly r(ctx_, Q(1));
    Mpoly base = *this;
    while (n > 0) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

int Mpoly::degree(int var) const {
    if (terms_.empty()) return -1;
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max<int>(d, expAt(e, size_t(var)));
    return d;
}

int Mpoly::lowDegree(int var) const {
    if (terms_.empty()) return 0;
    int d = INT32_MAX;
    for (const auto& [e, c] : terms_) d = std::min<int>(d, expAt(e, size_t(var)));
    return d;
}

int Mpoly::totalDeg() const {
    return terms_.empty() ? -1 : totalDegree(terms_.rbegin()->first);
}

bool Mpoly::uses(int var) const {
    for (const auto& [e, c] : terms_)
        if (expAt(e, size_t(var)) > 0) return true;
    return false;
}

std::vector<int> Mpoly::usedVars() const {
    std::vector<int> out;
    size_t n = 0;
    for (const auto& [e, c] : terms_) n = std::max(n, e.size());
    for (size_t i = 0; i < n; ++i) {
        for (const auto& [e, c] : terms_)
            if (expAt(e, i) > 0) {
                out.push_back(int(i));
                break;
            }
    }
    return out;
}

Mpoly Mpoly::coeffOf(int var, int k) const {
    Mpoly r(ctx_);
    for (const auto& [e, c] : terms_) {
        if (expAt(e, size_t(var)) == k) {
            Exp e2 = e;
            if (size_t(var) < e2.size()) e2[size_t(var)] = 0;
            trim(e2);
            r.terms_[e2] = c;
        }
    }
    return r;
}

Mpoly Mpoly::setZero(int var) const { return coeffOf(var, 0); }

Mpoly Mpoly::derivPartial(int var) const {
    Mpoly r(ctx_);
    for (const auto& [e, c] : terms_) {
        int32_t k = expAt(e, size_t(var));
        if (k == 0) continue;
        Exp e2 = e;
        e2[size_t(var)] = k - 1;
        trim(e2);
        r.addTerm(e2, c * k);
    }
    return r;
}

Mpoly Mpoly::derivZ() const {
    Mpoly r(ctx_);
    for (const auto& [e, c] : terms_) {
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            auto [cc, gidx] = ctx_->derivation(int(i));
            if (cc == 0 && gidx < 0) continue;
            Exp e2 = e;
            e2[i] -= 1;
            if (gidx >= 0) {
                if (e2.size() <= size_t(gidx)) e2.resize(size_t(gidx) + 1, 0);
                e2[size_t(gidx)] += 1;
            }
            trim(e2);
            r.addTerm(e2, c * e[i] * cc);
        }
    }
    return r;
}

Q Mpoly::content() const {
    if (terms_.empty()) return Q(1);
    Z gnum = 0, lden = 1;
    for (const auto& [e, c] : terms_) {
        gnum = boost::multiprecision::gcd(gnum, Z(boost::multiprecision::abs(numerator(c))));
        lden = boost::multiprecision::lcm(lden, Z(denominator(c)));
    }
    return Q(gnum, lden);
}

Mpoly Mpoly::primitivePart() const {
    if (terms_.empty()) return *this;
    Q c = content();
    if (terms_.rbegin()->second < 0) c = -c;
    Mpoly r(ctx_);
    for (const auto& [e, cc] : terms_) r.terms_[e] = cc / c;
    return r;
}

// --------------------------------------------------------------- divide/gcd

void Mpoly::submul(const Exp& e0, const Q& c0, const Mpoly& o) {
    bool alg = ctx_ && ctx_->hasAlgConst();
    for (const auto& [e2, c2] : o.terms_) {
        Exp e(std::max(e0.size(), e2.size()));
        for (size_t i = 0; i < e.size(); ++i) e[i] = expAt(e0, i) + expAt(e2, i);
        Q c = c0 * c2;
        if (alg) {
            addTerm(e, -c);
            continue;
        }
        trim(e);
        auto [it, fresh] = terms_.try_emplace(std::move(e), Q(-c));
        if (!fresh) {
            it->second -= c;
            if (it->second == 0) terms_.erase(it);
        }
    }
}

bool tryDivExact(const Mpoly& a, const Mpoly& b, Mpoly& quot) {
    if (b.isZero()) return false;
    GenContext* ctx = a.ctx() ? a.ctx() : b.ctx();
    Mpoly q(ctx), rem = a;
    const auto& bl = *b.terms().rbegin();
    while (!rem.isZero()) {
        const auto& rl = *rem.terms().rbegin();
        Exp e(std::max(rl.first.size(), bl.first.size()));
        for (size_t i = 0; i < e.size(); ++i) {
            int32_t d = expAt(rl.first, i) - expAt(bl.first, i);
            if (d < 0) return false;
            e[i] = d;
        }
        trim(e);
        Q c = rl.second / bl.second;
        q.addTerm(e, c);
        rem.submul(e, c, b);
    }
    quot = q;
    return true;
}

Mpoly divExact(const Mpoly& a, const Mpoly& b) {
    Mpoly q;
    if (!tryDivExact(a, b, q)) throw Error("divExact: not divisible");
    return q;
}

static Mpoly monomial(GenContext* ctx, const Exp& e) {
    Mpoly m(ctx);
    m.addTerm(e, Q(1));
    return m;
}

static Exp minExps(const Mpoly& p) {
    Exp m;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        if (first) {
            m = e;
            first = false;
        } else {
            if (m.size() > e.size()) m.resize(e.size());
            for (size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], expAt(e, i));
        }
    }
    trim(m);
    return m;
}

// content of p viewed as univariate in var: gcd of its coefficients
static Mpoly contentWrt(const Mpoly& p, int var) {
    Mpoly c(p.ctx());
    for (int k = 0; k <= p.degree(var); ++k) {
        Mpoly ck = p.coeffOf(var, k);
        if (ck.isZero()) continue;
        c = gcd(c, ck);
        if (c.isConstant()) break;
    }
    return c.isZero() ? Mpoly(p.ctx(), 1) : c;
}

static Mpoly prem(const Mpoly& a, const Mpoly& b, int var) {
    Mpoly r = a;
    int db = b.degree(var);
    Mpoly lc = b.coeffOf(var, db);
    int guard = 0;
    while (!r.isZero() && r.degree(var) >= db) {
        int dr = r.degree(var);
        Mpoly t = r.coeffOf(var, dr) * Mpoly::var(r.ctx(), var, dr - db);
        r = r * lc - t * b;
        if (++guard > 10000) throw Error("prem: runaway pseudo-division");
    }
    return r;
}

// ---- evaluation heuristic: univariate images at fixed integer points ----

static Z evalPoint(int genIndex, int salt) {
    static const int primes[] = {101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
                                 151, 157, 163, 167, 173, 179, 181, 191, 193, 197,
                                 199, 211, 223, 227, 229, 233, 239, 241, 251, 257,
                                 263, 269, 271, 277, 281, 283, 293, 307, 311, 313};
    const int n = int(sizeof(primes) / sizeof(primes[0]));
    return Z(primes[(2 * genIndex + salt * 7 + 1) % n]);
}

// p with every generator except var evaluated at fixed integers; integer
// coefficients (inputs are integer-primitive); empty => zero image
static std::vector<Z> evalUni(const Mpoly& p, int var, int salt) {
    std::vector<Z> c(size_t(p.degree(var) + 1), Z(0));
    for (const auto& [e, q] : p.terms()) {
        Z val = Z(numerator(q));
        int xd = 0;
        for (size_t i = 0; i < e.size(); ++i) {
            if (int(i) == var) {
                xd = e[i];
                continue;
            }
            if (e[i]) val *= boost::multiprecision::pow(evalPoint(int(i), salt), unsigned(e[i]));
        }
        c[size_t(xd)] += val;
    }
    while (!c.empty() && c.back() == 0) c.pop_back();
    return c;
}

static void uniPrimitive(std::vector<Z>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    if (v.empty()) return;
    Z g(0);
    for (const Z& c : v) g = boost::multiprecision::gcd(g, c);
    for (Z& c : v) c /= g;
}

static Q evalScalar(const Mpoly& p, const std::vector<Q>& vals) {
    Q out(0);
    for (const auto& [e, c] : p.terms()) {
        Q t = c;
        for (size_t i = 0; i < e.size(); ++i)
            for (int32_t k = 0; k < e[i]; ++k) t *= vals[i];
        out += t;
    }
    return out;
}

bool vanishesAt(const Mpoly& p, const std::map<int, Rat>& at) {
    if (p.isZero()) return true;
    GenContext* ctx = p.ctx();
    if (!ctx || ctx->hasAlgConst()) return substitute(p, at).isZero();
    int valid = 0;
    for (int salt = 0; salt < 8 && valid < 3; ++salt) {
        std::vector<Q> vals(size_t(ctx->size()));
        for (int i = 0; i < ctx->size(); ++i) vals[size_t(i)] = Q(evalPoint(i, salt));
        bool ok = true;
        for (const auto& [v, r] : at) {
            Q dn = evalScalar(r.den(), vals);
            if (dn == 0) {
                ok = false;
                break;
            }
            vals.at(size_t(v)) = evalScalar(r.num(), vals) / dn;
        }
        if (!ok) continue;
        ++valid;
        if (evalScalar(p, vals) != 0) return false;
    }
    if (valid == 0) return substitute(p, at).isZero();
    return true;
}

// degree of gcd of the two univariate images; -1 if the test is inconclusive
static int imageGcdDegree(const Mpoly& a, const Mpoly& b, int var, int salt) {
    std::vector<Z> A = evalUni(a, var, salt), B = evalUni(b, var, salt);
    if (A.empty() || B.empty()) return -1;
    uniPrimitive(A);
    uniPrimitive(B);
    while (!B.empty()) {
        if (B.size() == 1) return 0;
        // primitive pseudo-remainder step
        while (A.size() >= B.size()) {
            Z lb = B.back(), la = A.back();
            Z g = boost::multiprecision::gcd(la, lb);
            Z fa = lb / g, fb = la / g;
            size_t shift = A.size() - B.size();
            for (Z& c : A) c *= fa;
            for (size_t i = 0; i < B.size(); ++i) A[i + shift] -= fb * B[i];
            while (!A.empty() && A.back() == 0) A.pop_back();
            if (A.empty()) break;
        }
        uniPrimitive(A);
        std::swap(A, B);
    }
    return int(A.size()) - 1;
}

// Collapse a polynomial over its adjoined-square-root generators: the result
// is the gcd of its alg-free coefficient parts.  Keeps gcd computations in the
// free ring, so canonical fractions keep alg-free denominators.
static Mpoly algFree(const Mpoly& p) {
    GenContext* c = p.ctx();
    if (!c) return p;
    for (int i = 0; i < c->size(); ++i) {
        if (c->gen(i).kind == GenKind::AlgConst && p.uses(i))
            return gcd(algFree(p.coeffOf(i, 0)), algFree(p.coeffOf(i, 1)));
    }
    return p;
}

Mpoly gcd(const Mpoly& a1, const Mpoly& b1) {
    if (a1.isZero()) return algFree(b1).primitivePart();
    if (b1.isZero()) return algFree(a1).primitivePart();
    Mpoly a0 = algFree(a1), b0 = algFree(b1);
    GenContext* ctx = a0.ctx();

    Exp ma = minExps(a0), mb = minExps(b0);
    Exp g(std::max(ma.size(), mb.size()));
    for (size_t i = 0; i < g.size(); ++i) g[i] = std::min(expAt(ma, i), expAt(mb, i));
    trim(g);
    Mpoly a = divExact(a0.primitivePart(), monomial(ctx, ma));
    Mpoly b = divExact(b0.primitivePart(), monomial(ctx, mb));
    Mpoly gm = monomial(ctx, g);

    if (a.isConstant() || b.isConstant()) return gm;
    if (a == b || a == -b) return gm * a.primitivePart();

    // evaluation heuristic: degree of the gcd of univariate images bounds the
    // var-degree of the true gcd (two independent points guard against an
    // unlucky evaluation); a zero bound for every shared variable certifies a
    // variable-free gcd without any recursion
    std::vector<int> va = a.usedVars();
    int var = -1, best = INT32_MAX, dImg = INT32_MAX;
    bool allZero = true, anyShared = false;
    for (int v : va) {
        if (!b.uses(v)) continue;
        anyShared = true;
        int di = INT32_MAX;
        for (int salt = 0; salt < 2 && di != 0; ++salt) {
            int t = imageGcdDegree(a, b, v, salt);
            if (t >= 0) di = std::min(di, t);
        }
        if (di != 0) allZero = false;
        int d = std::max(a.degree(v), b.degree(v));
        if (d < best) {
            best = d;
            var = v;
            dImg = di;
        }
    }
    if (!anyShared) return gm;  // disjoint variable sets
    if (allZero) return gm;
    if (dImg == 0)
        return (gm * gcd(contentWrt(a, var), contentWrt(b, var))).primitivePart();

    Mpoly ca = contentWrt(a, var), cb = contentWrt(b, var);
    Mpoly g0 = gcd(ca, cb);
    Mpoly A = divExact(a, ca), B = divExact(b, cb);
    if (A.degree(var) < B.degree(var)) std::swap(A, B);

    // image degree equals the smaller primitive part's: try it directly
    if (dImg != INT32_MAX && dImg == B.degree(var)) {
        Mpoly cand = (gm * g0 * B.primitivePart()).primitivePart();
        Mpoly q;
        if (tryDivExact(a0, cand, q) && tryDivExact(b0, cand, q)) return cand;
    }

    Mpoly G(ctx, 1);
    int guard = 0;
    while (true) {
        Mpoly R = prem(A, B, var);
        if (R.isZero()) {
            G = divExact(B, contentWrt(B, var)).primitivePart();
            break;
        }
        if (R.degree(var) == 0) break;  // coprime in var
        A = B;
        B = divExact(R, contentWrt(R, var)).primitivePart();
        if (++guard > 1000) throw Error("gcd: runaway PRS");
    }

    Mpoly cand = (gm * g0 * G).primitivePart();
    Mpoly q;
    if (!tryDivExact(a0, cand, q) || !tryDivExact(b0, cand, q))
        return (gm * g0).primitivePart();  // conservative fallback
    return cand;
}

std::optional<Mpoly> sqrtExact(const Mpoly& p) {
    GenContext* ctx = p.ctx();
    if (p.isZero()) return Mpoly(ctx);
    if (p.isConstant()) {
        Q c = p.constant();
        if (c < 0) return std::nullopt;
        Z sn = boost::multiprecision::sqrt(Z(numerator(c)));
        Z sd = boost::multiprecision::sqrt(Z(denominator(c)));
        if (sn * sn != numerator(c) || sd * sd != denominator(c)) return std::nullopt;
        return Mpoly(ctx, Q(sn, sd));
    }
    // leading-term seed, then complete the square term by term
    const auto& lt = *p.terms().rbegin();
    Exp he = lt.first;
    for (int32_t& e : he) {
        if (e % 2) return std::nullopt;
        e /= 2;
    }
    Q cn = lt.second;
    if (cn < 0) return std::nullopt;
    Z sn = boost::multiprecision::sqrt(Z(numerator(cn)));
    Z sd = boost::multiprecision::sqrt(Z(denominator(cn)));
    if (sn * sn != numerator(cn) || sd * sd != denominator(cn)) return std::nullopt;
    Mpoly root(ctx);
    root.addTerm(he, Q(sn, sd));
    Mpoly lead2 = root * Q(2);
    int guard = 0;
    while (true) {
        Mpoly rem = p - root * root;
        if (rem.isZero()) return root;
        const auto& rl = *rem.terms().rbegin();
        // divide rl by leading term of lead2
        const auto& ll = *lead2.terms().rbegin();
        Exp e(std::max(rl.first.size(), ll.first.size()));
        for (size_t i = 0; i < e.size(); ++i) {
            int32_t d = expAt(rl.first, i) - expAt(ll.first, i);
            if (d < 0) return std::nullopt;
            e[i] = d;
        }
        trim(e);
        Mpoly t(ctx);
        t.addTerm(e, rl.second / ll.second);
        root += t;
        if (++guard > 2000) return std::nullopt;
    }
}

// --------------------------------------------------------------------- Rat

Mpoly Rat::asPoly() const {
    if (!isPoly()) throw Error("asPoly() on non-polynomial fraction");
    return num_ * (Q(1) / den_.constant());
}

void Rat::normalize() {
    if (den_.isZero()) throw Error("division by zero");
    if (num_.isZero()) {
        den_ = Mpoly(ctx(), 1);
        return;
    }
    // clear adjoined square roots out of the denominator
    GenContext* c = ctx();
    if (c) {
        for (int i = 0; i < c->size(); ++i) {
            if (c->gen(i).kind != GenKind::AlgConst || !den_.uses(i)) continue;
            Mpoly A = den_.coeffOf(i, 0);
            Mpoly B = den_.coeffOf(i, 1);
            Mpoly conj = A - Mpoly::var(c, i) * B;
            num_ = num_ * conj;
            den_ = A * A - B * B * c->gen(i).square;
            if (den_.isZero()) throw Error("division by zero (algebraic)");
        }
    }
    Mpoly g = gcd(num_, den_);
    if (!g.isConstant()) {
        num_ = divExact(num_, g);
        den_ = divExact(den_, g);
    }
    scaleDen();
}

void Rat::scaleDen() {
    if (den_.isZero()) throw Error("division by zero");
    if (num_.isZero()) {
        den_ = Mpoly(ctx(), 1);
        return;
    }
    Q cont = den_.content();
    if (den_.terms().rbegin()->second < 0) cont = -cont;
    if (cont != 1) {
        den_ = den_ * (Q(1) / cont);
        num_ = num_ * (Q(1) / cont);
    }
}

Rat Rat::operator-() const {
    Rat r = *this;
    r.num_ = -r.num_;
    return r;
}

Rat Rat::operator+(const Rat& o) const {
    if (den_ == o.den_) return Rat(num_ + o.num_, den_);
    return Rat(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Rat Rat::operator-(const Rat& o) const { return *this + (-o); }

namespace {

// remove the common factor of a cross pair; both operands of * and / are
// already reduced, so cancelling the two cross pairs leaves a reduced result
void crossCancel(Mpoly& a, Mpoly& b) {
    Mpoly g = gcd(a, b);
    if (g.isConstant()) return;
    a = divExact(a, g);
    b = divExact(b, g);
}

}  // namespace

Rat Rat::operator*(const Rat& o) const {
    GenContext* c = ctx() ? ctx() : o.ctx();
    if (!c || c->hasAlgConst()) return Rat(num_ * o.num_, den_ * o.den_);
    if (num_.isZero() || o.num_.isZero()) return Rat(c, Q(0));
    Mpoly n1 = num_, d1 = den_, n2 = o.num_, d2 = o.den_;
    crossCancel(n1, d2);
    crossCancel(n2, d1);
    return Rat(n1 * n2, d1 * d2, Reduced{});
}

Rat Rat::operator/(const Rat& o) const {
    if (o.num_.isZero()) throw Error("division by zero");
    GenContext* c = ctx() ? ctx() : o.ctx();
    if (!c || c->hasAlgConst()) return Rat(num_ * o.den_, den_ * o.num_);
    if (num_.isZero()) return Rat(c, Q(0));
    Mpoly n1 = num_, d1 = den_, n2 = o.den_, d2 = o.num_;
    crossCancel(n1, d2);
    crossCancel(n2, d1);
    return Rat(n1 * n2, d1 * d2, Reduced{});
}

Rat Rat::pow(int n) const {
    if (n == 0) return Rat(ctx(), Q(1));
    if (n < 0) return Rat(den_, num_).pow(-n);
    GenContext* c = ctx();
    if (!c || c->hasAlgConst()) return Rat(num_.pow(n), den_.pow(n));
    return Rat(num_.pow(n), den_.pow(n), Reduced{});
}

Rat Rat::derivZ() const {
    return Rat(num_.derivZ() * den_ - num_ * den_.derivZ(), den_ * den_);
}

Rat Rat::derivPartial(int var) const {
    return Rat(num_.derivPartial(var) * den_ - num_ * den_.derivPartial(var), den_ * den_);
}

// -------------------------------------------------------------- substitution

namespace {

// substitution as an unreduced numerator / common-denominator pair; all
// arithmetic is polynomial, so only the final Rat construction runs a gcd
struct NumDen {
    Mpoly num, den;
};

NumDen substRaw(const Mpoly& p, const std::map<int, Rat>& repl) {
    GenContext* ctx = p.ctx();
    Mpoly one(ctx, Q(1));
    if (p.isZero()) return {Mpoly(ctx), one};
    // highest exponent of each replaced generator that actually occurs
    std::map<int, int> maxe;
    for (const auto& [e, c] : p.terms())
        for (const auto& [i, r] : repl)
            if (i < int(e.size()) && e[i] > maxe[i]) maxe[i] = e[i];
    Mpoly den = one;
    for (const auto& [i, m] : maxe)
        if (m > 0) den = den * repl.at(i).den().pow(m);
    std::map<std::pair<int, int>, Mpoly> powmemo;  // (gen, exp) -> poly power
    auto power = [&](const Mpoly& base, int var, int e, bool isDen) -> const Mpoly& {
        auto key = std::make_pair(isDen ? ~var : var, e);
        auto it = powmemo.find(key);
        if (it == powmemo.end()) it = powmemo.emplace(key, base.pow(e)).first;
        return it->second;
    };
    Mpoly out(ctx);
    for (const auto& [e, c] : p.terms()) {
        Mpoly t(ctx, c);
        for (size_t i = 0; i < e.size() && !t.isZero(); ++i) {
            if (e[i] == 0) continue;
            auto r = repl.find(int(i));
            if (r == repl.end()) {
                t = t * Mpoly::var(ctx, int(i), e[i]);
                continue;
            }
            t = t * power(r->second.num(), int(i), e[i], false);
            int pad = maxe[int(i)] - e[i];
            if (pad > 0) t = t * power(r->second.den(), int(i), pad, true);
        }
        // terms free of a replaced generator still need its full denominator
        for (const auto& [i, m] : maxe) {
            if (m == 0) continue;
            int have = i < int(e.size()) ? e[size_t(i)] : 0;
            if (have == 0) t = t * power(repl.at(i).den(), i, m, true);
        }
        out += t;
    }
    return {out, den};
}

}  // namespace

Rat substitute(const Mpoly& p, const std::map<int, Rat>& repl) {
    NumDen nd = substRaw(p, repl);
    return Rat(nd.num, nd.den);
}

Rat substitute(const Rat& r, const std::map<int, Rat>& repl) {
    NumDen n = substRaw(r.num(), repl);
    NumDen d = substRaw(r.den(), repl);
    return Rat(n.num * d.den, n.den * d.num);
}

Rat applyRewrites(const Rat& r, const std::vector<RewriteRule>& rules) {
    GenContext* ctx = r.ctx();
    if (!ctx || rules.empty()) return r;
    std::map<int, Rat> repl;
    // Scan generators; context may grow while we derive right-hand sides, so
    // snapshot the current size first.
    int n = ctx->size();
    for (int i = 0; i < n; ++i) {
        const Generator g = ctx->gen(i);
        if (g.kind != GenKind::Func) continue;
        for (const RewriteRule& rule : rules) {
            if (rule.func != g.name || g.order < rule.order) continue;
            Rat v = rule.rhs;
            for (int k = rule.order; k < g.order; ++k) v = v.derivZ();
            repl[i] = v;
            break;
        }
    }
    if (repl.empty()) return r;
    return substitute(r, repl);
}

// ----------------------------------------------------------------- printing

static std::string qstr(const Q& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

static std::string termStr(GenContext* ctx, const Exp& e, const Q& coeff, bool lead) {
    Q c = coeff < 0 ? Q(-coeff) : coeff;
    std::string sign = coeff < 0 ? (lead ? "-" : " - ") : (lead ? "" : " + ");
    std::vector<std::string> factors;
    if (c != 1 || e.empty()) factors.push_back(qstr(c));
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        std::string f = ctx ? ctx->display(int(i)) : ("#" + std::to_string(i));
        if (e[i] != 1) f += "^" + std::to_string(e[i]);
        factors.push_back(f);
    }
    std::string body;
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i) body += "*";
        body += factors[i];
    }
    return sign + body;
}

std::string Mpoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool lead = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        out += termStr(ctx_, it->first, it->second, lead);
        lead = false;
    }
    return out;
}

std::string Rat::str() const {
    if (den_.isConstant() && den_.constant() == 1) return num_.str();
    std::string n = num_.str();
    if (num_.nterms() > 1) n = "(" + n + ")";
    std::string d = den_.str();
    bool dsimple = false;
    if (den_.nterms() == 1) {
        const auto& [e, c] = *den_.terms().begin();
        int nv = 0;
        for (int32_t x : e) nv += (x > 0);
        dsimple = (nv == 0 && c > 0) || (nv == 1 && c == 1);
    }
    if (!dsimple) d = "(" + d + ")";
    return n + "/" + d;
}

}  // namespace sic
