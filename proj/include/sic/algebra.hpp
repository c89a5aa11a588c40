#ifndef SIC_ALGEBRA_HPP
#define SIC_ALGEBRA_HPP

// Exact coefficient field: multivariate rational expressions in z, constant
// parameters, named analytic functions a(z) with formal derivatives, and
// adjoined square roots of rational constants.  Everything downstream (the
// bivariate polynomial layer, charts, series) is built on the sparse
// polynomial and fraction types here.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sic {

using Z = boost::multiprecision::cpp_int;
using Q = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
    explicit Error(const std::string& m) : std::runtime_error(m) {}
};

enum class GenKind {
    IndepVar,   // z, derivation 1
    Param,      // constant parameter, derivation 0
    Func,       // named analytic function, order k; derivation -> order k+1
    AlgConst,   // adjoined constant s with s^2 = square (rational)
    DepVar,     // chart variable (x, y, u3, ...); derivation 0
    Frozen,     // function value frozen at a point, f^(k)(z*); derivation 0
};

struct Generator {
    GenKind kind = GenKind::Param;
    std::string name;
    int order = 0;   // derivative order for Func/Frozen
    Q square = 0;    // for AlgConst: the value of s^2
};

// Append-only registry of generators.  Index 0 is always z.  The declaration
// order fixes the monomial order (degree-lex, earlier index more significant)
// and hence all canonical forms.
class GenContext {
public:
    GenContext();

    int z() const { return 0; }
    int param(const std::string& name);
    int func(const std::string& name, int order = 0);
    int alg(const std::string& name, const Q& square);
    int depvar(const std::string& name);
    int frozen(const std::string& name, int order);

    // Lookup without declaring; -1 if absent.
    int find(const std::string& display_name) const;

    const Generator& gen(int i) const { return gens_.at(size_t(i)); }
    int size() const { return int(gens_.size()); }
    bool hasAlgConst() const { return hasAlg_; }
    std::string display(int i) const;

    // d/dz of generator i: either a constant (z -> 1, most others -> 0) or
    // another generator (f^(k) -> f^(k+1)).
    // Returns {constant, generator index or -1}.
    std::pair<Q, int> derivation(int i);

private:
    int add(const Generator& g);
    bool hasAlg_ = false;
    std::vector<Generator> gens_;
    std::map<std::string, int> byname_;
};

using Exp = std::vector<int32_t>;  // exponent vector, trailing zeros trimmed

int totalDegree(const Exp& e);
// degree-lex, ascending
struct DegLexLess {
    bool operator()(const Exp& a, const Exp& b) const;
};

class Mpoly {
public:
    Mpoly() : ctx_(nullptr) {}
    explicit Mpoly(GenContext* ctx) : ctx_(ctx) {}
    Mpoly(GenContext* ctx, const Q& c);
    static Mpoly var(GenContext* ctx, int gen, int exp = 1);

    GenContext* ctx() const { return ctx_; }
    bool isZero() const { return terms_.empty(); }
    bool isConstant() const;
    // constant value; requires isConstant()
    Q constant() const;
    int nterms() const { return int(terms_.size()); }

    const std::map<Exp, Q, DegLexLess>& terms() const { return terms_; }

    Mpoly operator-() const;
    Mpoly operator+(const Mpoly& o) const;
    Mpoly operator-(const Mpoly& o) const;
    Mpoly operator*(const Mpoly& o) const;
    Mpoly& operator+=(const Mpoly& o) { return addScaled(o, Q(1)); }
    Mpoly& operator-=(const Mpoly& o) { return addScaled(o, Q(-1)); }
    Mpoly& addScaled(const Mpoly& o, const Q& s);  // *this += s * o, in place
    Mpoly& operator*=(const Mpoly& o) { return *this = *this * o; }
    Mpoly operator*(const Q& c) const;
    Mpoly pow(int n) const;
    bool operator==(const Mpoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const Mpoly& o) const { return !(*this == o); }

    int degree(int var) const;       // max exponent of var, -1 for zero poly
    int lowDegree(int var) const;    // min exponent of var, 0 for zero poly
    int totalDeg() const;            // -1 for zero poly
    bool uses(int var) const;
    std::vector<int> usedVars() const;

    // coefficient of var^k (a poly not involving var)
    Mpoly coeffOf(int var, int k) const;
    // substitute var := 0
    Mpoly setZero(int var) const;

    Mpoly derivPartial(int var) const;
    Mpoly derivZ() const;  // apply the generator derivation

    // integer content (gcd of numerators / lcm of denominators), > 0;
    // sign chosen so that primitivePart has positive leading coefficient
    Q content() const;
    Mpoly primitivePart() const;

    void addTerm(const Exp& e, const Q& c);
    // *this -= c * x^e * o  (fused step of exact long division)
    void submul(const Exp& e, const Q& c, const Mpoly& o);

    std::string str() const;

private:
    void reduceAlg();  // fold s^2 -> square for AlgConst generators
    GenContext* ctx_;
    std::map<Exp, Q, DegLexLess> terms_;
    friend Mpoly mulNoReduce(const Mpoly&, const Mpoly&);
};

// gcd, primitive with positive leading coefficient; gcd(0,0)=0
Mpoly gcd(const Mpoly& a, const Mpoly& b);
// exact division; throws if not divisible
Mpoly divExact(const Mpoly& a, const Mpoly& b);
bool tryDivExact(const Mpoly& a, const Mpoly& b, Mpoly& quot);
// square root of a polynomial if it is a perfect square
std::optional<Mpoly> sqrtExact(const Mpoly& a);

// Reduced fraction of Mpoly.  Canonical: denominator integer-primitive with
// positive leading coefficient, free of AlgConst generators, gcd(num,den)=1.
class Rat {
public:
    Rat() = default;
    explicit Rat(GenContext* ctx) : num_(ctx), den_(Mpoly(ctx, 1)) {}
    Rat(GenContext* ctx, const Q& c) : num_(ctx, c), den_(Mpoly(ctx, 1)) {}
    Rat(const Mpoly& p) : num_(p), den_(Mpoly(p.ctx(), 1)) {}
    Rat(const Mpoly& n, const Mpoly& d) : num_(n), den_(d) { normalize(); }
    static Rat var(GenContext* ctx, int gen) { return Rat(Mpoly::var(ctx, gen)); }

    GenContext* ctx() const { return num_.ctx(); }
    const Mpoly& num() const { return num_; }
    const Mpoly& den() const { return den_; }
    bool isZero() const { return num_.isZero(); }
    bool isConstant() const { return num_.isConstant() && den_.isConstant(); }
    Q constant() const { return num_.constant() / den_.constant(); }
    bool isPoly() const { return den_.isConstant(); }
    Mpoly asPoly() const;  // requires isPoly()

    Rat operator-() const;
    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const;
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }
    Rat pow(int n) const;  // negative allowed for nonzero
    bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rat& o) const { return !(*this == o); }

    Rat derivZ() const;
    Rat derivPartial(int var) const;
    bool uses(int var) const { return num_.uses(var) || den_.uses(var); }

    std::string str() const;

private:
    // already in lowest terms: skip the gcd, only fix the denominator scale
    struct Reduced {};
    Rat(Mpoly n, Mpoly d, Reduced) : num_(std::move(n)), den_(std::move(d)) { scaleDen(); }
    void normalize();
    void scaleDen();
    Mpoly num_, den_;
};

// simultaneous substitution var -> value applied to every occurrence
Rat substitute(const Mpoly& p, const std::map<int, Rat>& repl);
Rat substitute(const Rat& r, const std::map<int, Rat>& repl);

// Does p vanish under the assignments var -> value?  Decided by scalar
// evaluations with salted fixed generator values: a nonzero evaluation is an
// exact nonvanishing certificate, vanishing at every valid salt is accepted
// as zero.  Falls back to symbolic substitution for contexts with adjoined
// algebraic constants.
bool vanishesAt(const Mpoly& p, const std::map<int, Rat>& at);

// Differential rewrite: replace function f (all derivative orders >= the
// rule's order) by the formal derivatives of the right-hand side.
// Rules map func name -> (base order, replacement Rat).
struct RewriteRule {
    std::string func;
    int order = 0;
    Rat rhs;
};
Rat applyRewrites(const Rat& r, const std::vector<RewriteRule>& rules);

}  // namespace sic

#endif
