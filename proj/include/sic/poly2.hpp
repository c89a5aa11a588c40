#ifndef SIC_POLY2_HPP
#define SIC_POLY2_HPP

// Bivariate layer over the coefficient field.  Dependent variables are DepVar
// generators in the shared context, so a "BiPoly/BiRat" is just a Rat together
// with the pair of variable indices; this header adds what the chart geometry
// needs on top of plain Rat arithmetic: solving on an exceptional line,
// adjoining square roots of rational constants, coefficient extraction by
// exponent pair, and the canonical text form used in reports.

#include "sic/algebra.hpp"

namespace sic {

// expression s.t. result^2 == s; adjoins an AlgConst generator when s is not
// a perfect square (named "i" for -1, "sqrt<n>" otherwise)
Rat adjoinSqrt(GenContext* ctx, const Q& s);

// sqrt of a coefficient-field element if expressible: perfect-square rational
// function, optionally times a rational constant (handled via adjoinSqrt)
std::optional<Rat> sqrtRat(const Rat& r);

struct LineRoots {
    bool degenerate = false;      // the whole line vanishes
    std::vector<Rat> roots;       // distinct roots in the coefficient field
    Mpoly residual;               // unsolved factor (constant when fully solved)
};

// Roots of p regarded as a polynomial in `var` over the coefficient field.
// Solves linear and quadratic factors (adjoining square roots of rational
// constants), peels var^m and rational roots of constant-coefficient factors;
// anything else is returned in `residual`.
LineRoots solveOnLine(const Mpoly& p, int var);

// coefficient of xu^i * xv^j (an Mpoly free of both variables)
Mpoly coeffXY(const Mpoly& p, int xu, int xv, int i, int j);

// substitute a single variable
Rat evalAt(const Rat& r, int var, const Rat& value);
Rat evalAt(const Mpoly& p, int var, const Rat& value);

// canonical text `coeff * x^i * y^j + ...`, terms in descending (i+j, i)
std::string biStr(const Rat& r, int xu, int xv);

}  // namespace sic

#endif
