#ifndef SIC_HAM_HPP
#define SIC_HAM_HPP

// Hamiltonian systems f y' = dH/dx, f x' = -dH/dy with symplectic factor f,
// the built-in catalog, and the correction machinery for z-dependent changes
// of variables (K = H + h, F = J*f).

#include "sic/algebra.hpp"

namespace sic {

struct System {
    std::string name;
    int xv = -1, yv = -1;  // dependent-variable generator indices
    Rat H;
    Rat f;  // symplectic factor (2-form f dx^dy); 1 unless stated
    std::vector<int> params;               // parameter generators
    std::vector<std::string> funcs;        // coefficient function base names
    std::vector<RewriteRule> normalization;        // e.g. a3 -> z
    std::vector<std::string> expectedConditions;   // informational

    GenContext* ctx() const { return H.ctx(); }
    // (x', y') = (-dH/dy / f, dH/dx / f)
    std::pair<Rat, Rat> vectorField() const;
};

// Catalog entry by name ("P2.H1".."P2.H4", "qP2.H1".."qP2.H3",
// "qP4.H1","qP4.H2", "FH.N4","FH.N5"), declared into the given context.
System makeSystem(GenContext& ctx, const std::string& name);
std::vector<std::string> catalogNames();

// User system from a JSON document: {"name", "vars":[x,y], "H": "expr" or
// "terms":[{"i","j","c"}], "f": "expr"?, "params":[...], "funcs":[...]}
System loadSystemJson(GenContext& ctx, const std::string& jsonText);

// Correction term h for the change of variables x = X(w,t,z), y = Y(w,t,z)
// applied to sys: solves dh/dw = f.(Y_w X_z - X_w Y_z),
// dh/dt = f.(Y_t X_z - X_t Y_z) with f composed with the change.  The new
// system has Hamiltonian K = H(X,Y;z) + h and factor F = J * f(X,Y;z).
// If the two equations are incompatible, ok=false and defect holds the
// mixed-partials difference.
struct Correction {
    bool ok = false;
    Rat h;
    Rat defect;
};
Correction correctionTerm(const System& sys, const Rat& X, const Rat& Y, int wv, int tv);

// Does the map x_A = X(x_B, y_B, z), y_A = Y(x_B, y_B, z) carry A into B
// preserving the extended two-form?  Requires A and B in the same context.
// ok iff F matches B.f and K - H_B is a pure-z function (additive pure-z
// terms do not affect the equations).
struct EquivCheck {
    bool ok = false;
    Rat factorDefect;  // J*f_A(X,Y) - f_B
    Rat hamDefect;     // K - H_B with pure-z part removed; 0 when equivalent
};
EquivCheck checkSymplecticEquivalence(const System& A, const System& B,
                                      const Rat& X, const Rat& Y);

// Second-order ODE for y obtained by eliminating x: returns y'' as an
// expression in y and yp (the given generator standing for y').  Requires the
// y'-equation to be linear in x.
Rat secondOrderODE(const System& sys, int ypVar);

}  // namespace sic

#endif
