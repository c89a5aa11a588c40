#ifndef SIC_IDENTIFY_HPP
#define SIC_IDENTIFY_HPP

// Identification of two Hamiltonian systems through their spaces of initial
// conditions: alignment and matching of intersection diagrams, translation of
// axis divisor classes across the lattice isometry, interpolation of the
// curve family through the prescribed base points, and the final fix of the
// remaining constants by requiring Hamiltonicity, including the coefficient
// dictionary and the symplectic-equivalence certificate.

#include "sic/lattice.hpp"

namespace sic {

// bundle of everything identify needs to know about one system
struct SystemAnalysis {
    System sys;
    CascadeResult cascade;
    IntersectionDiagram diagram;
};

// Run cascade + diagram.  With normalized=true the catalog normalization
// rules (a3 -> z, ...) are substituted into the Hamiltonian first, so that
// the quasi-Painleve conditions hold identically.
SystemAnalysis analyzeSystem(GenContext& ctx, const std::string& catalogName,
                             bool normalized = false);
SystemAnalysis analyzeSystem(System sys);

// basis isometry: image[j] is the class, in A's basis, of B's j-th basis
// element, so that a divisor with B-coordinates v has A-coordinates M v
struct LatticeIsometry {
    std::vector<DivisorClass> image;
    std::vector<std::pair<std::string, std::string>> components;  // B -> A label
    DivisorClass apply(const DivisorClass& v) const;
};

// one way of bringing the two diagrams to equal rank by blowing up arbitrary
// points (anti-blow-ups); labels record the added exceptional curves
struct DiagramAlignment {
    IntersectionDiagram A, B;
    std::vector<std::string> addedA, addedB;
};
std::vector<DiagramAlignment> alignDiagrams(const IntersectionDiagram& A,
                                            const IntersectionDiagram& B);

// All form-preserving assignments between two equal-rank diagrams:
// inaccessible components matched by weighted-graph isomorphism, accessible
// leaves matched through their unique inaccessible neighbours, the basis
// matrix solved from the component equations.  Integrality and preservation
// of the intersection form are verified on every returned isometry.
std::vector<LatticeIsometry> matchDiagrams(const IntersectionDiagram& A,
                                           const IntersectionDiagram& B);

// divisor class of a coordinate axis ("Ax" = {x=0}, "Ay" = {y=0})
DivisorClass axisClass(const IntersectionDiagram& d, const std::string& label);

// Generic curve of degree D.coeff(0) in the system variables, constrained to
// pass with multiplicity -D.coeff(j) through the j-th blow-up centre of the
// cascade (vanishing imposed along the blow-up chart chain).  Remaining free
// coefficients are fresh parameter generators prefixed with `tag`.
struct CurveFamily {
    Rat expr;
    std::vector<int> freeParams;
    bool ok = false;
    std::string error;
};
CurveFamily curveThroughPoints(const SystemAnalysis& S, const DivisorClass& D,
                               const std::string& tag);

struct BirationalMap {
    std::string sourceName, targetName;
    Rat X, Y;        // target x, y as functions of the source variables
    Rat invX, invY;  // source x, y in target variables (when invertible)
    bool hasInverse = false;
    int timeRel = 1;  // target time t = timeRel * z
    std::vector<std::pair<std::string, Rat>> dict;    // target coefficient functions
    std::vector<std::pair<std::string, Rat>> solved;  // fixed interpolation constants
    Rat certFactor, certHam;  // symplectic-defect certificate (both must be 0)
    bool certified = false;
};

// Substitute the curve families into the target Hamilton equations along the
// source flow, equate coefficients, and solve for the free constants and the
// target's coefficient functions; every consistent branch is returned.
std::vector<BirationalMap> fixByHamiltonicity(const System& S, const System& T,
                                              const CurveFamily& xFam,
                                              const CurveFamily& yFam, int timeRel);

struct IdentifyResult {
    std::vector<LatticeIsometry> isometries;  // across all alignments
    std::vector<BirationalMap> maps;
    std::string error;  // non-empty when the surface types differ
};

// Full pipeline: express T's variables in S's coordinates, with T's
// coefficient functions solved in terms of S's.  S should be the normalized
// analysis, T the plain one.
IdentifyResult identifySystems(const SystemAnalysis& S, const SystemAnalysis& T);

}  // namespace sic

#endif
