#ifndef SIC_LATTICE_HPP
#define SIC_LATTICE_HPP

// Picard lattice of the blown-up surface: divisor classes over the basis
// {H, E_1, ..., E_n} with the intersection form H.H = 1, E_i.E_j = -delta_ij,
// H.E_i = 0; strict-transform bookkeeping per blow-up, the intersection
// diagram of the inaccessible components, blow-down minimalization and
// anti-blow-ups for diagram alignment.

#include "sic/cascade.hpp"

#include <optional>

namespace sic {

// integer coefficient vector over the ordered basis {H, E_1, ..., E_n};
// trailing zeros are irrelevant
struct DivisorClass {
    std::vector<int> c;

    DivisorClass() = default;
    explicit DivisorClass(std::vector<int> v) : c(std::move(v)) {}
    static DivisorClass basisElem(int i);  // 0 = H, i >= 1 = E_i

    int coeff(int i) const { return i < int(c.size()) ? c[size_t(i)] : 0; }
    bool isZero() const;

    DivisorClass operator+(const DivisorClass& o) const;
    DivisorClass operator-(const DivisorClass& o) const;
    DivisorClass operator*(int n) const;
    bool operator==(const DivisorClass& o) const;
};

// intersection form
int intersect(const DivisorClass& a, const DivisorClass& b);
int selfIntersection(const DivisorClass& d);

struct LatticeNode {
    DivisorClass cls;
    std::string label;        // component name: "Linf", "E3+", ...
    bool accessible = false;  // accessible components are not diagram nodes
};

class IntersectionDiagram {
public:
    IntersectionDiagram();  // basis {H}, no components

    const std::vector<std::string>& basis() const { return basis_; }
    const std::vector<LatticeNode>& nodes() const { return nodes_; }
    int rank() const { return int(basis_.size()); }

    std::string classStr(const DivisorClass& d) const;

    int addComponent(const DivisorClass& cls, const std::string& label,
                     bool accessible = false);
    const LatticeNode* find(const std::string& label) const;

    // Blow up a point lying on the listed components (0, 1 or 2 of them; a
    // multiplicity per component, normally 1).  Appends the basis element
    // named `excLabel`, replaces each listed component by its strict
    // transform and adds the exceptional component, inaccessible by default.
    int recordBlowup(const std::vector<std::pair<int, int>>& through,
                     const std::string& excLabel);

    // blow up an arbitrary point of the target component (diagram alignment)
    int antiBlowup(int target, const std::string& excLabel);

    void setAccessible(const std::string& label, bool a);

    // Contract inaccessible -1 components until none remain: each remaining
    // class L becomes L + (L.C) C, which keeps the pairwise form on the
    // surviving components.  Returns the contracted class strings in order.
    std::vector<std::string> minimalize();

    // inaccessible components, in insertion order
    std::vector<const LatticeNode*> inaccessible() const;

    // multiset of self-intersections of the inaccessible components
    std::map<int, int> selfIntHistogram() const;

    std::string dot() const;   // inaccessible subgraph, deterministic
    std::string json() const;  // full lattice

private:
    std::vector<std::string> basis_;
    std::vector<LatticeNode> nodes_;
};

// Diagram of a resolved system: Linf plus one exceptional component per
// blow-up, strict transforms derived from the chart curve data; exceptional
// curves of cascade leaves and the affine axes are accessible, everything
// else inaccessible.  Axes are tracked as components (their classes are used
// for curve interpolation) but never belong to the inaccessible diagram.
IntersectionDiagram buildDiagram(const CascadeResult& r);

// isomorphism of the weighted intersection graphs of the inaccessible
// components (node weight = self-intersection, edge weight = pairwise form);
// optionally returns one label mapping a -> b
bool diagramsIsomorphic(const IntersectionDiagram& a, const IntersectionDiagram& b,
                        std::vector<std::pair<std::string, std::string>>* match = nullptr);

}  // namespace sic

#endif
