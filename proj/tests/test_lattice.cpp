#include <doctest.h>

#include "sic/lattice.hpp"

using namespace sic;

namespace {

IntersectionDiagram diagramFor(const std::string& name) {
    GenContext ctx;
    return buildDiagram(runCascades(makeSystem(ctx, name)));
}

int edgeCount(const IntersectionDiagram& d) {
    std::vector<const LatticeNode*> in = d.inaccessible();
    int e = 0;
    for (size_t i = 0; i < in.size(); ++i)
        for (size_t j = i + 1; j < in.size(); ++j)
            if (intersect(in[i]->cls, in[j]->cls) > 0) ++e;
    return e;
}

int nodeDegree(const IntersectionDiagram& d, size_t i) {
    std::vector<const LatticeNode*> in = d.inaccessible();
    int deg = 0;
    for (size_t j = 0; j < in.size(); ++j)
        if (j != i && intersect(in[i]->cls, in[j]->cls) > 0) ++deg;
    return deg;
}

}  // namespace

TEST_CASE("intersection form on divisor classes") {
    DivisorClass H = DivisorClass::basisElem(0);
    DivisorClass E1 = DivisorClass::basisElem(1), E2 = DivisorClass::basisElem(2);
    DivisorClass E3 = DivisorClass::basisElem(3);

    CHECK(selfIntersection(H) == 1);
    CHECK(selfIntersection(E1) == -1);
    CHECK(intersect(H, E1) == 0);
    CHECK(intersect(E1, E2) == 0);
    CHECK(selfIntersection(E1 - E2 - E3) == -3);
    CHECK(selfIntersection(H - E1 - E2) == -1);
    CHECK(selfIntersection(H * 2 - E1) == 3);
    CHECK(intersect(H - E1 - E2, E2 - E3) == 1);

    IntersectionDiagram d;
    int linf = d.addComponent(H, "Linf");
    d.recordBlowup({{linf, 1}}, "E1");
    d.recordBlowup({{0, 1}, {1, 1}}, "E2");  // point on Linf' and E1
    CHECK(d.rank() == 3);
    CHECK(d.classStr(d.nodes()[0].cls) == "H - E1 - E2");
    CHECK(d.classStr(d.nodes()[1].cls) == "E1 - E2");
    CHECK(d.classStr(H * 2 - E1 - E2 * 3) == "2H - E1 - 3E2");
    CHECK(selfIntersection(d.nodes()[0].cls) == -1);
}

TEST_CASE("anti-blow-up followed by minimalize restores the diagram") {
    IntersectionDiagram d = diagramFor("P2.H1");
    IntersectionDiagram orig = d;

    // blow up a generic point of some -2 component
    int target = -1;
    for (size_t i = 0; i < d.nodes().size(); ++i)
        if (!d.nodes()[i].accessible && selfIntersection(d.nodes()[i].cls) == -2) {
            target = int(i);
            break;
        }
    REQUIRE(target >= 0);
    int nid = d.antiBlowup(target, "F10");
    CHECK(selfIntersection(d.nodes()[size_t(nid)].cls) == -1);
    CHECK(selfIntersection(d.nodes()[size_t(target)].cls) == -3);
    CHECK(intersect(d.nodes()[size_t(target)].cls, d.nodes()[size_t(nid)].cls) == 1);

    std::vector<std::string> log = d.minimalize();
    REQUIRE(log == std::vector<std::string>{"F10"});
    CHECK(d.selfIntHistogram() == orig.selfIntHistogram());
    CHECK(diagramsIsomorphic(d, orig));
}

TEST_CASE("P2.H1: eight -2 curves in an affine E7 tree") {
    IntersectionDiagram d = diagramFor("P2.H1");
    CHECK(d.rank() == 10);  // H plus nine exceptional classes
    CHECK(d.minimalize().empty());
    CHECK(d.selfIntHistogram() == std::map<int, int>{{-2, 8}});
    CHECK(edgeCount(d) == 7);  // connected tree on eight nodes
    int branches = 0;
    for (size_t i = 0; i < d.inaccessible().size(); ++i)
        if (nodeDegree(d, i) == 3) ++branches;
    CHECK(branches == 1);

    // the line at infinity carries three of the nine points
    const LatticeNode* linf = d.find("Linf");
    REQUIRE(linf != nullptr);
    CHECK(selfIntersection(linf->cls) == -2);
}

TEST_CASE("P2.H3 minimalizes onto the P2.H1 diagram") {
    IntersectionDiagram d = diagramFor("P2.H3");
    CHECK(d.selfIntHistogram() ==
          std::map<int, int>{{-1, 1}, {-2, 7}, {-3, 1}});
    std::vector<std::string> log = d.minimalize();
    REQUIRE(log == std::vector<std::string>{"H - E1 - E2"});
    // the -3 class E2 - E3+ - E3- gained the contracted line: now a -2 curve
    const LatticeNode* e2 = d.find("E2");
    REQUIRE(e2 != nullptr);
    CHECK(d.classStr(e2->cls) == "H - E1 - E3- - E3+");
    CHECK(selfIntersection(e2->cls) == -2);
    CHECK(d.selfIntHistogram() == std::map<int, int>{{-2, 8}});
    CHECK(diagramsIsomorphic(d, diagramFor("P2.H1")));
}

TEST_CASE("qP2.H1: minimal diagram has eleven -2 curves and one -3 curve") {
    IntersectionDiagram d = diagramFor("qP2.H1");
    CHECK(d.rank() == 16);  // H plus fifteen exceptional classes
    CHECK(d.selfIntHistogram() ==
          std::map<int, int>{{-1, 1}, {-2, 11}, {-3, 2}});
    std::vector<std::string> log = d.minimalize();
    // contracting the line pushes a second -1 class out of E1's transform
    REQUIRE(log == std::vector<std::string>{"H - E1 - E2", "H - E1 - E3"});
    CHECK(d.selfIntHistogram() == std::map<int, int>{{-2, 11}, {-3, 1}});
    const LatticeNode* e1 = d.find("E1");
    REQUIRE(e1 != nullptr);
    CHECK(selfIntersection(e1->cls) == -3);
}

TEST_CASE("qP2.H3 is already minimal and matches minimalized qP2.H1") {
    IntersectionDiagram h3 = diagramFor("qP2.H3");
    CHECK(h3.minimalize().empty());
    CHECK(h3.selfIntHistogram() == std::map<int, int>{{-2, 11}, {-3, 1}});
    CHECK(h3.inaccessible().size() == 12);

    IntersectionDiagram h1 = diagramFor("qP2.H1");
    h1.minimalize();
    std::vector<std::pair<std::string, std::string>> match;
    CHECK(diagramsIsomorphic(h1, h3, &match));
    CHECK(match.size() == 12);
    // the unique -3 nodes must correspond
    for (const auto& [a, b] : match)
        if (a == "E1") CHECK(b == "E1");
}

TEST_CASE("diagram output is deterministic") {
    IntersectionDiagram a = diagramFor("qP2.H3");
    IntersectionDiagram b = diagramFor("qP2.H3");
    CHECK(a.dot() == b.dot());
    CHECK(a.json() == b.json());
    CHECK(a.dot().rfind("graph diagram {", 0) == 0);
}
