#include "sic/lattice.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace sic {

// ------------------------------------------------------------- DivisorClass

DivisorClass DivisorClass::basisElem(int i) {
    std::vector<int> v(size_t(i) + 1, 0);
    v[size_t(i)] = 1;
    return DivisorClass(std::move(v));
}

bool DivisorClass::isZero() const {
    for (int x : c)
        if (x != 0) return false;
    return true;
}

DivisorClass DivisorClass::operator+(const DivisorClass& o) const {
    DivisorClass r = *this;
    if (o.c.size() > r.c.size()) r.c.resize(o.c.size(), 0);
    for (size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
    return r;
}

DivisorClass DivisorClass::operator-(const DivisorClass& o) const {
    return *this + o * -1;
}

DivisorClass DivisorClass::operator*(int n) const {
    DivisorClass r = *this;
    for (int& x : r.c) x *= n;
    return r;
}

bool DivisorClass::operator==(const DivisorClass& o) const {
    size_t n = std::max(c.size(), o.c.size());
    for (size_t i = 0; i < n; ++i)
        if (coeff(int(i)) != o.coeff(int(i))) return false;
    return true;
}

int intersect(const DivisorClass& a, const DivisorClass& b) {
    int s = a.coeff(0) * b.coeff(0);
    size_t n = std::max(a.c.size(), b.c.size());
    for (size_t i = 1; i < n; ++i) s -= a.coeff(int(i)) * b.coeff(int(i));
    return s;
}

int selfIntersection(const DivisorClass& d) { return intersect(d, d); }

// ------------------------------------------------------ IntersectionDiagram

IntersectionDiagram::IntersectionDiagram() : basis_{"H"} {}

std::string IntersectionDiagram::classStr(const DivisorClass& d) const {
    std::string out;
    for (size_t i = 0; i < d.c.size(); ++i) {
        int n = d.c[i];
        if (n == 0) continue;
        std::string name = i < basis_.size() ? basis_[i] : "?" + std::to_string(i);
        if (out.empty()) {
            if (n == -1)
                out += "-";
            else if (n != 1)
                out += std::to_string(n);
        } else {
            out += n > 0 ? " + " : " - ";
            if (n != 1 && n != -1) out += std::to_string(std::abs(n));
        }
        out += name;
    }
    return out.empty() ? "0" : out;
}

int IntersectionDiagram::addComponent(const DivisorClass& cls, const std::string& label,
                                      bool accessible) {
    nodes_.push_back({cls, label, accessible});
    return int(nodes_.size()) - 1;
}

const LatticeNode* IntersectionDiagram::find(const std::string& label) const {
    for (const LatticeNode& n : nodes_)
        if (n.label == label) return &n;
    return nullptr;
}

int IntersectionDiagram::recordBlowup(const std::vector<std::pair<int, int>>& through,
                                      const std::string& excLabel) {
    for (auto [idx, m] : through)
        if (idx < 0 || idx >= int(nodes_.size()) || m < 1)
            throw Error("recordBlowup: invalid component reference");
    basis_.push_back(excLabel);
    DivisorClass E = DivisorClass::basisElem(rank() - 1);
    for (auto [idx, m] : through)
        nodes_[size_t(idx)].cls = nodes_[size_t(idx)].cls - E * m;
    return addComponent(E, excLabel);
}

int IntersectionDiagram::antiBlowup(int target, const std::string& excLabel) {
    if (target < 0 || target >= int(nodes_.size()))
        throw Error("antiBlowup: no such component");
    return recordBlowup({{target, 1}}, excLabel);
}

void IntersectionDiagram::setAccessible(const std::string& label, bool a) {
    for (LatticeNode& n : nodes_)
        if (n.label == label) n.accessible = a;
}

std::vector<std::string> IntersectionDiagram::minimalize() {
    std::vector<std::string> log;
    for (;;) {
        int pick = -1;
        for (size_t i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].accessible) continue;
            if (selfIntersection(nodes_[i].cls) == -1) {
                pick = int(i);
                break;
            }
        }
        if (pick < 0) return log;
        DivisorClass C = nodes_[size_t(pick)].cls;
        log.push_back(classStr(C));
        nodes_.erase(nodes_.begin() + pick);
        for (LatticeNode& n : nodes_) n.cls = n.cls + C * intersect(n.cls, C);
    }
}

std::vector<const LatticeNode*> IntersectionDiagram::inaccessible() const {
    std::vector<const LatticeNode*> out;
    for (const LatticeNode& n : nodes_)
        if (!n.accessible) out.push_back(&n);
    return out;
}

std::map<int, int> IntersectionDiagram::selfIntHistogram() const {
    std::map<int, int> h;
    for (const LatticeNode* n : inaccessible()) ++h[selfIntersection(n->cls)];
    return h;
}

std::string IntersectionDiagram::dot() const {
    std::vector<const LatticeNode*> in = inaccessible();
    std::ostringstream os;
    os << "graph diagram {\n";
    for (size_t i = 0; i < in.size(); ++i)
        os << "  n" << i << " [label=\"" << classStr(in[i]->cls) << "\\n"
           << selfIntersection(in[i]->cls) << "\"];\n";
    for (size_t i = 0; i < in.size(); ++i)
        for (size_t j = i + 1; j < in.size(); ++j) {
            int w = intersect(in[i]->cls, in[j]->cls);
            for (int k = 0; k < w; ++k) os << "  n" << i << " -- n" << j << ";\n";
        }
    os << "}\n";
    return os.str();
}

std::string IntersectionDiagram::json() const {
    nlohmann::ordered_json j;
    j["basis"] = basis_;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const LatticeNode& n : nodes_) {
        nlohmann::ordered_json e;
        e["label"] = n.label;
        e["class"] = classStr(n.cls);
        e["coeffs"] = n.cls.c;
        e["selfInt"] = selfIntersection(n.cls);
        e["accessible"] = n.accessible;
        j["nodes"].push_back(e);
    }
    return j.dump(2) + "\n";
}

// ------------------------------------------------------------ buildDiagram

namespace {

// vanishing order of the local curve equation at the point (a,b): minimum
// total degree in the chart variables after shifting the point to the origin
int multiplicityAt(const Chart& ch, const Mpoly& P, const Rat& a, const Rat& b) {
    GenContext* ctx = P.ctx();
    Rat u = Rat::var(ctx, ch.uvar), v = Rat::var(ctx, ch.vvar);
    Rat shifted = substitute(P, {{ch.uvar, u + a}, {ch.vvar, v + b}});
    const Mpoly& n = shifted.num();
    int m = -1;
    for (const auto& [e, c] : n.terms()) {
        int d = (ch.uvar < int(e.size()) ? e[size_t(ch.uvar)] : 0) +
                (ch.vvar < int(e.size()) ? e[size_t(ch.vvar)] : 0);
        if (m < 0 || d < m) m = d;
    }
    return m < 0 ? 0 : m;
}

}  // namespace

IntersectionDiagram buildDiagram(const CascadeResult& r) {
    IntersectionDiagram d;
    DivisorClass H = DivisorClass::basisElem(0);
    d.addComponent(H, "Linf");
    d.addComponent(H, "Ax", true);
    d.addComponent(H, "Ay", true);

    for (const CascadeNode& n : r.nodes) {
        const Chart& ch = r.surface->chart(n.point.chartId);
        std::map<int, Rat> at{{ch.uvar, n.point.a}, {ch.vvar, n.point.b}};
        std::vector<std::pair<int, int>> through;
        for (size_t i = 0; i < d.nodes().size(); ++i) {
            const Mpoly* P = ch.curve(d.nodes()[i].label);
            if (!P || !vanishesAt(*P, at)) continue;
            through.emplace_back(int(i), multiplicityAt(ch, *P, n.point.a, n.point.b));
        }
        d.recordBlowup(through, n.label);
    }
    for (const CascadeNode& n : r.nodes) {
        if (!n.children.empty()) continue;
        if (n.status == LeafStatus::Regular || n.status == LeafStatus::RegularExchanged ||
            n.status == LeafStatus::ConditionRequired)
            d.setAccessible(n.label, true);
    }
    return d;
}

// ------------------------------------------------------ graph isomorphism

namespace {

struct WGraph {
    std::vector<std::string> labels;
    std::vector<int> self;
    std::vector<std::vector<int>> w;

    explicit WGraph(const IntersectionDiagram& d) {
        std::vector<const LatticeNode*> in = d.inaccessible();
        size_t n = in.size();
        labels.reserve(n);
        self.reserve(n);
        w.assign(n, std::vector<int>(n, 0));
        for (size_t i = 0; i < n; ++i) {
            labels.push_back(in[i]->label);
            self.push_back(selfIntersection(in[i]->cls));
            for (size_t j = 0; j < n; ++j)
                if (i != j) w[i][j] = intersect(in[i]->cls, in[j]->cls);
        }
    }

    // invariant used to prune candidates: self-intersection plus the sorted
    // multiset of (edge weight, neighbour self-intersection)
    std::vector<std::pair<int, int>> signature(size_t i) const {
        std::vector<std::pair<int, int>> s{{self[i], 0}};
        for (size_t j = 0; j < w.size(); ++j)
            if (j != i && w[i][j] != 0) s.emplace_back(w[i][j], self[j]);
        std::sort(s.begin() + 1, s.end());
        return s;
    }
};

bool extend(const WGraph& A, const WGraph& B, std::vector<int>& map,
            std::vector<bool>& used, size_t i) {
    size_t n = A.labels.size();
    if (i == n) return true;
    for (size_t j = 0; j < n; ++j) {
        if (used[j] || A.self[i] != B.self[j]) continue;
        bool ok = true;
        for (size_t k = 0; k < i && ok; ++k)
            ok = A.w[i][k] == B.w[j][size_t(map[k])];
        if (!ok) continue;
        map[i] = int(j);
        used[j] = true;
        if (extend(A, B, map, used, i + 1)) return true;
        used[j] = false;
    }
    return false;
}

}  // namespace

bool diagramsIsomorphic(const IntersectionDiagram& a, const IntersectionDiagram& b,
                        std::vector<std::pair<std::string, std::string>>* match) {
    WGraph A(a), B(b);
    size_t n = A.labels.size();
    if (n != B.labels.size()) return false;
    std::vector<std::vector<std::pair<int, int>>> sa, sb;
    for (size_t i = 0; i < n; ++i) {
        sa.push_back(A.signature(i));
        sb.push_back(B.signature(i));
    }
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
    std::vector<int> map(n, -1);
    std::vector<bool> used(n, false);
    if (!extend(A, B, map, used, 0)) return false;
    if (match) {
        match->clear();
        for (size_t i = 0; i < n; ++i)
            match->emplace_back(A.labels[i], B.labels[size_t(map[i])]);
    }
    return true;
}

}  // namespace sic
