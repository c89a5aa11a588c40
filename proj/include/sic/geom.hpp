#ifndef SIC_GEOM_HPP
#define SIC_GEOM_HPP

// CP^2 atlas over a Hamiltonian system, base-point detection and single
// blow-ups.  Charts store the map back to the affine (x,y) chart, the
// transformed vector field, the symplectic factor f (2-form f du^dv, computed
// as f0 times the Jacobian d(x,y)/d(u,v)), and local defining equations of
// the tracked curves (line at infinity, axes, exceptional curves) as strict
// transforms.

#include "sic/ham.hpp"

namespace sic {

struct Chart {
    int id = -1;
    int parent = -1;  // parent chart id; -1 for the three CP^2 charts
    int twin = -1;    // sibling chart from the same blow-up
    std::string name;
    int uvar = -1, vvar = -1;  // chart coordinate generators
    bool Ustyle = false;       // exceptional line is {v=0} instead of {u=0}
    Rat X, Y;                  // affine x, y in chart coordinates
    Rat fieldU, fieldV;        // u', v'
    Rat f;                     // symplectic factor
    std::vector<std::pair<std::string, Mpoly>> curves;  // label -> local eq
    Rat centerA, centerB;      // blow-up center in parent coordinates
    int depth = 0;

    int excVar() const { return Ustyle ? vvar : uvar; }
    const Mpoly* curve(const std::string& label) const;
};

class Surface {
public:
    // builds charts 0=affine, 1=(u0,v0), 2=(U0,V0); rules are differential
    // rewrites (imposed coefficient conditions) applied to every chart field
    explicit Surface(System sys, std::vector<RewriteRule> rules = {});

    GenContext* ctx() const { return sys_.ctx(); }
    const System& system() const { return sys_; }
    const std::vector<RewriteRule>& rules() const { return rules_; }
    const Chart& chart(int id) const { return charts_.at(size_t(id)); }
    int nCharts() const { return int(charts_.size()); }
    int nBlowups() const { return nblow_; }

    // Blow up the point (a,b) of the given chart; returns {uChartId, UChartId}
    // and records the exceptional curve under excLabel in both charts.
    std::pair<int, int> blowUp(int chartId, const Rat& a, const Rat& b,
                               const std::string& excLabel);

    // Inverse of the most recent blow-up bookkeeping: parent chart id.
    int blowDown(int chartId) const;

private:
    Chart makeChild(const Chart& parent, const Rat& pu, const Rat& pv,
                    int uvar, int vvar, const std::string& name);
    System sys_;
    std::vector<RewriteRule> rules_;
    std::vector<Chart> charts_;
    int nblow_ = 0;
};

// 0/0 in some component of the (reduced) field at the point?
bool pointIndeterminate(const Chart& c, const Rat& a, const Rat& b);

// single-chart degeneracy test: both numerators of the g-multiplied field
// (g = lcm of the denominators) vanish at (a,b) and the field is 0/0 there
bool isBasePoint(const Chart& c, const Rat& a, const Rat& b);

struct BasePoint {
    int chartId = -1;
    Rat a, b;
    bool visibleInTwin = false;
    std::string label;
};

struct BasePointScan {
    std::vector<BasePoint> points;
    bool degenerateLine = false;
    Mpoly residual;  // non-constant: unresolved locus
};

// Scan the exceptional line of the chart pair (uId's {u=0} together with
// UId's origin at {V=0, U=0}).  For the initial surface pass the (u0,v0) and
// (U0,V0) chart ids to scan the line at infinity.  Candidates are equilibria
// of the g-multiplied field on the line; off-origin candidates must stay
// indeterminate in the twin chart.
BasePointScan findBasePoints(const Surface& s, int uId, int UId);

}  // namespace sic

#endif
