#ifndef SIC_CASCADE_HPP
#define SIC_CASCADE_HPP

// Depth-first blow-up cascades: resolution of every initial base point with
// branch handling, leaf regularity (plain, or after the hodographic exchange
// of z with the exceptional coordinate), extraction of quasi-Painleve
// coefficient conditions, and singularity signatures k (two-form
// u_f^{k-1} du_f ^ dv_f on the final exceptional line).

#include "sic/geom.hpp"

#include <memory>

namespace sic {

struct QPCondition {
    Mpoly expr;        // canonical: primitive, positive leading coefficient
    std::string text;  // expr.str()
    int leaf = -1;     // id of the leaf node that produced it (-1: combined)
};

enum class LeafStatus {
    Inner,              // not a leaf
    Regular,            // field analytic across the exceptional line
    RegularExchanged,   // regular IVP after exchanging z with u_f
    ConditionRequired,  // regular(-exchanged) only with conditions imposed
    Unresolved,
    DepthLimit,
};
std::string leafStatusName(LeafStatus s);

struct CascadeNode {
    int id = -1, parent = -1;
    BasePoint point;    // blow-up centre, in the chart point.chartId
    std::string label;  // exceptional-curve label: "E1", "E4+", ...
    int uChart = -1, UChart = -1;  // charts created by blowing the point up
    std::vector<int> children;
    LeafStatus status = LeafStatus::Inner;
    int finalChart = -1;  // chart in which the leaf test passed
    int k = 0;            // signature at a leaf (0 elsewhere)
};

struct CascadeResult {
    std::shared_ptr<Surface> surface;  // surface of the final (stable) run
    std::vector<CascadeNode> nodes;
    std::vector<int> roots;
    std::vector<QPCondition> conditions;  // combined canonical set
    std::vector<RewriteRule> imposed;     // rewrite form of the conditions
    bool unresolved = false;
    bool depthLimited = false;
    int blowups = 0;

    const CascadeNode& node(int id) const { return nodes.at(size_t(id)); }
};

// Resolve all base points of the system.  Conditions found at leaves are
// imposed as differential rewrite rules and the cascades re-run until stable;
// the returned tree is the final, condition-satisfying one.
CascadeResult runCascades(const System& sys, int maxDepth = 16);

// canonical form + rendered text of a vanishing coefficient expression
QPCondition makeCondition(const Mpoly& e, int leaf = -1);

// linear elimination (reduced row echelon over the monomial basis) splitting
// mixed conditions into independent ones; duplicates and zeros dropped
std::vector<QPCondition> combineConditions(const std::vector<QPCondition>& conds);

// oriented rewrite solving the condition for its highest-derivative function
// generator; false if no such generator or the condition is not linear in it
bool conditionRule(const Mpoly& e, RewriteRule& out);

}  // namespace sic

#endif
