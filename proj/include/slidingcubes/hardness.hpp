#pragma once

#include <map>
#include <vector>

#include "slidingcubes/moves.hpp"

namespace sc {

/// A monotone formula: every clause is all-positive or all-negative, at most
/// three literals. Variables are 1-based. Same-polarity clause spans must be
/// laminar (nested or disjoint) so the comb layout embeds without crossings.
struct MonotoneFormula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;  // positive ints or negative ints per clause

    bool clause_positive(size_t i) const { return clauses[i][0] > 0; }
};

struct ClauseGeom {
    bool positive;
    int level;        // nesting level, 1 = innermost band
    int spine_y;
    std::map<int, int> tooth_x;  // variable -> tooth column
};

struct SatGadgetLayout {
    MonotoneFormula formula;
    std::vector<int> var_x;       // west edge of each variable gadget
    std::vector<int> var_width;
    std::vector<int> connector_x; // west edge of connector i (between vars i and i+1)
    std::vector<ClauseGeom> clause_geom;
    Coord d_start;  // difference module cell in the initial configuration
    Coord d_end;    // its cell in the target configuration
    int east_x = 0; // west edge of the east terminal column
};

struct SatInstance {
    Configuration c_initial;
    Configuration c_final;
    SatGadgetLayout layout;
};

/// Builds the reconfiguration instance for a formula: variable gadgets of
/// depth 3 and height 1, connectors of width 5 and depth and height 3,
/// clause combs, and a single difference module. The two configurations
/// differ in exactly one cell each way.
SatInstance gen_sat_instance(const MonotoneFormula& formula);

/// Checks that the assignment satisfies the formula (throws naming the
/// violated clause otherwise) and emits the single-transformation schedule
/// routing the flow through each variable on the side its value selects.
Schedule assignment_to_schedule(const SatInstance& inst, const std::vector<bool>& assignment);

/// The two-transformation schedule that routes exclusively along the
/// negative sides, valid regardless of satisfiability. Negative unit
/// clauses make this routing impossible and are rejected.
Schedule two_step_schedule(const SatInstance& inst);

}  // namespace sc
