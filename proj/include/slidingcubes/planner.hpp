#pragma once

#include <map>
#include <optional>
#include <unordered_map>

#include "slidingcubes/snake.hpp"
#include "slidingcubes/teleport.hpp"

namespace sc {

/// Origin-aligned 5x5x5 decomposition of the padded bounding box.
struct MetaGrid {
    Coord origin;          // minimum corner of the padded box
    Coord dims;            // extent in meta cells
    int meta = 5;

    Coord meta_of(const Coord& cell) const {
        auto f = [&](int v, int o) { return (v - o) / meta - ((v - o) % meta < 0 ? 1 : 0); };
        return {f(cell.x, origin.x), f(cell.y, origin.y), f(cell.z, origin.z)};
    }
    Coord center_of(const Coord& mc) const {
        return origin + Coord{mc.x * meta + meta / 2, mc.y * meta + meta / 2, mc.z * meta + meta / 2};
    }
};

MetaGrid make_meta_grid(const Configuration& c);

/// Spanning structure: a tree over the per-meta-cell components of C guiding
/// a cell-level spanning tree of C whose subtrees stay meta-local.
struct SpanningTrees {
    MetaGrid grid;
    Coord root;
    std::unordered_map<Coord, Coord, CoordHash> parent;              // cell -> parent cell
    std::unordered_map<Coord, std::vector<Coord>, CoordHash> kids;   // cell -> children
    std::vector<CellVec> components;                                  // per-meta-cell components
    std::vector<int> component_parent;                                // component tree
    int component_root = -1;

    size_t subtree_size(const Coord& cell) const;
    CellVec subtree_cells(const Coord& cell) const;
    CellVec dfs_order(const Coord& cell) const;
};

SpanningTrees build_trees(const Configuration& c);

/// A subtree root p with t <= |T_p| <= 5t, found by descending into heavy
/// children; falls back to a full scan when the descent overshoots.
Coord find_subtree(const SpanningTrees& t, size_t target);

struct GrowBallResult {
    Schedule schedule;
    Coord center;
};

/// Teleport composition that grows a fully occupied L1 ball of radius 12
/// around a module of the subtree, consuming only subtree material; every
/// cell outside the subtree stays occupied.
GrowBallResult grow_ball(const Configuration& c, const SpanningTrees& t, const Coord& subtree_root);

struct GatherResult {
    SnakeState snake;
    Schedule schedule;
};

/// Gather phase: subtree selection, ball growth, initial snake extraction,
/// alignment, and tree traversal that takes ownership of the target budget.
GatherResult gather(const Configuration& c);

/// Scaffold and compress: raises the snake to the top, covers the scaled
/// z-projection, descends consuming the configuration into towers, fills
/// the towers solid, then compacts with parity sweeps. Returns the schedule
/// via the builder; the final configuration is compact.
void scaffold_and_compress(ScheduleBuilder& b, SnakeState snake);

/// Parity sweeps toward the origin along -x, -y, -z until a fixpoint; the
/// result is compact for grounded inputs.
void compact_sweeps(ScheduleBuilder& b);

/// Reshapes a compact configuration into a near-cuboid over a rectangle
/// w x d with A >= (w-1)d and A >= (d-1)w, column heights within one.
void compact_to_cuboid(ScheduleBuilder& b, char axis = 'z');

/// Column-by-column transfer between two cuboids of equal size.
Schedule cuboid_to_cuboid(const Configuration& c1, const Configuration& c2);

struct PlanReport {
    Schedule schedule;
    size_t makespan = 0;
    size_t n = 0;
    size_t area = 0;    // max projection area onto the bounding-box base
    size_t height = 0;  // max bounding-box height
    double ratio = 0.0; // makespan / (area + height)
    size_t gather_end = 0;
    size_t compress_end = 0;
    size_t compact_end = 0;
    size_t bridge_end = 0;
    bool used_fallback = false;
};

struct PlanOptions {
    size_t fallback_threshold = 2625;
    uint64_t seed = 0;  // recorded; planning is deterministic
};

/// Universal reconfiguration: melt-based composition below the snake
/// threshold, the full pipeline above it. The returned schedule transforms
/// c1 into c2 exactly.
PlanReport plan(const Configuration& c1, const Configuration& c2, const PlanOptions& opts = {});

/// The canonical compact pile for n modules anchored at `anchor`.
Configuration canonical_pile(size_t n, const Coord& anchor);

/// Melt: reduces the configuration to the canonical pile anchored at its
/// own lexicographically minimal cell in (z, y, x) order.
Schedule melt_to_pile(const Configuration& c, const Coord& anchor);

/// Rigid translation of a compact pile by one-axis parity phases.
Schedule translate_pile(const Configuration& pile, const Coord& delta);

Schedule translated(const Schedule& s, const Coord& delta);

}  // namespace sc
