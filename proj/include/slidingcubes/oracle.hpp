#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "slidingcubes/moves.hpp"

namespace sc {

struct OracleOptions {
    size_t step_budget = 8;
    size_t move_budget_per_step = 4;
    /// Search region: cells within this Linf margin of the joint bounding
    /// box of the two configurations. Excursions beyond it are not explored;
    /// the budget makes the result explicit rather than guessed.
    int region_margin = 2;
    /// Canonicalize states by translating the lexicographically smallest
    /// cell to the origin (off by default: targets are absolute).
    bool translation_invariant = false;
    /// Cap on explored states before giving up with "unknown".
    size_t state_budget = 2'000'000;
};

struct OracleResult {
    bool known = false;
    size_t makespan = 0;      // valid when known
    Schedule witness;         // valid when known and makespan > 0
    size_t states_explored = 0;
};

/// Exact minimum makespan between two equal-sized configurations via
/// breadth-first search over configurations, expanding every valid
/// transformation of at most move_budget_per_step moves. Returns unknown
/// when a budget is exhausted, never a guess.
OracleResult bfs_min_makespan(const Configuration& c1, const Configuration& c2,
                              const OracleOptions& opts = {});

/// Enumerates all valid transformations of C with at most max_moves moves
/// whose swept cells stay inside the given inclusive bounds. Calls fn for
/// each; fn returns false to stop early. Used by the oracle and by tests.
void for_each_valid_transformation(const Configuration& c, size_t max_moves,
                                   const BoundingBox& region,
                                   const std::function<bool(const Transformation&)>& fn);

/// Decision procedure for single-step reachability with an arbitrary number
/// of parallel moves: searches for one valid transformation turning c1 into
/// c2 by following handoff chains through the symmetric difference. Complete
/// for pairs whose symmetric difference is one cell each way.
std::optional<Transformation> find_single_step(const Configuration& c1, const Configuration& c2,
                                               size_t max_chain_length = 4096);

}  // namespace sc
