#pragma once

#include <optional>
#include <string>

#include "slidingcubes/moves.hpp"
#include "slidingcubes/surface.hpp"

namespace sc {

/// Relocation of one module m of a connected walk surface S to an empty
/// target cell e, leaving everything outside S untouched.
struct TeleportRequest {
    Configuration c;  // full configuration
    CellVec s;        // walk surface, subset of c, connected, size >= 2
    Coord m;          // module to move, in s, free in c
    Coord e;          // empty target adjacent to s
};

/// Returns the name of the first violated precondition clause, or nullopt
/// when the request is well-formed.
std::optional<std::string> check_teleport_preconditions(const TeleportRequest& req);

struct TeleportStats {
    size_t makespan = 0;
    size_t max_depth = 0;
    size_t unlock_actions = 0;
};

/// Emits a schedule that moves m to e without touching any cell outside S.
/// Throws std::invalid_argument naming the violated clause when the request
/// preconditions fail, and std::runtime_error if the search budget runs out.
Schedule teleport(const TeleportRequest& req, TeleportStats* stats = nullptr);

/// Transforms anchor+s into anchor+s_target without ever moving the anchor,
/// by repeatedly growing the placed region with single-module teleports.
Schedule teleport_set(const Configuration& anchor, const Configuration& s,
                      const Configuration& s_target);

}  // namespace sc
