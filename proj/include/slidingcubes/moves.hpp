#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slidingcubes/config.hpp"

namespace sc {

enum class MoveKind { Slide, Convex };

/// One module motion. Slides translate by one unit; convex transitions go
/// around a corner, to = from + u + v with u the pivot direction and v the
/// lateral direction. `corner` is the swept cell from + v.
struct Move {
    MoveKind kind = MoveKind::Slide;
    Coord from;
    Coord to;
    Coord corner;  // convex only: the swept corner cell (from + v)

    static Move slide(Coord from, Coord to) { return {MoveKind::Slide, from, to, {}}; }
    static Move convex(Coord from, Coord u, Coord v) {
        return {MoveKind::Convex, from, from + u + v, from + v};
    }
    /// Convex move given absolute from/to/corner, as read from files.
    static Move convex_via(Coord from, Coord to, Coord corner) {
        return {MoveKind::Convex, from, to, corner};
    }

    // pivot cell = from + u where u = to - corner
    Coord pivot_cell() const { return from + (to - corner); }
    Coord lateral() const { return corner - from; }

    /// Cells the module passes through.
    std::vector<Coord> swept() const {
        if (kind == MoveKind::Slide) return {from, to};
        return {from, corner, to};
    }

    Move reversed() const {
        if (kind == MoveKind::Slide) return slide(to, from);
        return convex_via(to, from, corner);
    }

    friend bool operator==(const Move&, const Move&) = default;
};

using Transformation = std::vector<Move>;

struct Schedule {
    std::vector<Transformation> steps;
    size_t makespan() const { return steps.size(); }
};

/// Whether a slide of the module at `from` to `to` is legal in C taken in
/// isolation: to empty, one unit apart, and a supporting pair of occupied
/// cells alongside. Throws if from is not occupied.
bool is_legal_slide(const Configuration& c, const Coord& from, const Coord& to);
bool is_legal_slide(const CellSet& cells, const Coord& from, const Coord& to);

/// Whether a convex transition from `from` with pivot direction u and
/// lateral direction v is legal in isolation: pivot occupied, corner and
/// target empty. Throws if from is not occupied or u, v are not orthogonal
/// unit axis vectors.
bool is_legal_convex(const Configuration& c, const Coord& from, const Coord& u, const Coord& v);
bool is_legal_convex(const CellSet& cells, const Coord& from, const Coord& u, const Coord& v);

enum class Rule {
    SourceMissing,      // move source not occupied
    DuplicateSource,    // two moves share a source
    IllegalMove,        // malformed or unsupported move
    BackboneNotFree,    // moving set is not free
    BackboneEmpty,      // every module is moving
    TargetOccupied,     // target occupied by a static module
    DuplicateTarget,    // two moves share a target
    CollisionSwap,      // two modules trading places
    CollisionSwept,     // swept sets intersect illegally
    Disconnected,       // resulting configuration disconnected
};

std::string rule_name(Rule r);

struct Violation {
    Rule rule;
    std::vector<size_t> moves;  // indices into the transformation
    std::string detail;
};

struct ValidationResult {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Full transformation validation against a base configuration:
/// per-move legality relative to the step, backbone freeness, collision
/// rules and resulting connectivity. A cell may be handed off between two
/// slides (the target of one is the source of the other); convex
/// transitions must have fully disjoint swept sets and a stationary pivot.
ValidationResult validate_transformation(const Configuration& c, const Transformation& t);

/// Applies a transformation after validating it. Throws std::invalid_argument
/// with the first violation if invalid.
Configuration apply_transformation(const Configuration& c, const Transformation& t);

/// Applies without validating (the caller has already validated).
Configuration apply_unchecked(const Configuration& c, const Transformation& t);

struct ScheduleError {
    size_t step;  // 0-based failing step; steps.size() means final mismatch
    std::vector<Violation> violations;
    std::string detail;
};

/// Validates every step against its running configuration and requires the
/// final configuration to equal c_final exactly.
std::optional<ScheduleError> validate_schedule(const Configuration& c_init,
                                               const Schedule& schedule,
                                               const Configuration& c_final);

/// Applies a whole schedule without validation.
Configuration apply_all(const Configuration& c, const Schedule& s);

/// Reverses a schedule: reversed step order, each move inverted.
Schedule reversed(const Schedule& s);

/// Concatenates schedule fragments.
Schedule concat(std::initializer_list<const Schedule*> parts);
void append(Schedule& dst, const Schedule& src);

}  // namespace sc
