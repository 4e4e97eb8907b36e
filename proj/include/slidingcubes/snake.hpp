#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slidingcubes/moves.hpp"

namespace sc {

/// Validating schedule assembler: every appended transformation is checked
/// against the running configuration and applied.
class ScheduleBuilder {
  public:
    explicit ScheduleBuilder(Configuration initial) : cur_(std::move(initial)) {}

    const Configuration& config() const { return cur_; }
    const Schedule& schedule() const { return sched_; }
    Schedule take_schedule() { return std::move(sched_); }
    size_t makespan() const { return sched_.steps.size(); }

    /// Validates and applies; throws std::runtime_error on rejection.
    void step(Transformation t);
    void step(const Move& m) { step(Transformation{m}); }
    bool try_step(const Transformation& t);

    /// Appends a prevalidated fragment produced against the current config.
    void splice(const Schedule& fragment);

  private:
    Configuration cur_;
    Schedule sched_;
};

/// Spine path: head endpoint, minor vertices, evenly spaced straight major
/// runs, tail endpoint.
struct SpinePath {
    CellVec vertices;            // head first
    std::vector<size_t> majors;  // indices into vertices, increasing

    const Coord& head() const { return vertices.front(); }
    const Coord& tail() const { return vertices.back(); }
    size_t length() const { return vertices.size(); }

    bool is_major(size_t i) const;
    /// True when the spine changes direction at vertex i.
    bool bends_at(size_t i) const;

    SpinePath reversed() const;
};

/// Validation per the spine rules; returns the violated rule's name.
std::optional<std::string> validate_spine(const SpinePath& p);

struct CellSpace {
    CellSet interior;  // closed Linf neighborhood of the spine
    CellSet skin;      // open L1 neighborhood of the interior
    CellSet all;       // union
    /// Interior cells adjacent to exactly three skin cells; these must be
    /// occupied to keep the skin plates connected.
    CellSet supports;
};

CellSpace cell_space(const SpinePath& p);

/// Section id for a cell: -1 head section, -2 tail section, otherwise the
/// index of the owning non-endpoint major vertex.
int section_of(const SpinePath& p, const Coord& cell);

struct SnakeState {
    SpinePath spine;
    CellSet owned;  // cells currently occupied by modules the snake may move
    CellSet held;   // entered cells whose non-free modules must be restored

    size_t owned_count() const { return owned.size(); }
};

/// Checks the snake structure against a configuration: valid spine, skin
/// full, supports occupied, occupied bookkeeping inside the cell space, and
/// a connected snake region. Returns the violated rule's name.
std::optional<std::string> validate_snake(const SnakeState& s, const Configuration& c);

/// Extracts the canonical snake from a fully occupied L1 ball of radius 12:
/// an 11-vertex vertical spine through the center, skin and supports plus a
/// fixed complement of interior cargo nearest the head, 198 owned modules.
SnakeState find_snake_in_ball(const Configuration& c, const Coord& center);

/// Builds a free-standing straight snake with a full head section and the
/// given number of fully occupied interior layers behind it (counted from
/// the head end). Returns the state; cells are the configuration.
SnakeState make_straight_snake(const Coord& head, const Coord& axis_toward_tail, size_t length,
                               size_t full_layers);
Configuration snake_configuration(const SnakeState& s);

/// Extends the spine one unit at the head. Newly entered cells containing a
/// free module become owned, others held; the fragment appended to the
/// builder has constant makespan when cargo sits near the head.
void push(ScheduleBuilder& b, SnakeState& s, const Coord& dir);

/// Shortens the spine one unit at the tail, retracting the departing
/// modules into the tail interior; a module is left behind for every held
/// cell that exits the cell space.
void pull(ScheduleBuilder& b, SnakeState& s);

/// Swaps head and tail roles and restocks the new head section.
void reverse_snake(ScheduleBuilder& b, SnakeState& s);

/// Splits at a major vertex: the suffix from that vertex becomes the active
/// snake, the prefix is parked. The act of splitting fills the shared end
/// plate between them.
struct ForkResult {
    SnakeState active;
    SnakeState parked;
};
ForkResult fork(ScheduleBuilder& b, const SnakeState& s, size_t major_index);

/// Rejoins two snakes whose spines align into one valid spine (the inverse
/// of fork). Pure bookkeeping when the shared wall is already in place.
SnakeState join(ScheduleBuilder& b, const SnakeState& active, const SnakeState& parked);

/// Takes ownership of a free module near a major vertex, teleporting it
/// into the cell space via a temporary fork and a short push/pull round
/// trip when it lies outside.
void consume(ScheduleBuilder& b, SnakeState& s, const Coord& m);

/// Depth-first traversal: takes ownership of the module sequence, moving
/// the head between meta-cell centers with pushes, pulls, forks and joins.
/// The sequence must visit face-adjacent meta-cells (a DFS order).
void dfs_traverse(ScheduleBuilder& b, SnakeState& s, const CellVec& modules, int meta = 5);

}  // namespace sc
