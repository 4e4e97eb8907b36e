#pragma once

#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "slidingcubes/geometry.hpp"

namespace sc {

using CellVec = std::vector<Coord>;
using CellSet = std::unordered_set<Coord, CoordHash>;

enum class Norm { L1, Linf };

/// Open L1 neighborhood: the 6 face-adjacent cells.
CellVec neighbors_l1(const Coord& c);

/// Open Linf neighborhood: the 26 cells of the surrounding 3x3x3 box.
CellVec neighbors_linf(const Coord& c);

/// Iterated neighborhood of a cell set. With closed=true the set itself is
/// included (the closed r-neighborhood); with closed=false only the shell
/// accumulated by iterating the open neighborhood. r must be >= 1.
CellSet r_neighborhood(const CellSet& cells, int r, Norm norm, bool closed);

/// True iff the face-adjacency graph on `cells` is connected. Empty set is
/// not connected; a singleton is.
bool is_connected(const CellSet& cells);
bool is_connected(const CellVec& cells);

struct BoundingBox {
    Coord min;
    Coord max;  // inclusive
    int width() const { return max.x - min.x + 1; }
    int depth() const { return max.y - min.y + 1; }
    int height() const { return max.z - min.z + 1; }
};

/// A finite, nonempty, connected set of occupied cells.
class Configuration {
  public:
    explicit Configuration(CellVec cells);

    static Configuration unchecked(CellVec sorted_cells);

    const CellVec& cells() const { return cells_; }
    const CellSet& set() const { return set_; }
    size_t size() const { return cells_.size(); }
    bool contains(const Coord& c) const { return set_.count(c) != 0; }
    const BoundingBox& bbox() const { return bbox_; }

    Configuration translated(const Coord& by) const;

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.cells_ == b.cells_;
    }

  private:
    Configuration() = default;
    CellVec cells_;  // sorted lexicographically (x, y, z)
    CellSet set_;
    BoundingBox bbox_;
};

/// Free-set test: every subset removal of M leaves C connected. Uses the
/// equivalent characterization (C minus M connected, and every cell of M
/// face-adjacent to C minus M); the equivalence is covered by tests against
/// subset enumeration. Throws std::invalid_argument if M is not a subset of
/// C or M equals C.
bool is_free_set(const Configuration& c, const CellVec& m);
bool is_free_set(const CellSet& cells, const CellVec& m);

/// Singleton freeness for every module of C.
CellVec free_modules(const Configuration& c);

struct Projection2D {
    char axis;  // 'x', 'y' or 'z'
    std::vector<std::pair<int, int>> cells;  // sorted, deduplicated
    size_t area() const { return cells.size(); }
};

Projection2D project(const Configuration& c, char axis);

/// True iff for every cell u of C the whole axis-aligned cuboid between u
/// and the origin lies in C.
bool is_compact(const Configuration& c);

BoundingBox bounding_box(const CellVec& cells);

CellVec sorted_cells(const CellSet& cells);

}  // namespace sc
