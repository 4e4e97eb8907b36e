#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "slidingcubes/config.hpp"

namespace sc {

/// A module face on the boundary: the occupied cell and the direction of
/// the empty cell it borders.
struct ModuleFace {
    Coord cell;
    Coord dir;  // unit axis vector; cell + dir is empty
    Coord empty() const { return cell + dir; }
    friend bool operator==(const ModuleFace&, const ModuleFace&) = default;
    friend auto operator<=>(const ModuleFace&, const ModuleFace&) = default;
};

struct ModuleFaceHash {
    size_t operator()(const ModuleFace& f) const {
        return CoordHash{}(f.cell) * 31 + CoordHash{}(f.dir);
    }
};

struct PinchedEdge {
    Coord a, b;  // the two edge-adjacent, non-face-adjacent modules
    std::vector<ModuleFace> faces;  // the four incident module faces
};

/// Boundary faces grouped into faces (components of the complement) and
/// extended faces (faces merged across pinched edges).
class FaceAtlas {
  public:
    const std::vector<ModuleFace>& faces() const { return faces_; }
    size_t face_count() const { return face_count_; }
    size_t extended_face_count() const { return ext_count_; }
    int face_of(const ModuleFace& f) const;
    int extended_face_of(const ModuleFace& f) const;
    int outer_face() const { return outer_face_; }
    int outer_extended_face() const { return outer_ext_; }

    /// Face ids of the faces bordering an empty cell (deduplicated).
    std::vector<int> faces_at(const Coord& empty_cell) const;
    std::vector<int> extended_faces_at(const Coord& empty_cell) const;

    /// True iff some face of the module at `cell` lies in the given
    /// extended face.
    bool module_in_extended_face(const Coord& cell, int ext_id) const;

    friend FaceAtlas compute_face_atlas(const Configuration& c);
    friend class FaceDistance;

  private:
    std::vector<ModuleFace> faces_;
    std::unordered_map<ModuleFace, size_t, ModuleFaceHash> index_;
    std::vector<int> face_id_;  // per boundary face
    std::vector<int> ext_id_;
    size_t face_count_ = 0;
    size_t ext_count_ = 0;
    int outer_face_ = -1;
    int outer_ext_ = -1;
    const Configuration* config_ = nullptr;
};

FaceAtlas compute_face_atlas(const Configuration& c);

/// All pinched edges: lattice edges shared by two edge-adjacent,
/// non-face-adjacent modules whose two common neighbor cells are empty.
std::vector<PinchedEdge> pinched_edges(const Configuration& c);

/// Spec predicate: the two boundary faces bound the same empty cell, or a
/// module placed in f1's empty cell can reach f2's empty cell in one move
/// within C plus that module. Throws if either face is not a boundary face.
bool slide_adjacent(const Configuration& c, const ModuleFace& f1, const ModuleFace& f2);

/// A free module whose face lies in the outer extended face. Implements the
/// extremal-module recursion; falls back to a scan (the result is always
/// verified against the two predicates it promises).
Coord free_in_outer_extended_face(const Configuration& c);

/// BFS distances over the module-face graph (slide adjacency plus surgery
/// joins at pinched edges) restricted to one extended face.
class FaceDistance {
  public:
    FaceDistance(const Configuration& c, const FaceAtlas& atlas, int ext_id);

    /// Hop distance from the faces bordering `from_cell` to the faces
    /// bordering `to_cell`; -1 when unreachable within the extended face.
    int distance(const Coord& from_cell, const Coord& to_cell) const;

  private:
    const Configuration& c_;
    const FaceAtlas& atlas_;
    int ext_id_;
    std::vector<std::vector<int>> adj_;  // over boundary-face indices in atlas order
    std::vector<int> bfs(const std::vector<int>& sources) const;
    std::vector<int> faces_bordering(const Coord& cell) const;
};

}  // namespace sc
