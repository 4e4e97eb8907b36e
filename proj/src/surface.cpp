#include "slidingcubes/surface.hpp"

#include "slidingcubes/moves.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace sc {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<ModuleFace> boundary_faces(const Configuration& c) {
    std::vector<ModuleFace> out;
    for (const auto& cell : c.cells())
        for (const auto& d : kFaceDirs)
            if (!c.contains(cell + d)) out.push_back({cell, d});
    return out;
}

}  // namespace

int FaceAtlas::face_of(const ModuleFace& f) const {
    auto it = index_.find(f);
    if (it == index_.end()) throw std::invalid_argument("face_of: not a boundary face");
    return face_id_[it->second];
}

int FaceAtlas::extended_face_of(const ModuleFace& f) const {
    auto it = index_.find(f);
    if (it == index_.end()) throw std::invalid_argument("extended_face_of: not a boundary face");
    return ext_id_[it->second];
}

std::vector<int> FaceAtlas::faces_at(const Coord& empty_cell) const {
    std::vector<int> out;
    for (const auto& d : kFaceDirs) {
        ModuleFace f{empty_cell + d, -d};
        auto it = index_.find(f);
        if (it != index_.end()) out.push_back(face_id_[it->second]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> FaceAtlas::extended_faces_at(const Coord& empty_cell) const {
    std::vector<int> out;
    for (const auto& d : kFaceDirs) {
        ModuleFace f{empty_cell + d, -d};
        auto it = index_.find(f);
        if (it != index_.end()) out.push_back(ext_id_[it->second]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool FaceAtlas::module_in_extended_face(const Coord& cell, int ext) const {
    for (const auto& d : kFaceDirs) {
        ModuleFace f{cell, d};
        auto it = index_.find(f);
        if (it != index_.end() && ext_id_[it->second] == ext) return true;
    }
    return false;
}

FaceAtlas compute_face_atlas(const Configuration& c) {
    FaceAtlas atlas;
    atlas.config_ = &c;
    atlas.faces_ = boundary_faces(c);
    for (size_t i = 0; i < atlas.faces_.size(); ++i) atlas.index_.emplace(atlas.faces_[i], i);

    // Complement components within the bounding box inflated by one; every
    // empty cell beyond belongs to the outer component.
    BoundingBox r = c.bbox();
    r.min = r.min + Coord{-1, -1, -1};
    r.max = r.max + Coord{1, 1, 1};
    auto inside = [&](const Coord& p) {
        return p.x >= r.min.x && p.x <= r.max.x && p.y >= r.min.y && p.y <= r.max.y &&
               p.z >= r.min.z && p.z <= r.max.z;
    };
    std::unordered_map<Coord, int, CoordHash> comp;
    int next_comp = 0;
    int outer_comp = -1;
    for (int x = r.min.x; x <= r.max.x; ++x)
        for (int y = r.min.y; y <= r.max.y; ++y)
            for (int z = r.min.z; z <= r.max.z; ++z) {
                Coord p{x, y, z};
                if (c.contains(p) || comp.count(p)) continue;
                int id = next_comp++;
                bool touches_shell = false;
                std::vector<Coord> stack{p};
                comp[p] = id;
                while (!stack.empty()) {
                    Coord q = stack.back();
                    stack.pop_back();
                    if (q.x == r.min.x || q.x == r.max.x || q.y == r.min.y || q.y == r.max.y ||
                        q.z == r.min.z || q.z == r.max.z)
                        touches_shell = true;
                    for (const auto& d : kFaceDirs) {
                        Coord n = q + d;
                        if (!inside(n) || c.contains(n) || comp.count(n)) continue;
                        comp[n] = id;
                        stack.push_back(n);
                    }
                }
                if (touches_shell) outer_comp = id;  // all shell cells are one component
            }

    // Compact component ids to face ids over components that border modules.
    std::unordered_map<int, int> comp_to_face;
    atlas.face_id_.resize(atlas.faces_.size());
    for (size_t i = 0; i < atlas.faces_.size(); ++i) {
        int cid = comp.at(atlas.faces_[i].empty());
        auto [it, fresh] = comp_to_face.emplace(cid, (int)comp_to_face.size());
        atlas.face_id_[i] = it->second;
    }
    atlas.face_count_ = comp_to_face.size();
    atlas.outer_face_ = comp_to_face.count(outer_comp) ? comp_to_face.at(outer_comp) : -1;

    // Extended faces: merge the two same-module face pairs at each pinch.
    UnionFind uf(atlas.face_count_);
    for (const auto& pe : pinched_edges(c)) {
        uf.unite(atlas.face_of(pe.faces[0]), atlas.face_of(pe.faces[1]));
        uf.unite(atlas.face_of(pe.faces[2]), atlas.face_of(pe.faces[3]));
    }
    std::unordered_map<int, int> root_to_ext;
    atlas.ext_id_.resize(atlas.faces_.size());
    std::vector<int> face_to_ext(atlas.face_count_);
    for (size_t f = 0; f < atlas.face_count_; ++f) {
        int root = uf.find((int)f);
        auto [it, fresh] = root_to_ext.emplace(root, (int)root_to_ext.size());
        face_to_ext[f] = it->second;
    }
    for (size_t i = 0; i < atlas.faces_.size(); ++i)
        atlas.ext_id_[i] = face_to_ext[atlas.face_id_[i]];
    atlas.ext_count_ = root_to_ext.size();
    atlas.outer_ext_ = atlas.outer_face_ >= 0 ? face_to_ext[atlas.outer_face_] : -1;
    return atlas;
}

std::vector<PinchedEdge> pinched_edges(const Configuration& c) {
    std::vector<PinchedEdge> out;
    for (const auto& a : c.cells()) {
        for (size_t i = 0; i < kFaceDirs.size(); ++i) {
            for (size_t j = 0; j < kFaceDirs.size(); ++j) {
                const Coord& d1 = kFaceDirs[i];
                const Coord& d2 = kFaceDirs[j];
                if (d1.x * d2.x + d1.y * d2.y + d1.z * d2.z != 0) continue;
                Coord b = a + d1 + d2;
                if (!(a < b)) continue;  // canonical orientation, once per edge
                if (!c.contains(b)) continue;
                if (c.contains(a + d1) || c.contains(a + d2)) continue;
                PinchedEdge pe;
                pe.a = a;
                pe.b = b;
                pe.faces = {ModuleFace{a, d1}, ModuleFace{a, d2}, ModuleFace{b, -d1},
                            ModuleFace{b, -d2}};
                out.push_back(std::move(pe));
            }
        }
    }
    return out;
}

bool slide_adjacent(const Configuration& c, const ModuleFace& f1, const ModuleFace& f2) {
    auto check = [&](const ModuleFace& f) {
        if (!c.contains(f.cell) || c.contains(f.empty()) || !is_unit_axis(f.dir))
            throw std::invalid_argument("slide_adjacent: not a boundary face");
    };
    check(f1);
    check(f2);
    if (f1 == f2) return false;
    Coord e1 = f1.empty(), e2 = f2.empty();
    if (e1 == e2) return true;

    // One move of a module at e1 within C plus that module.
    CellSet aug = c.set();
    aug.insert(e1);
    Coord d = e2 - e1;
    if (d.l1() == 1) {
        if (!aug.count(e2) && is_legal_slide(aug, e1, e2)) return true;
    }
    if (d.l1() == 2 && d.linf() == 1) {
        // convex: to = e1 + u + v for the two orderings of the axes
        Coord parts[2];
        int k = 0;
        if (d.x != 0) parts[k++] = {d.x, 0, 0};
        if (d.y != 0) parts[k++] = {0, d.y, 0};
        if (d.z != 0) parts[k++] = {0, 0, d.z};
        if (k == 2) {
            for (int swap = 0; swap < 2; ++swap) {
                Coord u = parts[swap], v = parts[1 - swap];
                if (aug.count(e1 + u) && !aug.count(e1 + v) && !aug.count(e1 + u + v)) return true;
            }
        }
    }
    return false;
}

namespace {

bool free_and_outer(const Configuration& c, const FaceAtlas& atlas, const Coord& m) {
    if (c.size() > 1 && !is_free_set(c, {m})) return false;
    return atlas.module_in_extended_face(m, atlas.outer_extended_face());
}

Coord extremal_max(const CellVec& cells) {
    // highest, then westmost, then southmost
    Coord best = cells.front();
    for (const auto& c : cells) {
        if (c.z > best.z || (c.z == best.z && (c.x < best.x || (c.x == best.x && c.y < best.y))))
            best = c;
    }
    return best;
}

Coord extremal_min(const CellVec& cells) {
    Coord best = cells.front();
    for (const auto& c : cells) {
        if (c.z < best.z || (c.z == best.z && (c.x > best.x || (c.x == best.x && c.y > best.y))))
            best = c;
    }
    return best;
}

void candidates_rec(const Configuration& c, CellVec& out, int depth) {
    if (depth > (int)c.size()) return;
    Coord mx = extremal_max(c.cells());
    Coord mn = extremal_min(c.cells());
    out.push_back(mx);
    out.push_back(mn);
    if (c.size() <= 2) return;
    for (const Coord& cut : {mx, mn}) {
        if (c.size() > 1 && is_free_set(c, {cut})) continue;  // not a cut module
        CellSet rest = c.set();
        rest.erase(cut);
        CellSet seen;
        for (const auto& start : rest) {
            if (seen.count(start)) continue;
            CellVec comp{start};
            seen.insert(start);
            for (size_t i = 0; i < comp.size(); ++i)
                for (const auto& d : kFaceDirs) {
                    Coord n = comp[i] + d;
                    if (rest.count(n) && !seen.count(n)) {
                        seen.insert(n);
                        comp.push_back(n);
                    }
                }
            candidates_rec(Configuration(comp), out, depth + 1);
        }
    }
}

}  // namespace

Coord free_in_outer_extended_face(const Configuration& c) {
    FaceAtlas atlas = compute_face_atlas(c);
    if (c.size() == 1) return c.cells().front();

    CellVec cand;
    candidates_rec(c, cand, 0);
    for (const auto& m : cand)
        if (free_and_outer(c, atlas, m)) return m;
    for (const auto& m : c.cells())
        if (free_and_outer(c, atlas, m)) return m;
    throw std::logic_error("free_in_outer_extended_face: no candidate found");
}

FaceDistance::FaceDistance(const Configuration& c, const FaceAtlas& atlas, int ext_id)
    : c_(c), atlas_(atlas), ext_id_(ext_id) {
    size_t n = atlas.faces_.size();
    adj_.assign(n, {});
    auto idx = [&](const ModuleFace& f) -> int {
        auto it = atlas.index_.find(f);
        return it == atlas.index_.end() ? -1 : (int)it->second;
    };
    auto link = [&](int a, int b) {
        if (a < 0 || b < 0 || a == b) return;
        adj_[a].push_back(b);
        adj_[b].push_back(a);
    };
    // faces sharing an empty cell
    std::unordered_map<Coord, std::vector<int>, CoordHash> by_cell;
    for (size_t i = 0; i < n; ++i) by_cell[atlas.faces_[i].empty()].push_back((int)i);
    for (auto& [cell, group] : by_cell)
        for (size_t i = 0; i < group.size(); ++i)
            for (size_t j = i + 1; j < group.size(); ++j) link(group[i], group[j]);
    for (size_t i = 0; i < n; ++i) {
        const ModuleFace& f = atlas.faces_[i];
        // parallel faces of adjacent modules
        for (const auto& w : kFaceDirs) {
            if (w == f.dir || w == -f.dir) continue;
            link((int)i, idx({f.cell + w, f.dir}));
        }
        // same module, around an empty corner
        for (const auto& d2 : kFaceDirs) {
            if (d2.x * f.dir.x + d2.y * f.dir.y + d2.z * f.dir.z != 0) continue;
            if (c.contains(f.cell + f.dir + d2)) continue;
            link((int)i, idx({f.cell, d2}));
        }
    }
    // surgery joins at pinched edges
    for (const auto& pe : pinched_edges(c)) {
        link(idx(pe.faces[0]), idx(pe.faces[1]));
        link(idx(pe.faces[2]), idx(pe.faces[3]));
    }
}

std::vector<int> FaceDistance::faces_bordering(const Coord& cell) const {
    std::vector<int> out;
    for (const auto& d : kFaceDirs) {
        ModuleFace f{cell + d, -d};
        auto it = atlas_.index_.find(f);
        if (it != atlas_.index_.end() && atlas_.ext_id_[it->second] == ext_id_)
            out.push_back((int)it->second);
    }
    return out;
}

std::vector<int> FaceDistance::bfs(const std::vector<int>& sources) const {
    std::vector<int> dist(adj_.size(), -1);
    std::deque<int> q;
    for (int s : sources) {
        if (dist[s] == -1) {
            dist[s] = 0;
            q.push_back(s);
        }
    }
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : adj_[u]) {
            if (atlas_.ext_id_[v] != ext_id_) continue;
            if (dist[v] == -1) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    return dist;
}

int FaceDistance::distance(const Coord& from_cell, const Coord& to_cell) const {
    auto src = faces_bordering(from_cell);
    auto dst = faces_bordering(to_cell);
    if (src.empty() || dst.empty()) return -1;
    auto dist = bfs(src);
    int best = -1;
    for (int t : dst)
        if (dist[t] >= 0 && (best == -1 || dist[t] < best)) best = dist[t];
    return best;
}

}  // namespace sc
