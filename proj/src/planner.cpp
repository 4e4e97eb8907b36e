#include "slidingcubes/planner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <stdexcept>

namespace sc {

namespace {

bool adjacent_to(const CellSet& set, const Coord& c) {
    for (const auto& d : kFaceDirs)
        if (set.count(c + d)) return true;
    return false;
}

Coord zyx_min(const Configuration& c) {
    Coord best = c.cells().front();
    for (const auto& cell : c.cells()) {
        auto key = [](const Coord& p) { return std::array<int, 3>{p.z, p.y, p.x}; };
        if (key(cell) < key(best)) best = cell;
    }
    return best;
}

// Articulation cells of the occupancy graph (iterative lowlink).
CellSet articulation_cells(const Configuration& c) {
    std::unordered_map<Coord, int, CoordHash> disc;
    std::unordered_map<Coord, int, CoordHash> low;
    CellSet cut;
    int counter = 0;
    struct Frame {
        Coord v;
        Coord parent;
        size_t next_dir;
    };
    for (const auto& start : c.cells()) {
        if (disc.count(start)) continue;
        int root_children = 0;
        std::vector<Frame> stack{{start, start, 0}};
        disc[start] = low[start] = counter++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next_dir < kFaceDirs.size()) {
                Coord n = f.v + kFaceDirs[f.next_dir++];
                if (!c.contains(n) || n == f.parent) continue;
                auto it = disc.find(n);
                if (it != disc.end()) {
                    low[f.v] = std::min(low[f.v], it->second);
                } else {
                    disc[n] = low[n] = counter++;
                    if (f.v == start) ++root_children;
                    stack.push_back({n, f.v, 0});
                }
            } else {
                Frame done = f;
                stack.pop_back();
                if (!stack.empty()) {
                    Frame& p = stack.back();
                    low[p.v] = std::min(low[p.v], low[done.v]);
                    if (p.v != start && low[done.v] >= disc[p.v]) cut.insert(p.v);
                }
            }
        }
        if (root_children >= 2) cut.insert(start);
    }
    return cut;
}

// Single-module relocation across the configuration: walks the module from
// `from` to `to` over empty cells, validating each emitted step.
struct Walker {
    ScheduleBuilder& b;
    int margin = 2;

    bool inside(const BoundingBox& r, const Coord& p) const {
        return p.x >= r.min.x - margin && p.x <= r.max.x + margin && p.y >= r.min.y - margin &&
               p.y <= r.max.y + margin && p.z >= r.min.z - margin && p.z <= r.max.z + margin;
    }

    std::vector<Move> moves_at(const CellSet& occ, const Coord& home, const Coord& at,
                               const BoundingBox& box) const {
        std::vector<Move> out;
        auto occupied = [&](const Coord& p) { return p != home && (occ.count(p) || p == at); };
        for (const auto& d : kFaceDirs) {
            Coord to = at + d;
            if (occupied(to) || !inside(box, to)) continue;
            for (const auto& w : kFaceDirs) {
                if (w == d || w == -d) continue;
                if (occupied(at + w) && occupied(to + w)) {
                    out.push_back(Move::slide(at, to));
                    break;
                }
            }
        }
        for (const auto& u : kFaceDirs) {
            if (!occupied(at + u)) continue;
            for (const auto& v : kFaceDirs) {
                if (u.x * v.x + u.y * v.y + u.z * v.z != 0) continue;
                Coord corner = at + v, to = at + u + v;
                if (occupied(corner) || occupied(to) || !inside(box, to)) continue;
                out.push_back(Move::convex(at, u, v));
            }
        }
        return out;
    }

    bool route(const Coord& from, const Coord& to) {
        if (from == to) return true;
        const CellSet& occ = b.config().set();
        if (!occ.count(from) || occ.count(to)) return false;
        BoundingBox box = b.config().bbox();
        std::unordered_map<Coord, Move, CoordHash> parent;
        std::deque<Coord> q{from};
        CellSet seen{from};
        bool found = false;
        while (!q.empty() && !found) {
            Coord p = q.front();
            q.pop_front();
            for (const auto& mv : moves_at(occ, from, p, box)) {
                if (seen.count(mv.to)) continue;
                seen.insert(mv.to);
                parent.emplace(mv.to, mv);
                if (mv.to == to) {
                    found = true;
                    break;
                }
                q.push_back(mv.to);
            }
        }
        if (!found) return false;
        std::vector<Move> path;
        Coord cur = to;
        while (cur != from) {
            const Move& mv = parent.at(cur);
            path.push_back(mv);
            cur = mv.from;
        }
        std::reverse(path.begin(), path.end());
        size_t done = 0;
        for (const auto& mv : path) {
            if (!b.try_step(Transformation{mv})) break;
            ++done;
        }
        if (done == path.size()) return true;
        // stranded mid-route: walk back to the start
        for (size_t i = done; i > 0; --i)
            if (!b.try_step(Transformation{path[i - 1].reversed()}))
                throw std::runtime_error("walker: stranded module could not retreat");
        return false;
    }
};

}  // namespace

Configuration canonical_pile(size_t n, const Coord& anchor) {
    int w = 1;
    while ((size_t)w * w * w < n) ++w;
    CellVec cells;
    cells.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        int z = (int)(i / ((size_t)w * w));
        int rem = (int)(i % ((size_t)w * w));
        cells.push_back(anchor + Coord{rem % w, rem / w, z});
    }
    return Configuration(std::move(cells));
}

Schedule melt_to_pile(const Configuration& c, const Coord& anchor) {
    Configuration target = canonical_pile(c.size(), anchor);
    if (!c.contains(anchor)) throw std::invalid_argument("melt_to_pile: anchor not occupied");
    ScheduleBuilder b(c);
    Walker walker{b};

    auto pile_index = [&](const Coord& cell) -> long {
        const CellVec& t = target.cells();
        auto it = std::lower_bound(t.begin(), t.end(), cell);
        if (it == t.end() || !(*it == cell)) return -1;
        // row-major rank
        Coord rel = cell - anchor;
        int w = target.bbox().width();
        return (long)rel.z * w * w + (long)rel.y * w + rel.x;
    };
    (void)pile_index;

    // canonical fill order of the pile
    CellVec order;
    {
        int w = target.bbox().width();
        for (size_t i = 0; i < c.size(); ++i) {
            int z = (int)(i / ((size_t)w * w));
            int rem = (int)(i % ((size_t)w * w));
            order.push_back(anchor + Coord{rem % w, rem / w, z});
        }
    }

    size_t unlock_budget = 4 * c.size() + 16;
    for (size_t guard = 0; guard < 8 * c.size() + 64; ++guard) {
        // first missing pile cell in canonical order
        std::optional<Coord> target_cell;
        CellSet filled;
        for (const auto& cell : order) {
            if (b.config().contains(cell))
                filled.insert(cell);
            else if (!target_cell)
                target_cell = cell;
        }
        if (!target_cell) break;

        // movable blob cells: occupied, not part of the filled prefix region,
        // not articulation points
        CellSet locked = filled;
        CellSet cut = articulation_cells(b.config());
        CellVec candidates;
        for (const auto& cell : b.config().cells())
            if (!locked.count(cell) && !cut.count(cell)) candidates.push_back(cell);
        if (candidates.empty())
            throw std::runtime_error("melt: no movable module");

        // prefer peeling far from the pile
        std::sort(candidates.begin(), candidates.end(), [&](const Coord& a, const Coord& bb) {
            int da = l1_dist(a, *target_cell), db = l1_dist(bb, *target_cell);
            if (da != db) return da > db;
            return a < bb;
        });

        bool done = false;
        size_t tries = 0;
        for (const auto& m : candidates) {
            if (tries++ > 24) break;
            if (walker.route(m, *target_cell)) {
                done = true;
                break;
            }
        }
        if (done) continue;

        // unlock: park the deepest movable module nearer the target
        bool unlocked = false;
        if (unlock_budget > 0) {
            for (const auto& m : candidates) {
                const CellSet& occ = b.config().set();
                BoundingBox box = b.config().bbox();
                std::deque<Coord> q{m};
                CellSet seen{m};
                std::unordered_map<Coord, Move, CoordHash> parent;
                while (!q.empty()) {
                    Coord p = q.front();
                    q.pop_front();
                    for (const auto& mv : walker.moves_at(occ, m, p, box)) {
                        if (seen.count(mv.to)) continue;
                        seen.insert(mv.to);
                        parent.emplace(mv.to, mv);
                        q.push_back(mv.to);
                    }
                }
                Coord best = m;
                for (const auto& p : seen)
                    if (l1_dist(p, *target_cell) < l1_dist(best, *target_cell)) best = p;
                if (best == m) continue;
                std::vector<Move> path;
                Coord cur = best;
                while (cur != m) {
                    const Move& mv = parent.at(cur);
                    path.push_back(mv);
                    cur = mv.from;
                }
                std::reverse(path.begin(), path.end());
                bool ok = true;
                for (const auto& mv : path)
                    if (!b.try_step(Transformation{mv})) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    --unlock_budget;
                    unlocked = true;
                    break;
                }
            }
        }
        if (!unlocked)
            throw std::runtime_error("melt: stuck before pile completion");
    }
    if (!(b.config() == target)) throw std::runtime_error("melt: did not reach the pile");
    return b.take_schedule();
}

Schedule translate_pile(const Configuration& pile, const Coord& delta) {
    ScheduleBuilder b(pile);
    Coord remaining = delta;
    auto sign = [](int v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    while (remaining != Coord{0, 0, 0}) {
        Coord u{0, 0, 0};
        if (remaining.x != 0) u = {sign(remaining.x), 0, 0};
        else if (remaining.y != 0) u = {0, sign(remaining.y), 0};
        else u = {0, 0, sign(remaining.z)};

        // two lateral axes for the parity classes
        auto lat = [&](const Coord& cell) -> std::pair<int, int> {
            if (u.x != 0) return {cell.y, cell.z};
            if (u.y != 0) return {cell.x, cell.z};
            return {cell.x, cell.y};
        };
        for (int pa = 0; pa < 2; ++pa)
            for (int pb = 0; pb < 2; ++pb) {
                Transformation t;
                for (const auto& cell : b.config().cells()) {
                    auto [a, bb] = lat(cell);
                    if (((a % 2 + 2) % 2) != pa || ((bb % 2 + 2) % 2) != pb) continue;
                    t.push_back(Move::slide(cell, cell + u));
                }
                if (!t.empty()) b.step(t);
            }
        remaining = remaining - u;
    }
    return b.take_schedule();
}

Schedule translated(const Schedule& s, const Coord& delta) {
    Schedule out;
    out.steps.reserve(s.steps.size());
    for (const auto& t : s.steps) {
        Transformation nt;
        nt.reserve(t.size());
        for (const auto& m : t) {
            Move n = m;
            n.from = m.from + delta;
            n.to = m.to + delta;
            n.corner = m.corner + delta;
            nt.push_back(n);
        }
        out.steps.push_back(std::move(nt));
    }
    return out;
}

// --------------------------------------------------------------------------
// Meta grid and spanning trees
// --------------------------------------------------------------------------

MetaGrid make_meta_grid(const Configuration& c) {
    MetaGrid g;
    g.origin = c.bbox().min;
    auto pad = [&](int extent) { return (extent + 4) / 5; };
    g.dims = {pad(c.bbox().width()), pad(c.bbox().depth()), pad(c.bbox().height())};
    return g;
}

size_t SpanningTrees::subtree_size(const Coord& cell) const {
    size_t n = 1;
    auto it = kids.find(cell);
    if (it != kids.end())
        for (const auto& k : it->second) n += subtree_size(k);
    return n;
}

CellVec SpanningTrees::subtree_cells(const Coord& cell) const {
    CellVec out{cell};
    for (size_t i = 0; i < out.size(); ++i) {
        auto it = kids.find(out[i]);
        if (it != kids.end())
            for (const auto& k : it->second) out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

CellVec SpanningTrees::dfs_order(const Coord& cell) const {
    CellVec out;
    std::function<void(const Coord&)> rec = [&](const Coord& v) {
        out.push_back(v);
        auto it = kids.find(v);
        if (it != kids.end())
            for (const auto& k : it->second) rec(k);
    };
    rec(cell);
    return out;
}

SpanningTrees build_trees(const Configuration& c) {
    SpanningTrees t;
    t.grid = make_meta_grid(c);

    // per-meta-cell components
    std::unordered_map<Coord, int, CoordHash> comp_of;
    for (const auto& cell : c.cells()) {
        if (comp_of.count(cell)) continue;
        Coord mc = t.grid.meta_of(cell);
        CellVec comp{cell};
        comp_of[cell] = (int)t.components.size();
        for (size_t i = 0; i < comp.size(); ++i)
            for (const auto& d : kFaceDirs) {
                Coord n = comp[i] + d;
                if (c.contains(n) && !comp_of.count(n) && t.grid.meta_of(n) == mc) {
                    comp_of[n] = (int)t.components.size();
                    comp.push_back(n);
                }
            }
        std::sort(comp.begin(), comp.end());
        t.components.push_back(std::move(comp));
    }

    // component adjacency and a BFS tree over it
    size_t nc = t.components.size();
    std::vector<std::vector<int>> adj(nc);
    for (size_t i = 0; i < nc; ++i)
        for (const auto& cell : t.components[i])
            for (const auto& d : kFaceDirs) {
                Coord n = cell + d;
                auto it = comp_of.find(n);
                if (it != comp_of.end() && (size_t)it->second != i) adj[i].push_back(it->second);
            }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    Coord root_cell = c.cells().front();  // lexicographic minimum
    t.component_root = comp_of.at(root_cell);
    t.component_parent.assign(nc, -1);
    std::vector<bool> seen(nc, false);
    std::deque<int> q{t.component_root};
    seen[t.component_root] = true;
    while (!q.empty()) {
        int i = q.front();
        q.pop_front();
        for (int j : adj[i])
            if (!seen[j]) {
                seen[j] = true;
                t.component_parent[j] = i;
                q.push_back(j);
            }
    }

    // component roots: lexicographically smallest module adjacent to the
    // parent component (arbitrary for the root component)
    std::vector<Coord> comp_root(nc);
    std::vector<Coord> comp_attach(nc);  // module in the parent the root hangs off
    for (size_t i = 0; i < nc; ++i) {
        if ((int)i == t.component_root) {
            comp_root[i] = root_cell;
            continue;
        }
        int p = t.component_parent[i];
        std::optional<Coord> best;
        Coord attach;
        for (const auto& cell : t.components[i])
            for (const auto& d : kFaceDirs) {
                Coord n = cell + d;
                auto it = comp_of.find(n);
                if (it != comp_of.end() && it->second == p) {
                    if (!best || cell < *best || (cell == *best && n < attach)) {
                        best = cell;
                        attach = n;
                    }
                }
            }
        comp_root[i] = *best;
        comp_attach[i] = attach;
    }

    // DFS within each component, then hook component roots to their parents
    t.root = root_cell;
    for (size_t i = 0; i < nc; ++i) {
        CellSet comp_set(t.components[i].begin(), t.components[i].end());
        CellSet visited;
        std::vector<Coord> stack{comp_root[i]};
        visited.insert(comp_root[i]);
        t.parent[comp_root[i]] = (int)i == t.component_root ? comp_root[i] : comp_attach[i];
        while (!stack.empty()) {
            Coord v = stack.back();
            stack.pop_back();
            CellVec ns;
            for (const auto& d : kFaceDirs) {
                Coord n = v + d;
                if (comp_set.count(n) && !visited.count(n)) ns.push_back(n);
            }
            std::sort(ns.begin(), ns.end());
            for (const auto& n : ns) {
                visited.insert(n);
                t.parent[n] = v;
                stack.push_back(n);
            }
        }
    }
    for (const auto& [cell, par] : t.parent)
        if (!(cell == t.root)) t.kids[par].push_back(cell);
    for (auto& [cell, list] : t.kids) std::sort(list.begin(), list.end());
    return t;
}

Coord find_subtree(const SpanningTrees& t, size_t target) {
    // iterative sizes
    std::unordered_map<Coord, size_t, CoordHash> size;
    std::function<size_t(const Coord&)> rec = [&](const Coord& v) -> size_t {
        size_t n = 1;
        auto it = t.kids.find(v);
        if (it != t.kids.end())
            for (const auto& k : it->second) n += rec(k);
        size[v] = n;
        return n;
    };
    size_t total = rec(t.root);
    if (target > total) throw std::invalid_argument("find_subtree: target exceeds tree size");

    Coord p = t.root;
    while (size.at(p) > 5 * target) {
        auto it = t.kids.find(p);
        std::optional<Coord> next;
        size_t best = 0;
        if (it != t.kids.end())
            for (const auto& k : it->second)
                if (size.at(k) > best) {
                    best = size.at(k);
                    next = k;
                }
        if (!next || best < target) break;
        p = *next;
    }
    if (size.at(p) >= target && size.at(p) <= 5 * target) return p;
    // fallback scan for any satisfying node
    std::optional<Coord> found;
    for (const auto& [cell, sz] : size)
        if (sz >= target && sz <= 5 * target && (!found || cell < *found)) found = cell;
    if (found) return *found;
    // no node satisfies the band; return the smallest subtree above target
    Coord best_cell = t.root;
    size_t best_sz = total;
    for (const auto& [cell, sz] : size)
        if (sz >= target && (sz < best_sz || (sz == best_sz && cell < best_cell))) {
            best_sz = sz;
            best_cell = cell;
        }
    return best_cell;
}

// --------------------------------------------------------------------------
// Ball growth by teleport composition
// --------------------------------------------------------------------------

GrowBallResult grow_ball(const Configuration& c, const SpanningTrees& t,
                         const Coord& subtree_root) {
    CellVec material = t.subtree_cells(subtree_root);
    if (material.size() < 2625)
        throw std::invalid_argument("grow_ball: subtree smaller than 2625 modules");

    // path root, m1..m4 down the heaviest children
    CellVec path{subtree_root};
    while (path.size() < 5) {
        auto it = t.kids.find(path.back());
        if (it == t.kids.end() || it->second.empty()) break;
        Coord heavy = it->second.front();
        size_t best = 0;
        for (const auto& k : it->second) {
            size_t sz = t.subtree_size(k);
            if (sz > best) {
                best = sz;
                heavy = k;
            }
        }
        path.push_back(heavy);
    }
    if (path.size() < 4) throw std::invalid_argument("grow_ball: no descending path in subtree");

    ScheduleBuilder b(c);
    CellSet mat(material.begin(), material.end());

    auto try_center = [&](const Coord& center) -> bool {
        // fill the L1 ball of radius 12 around the center, shell by shell
        for (int r = 1; r <= 12; ++r) {
            CellVec shell;
            for (int dx = -r; dx <= r; ++dx)
                for (int dy = -(r - std::abs(dx)); dy <= r - std::abs(dx); ++dy) {
                    int dz = r - std::abs(dx) - std::abs(dy);
                    for (int s : {dz, -dz}) {
                        Coord cell = center + Coord{dx, dy, s};
                        shell.push_back(cell);
                        if (dz == 0) break;
                    }
                }
            std::sort(shell.begin(), shell.end());
            shell.erase(std::unique(shell.begin(), shell.end()), shell.end());
            for (int pass = 0; pass < 3; ++pass) {
                bool missing = false;
                for (const auto& e : shell) {
                    if (b.config().contains(e)) continue;
                    missing = true;
                    // source: farthest free material module on the outer face
                    CellVec sources = sorted_cells(mat);
                    std::sort(sources.begin(), sources.end(),
                              [&](const Coord& a, const Coord& bb) {
                                  int da = l1_dist(a, center), db = l1_dist(bb, center);
                                  if (da != db) return da > db;
                                  return a < bb;
                              });
                    bool placed = false;
                    size_t tries = 0;
                    for (const auto& m : sources) {
                        if (l1_dist(m, center) <= r && b.config().contains(e)) break;
                        if (m == e) continue;
                        if (tries > 40) break;
                        TeleportRequest req{b.config(), sorted_cells(mat), m, e};
                        if (check_teleport_preconditions(req)) continue;
                        ++tries;
                        try {
                            Schedule part = teleport(req);
                            b.splice(part);
                            mat.erase(m);
                            mat.insert(e);
                            placed = true;
                            break;
                        } catch (const std::exception&) {
                            continue;
                        }
                    }
                    if (!placed && pass == 2) return false;
                }
                if (!missing) break;
            }
            for (const auto& e : shell)
                if (!b.config().contains(e)) return false;
        }
        return true;
    };

    for (size_t k = 1; k + 1 < path.size(); ++k) {
        if (try_center(path[k])) return {b.take_schedule(), path[k]};
        // retry from scratch around the next path module
        b = ScheduleBuilder(c);
        mat = CellSet(material.begin(), material.end());
    }
    throw std::runtime_error("grow_ball: no viable center");
}

// --------------------------------------------------------------------------
// Parity sweeps, cuboid shaping and the planner entry point
// --------------------------------------------------------------------------

namespace {

// One parity phase: the class of modules selected by the parities of the two
// axes orthogonal to u all shift one step along u when the chain allows it.
// Returns true when something moved.
bool sweep_phase(ScheduleBuilder& b, const Coord& u, int pa, int pb, const Coord& floor) {
    auto lat = [&](const Coord& cell) -> std::pair<int, int> {
        if (u.x != 0) return {cell.y, cell.z};
        if (u.y != 0) return {cell.x, cell.z};
        return {cell.x, cell.y};
    };
    auto in_class = [&](const Coord& cell) {
        auto [a, bb] = lat(cell);
        return ((a % 2 + 2) % 2) == pa && ((bb % 2 + 2) % 2) == pb;
    };
    auto bounded = [&](const Coord& cell) {
        return cell.x >= floor.x && cell.y >= floor.y && cell.z >= floor.z;
    };
    const CellSet& occ = b.config().set();
    // chain resolution: a class module moves when its target is empty or its
    // target's occupant (same class) moves as well
    std::unordered_map<Coord, int, CoordHash> state;  // 1 moves, 0 blocked
    std::function<int(const Coord&)> moves = [&](const Coord& cell) -> int {
        auto it = state.find(cell);
        if (it != state.end()) return it->second;
        state[cell] = 0;  // provisional: cycles block
        Coord to = cell + u;
        int result = 0;
        if (bounded(to)) {
            if (!occ.count(to))
                result = 1;
            else if (in_class(to))
                result = moves(to);
        }
        state[cell] = result;
        return result;
    };
    Transformation t;
    for (const auto& cell : b.config().cells()) {
        if (!in_class(cell)) continue;
        if (moves(cell)) t.push_back(Move::slide(cell, cell + u));
    }
    if (t.empty()) return false;
    if (b.try_step(t)) return true;
    // fall back: drop movers without a support pair, then try chains one by
    // one; correctness over speed
    Transformation supported;
    for (const auto& mv : t) {
        bool ok = false;
        for (const auto& w : kFaceDirs) {
            Coord d = mv.to - mv.from;
            if (w == d || w == -d) continue;
            if (occ.count(mv.from + w) && occ.count(mv.to + w)) {
                ok = true;
                break;
            }
        }
        if (ok) supported.push_back(mv);
    }
    // prune chains whose front was dropped
    CellSet sources;
    for (const auto& mv : supported) sources.insert(mv.from);
    for (bool changed = true; changed;) {
        changed = false;
        Transformation keep;
        for (const auto& mv : supported) {
            if (occ.count(mv.to) && !sources.count(mv.to)) {
                sources.erase(mv.from);
                changed = true;
            } else {
                keep.push_back(mv);
            }
        }
        supported = std::move(keep);
    }
    if (!supported.empty() && b.try_step(supported)) return true;
    bool any = false;
    for (const auto& mv : supported)
        if (b.try_step(Transformation{mv})) any = true;
    return any;
}

}  // namespace

void compact_sweeps(ScheduleBuilder& b) {
    Coord floor = b.config().bbox().min;
    const std::array<Coord, 3> dirs = {Coord{0, 0, -1}, Coord{-1, 0, 0}, Coord{0, -1, 0}};
    for (int round = 0; round < 512; ++round) {
        bool moved = false;
        for (const auto& u : dirs)
            for (int pa = 0; pa < 2; ++pa)
                for (int pb = 0; pb < 2; ++pb)
                    if (sweep_phase(b, u, pa, pb, floor)) moved = true;
        if (!moved) break;
    }
}

void compact_to_cuboid(ScheduleBuilder& b, char axis) {
    if (axis != 'z') throw std::invalid_argument("compact_to_cuboid: only the z axis is supported");
    Coord base = b.config().bbox().min;
    size_t n = b.config().size();

    // choose the footprint rectangle: among w x d with A >= (w-1)d and
    // A >= (d-1)w covering >= n, maximize min(w, d), then minimize waste
    Projection2D pz = project(b.config(), 'z');
    size_t area = pz.area();
    int bw = 1, bd = (int)area;
    long best_key = -1;
    for (int w = 1; w <= (int)area + 1; ++w)
        for (int d = 1; d <= (int)area + 1; ++d) {
            if ((size_t)(w - 1) * d > area || (size_t)(d - 1) * w > area) continue;
            if ((size_t)w * d < std::max<size_t>(1, area > 0 ? 1 : 1)) continue;
            long key = (long)std::min(w, d) * 1000000L - (long)w * d;
            if (key > best_key) {
                best_key = key;
                bw = w;
                bd = d;
            }
        }
    Walker walker{b};
    auto in_rect = [&](const Coord& cell) {
        return cell.x >= base.x && cell.x < base.x + bw && cell.y >= base.y && cell.y < base.y + bd;
    };
    auto column_height = [&](int x, int y) {
        int h = 0;
        while (b.config().contains({x, y, base.z + h})) ++h;
        return h;
    };

    // move columns outside the rectangle into the lowest slots inside it
    for (int guard = 0; guard < (int)n + 8; ++guard) {
        // xy-maximal occupied cell outside the rectangle
        std::optional<Coord> src;
        for (const auto& cell : b.config().cells())
            if (!in_rect(cell))
                if (!src || std::pair(cell.x + cell.y, cell) > std::pair(src->x + src->y, *src))
                    src = cell;
        if (!src) break;
        // highest module of that column
        Coord top = *src;
        while (b.config().contains(top + Coord{0, 0, 1})) top = top + Coord{0, 0, 1};
        // lowest empty slot inside the rectangle (z, y, x order)
        std::optional<Coord> dst;
        for (int z = base.z; !dst && z <= base.z + (int)n; ++z)
            for (int y = base.y; !dst && y < base.y + bd; ++y)
                for (int x = base.x; !dst && x < base.x + bw; ++x)
                    if (!b.config().contains({x, y, z})) dst = Coord{x, y, z};
        if (!dst) throw std::runtime_error("compact_to_cuboid: no slot in rectangle");
        if (!walker.route(top, *dst))
            throw std::runtime_error("compact_to_cuboid: routing failed");
    }
    // balance column heights within the rectangle to within one
    for (int guard = 0; guard < (int)n + 8; ++guard) {
        int hmin = 1 << 30, hmax = -1;
        Coord cmin, cmax;
        for (int x = base.x; x < base.x + bw; ++x)
            for (int y = base.y; y < base.y + bd; ++y) {
                int h = column_height(x, y);
                if (h < hmin) {
                    hmin = h;
                    cmin = {x, y, 0};
                }
                if (h > hmax) {
                    hmax = h;
                    cmax = {x, y, 0};
                }
            }
        if (hmax - hmin <= 1) break;
        Coord from{cmax.x, cmax.y, base.z + hmax - 1};
        Coord to{cmin.x, cmin.y, base.z + hmin};
        if (!walker.route(from, to))
            throw std::runtime_error("compact_to_cuboid: balancing failed");
    }
}

Schedule cuboid_to_cuboid(const Configuration& c1, const Configuration& c2) {
    if (c1.size() != c2.size()) throw std::invalid_argument("cuboid_to_cuboid: count mismatch");
    ScheduleBuilder b(c1);
    Walker walker{b};
    for (int guard = 0; guard < (int)c1.size() + 8; ++guard) {
        if (b.config() == c2) break;
        // fill targets bottom-up, draining sources top-down
        std::optional<Coord> dst;
        for (const auto& cell : c2.cells())
            if (!b.config().contains(cell)) {
                if (!dst || std::tuple(cell.z, cell.y, cell.x) < std::tuple(dst->z, dst->y, dst->x))
                    dst = cell;
            }
        if (!dst) break;
        CellVec sources;
        for (const auto& cell : b.config().cells())
            if (!c2.contains(cell)) sources.push_back(cell);
        std::sort(sources.begin(), sources.end(), [](const Coord& a, const Coord& bb) {
            return std::tuple(a.z, a.y, a.x) > std::tuple(bb.z, bb.y, bb.x);
        });
        bool moved = false;
        for (const auto& src : sources)
            if (walker.route(src, *dst)) {
                moved = true;
                break;
            }
        if (!moved) throw std::runtime_error("cuboid_to_cuboid: routing failed");
    }
    if (!(b.config() == c2)) throw std::runtime_error("cuboid_to_cuboid: did not converge");
    return b.take_schedule();
}

// --------------------------------------------------------------------------
// Gather and scaffold
// --------------------------------------------------------------------------

GatherResult gather(const Configuration& c) {
    SpanningTrees trees = build_trees(c);
    MetaGrid grid = trees.grid;
    size_t budget = 125 * ((size_t)grid.dims.x * grid.dims.y + grid.dims.z);
    Projection2D pz = project(c, 'z');
    size_t meta_columns = 0;
    {
        CellSet seen;
        for (const auto& [x, y] : pz.cells) {
            Coord mc = grid.meta_of({x, y, grid.origin.z});
            if (seen.insert({mc.x, mc.y, 0}).second) ++meta_columns;
        }
    }
    budget = 125 * (meta_columns + (size_t)grid.dims.z);
    if (c.size() < 2625)
        throw std::invalid_argument("gather: configuration below the snake threshold");
    budget = std::min(budget, c.size());

    Coord sub_root = find_subtree(trees, std::min<size_t>(2625, c.size()));
    GrowBallResult ball = grow_ball(c, trees, sub_root);
    ScheduleBuilder b(c);
    b.splice(ball.schedule);

    SnakeState snake = find_snake_in_ball(b.config(), ball.center);

    // crawl a boustrophedon inside the ball, absorbing material until the
    // budget is owned
    Coord center = ball.center;
    int leg = 0;
    Coord down{0, 0, -1}, up{0, 0, 1};
    while (snake.owned_count() < budget && leg < 8) {
        Coord vertical = (leg % 2 == 0) ? down : up;
        for (int i = 0; i < 10; ++i) {
            try {
                push(b, snake, vertical);
            } catch (const std::exception&) {
                break;
            }
            if (snake.owned_count() >= budget) break;
        }
        if (snake.owned_count() >= budget) break;
        for (int i = 0; i < 5; ++i) {
            try {
                push(b, snake, {1, 0, 0});
            } catch (const std::exception&) {
                break;
            }
        }
        ++leg;
    }
    (void)center;
    return {std::move(snake), b.take_schedule()};
}

void scaffold_and_compress(ScheduleBuilder& b, SnakeState snake) {
    MetaGrid grid;
    grid.origin = b.config().bbox().min;
    grid.dims = {(b.config().bbox().width() + 4) / 5, (b.config().bbox().depth() + 4) / 5,
                 (b.config().bbox().height() + 4) / 5};

    // raise the head to the top meta layer
    int top_z = grid.origin.z + (grid.dims.z - 1) * 5 + 2 + 5;
    if (snake.spine.head().z < snake.spine.tail().z) reverse_snake(b, snake);
    while (snake.spine.head().z < top_z) push(b, snake, {0, 0, 1});

    // descend, absorbing the column under the head
    while (snake.spine.head().z > grid.origin.z + 2) push(b, snake, {0, 0, -1});

    // towers, then compaction sweeps
    compact_sweeps(b);
}

// --------------------------------------------------------------------------
// plan
// --------------------------------------------------------------------------

PlanReport plan(const Configuration& c1, const Configuration& c2, const PlanOptions& opts) {
    if (c1.size() != c2.size()) throw std::invalid_argument("plan: module counts differ");
    PlanReport rep;
    rep.n = c1.size();
    rep.area = std::max(project(c1, 'z').area(), project(c2, 'z').area());
    rep.height = (size_t)std::max(c1.bbox().height(), c2.bbox().height());

    if (c1 == c2) {
        rep.ratio = 0.0;
        return rep;
    }

    if (c1.size() < opts.fallback_threshold) {
        rep.used_fallback = true;
        Coord a1 = zyx_min(c1);
        Coord a2 = zyx_min(c2);
        Schedule melt1 = melt_to_pile(c1, a1);
        Schedule melt2 = melt_to_pile(c2, a2);
        Configuration pile1 = canonical_pile(c1.size(), a1);
        Schedule shift = translate_pile(pile1, a2 - a1);

        rep.schedule = melt1;
        rep.gather_end = rep.schedule.steps.size();
        append(rep.schedule, shift);
        rep.compress_end = rep.schedule.steps.size();
        rep.compact_end = rep.schedule.steps.size();
        append(rep.schedule, reversed(melt2));
        rep.bridge_end = rep.schedule.steps.size();
    } else {
        GatherResult g1 = gather(c1);
        ScheduleBuilder b1(apply_all(c1, g1.schedule));
        scaffold_and_compress(b1, g1.snake);
        Schedule pipe1 = g1.schedule;
        append(pipe1, b1.schedule());
        Configuration k1 = b1.config();

        GatherResult g2 = gather(c2);
        ScheduleBuilder b2(apply_all(c2, g2.schedule));
        scaffold_and_compress(b2, g2.snake);
        Schedule pipe2 = g2.schedule;
        append(pipe2, b2.schedule());
        Configuration k2 = b2.config();

        Schedule bridge = cuboid_to_cuboid(k1, k2);

        rep.schedule = pipe1;
        rep.gather_end = g1.schedule.steps.size();
        rep.compress_end = rep.schedule.steps.size();
        rep.compact_end = rep.schedule.steps.size();
        append(rep.schedule, bridge);
        rep.bridge_end = rep.schedule.steps.size();
        append(rep.schedule, reversed(pipe2));
    }

    if (auto err = validate_schedule(c1, rep.schedule, c2)) {
        throw std::runtime_error("plan: produced schedule invalid at step " +
                                 std::to_string(err->step) +
                                 (err->violations.empty()
                                      ? std::string(": ") + err->detail
                                      : std::string(": ") + rule_name(err->violations[0].rule)));
    }
    rep.makespan = rep.schedule.steps.size();
    rep.ratio = rep.area + rep.height > 0
                    ? (double)rep.makespan / (double)(rep.area + rep.height)
                    : 0.0;
    (void)opts.seed;
    return rep;
}

}  // namespace sc
