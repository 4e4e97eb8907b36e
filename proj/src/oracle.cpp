#include "slidingcubes/oracle.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace sc {

namespace {

struct StateKey {
    CellVec cells;  // sorted
    size_t hash;
    friend bool operator==(const StateKey& a, const StateKey& b) { return a.cells == b.cells; }
};

struct StateKeyHash {
    size_t operator()(const StateKey& k) const { return k.hash; }
};

size_t hash_cells(const CellVec& cells) {
    size_t h = 0x9E3779B97F4A7C15ull;
    for (const auto& c : cells) h = h * 0x100000001B3ull ^ CoordHash{}(c);
    return h;
}

StateKey make_key(CellVec cells, bool translation_invariant) {
    std::sort(cells.begin(), cells.end());
    if (translation_invariant && !cells.empty()) {
        Coord base = cells.front();
        for (auto& c : cells) c = c - base;
    }
    return {std::move(cells), 0};
}

bool inside(const BoundingBox& r, const Coord& c) {
    return c.x >= r.min.x && c.x <= r.max.x && c.y >= r.min.y && c.y <= r.max.y &&
           c.z >= r.min.z && c.z <= r.max.z;
}

// Candidate moves for one module, against the static remainder implied by
// the moving set M. Targets may land on other movers (handoffs).
void candidate_moves(const Configuration& c, const CellSet& movers, const Coord& m,
                     const BoundingBox& region, std::vector<Move>& out) {
    const CellSet& cells = c.set();
    auto is_static = [&](const Coord& cell) { return cells.count(cell) && !movers.count(cell); };
    for (const auto& d : kFaceDirs) {
        Coord to = m + d;
        if (!inside(region, to)) continue;
        if (is_static(to)) continue;  // may be empty or another mover's cell
        bool supported = false;
        for (const auto& w : kFaceDirs) {
            if (w == d || w == -d) continue;
            if (cells.count(m + w) && cells.count(to + w)) {
                supported = true;
                break;
            }
        }
        if (supported) out.push_back(Move::slide(m, to));
    }
    for (const auto& u : kFaceDirs) {
        if (!is_static(m + u)) continue;  // pivot must be stationary
        for (const auto& v : kFaceDirs) {
            if (u.x * v.x + u.y * v.y + u.z * v.z != 0) continue;
            Coord corner = m + v;
            Coord to = m + u + v;
            if (!inside(region, to) || !inside(region, corner)) continue;
            if (cells.count(corner) || cells.count(to)) continue;
            out.push_back(Move::convex(m, u, v));
        }
    }
}

bool compatible(const Move& a, const Move& b) {
    if (a.to == b.to) return false;
    auto sa = a.swept();
    auto sb = b.swept();
    std::vector<Coord> shared;
    for (const auto& x : sa)
        for (const auto& y : sb)
            if (x == y) shared.push_back(x);
    if (shared.empty()) return true;
    if (a.kind == MoveKind::Convex || b.kind == MoveKind::Convex) return false;
    if (shared.size() >= 2) return false;
    const Coord& s = shared.front();
    return (a.to == s && b.from == s) || (b.to == s && a.from == s);
}

// Handoff closure: every target that lands on a mover's source must be that
// of a compatible pair (already ensured pairwise); additionally a convex
// pivot must not be a mover, ensured by candidate generation.
bool result_connected(const Configuration& c, const Transformation& t) {
    CellSet after = c.set();
    for (const auto& m : t) after.erase(m.from);
    for (const auto& m : t) {
        if (after.count(m.to)) return false;  // duplicate landing
        after.insert(m.to);
    }
    if (after.size() != c.size()) return false;
    return is_connected(after);
}

}  // namespace

void for_each_valid_transformation(const Configuration& c, size_t max_moves,
                                   const BoundingBox& region,
                                   const std::function<bool(const Transformation&)>& fn) {
    const CellVec& cells = c.cells();
    size_t n = cells.size();
    if (n > 63) throw std::invalid_argument("for_each_valid_transformation: configuration too large");
    size_t cap = std::min(max_moves, n >= 1 ? n - 1 : size_t{0});
    if (cap == 0) return;

    // Enumerate free subsets of modules, then assign moves.
    std::vector<uint32_t> subsets;
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        size_t k = (size_t)__builtin_popcount(mask);
        if (k > cap || k == n) continue;
        subsets.push_back(mask);
    }

    bool stop = false;
    for (uint32_t mask : subsets) {
        if (stop) return;
        CellVec mvec;
        CellSet movers;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                mvec.push_back(cells[i]);
                movers.insert(cells[i]);
            }
        bool free_ok;
        try {
            free_ok = is_free_set(c.set(), mvec);
        } catch (const std::invalid_argument&) {
            continue;
        }
        if (!free_ok) continue;

        std::vector<std::vector<Move>> cand(mvec.size());
        bool any_empty = false;
        for (size_t i = 0; i < mvec.size(); ++i) {
            candidate_moves(c, movers, mvec[i], region, cand[i]);
            if (cand[i].empty()) any_empty = true;
        }
        if (any_empty) continue;

        Transformation cur;
        std::function<void(size_t)> rec = [&](size_t i) {
            if (stop) return;
            if (i == mvec.size()) {
                if (result_connected(c, cur)) {
                    if (!fn(cur)) stop = true;
                }
                return;
            }
            for (const auto& mv : cand[i]) {
                bool ok = true;
                for (const auto& prev : cur)
                    if (!compatible(prev, mv)) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                cur.push_back(mv);
                rec(i + 1);
                cur.pop_back();
            }
        };
        rec(0);
    }
}

OracleResult bfs_min_makespan(const Configuration& c1, const Configuration& c2,
                              const OracleOptions& opts) {
    OracleResult out;
    if (c1.size() != c2.size())
        throw std::invalid_argument("bfs_min_makespan: module counts differ");

    BoundingBox region = c1.bbox();
    region.min.x = std::min(region.min.x, c2.bbox().min.x) - opts.region_margin;
    region.min.y = std::min(region.min.y, c2.bbox().min.y) - opts.region_margin;
    region.min.z = std::min(region.min.z, c2.bbox().min.z) - opts.region_margin;
    region.max.x = std::max(region.max.x, c2.bbox().max.x) + opts.region_margin;
    region.max.y = std::max(region.max.y, c2.bbox().max.y) + opts.region_margin;
    region.max.z = std::max(region.max.z, c2.bbox().max.z) + opts.region_margin;

    StateKey start = make_key(c1.cells(), opts.translation_invariant);
    start.hash = hash_cells(start.cells);
    StateKey goal = make_key(c2.cells(), opts.translation_invariant);
    goal.hash = hash_cells(goal.cells);

    if (start == goal) {
        out.known = true;
        out.makespan = 0;
        out.states_explored = 1;
        return out;
    }

    struct NodeInfo {
        int64_t parent;
        Transformation via;
        size_t depth;
    };
    std::unordered_map<StateKey, size_t, StateKeyHash> ids;
    std::vector<StateKey> keys;
    std::vector<NodeInfo> info;
    std::deque<size_t> frontier;

    auto intern = [&](StateKey k, int64_t parent, Transformation via, size_t depth) -> int64_t {
        auto it = ids.find(k);
        if (it != ids.end()) return -1;
        size_t id = keys.size();
        ids.emplace(k, id);
        keys.push_back(std::move(k));
        info.push_back({parent, std::move(via), depth});
        return (int64_t)id;
    };

    intern(start, -1, {}, 0);
    frontier.push_back(0);

    while (!frontier.empty()) {
        size_t id = frontier.front();
        frontier.pop_front();
        size_t depth = info[id].depth;
        if (depth >= opts.step_budget) break;
        Configuration cur = Configuration::unchecked(keys[id].cells);
        bool found = false;
        size_t found_id = 0;
        for_each_valid_transformation(
            cur, opts.move_budget_per_step, region, [&](const Transformation& t) {
                CellSet after = cur.set();
                for (const auto& m : t) after.erase(m.from);
                for (const auto& m : t) after.insert(m.to);
                StateKey k = make_key(sorted_cells(after), opts.translation_invariant);
                k.hash = hash_cells(k.cells);
                int64_t nid = intern(std::move(k), (int64_t)id, t, depth + 1);
                if (nid >= 0) {
                    if (keys[(size_t)nid] == goal) {
                        found = true;
                        found_id = (size_t)nid;
                        return false;
                    }
                    frontier.push_back((size_t)nid);
                }
                return keys.size() < opts.state_budget;
            });
        if (found) {
            out.known = true;
            out.makespan = info[found_id].depth;
            std::vector<Transformation> steps;
            for (int64_t cur_id = (int64_t)found_id; cur_id > 0; cur_id = info[(size_t)cur_id].parent)
                steps.push_back(info[(size_t)cur_id].via);
            std::reverse(steps.begin(), steps.end());
            out.witness.steps = std::move(steps);
            out.states_explored = keys.size();
            return out;
        }
        if (keys.size() >= opts.state_budget) break;
    }
    out.known = false;
    out.states_explored = keys.size();
    return out;
}

std::optional<Transformation> find_single_step(const Configuration& c1, const Configuration& c2,
                                               size_t max_chain_length) {
    if (c1.size() != c2.size()) return std::nullopt;
    CellVec removed, added;
    for (const auto& c : c1.cells())
        if (!c2.contains(c)) removed.push_back(c);
    for (const auto& c : c2.cells())
        if (!c1.contains(c)) added.push_back(c);
    if (removed.size() != 1 || added.size() != 1) return std::nullopt;
    Coord a = removed.front(), b = added.front();

    // Follow handoff chains from a to b: each move's target is either b or
    // the source of the next move.
    size_t nodes = 0;
    Transformation chain;
    CellSet used;  // sources on the chain
    std::optional<Transformation> result;

    std::function<bool(const Coord&)> extend = [&](const Coord& from) -> bool {
        if (++nodes > max_chain_length * 64) return true;  // stop searching
        if (chain.size() >= max_chain_length) return false;
        std::vector<Move> cands;
        const CellSet& cells = c1.set();
        for (const auto& d : kFaceDirs) {
            Coord to = from + d;
            bool supported = false;
            for (const auto& w : kFaceDirs) {
                if (w == d || w == -d) continue;
                if (cells.count(from + w) && cells.count(to + w)) {
                    supported = true;
                    break;
                }
            }
            if (!supported) continue;
            if (to == b && !cells.count(b)) cands.push_back(Move::slide(from, to));
            else if (cells.count(to) && !used.count(to)) cands.push_back(Move::slide(from, to));
        }
        for (const auto& u : kFaceDirs) {
            if (!cells.count(from + u) || used.count(from + u)) continue;
            for (const auto& v : kFaceDirs) {
                if (u.x * v.x + u.y * v.y + u.z * v.z != 0) continue;
                Coord corner = from + v;
                Coord to = from + u + v;
                if (cells.count(corner)) continue;
                if (to == b && !cells.count(b)) cands.push_back(Move::convex(from, u, v));
                else if (cells.count(to) && !used.count(to)) cands.push_back(Move::convex(from, u, v));
            }
        }
        for (const auto& mv : cands) {
            chain.push_back(mv);
            used.insert(mv.from);
            if (mv.to == b && !c1.contains(b)) {
                if (validate_transformation(c1, chain).ok()) {
                    Configuration after = apply_unchecked(c1, chain);
                    if (after == c2) {
                        result = chain;
                        used.erase(mv.from);
                        chain.pop_back();
                        return true;
                    }
                }
            } else {
                if (extend(mv.to)) {
                    used.erase(mv.from);
                    chain.pop_back();
                    return true;
                }
            }
            used.erase(mv.from);
            chain.pop_back();
        }
        return false;
    };
    extend(a);
    return result;
}

}  // namespace sc
