#include "slidingcubes/teleport.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace sc {

namespace {

CellSet to_set(const CellVec& v) { return CellSet(v.begin(), v.end()); }

bool adjacent_to(const CellSet& set, const Coord& c) {
    for (const auto& d : kFaceDirs)
        if (set.count(c + d)) return true;
    return false;
}

std::vector<CellVec> components_of(const CellSet& cells) {
    std::vector<CellVec> comps;
    CellSet seen;
    CellVec order = sorted_cells(cells);
    for (const auto& start : order) {
        if (seen.count(start)) continue;
        CellVec comp{start};
        seen.insert(start);
        for (size_t i = 0; i < comp.size(); ++i)
            for (const auto& d : kFaceDirs) {
                Coord n = comp[i] + d;
                if (cells.count(n) && !seen.count(n)) {
                    seen.insert(n);
                    comp.push_back(n);
                }
            }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

// Single legal moves of a lone module at `from` against static occupancy
// `rest`, restricted to destination cells adjacent to `surface`.
std::vector<Move> lone_moves(const CellSet& rest, const CellSet& surface, const Coord& from) {
    std::vector<Move> out;
    for (const auto& d : kFaceDirs) {
        Coord to = from + d;
        if (rest.count(to) || !adjacent_to(surface, to)) continue;
        for (const auto& w : kFaceDirs) {
            if (w == d || w == -d) continue;
            if (rest.count(from + w) && rest.count(to + w)) {
                out.push_back(Move::slide(from, to));
                break;
            }
        }
    }
    for (const auto& u : kFaceDirs) {
        if (!rest.count(from + u)) continue;
        for (const auto& v : kFaceDirs) {
            if (u.x * v.x + u.y * v.y + u.z * v.z != 0) continue;
            Coord corner = from + v, to = from + u + v;
            if (rest.count(corner) || rest.count(to)) continue;
            if (!adjacent_to(surface, to)) continue;
            out.push_back(Move::convex(from, u, v));
        }
    }
    return out;
}

struct WalkResult {
    bool reachable = false;
    std::vector<Move> path;  // moves from start to target
    CellSet reached;
};

WalkResult surface_walk(const CellSet& rest, const CellSet& surface, const Coord& start,
                        const std::optional<Coord>& target) {
    WalkResult res;
    std::unordered_map<Coord, Move, CoordHash> parent;
    std::deque<Coord> q{start};
    res.reached.insert(start);
    while (!q.empty()) {
        Coord p = q.front();
        q.pop_front();
        if (target && p == *target) break;
        for (const auto& mv : lone_moves(rest, surface, p)) {
            if (res.reached.count(mv.to)) continue;
            res.reached.insert(mv.to);
            parent.emplace(mv.to, mv);
            q.push_back(mv.to);
        }
    }
    if (target && res.reached.count(*target)) {
        res.reachable = true;
        Coord cur = *target;
        while (cur != start) {
            const Move& mv = parent.at(cur);
            res.path.push_back(mv);
            cur = mv.from;
        }
        std::reverse(res.path.begin(), res.path.end());
    }
    return res;
}

enum class Unlock { Failed, Progress, Done };

struct Engine {
    CellSet cur;  // full configuration cells
    CellSet s;    // walk-surface cells, including the walker's cell
    Coord walker;
    Coord target;
    Schedule sched;
    size_t budget = 0;
    size_t depth = 0;
    TeleportStats stats;

    bool can_emit(const Move& mv) const {
        if (!s.count(mv.from)) return false;
        Configuration c = Configuration::unchecked(sorted_cells(cur));
        return validate_transformation(c, {mv}).ok();
    }

    void emit(const Move& mv) {
        if (sched.steps.size() >= budget)
            throw std::runtime_error("teleport: step budget exhausted");
        Configuration c = Configuration::unchecked(sorted_cells(cur));
        Transformation t{mv};
        auto res = validate_transformation(c, t);
        if (!res.ok())
            throw std::runtime_error("teleport: emitted move rejected (" +
                                     rule_name(res.violations.front().rule) + " at " +
                                     to_string(mv.from) + "->" + to_string(mv.to) + ")");
        if (!s.count(mv.from))
            throw std::runtime_error("teleport: attempted to move a cell outside S");
        sched.steps.push_back(std::move(t));
        cur.erase(mv.from);
        cur.insert(mv.to);
        s.erase(mv.from);
        s.insert(mv.to);
    }

    CellSet surface_without_walker() const {
        CellSet r = s;
        r.erase(walker);
        return r;
    }

    CellSet rest_without_walker() const {
        CellSet r = cur;
        r.erase(walker);
        return r;
    }

    bool free_in_cur(const Coord& cell) const {
        CellSet r = cur;
        r.erase(cell);
        return is_connected(r) && adjacent_to(r, cell);
    }

    // Face-path distance between two cells over the extended faces of the
    // current surface; -1 when they share no extended face.
    int delta(const Coord& from, const Coord& to) const {
        CellSet surf = surface_without_walker();
        Configuration sub = Configuration::unchecked(sorted_cells(surf));
        FaceAtlas atlas = compute_face_atlas(sub);
        auto from_faces = atlas.extended_faces_at(from);
        auto to_faces = atlas.extended_faces_at(to);
        int best = -1;
        for (int ef : from_faces) {
            if (std::find(to_faces.begin(), to_faces.end(), ef) == to_faces.end()) continue;
            FaceDistance fd(sub, atlas, ef);
            int d = fd.distance(from, to);
            if (d >= 0 && (best < 0 || d < best)) best = d;
        }
        return best;
    }

    bool run();
    Unlock try_unlock();
    bool sub_teleport(CellVec sub_s, const Coord& sub_m, const Coord& sub_e);
    std::optional<Coord> free_surface_module(const CellVec& sub_cells) const;
};

// A module of the subconfiguration on its outer extended face that is free
// both in the subconfiguration and in the full configuration.
std::optional<Coord> Engine::free_surface_module(const CellVec& sub_cells) const {
    Configuration sub = Configuration::unchecked(sub_cells);
    FaceAtlas atlas = compute_face_atlas(sub);
    for (const auto& cand : sub_cells) {
        if (!atlas.module_in_extended_face(cand, atlas.outer_extended_face())) continue;
        CellSet sub_rest = to_set(sub_cells);
        sub_rest.erase(cand);
        if (!sub_rest.empty() && (!is_connected(sub_rest) || !adjacent_to(sub_rest, cand)))
            continue;
        if (!free_in_cur(cand)) continue;
        return cand;
    }
    return std::nullopt;
}

bool Engine::sub_teleport(CellVec sub_s, const Coord& sub_m, const Coord& sub_e) {
    std::sort(sub_s.begin(), sub_s.end());
    TeleportRequest req{Configuration::unchecked(sorted_cells(cur)), sub_s, sub_m, sub_e};
    if (check_teleport_preconditions(req)) return false;
    if (depth > 48) return false;

    Engine sub;
    sub.cur = cur;
    sub.s = to_set(sub_s);
    sub.walker = sub_m;
    sub.target = sub_e;
    sub.budget = budget > sched.steps.size() ? budget - sched.steps.size() : 0;
    sub.depth = depth + 1;
    if (!sub.run()) return false;

    stats.max_depth = std::max(stats.max_depth, 1 + sub.stats.max_depth);
    stats.unlock_actions += sub.stats.unlock_actions;
    for (auto& step : sub.sched.steps) sched.steps.push_back(std::move(step));
    cur = std::move(sub.cur);
    if (s.count(sub_m)) {
        s.erase(sub_m);
        s.insert(sub_e);
    }
    return true;
}

bool Engine::run() {
    for (int iter = 0; iter < 4096; ++iter) {
        WalkResult walk =
            surface_walk(rest_without_walker(), surface_without_walker(), walker, target);
        if (walk.reachable) {
            for (const auto& mv : walk.path) {
                emit(mv);
                walker = mv.to;
            }
            return true;
        }
        switch (try_unlock()) {
            case Unlock::Done: return true;
            case Unlock::Progress: break;
            case Unlock::Failed: return false;
        }
    }
    return false;
}

// One blocked-progress action: cross a pinched edge of the surface, hand the
// role to a free neighbor, shed a hanging sub-surface, or relay through a
// free module of an unreachable component. Commits the first action that
// verifies; the emitted moves always validate before they are applied.
Unlock Engine::try_unlock() {
    ++stats.unlock_actions;
    CellSet rest = rest_without_walker();
    CellSet surf = surface_without_walker();
    WalkResult walk = surface_walk(rest, surf, walker, std::nullopt);

    // First bring the walker to the reachable position nearest the target.
    int best_d = delta(walker, target);
    Coord best_p = walker;
    for (const auto& p : sorted_cells(walk.reached)) {
        int d = delta(p, target);
        if (d >= 0 && (best_d < 0 || d < best_d)) {
            best_d = d;
            best_p = p;
        }
    }
    if (best_p != walker) {
        WalkResult to_best = surface_walk(rest, surf, walker, best_p);
        if (to_best.reachable && !to_best.path.empty()) {
            for (const auto& mv : to_best.path) {
                emit(mv);
                walker = mv.to;
            }
            return Unlock::Progress;
        }
    }
    int dw = delta(walker, target);

    Configuration sub = Configuration::unchecked(sorted_cells(surf));

    // Pinched edges of the surface: the walker sits on one shared cell of a
    // pinched pair; the other shared cell leads onward.
    for (const auto& pe : pinched_edges(sub)) {
        for (int flip = 0; flip < 2; ++flip) {
            Coord b = flip ? pe.b : pe.a;
            Coord cc = flip ? pe.a : pe.b;
            Coord q1 = pe.faces[0].empty();
            Coord q2 = pe.faces[1].empty();
            if (flip) {
                q1 = pe.faces[2].empty();
                q2 = pe.faces[3].empty();
            }
            for (int sw = 0; sw < 2; ++sw) {
                Coord at = sw ? q2 : q1;
                Coord e2 = sw ? q1 : q2;
                if (walker != at || cur.count(e2)) continue;
                int de2 = delta(e2, target);
                if (de2 < 0 || (dw >= 0 && de2 >= dw)) continue;

                if (free_in_cur(b)) {
                    Move mb = Move::slide(b, e2);
                    Move mw = Move::slide(walker, b);
                    if (!can_emit(mb)) continue;
                    Coord b_old = b;
                    emit(mb);
                    if (!can_emit(mw)) {
                        // roll forward is impossible; undo by reversing
                        emit(mb.reversed());
                        continue;
                    }
                    emit(mw);
                    walker = e2;
                    return Unlock::Progress;
                }
                // b is a cut module of the surface: relay a free module from
                // a component hanging off b into e2, then take its place.
                CellSet surf_wo_b = surf;
                surf_wo_b.erase(b);
                for (const auto& comp : components_of(surf_wo_b)) {
                    CellSet cs = to_set(comp);
                    if (cs.count(cc) || cs.count(walker)) continue;
                    auto m2 = free_surface_module(comp);
                    if (!m2) continue;
                    Coord m2_old = *m2;
                    if (!sub_teleport(comp, *m2, e2)) continue;
                    CellVec back = sorted_cells(surface_without_walker());
                    back.push_back(walker);
                    if (!sub_teleport(back, walker, m2_old)) return Unlock::Failed;
                    walker = e2;
                    return Unlock::Progress;
                }
            }
        }
    }

    CellVec adj_surface;
    for (const auto& d : kFaceDirs)
        if (surf.count(walker + d)) adj_surface.push_back(walker + d);
    std::sort(adj_surface.begin(), adj_surface.end());

    // Role swap with a free neighbor: send it to the target outright, then
    // step into its slot. Completes the teleport.
    for (const auto& cc : adj_surface) {
        if (!free_in_cur(cc)) continue;
        Move step_in = Move::slide(walker, cc);
        CellVec s_wo_walker = sorted_cells(surf);
        if (!sub_teleport(s_wo_walker, cc, target)) continue;
        if (!can_emit(step_in)) {
            // target already filled; walker stays where it is — the net
            // configuration is short one cell, so this must not happen.
            throw std::runtime_error("teleport: role swap could not complete");
        }
        emit(step_in);
        walker = cc;
        return Unlock::Done;
    }

    // Shed surface components that hang off a neighbor, are anchored to the
    // remainder and do not touch the target.
    for (const auto& cc : adj_surface) {
        CellSet surf_wo_cc = surf;
        surf_wo_cc.erase(cc);
        auto comps = components_of(surf_wo_cc);
        if (comps.size() < 2) continue;
        for (const auto& comp : comps) {
            CellSet cs = to_set(comp);
            if (cs.count(walker) || adjacent_to(cs, target) || cs.count(target)) continue;
            bool anchored = false;
            for (const auto& cell : comp) {
                for (const auto& d : kFaceDirs) {
                    Coord n = cell + d;
                    if (cur.count(n) && !s.count(n)) {
                        anchored = true;
                        break;
                    }
                }
                if (anchored) break;
            }
            if (!anchored) continue;
            CellSet ns;
            for (const auto& cell : s)
                if (!cs.count(cell)) ns.insert(cell);
            if (ns.size() < 2 || !is_connected(ns)) continue;
            CellSet ns_rest;
            for (const auto& cell : cur)
                if (!ns.count(cell)) ns_rest.insert(cell);
            if (!is_connected(ns_rest)) continue;
            s = std::move(ns);
            return Unlock::Progress;
        }
    }

    // Relay through a free module of a component the walker cannot reach:
    // it fills the target, the walker takes its place. Completes.
    for (const auto& cc : adj_surface) {
        CellSet surf_wo_cc = surf;
        surf_wo_cc.erase(cc);
        auto comps = components_of(surf_wo_cc);
        if (comps.size() < 2) continue;
        for (const auto& comp : comps) {
            CellSet cs = to_set(comp);
            if (cs.count(walker)) continue;
            auto m2 = free_surface_module(comp);
            if (!m2) continue;
            Coord m2_old = *m2;
            CellVec s_wo_walker = sorted_cells(surf);
            if (!sub_teleport(s_wo_walker, *m2, target)) continue;
            CellVec back = sorted_cells(surface_without_walker());
            back.push_back(walker);
            if (!sub_teleport(back, walker, m2_old)) return Unlock::Failed;
            walker = m2_old;
            return Unlock::Done;
        }
    }

    // A blocking module outside the surface pinched against a free surface
    // neighbor: displace the neighbor through the shared empty cell.
    for (const auto& cc : adj_surface) {
        for (const auto& d1 : kFaceDirs)
            for (const auto& d2 : kFaceDirs) {
                if (d1.x * d2.x + d1.y * d2.y + d1.z * d2.z != 0) continue;
                Coord b = cc + d1 + d2;
                if (!cur.count(b) || s.count(b) || b == walker) continue;
                Coord q1 = cc + d1, q2 = cc + d2;
                if (cur.count(q1) || cur.count(q2)) continue;
                for (const Coord& e2 : {q1, q2}) {
                    int de2 = delta(e2, target);
                    if (de2 < 0 || (dw >= 0 && de2 >= dw)) continue;
                    if (!free_in_cur(cc)) continue;
                    Move mc = Move::slide(cc, e2);
                    if (!can_emit(mc)) continue;
                    Coord cc_old = cc;
                    emit(mc);
                    Move mw = Move::slide(walker, cc_old);
                    if (!can_emit(mw)) {
                        emit(mc.reversed());
                        continue;
                    }
                    emit(mw);
                    walker = e2;
                    return Unlock::Progress;
                }
            }
    }

    return Unlock::Failed;
}

}  // namespace

std::optional<std::string> check_teleport_preconditions(const TeleportRequest& req) {
    CellSet sset = to_set(req.s);
    if (sset.size() < 2) return "surface too small (|S| < 2)";
    for (const auto& cell : req.s)
        if (!req.c.contains(cell)) return "S not a subset of C";
    if (!is_connected(sset)) return "S not connected";
    CellSet rest;
    for (const auto& cell : req.c.cells())
        if (!sset.count(cell)) rest.insert(cell);
    if (rest.empty()) return "C minus S empty";
    if (!is_connected(rest)) return "C minus S not connected";
    if (req.c.contains(req.e)) return "target cell occupied";
    if (!adjacent_to(sset, req.e)) return "target cell not adjacent to S";
    if (!sset.count(req.m)) return "m not in S";
    CellSet c_wo_m = req.c.set();
    c_wo_m.erase(req.m);
    if (!is_connected(c_wo_m) || !adjacent_to(c_wo_m, req.m)) return "m not free in C";

    CellSet surf = sset;
    surf.erase(req.m);
    CellSet surf_e = surf;
    surf_e.insert(req.e);
    if (!is_connected(surf_e)) return "(S minus m) plus e not connected";
    CellSet c_e = c_wo_m;
    c_e.insert(req.e);
    if (!is_connected(c_e)) return "(C minus m) plus e not connected";

    Configuration sub = Configuration::unchecked(sorted_cells(surf));
    FaceAtlas atlas = compute_face_atlas(sub);
    auto fm = atlas.extended_faces_at(req.m);
    auto fe = atlas.extended_faces_at(req.e);
    bool common = false;
    for (int a : fm)
        for (int b : fe)
            if (a == b) common = true;
    if (!common) return "m and e not in a common extended face of S minus m";
    return std::nullopt;
}

Schedule teleport(const TeleportRequest& req, TeleportStats* stats) {
    if (auto reason = check_teleport_preconditions(req))
        throw std::invalid_argument("teleport: " + *reason);

    Engine eng;
    eng.cur = req.c.set();
    eng.s = to_set(req.s);
    eng.walker = req.m;
    eng.target = req.e;
    size_t n = req.s.size();
    size_t cap = n < 8 ? (size_t{1} << (4 * n)) : (size_t{1} << 28);
    eng.budget = std::min<size_t>(cap, size_t{1} << 28);
    if (!eng.run()) throw std::runtime_error("teleport: no schedule found");
    eng.stats.makespan = eng.sched.steps.size();
    if (stats) *stats = eng.stats;
    return eng.sched;
}

Schedule teleport_set(const Configuration& anchor, const Configuration& s,
                      const Configuration& s_target) {
    if (s.size() != s_target.size())
        throw std::invalid_argument("teleport_set: size mismatch");
    for (const auto& cell : s.cells())
        if (anchor.contains(cell))
            throw std::invalid_argument("teleport_set: S overlaps the anchor");
    for (const auto& cell : s_target.cells())
        if (anchor.contains(cell))
            throw std::invalid_argument("teleport_set: target overlaps the anchor");

    Schedule out;
    CellSet cur = s.set();
    auto full_config = [&]() {
        CellSet all = anchor.set();
        for (const auto& c : cur) all.insert(c);
        return Configuration::unchecked(sorted_cells(all));
    };

    for (size_t guard = 0; guard <= s.size() * 4 + 8; ++guard) {
        CellVec missing;
        for (const auto& cell : s_target.cells())
            if (!cur.count(cell)) missing.push_back(cell);
        if (missing.empty()) return out;

        CellVec movable;
        for (const auto& cell : sorted_cells(cur))
            if (!s_target.contains(cell)) movable.push_back(cell);
        if (movable.empty()) throw std::runtime_error("teleport_set: placed region stuck");

        CellSet placed;
        for (const auto& cell : cur)
            if (s_target.contains(cell)) placed.insert(cell);
        std::stable_sort(missing.begin(), missing.end(), [&](const Coord& a, const Coord& b) {
            return adjacent_to(placed, a) > adjacent_to(placed, b);
        });

        bool progressed = false;
        for (const auto& e : missing) {
            Configuration c_full = full_config();
            if (!adjacent_to(c_full.set(), e)) continue;
            for (const auto& m : movable) {
                TeleportRequest req{c_full, sorted_cells(cur), m, e};
                if (check_teleport_preconditions(req)) continue;
                Schedule part;
                try {
                    part = teleport(req);
                } catch (const std::runtime_error&) {
                    continue;
                }
                append(out, part);
                cur.erase(m);
                cur.insert(e);
                progressed = true;
                break;
            }
            if (progressed) break;
        }
        if (!progressed) throw std::runtime_error("teleport_set: no eligible move");
    }
    throw std::runtime_error("teleport_set: did not converge");
}

}  // namespace sc
