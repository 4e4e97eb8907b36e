#include "slidingcubes/snake.hpp"
#include <cstdlib>
#include <cstdio>

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace sc {

namespace {

bool adjacent_to(const CellSet& set, const Coord& c) {
    for (const auto& d : kFaceDirs)
        if (set.count(c + d)) return true;
    return false;
}

}  // namespace

void ScheduleBuilder::step(Transformation t) {
    auto res = validate_transformation(cur_, t);
    if (!res.ok()) {
        std::string what = "schedule step rejected: " + rule_name(res.violations.front().rule);
        if (!t.empty())
            what += " (first move " + to_string(t.front().from) + "->" + to_string(t.front().to) +
                    ", " + std::to_string(t.size()) + " moves)";
        if (!res.violations.front().detail.empty()) what += ": " + res.violations.front().detail;
        throw std::runtime_error(what);
    }
    cur_ = apply_unchecked(cur_, t);
    sched_.steps.push_back(std::move(t));
}

bool ScheduleBuilder::try_step(const Transformation& t) {
    if (!validate_transformation(cur_, t).ok()) return false;
    cur_ = apply_unchecked(cur_, t);
    sched_.steps.push_back(t);
    return true;
}

void ScheduleBuilder::splice(const Schedule& fragment) {
    for (const auto& t : fragment.steps) step(t);
}

bool SpinePath::is_major(size_t i) const {
    return std::find(majors.begin(), majors.end(), i) != majors.end();
}

bool SpinePath::bends_at(size_t i) const {
    if (i == 0 || i + 1 >= vertices.size()) return false;
    return vertices[i + 1] - vertices[i] != vertices[i] - vertices[i - 1];
}

SpinePath SpinePath::reversed() const {
    SpinePath r;
    r.vertices.assign(vertices.rbegin(), vertices.rend());
    for (size_t m : majors) r.majors.push_back(vertices.size() - 1 - m);
    std::sort(r.majors.begin(), r.majors.end());
    return r;
}

std::optional<std::string> validate_spine(const SpinePath& p) {
    const auto& v = p.vertices;
    size_t n = v.size();
    if (n < 3) return "spine too short";
    CellSet seen;
    for (const auto& c : v)
        if (!seen.insert(c).second) return "spine revisits a cell";
    for (size_t i = 0; i + 1 < n; ++i)
        if (l1_dist(v[i], v[i + 1]) != 1) return "spine not a path";
    // induced: non-consecutive vertices must not be face-adjacent
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 2; j < n; ++j)
            if (l1_dist(v[i], v[j]) == 1) return "spine not induced";
    if (p.majors.empty()) return "spine has no major vertex";
    for (size_t m : p.majors)
        if (m == 0 || m + 1 >= n) return "endpoint marked major";
    for (size_t k = 0; k + 1 < p.majors.size(); ++k) {
        size_t a = p.majors[k], b = p.majors[k + 1];
        if (b - a != 5) return "majors not five apart";
        Coord d = v[a + 1] - v[a];
        for (size_t i = a; i < b; ++i)
            if (v[i + 1] - v[i] != d) return "major run not straight";
    }
    if (p.majors.front() > 10) return "head path too long";
    if (n - 1 - p.majors.back() > 10) return "tail path too long";
    // anti-self-intersection
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 5; j < n; ++j)
            if (l1_dist(v[i], v[j]) < 5) return "anti-self-intersection";
    return std::nullopt;
}

CellSpace cell_space(const SpinePath& p) {
    CellSpace cs;
    for (const auto& v : p.vertices) {
        cs.interior.insert(v);
        for (const auto& n : neighbors_linf(v)) cs.interior.insert(n);
    }
    for (const auto& c : cs.interior)
        for (const auto& d : kFaceDirs) {
            Coord n = c + d;
            if (!cs.interior.count(n)) cs.skin.insert(n);
        }
    cs.all = cs.interior;
    for (const auto& c : cs.skin) cs.all.insert(c);
    for (const auto& c : cs.interior) {
        int k = 0;
        for (const auto& d : kFaceDirs)
            if (cs.skin.count(c + d)) ++k;
        if (k == 3) cs.supports.insert(c);
    }
    return cs;
}

int section_of(const SpinePath& p, const Coord& cell) {
    for (size_t m : p.majors)
        if (linf_dist(p.vertices[m], cell) <= 2) return (int)m;
    size_t best = 0;
    int bestd = linf_dist(p.vertices[0], cell);
    for (size_t i = 1; i < p.vertices.size(); ++i) {
        int d = linf_dist(p.vertices[i], cell);
        if (d < bestd) {
            bestd = d;
            best = i;
        }
    }
    size_t to_head = best, to_tail = p.vertices.size() - 1 - best;
    return to_head <= to_tail ? -1 : -2;
}

std::optional<std::string> validate_snake(const SnakeState& s, const Configuration& c) {
    if (auto r = validate_spine(s.spine)) return r;
    CellSpace cs = cell_space(s.spine);
    for (const auto& cell : cs.skin)
        if (!c.contains(cell)) return "skin cell empty at " + to_string(cell);
    for (const auto& cell : cs.supports)
        if (!c.contains(cell)) return "support cell empty at " + to_string(cell);
    for (const auto& cell : s.owned) {
        if (!cs.all.count(cell)) return "owned cell outside cell space";
        if (!c.contains(cell)) return "owned cell not occupied";
        if (s.held.count(cell)) return "cell both owned and held";
    }
    for (const auto& cell : s.held) {
        if (!cs.all.count(cell)) return "held cell outside cell space";
        if (!c.contains(cell)) return "held cell not occupied";
    }
    CellSet region;
    for (const auto& cell : cs.all)
        if (c.contains(cell)) region.insert(cell);
    if (!is_connected(region)) return "snake region disconnected";
    return std::nullopt;
}

namespace {

SpinePath straight_spine(const Coord& head, const Coord& toward_tail, size_t length) {
    SpinePath p;
    for (size_t i = 0; i < length; ++i) p.vertices.push_back(head + toward_tail * (int)i);
    size_t first = ((length - 2) % 5) + 1;
    for (size_t i = first; i + 1 < length; i += 5) p.majors.push_back(i);
    return p;
}

// Deterministic cargo order: distance from the head along the spine (by
// nearest vertex), then lexicographic.
CellVec interior_by_head_distance(const SpinePath& p, const CellSpace& cs) {
    CellVec cells = sorted_cells(cs.interior);
    std::stable_sort(cells.begin(), cells.end(), [&](const Coord& a, const Coord& b) {
        auto key = [&](const Coord& c) {
            size_t best = 0;
            int bestd = linf_dist(p.vertices[0], c);
            for (size_t i = 1; i < p.vertices.size(); ++i) {
                int d = linf_dist(p.vertices[i], c);
                if (d < bestd) {
                    bestd = d;
                    best = i;
                }
            }
            return best;
        };
        return key(a) < key(b);
    });
    return cells;
}

}  // namespace

SnakeState find_snake_in_ball(const Configuration& c, const Coord& center) {
    SnakeState s;
    s.spine = straight_spine(center - Coord{0, 0, 5}, {0, 0, 1}, 11);
    CellSpace cs = cell_space(s.spine);
    for (const auto& cell : cs.all)
        if (!c.contains(cell))
            throw std::invalid_argument("find_snake_in_ball: ball not full at " + to_string(cell));

    for (const auto& cell : cs.skin) s.owned.insert(cell);
    for (const auto& cell : cs.supports) s.owned.insert(cell);
    // cargo rides the ring lanes nearest the head; the spine lane stays clear
    CellVec cargo_order = interior_by_head_distance(s.spine, cs);
    CellSet spine_cells(s.spine.vertices.begin(), s.spine.vertices.end());
    for (const auto& cell : cargo_order) {
        if (s.owned.size() >= 198) break;
        if (cs.supports.count(cell)) continue;
        if (cell.x == center.x && cell.y == center.y) continue;  // spine lane
        s.owned.insert(cell);
    }
    if (s.owned.size() != 198)
        throw std::logic_error("find_snake_in_ball: unexpected owned count " +
                               std::to_string(s.owned.size()));
    return s;
}

SnakeState make_straight_snake(const Coord& head, const Coord& axis_toward_tail, size_t length,
                               size_t full_layers) {
    SnakeState s;
    s.spine = straight_spine(head, axis_toward_tail, length);
    if (auto r = validate_spine(s.spine)) throw std::invalid_argument("make_straight_snake: " + *r);
    CellSpace cs = cell_space(s.spine);
    for (const auto& cell : cs.skin) s.owned.insert(cell);
    for (const auto& cell : cs.supports) s.owned.insert(cell);
    // fill the ring lanes of whole interior layers starting at the head
    // end; the spine lane stays clear for turn space
    Coord d = axis_toward_tail;
    for (size_t layer = 0; layer < full_layers; ++layer) {
        for (const auto& cell : sorted_cells(cs.interior)) {
            Coord rel = cell - head;
            int along = rel.x * d.x + rel.y * d.y + rel.z * d.z;
            if (along != (int)layer - 1) continue;
            if (cell - d * along == head) continue;  // spine lane
            s.owned.insert(cell);
        }
    }
    return s;
}

Configuration snake_configuration(const SnakeState& s) {
    CellSet cells = s.owned;
    for (const auto& c : s.held) cells.insert(c);
    return Configuration(sorted_cells(cells));
}

namespace {

// ---------------------------------------------------------------------------
// Module routing: moves one module across the configuration through a given
// region by single-move steps, validating every emitted transformation.
// ---------------------------------------------------------------------------

struct Mover {
    ScheduleBuilder& b;
    SnakeState& s;

    void apply_bookkeeping(const Move& mv) {
        if (s.owned.count(mv.from)) {
            s.owned.erase(mv.from);
            s.owned.insert(mv.to);
        }
    }

    bool emit(const Move& mv) {
        if (!b.try_step(Transformation{mv})) return false;
        apply_bookkeeping(mv);
        return true;
    }

    // Legal single moves of the module at `from`, targets restricted to
    // `region` and empty cells.
    std::vector<Move> moves_from(const Coord& from, const CellSet& region) const {
        const CellSet& occ = b.config().set();
        std::vector<Move> out;
        for (const auto& d : kFaceDirs) {
            Coord to = from + d;
            if (occ.count(to) || !region.count(to)) continue;
            for (const auto& w : kFaceDirs) {
                if (w == d || w == -d) continue;
                if (occ.count(from + w) && occ.count(to + w)) {
                    out.push_back(Move::slide(from, to));
                    break;
                }
            }
        }
        for (const auto& u : kFaceDirs) {
            if (!occ.count(from + u)) continue;
            for (const auto& v : kFaceDirs) {
                if (u.x * v.x + u.y * v.y + u.z * v.z != 0) continue;
                Coord corner = from + v, to = from + u + v;
                if (occ.count(corner) || occ.count(to) || !region.count(to)) continue;
                out.push_back(Move::convex(from, u, v));
            }
        }
        return out;
    }

    // BFS route for the module at `from` to `target`; emits the path.
    bool route(const Coord& from, const Coord& target, const CellSet& region) {
        if (from == target) return true;
        const CellSet& occ = b.config().set();
        if (!occ.count(from) || occ.count(target)) return false;
        std::unordered_map<Coord, Move, CoordHash> parent;
        std::deque<Coord> q{from};
        CellSet seen{from};
        bool found = false;
        while (!q.empty() && !found) {
            Coord p = q.front();
            q.pop_front();
            // simulate the module standing at p: occupancy = occ - from + p
            for (const auto& mv : moves_virtual(occ, from, p, region)) {
                if (seen.count(mv.to)) continue;
                seen.insert(mv.to);
                parent.emplace(mv.to, mv);
                if (mv.to == target) {
                    found = true;
                    break;
                }
                q.push_back(mv.to);
            }
        }
        if (!found) return false;
        std::vector<Move> path;
        Coord cur = target;
        while (cur != from) {
            const Move& mv = parent.at(cur);
            path.push_back(mv);
            cur = mv.from;
        }
        std::reverse(path.begin(), path.end());
        for (const auto& mv : path)
            if (!emit(mv)) return false;
        return true;
    }

    // Moves available to a module whose home cell is `home` but which
    // currently stands at `at` (other cells static).
    std::vector<Move> moves_virtual(const CellSet& occ, const Coord& home, const Coord& at,
                                    const CellSet& region) const {
        std::vector<Move> out;
        auto occupied = [&](const Coord& c) { return c != home && (occ.count(c) || c == at); };
        for (const auto& d : kFaceDirs) {
            Coord to = at + d;
            if (occupied(to) || !region.count(to)) continue;
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
                if (occupied(corner) || occupied(to) || !region.count(to)) continue;
                out.push_back(Move::convex(at, u, v));
            }
        }
        return out;
    }

    // Fill `target` using the closest eligible source module, routed through
    // `region`. Sources must be owned, not supports of the current space.
    bool fill_from_cargo(const Coord& target, const CellSet& region, const CellSet& barred) {
        if (b.config().contains(target)) return true;
        CellVec sources;
        for (const auto& cell : s.owned)
            if (!barred.count(cell) && b.config().contains(cell)) sources.push_back(cell);
        std::sort(sources.begin(), sources.end(), [&](const Coord& a, const Coord& bb) {
            int da = l1_dist(a, target), db = l1_dist(bb, target);
            if (da != db) return da < db;
            return a < bb;
        });
        for (const auto& src : sources) {
            if (src == target) return true;
            if (route(src, target, region)) return true;
        }
        return false;
    }
};

// Direction of the head run (from the first vertex toward the second).
Coord head_axis(const SpinePath& p) { return p.vertices[1] - p.vertices[0]; }

// Promote minors to majors when the head path grows too long.
void normalize_majors_at_head(SpinePath& p) {
    while (p.majors.front() > 5 + 4) {
        size_t cand = p.majors.front() - 5;
        Coord d = p.vertices[cand + 1] - p.vertices[cand];
        for (size_t i = cand; i < p.majors.front(); ++i)
            if (p.vertices[i + 1] - p.vertices[i] != d)
                throw std::runtime_error("push: cannot promote major on a bent run");
        p.majors.insert(p.majors.begin(), cand);
    }
}

void drop_unneeded_tail_major(SpinePath& p) {
    while (p.majors.size() > 1 && p.vertices.size() - 1 - p.majors.back() < 1)
        p.majors.pop_back();
}

}  // namespace

void push(ScheduleBuilder& b, SnakeState& s, const Coord& dir) {
    if (!is_unit_axis(dir)) throw std::invalid_argument("push: dir must be a unit axis vector");
    SpinePath np = s.spine;
    np.vertices.insert(np.vertices.begin(), s.spine.head() + dir);
    for (auto& m : np.majors) ++m;
    normalize_majors_at_head(np);
    if (auto r = validate_spine(np)) throw std::invalid_argument("push: extended spine invalid: " + *r);

    CellSpace old_cs = cell_space(s.spine);
    CellSpace new_cs = cell_space(np);

    // entered cells: owned when free or empty, held when blocked
    CellVec entered;
    for (const auto& cell : sorted_cells(new_cs.all))
        if (!old_cs.all.count(cell)) entered.push_back(cell);
    for (const auto& cell : entered) {
        if (!b.config().contains(cell)) continue;
        CellSet rest = b.config().set();
        rest.erase(cell);
        bool free = is_connected(rest) && adjacent_to(rest, cell);
        if (free)
            s.owned.insert(cell);
        else
            s.held.insert(cell);
    }

    // structural targets that are still empty
    CellVec skin_targets, support_targets;
    for (const auto& cell : sorted_cells(new_cs.skin))
        if (!b.config().contains(cell)) skin_targets.push_back(cell);
    for (const auto& cell : sorted_cells(new_cs.supports))
        if (!b.config().contains(cell)) support_targets.push_back(cell);

    // cargo precondition: only binding when there is something to build
    if (!skin_targets.empty() || !support_targets.empty()) {
        size_t cargo = 0;
        for (const auto& cell : s.owned)
            if (new_cs.interior.count(cell) && linf_dist(cell, np.head()) > 2 &&
                !new_cs.supports.count(cell))
                ++cargo;
        if (cargo < 16)
            throw std::invalid_argument("push: fewer than 16 tail interior modules");
    }

    Mover mover{b, s};
    Coord h = s.spine.head();
    bool straight = np.vertices[1] - np.vertices[2] == dir;

    if (straight && !skin_targets.empty()) {
        // lateral axes
        Coord a{0, 0, 0}, c2{0, 0, 0};
        if (dir.x != 0) {
            a = {0, 1, 0};
            c2 = {0, 0, 1};
        } else if (dir.y != 0) {
            a = {1, 0, 0};
            c2 = {0, 0, 1};
        } else {
            a = {1, 0, 0};
            c2 = {0, 1, 0};
        }
        auto at = [&](int i, int j, int k) { return h + a * i + c2 * j + dir * k; };

        // ensure ring lift columns are stocked (usually a no-op)
        CellSet stock_barred = new_cs.skin;
        for (const auto& cell : new_cs.supports) stock_barred.insert(cell);
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j)
                for (int k = 0; k <= 2; ++k) {
                    if (i == 0 && j == 0) continue;
                    Coord cell = at(i, j, k);
                    if (!b.config().contains(at(i, j, 3)) && !b.config().contains(cell))
                        mover.fill_from_cargo(cell, new_cs.interior, stock_barred);
                }

        // column lifts toward the new front, ring columns first
        auto front_cell = [&](int i, int j) { return at(i, j, 3); };
        auto column_ready = [&](int i, int j) {
            return !b.config().contains(front_cell(i, j)) && b.config().contains(at(i, j, 2)) &&
                   b.config().contains(at(i, j, 1)) && b.config().contains(at(i, j, 0));
        };
        auto lift_column = [&](int i, int j) -> Transformation {
            Transformation t;
            t.push_back(Move::slide(at(i, j, 2), at(i, j, 3)));
            t.push_back(Move::slide(at(i, j, 1), at(i, j, 2)));
            t.push_back(Move::slide(at(i, j, 0), at(i, j, 1)));
            return t;
        };
        auto has_front_neighbor = [&](int i, int j) {
            for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
                if (std::abs(i + di) <= 1 && std::abs(j + dj) <= 1 &&
                    b.config().contains(front_cell(i + di, j + dj)))
                    return true;
            return false;
        };

        bool any_front = false;
        for (int i = -1; i <= 1 && !any_front; ++i)
            for (int j = -1; j <= 1 && !any_front; ++j)
                if (b.config().contains(front_cell(i, j))) any_front = true;
        if (!any_front) {
            // bootstrap: convex an end-plate ring module diagonally into the
            // front, lift its column, then slide it home
            bool boot = false;
            for (int i = -1; i <= 1 && !boot; ++i)
                for (int j = -1; j <= 1 && !boot; ++j) {
                    if (i == 0 && j == 0) continue;
                    if (!column_ready(i, j)) continue;
                    for (auto [pi, pj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
                        int ni = i + pi, nj = j + pj;
                        if (std::abs(ni) > 1 || std::abs(nj) > 1) continue;
                        Coord u = a * pi + c2 * pj;
                        Move mc = Move::convex(at(i, j, 2), u, dir);
                        if (!b.try_step(Transformation{mc})) continue;
                        mover.apply_bookkeeping(mc);
                        Transformation rest;
                        rest.push_back(Move::slide(at(i, j, 1), at(i, j, 2)));
                        rest.push_back(Move::slide(at(i, j, 0), at(i, j, 1)));
                        b.step(rest);
                        for (const auto& mv : rest) mover.apply_bookkeeping(mv);
                        Move back = Move::slide(at(ni, nj, 3), at(i, j, 3));
                        b.step(Transformation{back});
                        mover.apply_bookkeeping(back);
                        boot = true;
                        break;
                    }
                }
            if (!boot) throw std::runtime_error("push: bootstrap failed");
        }
        for (int round = 0; round < 10; ++round) {
            std::vector<Transformation> columns;
            for (int i = -1; i <= 1; ++i)
                for (int j = -1; j <= 1; ++j) {
                    if (i == 0 && j == 0) continue;  // the spine lane stays clear
                    if (!column_ready(i, j) || !has_front_neighbor(i, j)) continue;
                    columns.push_back(lift_column(i, j));
                }
            if (columns.empty()) break;
            Transformation batch;
            for (const auto& col : columns) batch.insert(batch.end(), col.begin(), col.end());
            if (b.try_step(batch)) {
                for (const auto& mv : batch) mover.apply_bookkeeping(mv);
                continue;
            }
            bool any = false;
            for (const auto& col : columns)
                if (b.try_step(col)) {
                    for (const auto& mv : col) mover.apply_bookkeeping(mv);
                    any = true;
                }
            if (!any) break;
        }

        // the new end plate's center comes from an edge neighbor before the
        // closure detaches the front from the old plate; the hole left in
        // the front ring is restocked by the cargo router afterwards
        if (!b.config().contains(at(0, 0, 3))) {
            for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
                if (!b.config().contains(at(i, j, 3))) continue;
                Move inward = Move::slide(at(i, j, 3), at(0, 0, 3));
                if (!b.try_step(Transformation{inward})) continue;
                mover.apply_bookkeeping(inward);
                break;
            }
        }

        // the old plate's center must stay anchored to the body while the
        // ring detaches: park a module right behind it on the spine lane.
        // The ring layer beside it supports the upcoming closure slides and
        // must not be drained for this.
        Coord core = at(0, 0, 1);
        if (!b.config().contains(core)) {
            CellSet core_barred = new_cs.skin;
            for (const auto& cell : new_cs.supports) core_barred.insert(cell);
            for (int i = -1; i <= 1; ++i)
                for (int j = -1; j <= 1; ++j)
                    for (int k = 1; k <= 3; ++k) core_barred.insert(at(i, j, k));
            mover.fill_from_cargo(core, new_cs.interior, core_barred);
        }

        // skin closure at the promoted layer: ring modules move outward
        Transformation t1;
        for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            Coord from = at(i, j, 2), to = at(2 * i, 2 * j, 2);
            if (b.config().contains(from) && !b.config().contains(to))
                t1.push_back(Move::slide(from, to));
        }
        for (auto [i, j] :
             std::vector<std::pair<int, int>>{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
            Coord from = at(i, j, 2), to = at(2 * i, j, 2);
            if (b.config().contains(from) && !b.config().contains(to))
                t1.push_back(Move::slide(from, to));
        }
        if (!t1.empty()) {
            b.step(t1);
            for (const auto& mv : t1) mover.apply_bookkeeping(mv);
        }
        // remaining strip cells from the old skin below, then refill those
        Transformation t2;
        for (auto [i, j] :
             std::vector<std::pair<int, int>>{{1, 2}, {-1, 2}, {1, -2}, {-1, -2}}) {
            Coord from = at(i, j, 1), to = at(i, j, 2);
            if (b.config().contains(from) && !b.config().contains(to))
                t2.push_back(Move::slide(from, to));
        }
        if (!t2.empty()) {
            b.step(t2);
            for (const auto& mv : t2) mover.apply_bookkeeping(mv);
        }
        Transformation t3;
        for (auto [i, j] :
             std::vector<std::pair<int, int>>{{1, 2}, {-1, 2}, {1, -2}, {-1, -2}}) {
            Coord from = at(i, j / 2, 1), to = at(i, j, 1);
            if (b.config().contains(from) && !b.config().contains(to))
                t3.push_back(Move::slide(from, to));
        }
        if (!t3.empty()) {
            b.step(t3);
            for (const auto& mv : t3) mover.apply_bookkeeping(mv);
        }
    }

    CellSet region = new_cs.all;
    CellSet barred = new_cs.skin;
    for (const auto& cell : new_cs.supports) barred.insert(cell);

    // Conveyor: every ring-lane cargo module slides one step toward the head
    // per round (the side skin supports the whole chain) until the head
    // region's ring cells are stocked.
    Coord f = -head_axis(np);  // toward the head along the head run
    auto on_spine_line = [&](const Coord& c) {
        for (const auto& v : np.vertices)
            if (v == c) return true;
        return false;
    };
    auto ring_head_targets = [&]() {
        CellVec out;
        for (const auto& cell : sorted_cells(new_cs.interior))
            if (linf_dist(cell, np.head()) <= 2 && !on_spine_line(cell) &&
                !b.config().contains(cell))
                out.push_back(cell);
        return out;
    };
    for (int round = 0; round < 24 && !ring_head_targets().empty(); ++round) {
        Transformation t;
        CellVec movers_order;
        for (const auto& cell : s.owned)
            if (new_cs.interior.count(cell) && !new_cs.supports.count(cell) &&
                !on_spine_line(cell))
                movers_order.push_back(cell);
        std::sort(movers_order.begin(), movers_order.end(), [&](const Coord& x, const Coord& y) {
            int dx = x.x * f.x + x.y * f.y + x.z * f.z;
            int dy = y.x * f.x + y.y * f.y + y.z * f.z;
            if (dx != dy) return dx > dy;  // frontmost first
            return x < y;
        });
        CellSet vacated;
        for (const auto& cell : movers_order) {
            Coord to = cell + f;
            if (!new_cs.interior.count(to) || on_spine_line(to)) continue;
            bool free_target = !b.config().contains(to) || vacated.count(to);
            if (!free_target) continue;
            t.push_back(Move::slide(cell, to));
            vacated.insert(cell);
        }
        if (t.empty() || !b.try_step(t)) break;
        for (const auto& mv : t) mover.apply_bookkeeping(mv);
    }
    // structural leftovers (including the new end plate's center) by routed
    // cargo; the structure itself is never a cargo source
    for (const auto& cell : skin_targets)
        if (!b.config().contains(cell) && !mover.fill_from_cargo(cell, region, barred))
            throw std::runtime_error("push: cannot complete skin at " + to_string(cell));
    for (const auto& cell : support_targets)
        if (!b.config().contains(cell) && !mover.fill_from_cargo(cell, region, barred))
            throw std::runtime_error("push: cannot place support at " + to_string(cell));
    for (const auto& cell : ring_head_targets())
        mover.fill_from_cargo(cell, new_cs.interior, barred);

    s.spine = std::move(np);
    if (auto r = validate_snake(s, b.config()))
        throw std::runtime_error("push: resulting snake invalid: " + *r);
}

void pull(ScheduleBuilder& b, SnakeState& s) {
    SpinePath np = s.spine;
    np.vertices.pop_back();
    drop_unneeded_tail_major(np);
    if (np.majors.empty() || np.majors.back() + 1 >= np.vertices.size())
        throw std::invalid_argument("pull: spine too short");
    if (auto r = validate_spine(np)) throw std::invalid_argument("pull: shortened spine invalid: " + *r);

    CellSpace old_cs = cell_space(s.spine);
    CellSpace new_cs = cell_space(np);

    CellVec departing;
    for (const auto& cell : sorted_cells(old_cs.all))
        if (!new_cs.all.count(cell)) departing.push_back(cell);

    // held cells leaving the space leave their module behind
    CellVec supply;
    for (const auto& cell : departing) {
        if (!b.config().contains(cell)) continue;
        if (s.held.count(cell)) {
            s.held.erase(cell);
            continue;
        }
        if (s.owned.count(cell)) supply.push_back(cell);
    }

    CellVec required;
    for (const auto& cell : sorted_cells(new_cs.skin))
        if (!b.config().contains(cell)) required.push_back(cell);
    for (const auto& cell : sorted_cells(new_cs.supports))
        if (!b.config().contains(cell)) required.push_back(cell);

    size_t stash_capacity = 0;
    for (const auto& cell : new_cs.interior)
        if (!b.config().contains(cell)) ++stash_capacity;
    if (supply.size() > required.size() &&
        supply.size() - required.size() > stash_capacity)
        throw std::invalid_argument("pull: tail interior full");

    Mover mover{b, s};
    CellSet region = old_cs.all;

    // route departing modules to the structural targets, nearest pairs first
    CellSet unmet(required.begin(), required.end());
    for (int guard = 0; guard < 64 && !unmet.empty(); ++guard) {
        bool progress = false;
        CellVec targets = sorted_cells(unmet);
        for (const auto& tgt : targets) {
            CellVec sources = supply;
            std::sort(sources.begin(), sources.end(), [&](const Coord& x, const Coord& y) {
                int dx = l1_dist(x, tgt), dy = l1_dist(y, tgt);
                if (dx != dy) return dx < dy;
                return x < y;
            });
            for (const auto& src : sources) {
                if (!b.config().contains(src)) continue;
                if (mover.route(src, tgt, region)) {
                    supply.erase(std::remove(supply.begin(), supply.end(), src), supply.end());
                    unmet.erase(tgt);
                    progress = true;
                    break;
                }
            }
            if (progress) break;
        }
        if (!progress) break;
    }
    // shortfall: draw from interior cargo
    for (const auto& tgt : sorted_cells(unmet)) {
        if (b.config().contains(tgt)) continue;
        if (!mover.fill_from_cargo(tgt, region, new_cs.supports))
            throw std::runtime_error("pull: cannot rebuild tail at " + to_string(tgt));
    }
    // stash leftovers into the interior
    for (const auto& src : supply) {
        if (!b.config().contains(src) || new_cs.all.count(src)) continue;
        CellVec slots;
        for (const auto& cell : new_cs.interior)
            if (!b.config().contains(cell)) slots.push_back(cell);
        std::sort(slots.begin(), slots.end(), [&](const Coord& x, const Coord& y) {
            int dx = l1_dist(x, src), dy = l1_dist(y, src);
            if (dx != dy) return dx < dy;
            return x < y;
        });
        bool placed = false;
        for (const auto& slot : slots)
            if (mover.route(src, slot, region)) {
                placed = true;
                break;
            }
        if (!placed) throw std::runtime_error("pull: cannot retract module at " + to_string(src));
    }

    s.spine = std::move(np);
    if (auto r = validate_snake(s, b.config()))
        throw std::runtime_error("pull: resulting snake invalid: " + *r);
}

void reverse_snake(ScheduleBuilder& b, SnakeState& s) {
    s.spine = s.spine.reversed();
    CellSpace cs = cell_space(s.spine);
    Mover mover{b, s};
    // restock the new head section from the cargo farthest from it
    CellVec targets;
    for (const auto& cell : sorted_cells(cs.interior))
        if (linf_dist(cell, s.spine.head()) <= 2 && !b.config().contains(cell))
            targets.push_back(cell);
    std::sort(targets.begin(), targets.end(), [&](const Coord& x, const Coord& y) {
        int dx = linf_dist(x, s.spine.head()), dy = linf_dist(y, s.spine.head());
        if (dx != dy) return dx < dy;
        return x < y;
    });
    for (const auto& tgt : targets) {
        CellVec sources;
        for (const auto& cell : s.owned)
            if (cs.interior.count(cell) && !cs.supports.count(cell) &&
                linf_dist(cell, s.spine.head()) > 2)
                sources.push_back(cell);
        std::sort(sources.begin(), sources.end(), [&](const Coord& x, const Coord& y) {
            int dx = l1_dist(x, s.spine.head()), dy = l1_dist(y, s.spine.head());
            if (dx != dy) return dx > dy;  // farthest first
            return x < y;
        });
        for (const auto& src : sources)
            if (mover.route(src, tgt, cs.interior)) break;
    }
    if (auto r = validate_snake(s, b.config()))
        throw std::runtime_error("reverse: resulting snake invalid: " + *r);
}

ForkResult fork(ScheduleBuilder& b, const SnakeState& s, size_t major_index) {
    if (!s.spine.is_major(major_index)) throw std::invalid_argument("fork: not a major vertex");
    if (major_index < 5) throw std::invalid_argument("fork: major too close to the head");
    const auto& v = s.spine.vertices;

    ForkResult r;
    // active suffix with the major as its head
    r.active.spine.vertices.assign(v.begin() + (long)major_index, v.end());
    for (size_t m : s.spine.majors)
        if (m > major_index) r.active.spine.majors.push_back(m - major_index);
    if (r.active.spine.majors.empty())
        throw std::invalid_argument("fork: suffix has no major vertex");
    // parked prefix ends three vertices before the major; the two cell
    // spaces then tile the original one with a shared two-layer wall
    r.parked.spine.vertices.assign(v.begin(), v.begin() + (long)(major_index - 2));
    for (size_t m : s.spine.majors)
        if (m + 3 <= major_index) r.parked.spine.majors.push_back(m);
    if (r.parked.spine.majors.empty())
        throw std::invalid_argument("fork: prefix has no major vertex");
    if (auto err = validate_spine(r.active.spine))
        throw std::invalid_argument("fork: active spine invalid: " + *err);
    if (auto err = validate_spine(r.parked.spine))
        throw std::invalid_argument("fork: parked spine invalid: " + *err);

    CellSpace acs = cell_space(r.active.spine);
    CellSpace pcs = cell_space(r.parked.spine);

    // split bookkeeping by cell space; the shared wall goes to the parked side
    SnakeState work = s;  // mover updates owned cells on this copy
    Mover mover{b, work};
    CellVec wall_targets;
    for (const auto& cell : sorted_cells(acs.skin))
        if (!b.config().contains(cell)) wall_targets.push_back(cell);
    for (const auto& cell : sorted_cells(pcs.skin))
        if (!b.config().contains(cell)) wall_targets.push_back(cell);
    for (const auto& cell : sorted_cells(acs.supports))
        if (!b.config().contains(cell)) wall_targets.push_back(cell);
    for (const auto& cell : sorted_cells(pcs.supports))
        if (!b.config().contains(cell)) wall_targets.push_back(cell);
    CellSet whole = cell_space(s.spine).all;
    CellSet barred = acs.supports;
    for (const auto& c : pcs.supports) barred.insert(c);
    for (const auto& tgt : wall_targets)
        if (!b.config().contains(tgt) && !mover.fill_from_cargo(tgt, whole, barred))
            throw std::runtime_error("fork: cannot build the shared wall at " + to_string(tgt));

    for (const auto& cell : work.owned) {
        if (pcs.all.count(cell))
            r.parked.owned.insert(cell);  // shared wall stays with the parked side
        else if (acs.all.count(cell))
            r.active.owned.insert(cell);
        else
            throw std::logic_error("fork: owned cell outside both spaces");
    }
    for (const auto& cell : work.held) {
        if (pcs.all.count(cell))
            r.parked.held.insert(cell);
        else
            r.active.held.insert(cell);
    }
    if (auto err = validate_snake(r.active, b.config()))
        throw std::runtime_error("fork: active snake invalid: " + *err);
    if (auto err = validate_snake(r.parked, b.config()))
        throw std::runtime_error("fork: parked snake invalid: " + *err);
    return r;
}

SnakeState join(ScheduleBuilder& b, const SnakeState& active, const SnakeState& parked) {
    // the active head must sit three steps beyond the parked tail on one axis
    Coord gap = active.spine.head() - parked.spine.tail();
    if (gap.l1() != 3 || gap.linf() != 3)
        throw std::invalid_argument("join: spines not aligned");
    Coord d{gap.x == 0 ? 0 : gap.x / 3, gap.y == 0 ? 0 : gap.y / 3, gap.z == 0 ? 0 : gap.z / 3};

    SnakeState out;
    out.spine.vertices = parked.spine.vertices;
    for (int i = 1; i <= 2; ++i) out.spine.vertices.push_back(parked.spine.tail() + d * i);
    out.spine.vertices.insert(out.spine.vertices.end(), active.spine.vertices.begin(),
                              active.spine.vertices.end());
    size_t off = parked.spine.vertices.size() + 2;
    out.spine.majors = parked.spine.majors;
    out.spine.majors.push_back(off);  // the former active head becomes a major
    for (size_t m : active.spine.majors) out.spine.majors.push_back(off + m);
    std::sort(out.spine.majors.begin(), out.spine.majors.end());
    if (auto err = validate_spine(out.spine))
        throw std::invalid_argument("join: merged spine invalid: " + *err);

    out.owned = parked.owned;
    for (const auto& c : active.owned) out.owned.insert(c);
    out.held = parked.held;
    for (const auto& c : active.held) out.held.insert(c);
    // cells of the merged space that neither side tracked (the gap wall)
    CellSpace cs = cell_space(out.spine);
    for (const auto& cell : cs.all)
        if (b.config().contains(cell) && !out.owned.count(cell) && !out.held.count(cell)) {
            CellSet rest = b.config().set();
            rest.erase(cell);
            bool free = is_connected(rest) && adjacent_to(rest, cell);
            if (free) out.owned.insert(cell);
        }
    if (auto err = validate_snake(out, b.config()))
        throw std::runtime_error("join: merged snake invalid: " + *err);
    return out;
}

void consume(ScheduleBuilder& b, SnakeState& s, const Coord& m) {
    if (!b.config().contains(m)) throw std::invalid_argument("consume: cell not occupied");
    CellSpace cs = cell_space(s.spine);
    if (cs.all.count(m)) {
        if (s.held.count(m)) {
            s.held.erase(m);
            s.owned.insert(m);
            return;
        }
        if (!s.owned.count(m)) s.owned.insert(m);
        return;
    }
    {
        CellSet rest = b.config().set();
        rest.erase(m);
        if (!is_connected(rest) || !adjacent_to(rest, m))
            throw std::invalid_argument("consume: module not free");
    }
    // find a major with the module in reach
    std::optional<size_t> major;
    for (size_t k : s.spine.majors)
        if (linf_dist(s.spine.vertices[k], m) <= 2) major = k;
    if (!major) throw std::invalid_argument("consume: no major vertex in range");

    // engulf via a temporary fork and a short push round trip
    size_t k = *major;
    Coord v = s.spine.vertices[k];
    Coord rel = m - v;
    // primary axis step toward the module, orthogonal to the local spine
    Coord spine_dir = s.spine.vertices[k + 1] - s.spine.vertices[k];
    CellVec dirs;
    for (const auto& d : kFaceDirs) {
        int along = d.x * rel.x + d.y * rel.y + d.z * rel.z;
        if (along > 0 && d != spine_dir && d != -spine_dir) dirs.push_back(d);
    }
    if (dirs.empty()) throw std::invalid_argument("consume: module behind the spine axis");

    if (k >= 5 && k + 5 < s.spine.vertices.size()) {
        ForkResult fr = fork(b, s, k);
        size_t pushes = 0;
        for (const auto& d : dirs) {
            while (!cell_space(fr.active.spine).all.count(m) && pushes < 2) {
                push(b, fr.active, d);
                ++pushes;
            }
            if (cell_space(fr.active.spine).all.count(m)) break;
        }
        if (!cell_space(fr.active.spine).all.count(m))
            throw std::runtime_error("consume: engulf failed");
        consume(b, fr.active, m);  // bookkeeping: the cell is in space now
        for (size_t i = 0; i < pushes; ++i) {
            reverse_snake(b, fr.active);
            pull(b, fr.active);
            reverse_snake(b, fr.active);
        }
        s = join(b, fr.active, fr.parked);
    } else {
        // the module sits near the head-adjacent major: push the whole snake
        size_t pushes = 0;
        Coord d = dirs.front();
        while (!cell_space(s.spine).all.count(m) && pushes < 3) {
            push(b, s, d);
            ++pushes;
        }
        if (!cell_space(s.spine).all.count(m))
            throw std::runtime_error("consume: engulf failed at head");
        consume(b, s, m);
        for (size_t i = 0; i < pushes; ++i) {
            reverse_snake(b, s);
            pull(b, s);
            reverse_snake(b, s);
        }
    }
}

void dfs_traverse(ScheduleBuilder& b, SnakeState& s, const CellVec& modules, int meta) {
    auto meta_of = [meta](const Coord& c) {
        auto f = [meta](int v) { return v >= 0 ? v / meta : (v - meta + 1) / meta; };
        return Coord{f(c.x), f(c.y), f(c.z)};
    };
    auto center_of = [meta](const Coord& mc) {
        return Coord{mc.x * meta + meta / 2, mc.y * meta + meta / 2, mc.z * meta + meta / 2};
    };

    std::vector<SnakeState> parked;
    for (const auto& m : modules) {
        // already reachable?
        CellSpace cs = cell_space(s.spine);
        if (cs.all.count(m)) {
            consume(b, s, m);
            continue;
        }
        bool near_major = false;
        for (size_t k : s.spine.majors)
            if (linf_dist(s.spine.vertices[k], m) <= 2) near_major = true;
        if (near_major) {
            consume(b, s, m);
            continue;
        }

        Coord target_center = center_of(meta_of(m));
        // head already centered in the module's meta-cell?
        if (s.spine.head() == target_center) {
            consume(b, s, m);
            continue;
        }
        // move the head toward the target center, one axis at a time, in
        // steps of five to stay meta-aligned
        int guard = 0;
        while (s.spine.head() != target_center && guard++ < 64) {
            Coord diff = target_center - s.spine.head();
            Coord d{0, 0, 0};
            if (diff.x != 0) d = {diff.x > 0 ? 1 : -1, 0, 0};
            else if (diff.y != 0) d = {0, diff.y > 0 ? 1 : -1, 0};
            else d = {0, 0, diff.z > 0 ? 1 : -1};
            bool pushed = false;
            try {
                for (int i = 0; i < meta; ++i) push(b, s, d);
                pushed = true;
            } catch (const std::exception&) {
                pushed = false;
            }
            if (pushed) continue;
            // cannot extend: fork at the major nearest the target and
            // continue with the suffix snake
            std::optional<size_t> best;
            int bestd = 0;
            for (size_t k : s.spine.majors) {
                if (k < 5 || k + 5 >= s.spine.vertices.size()) continue;
                int dd = l1_dist(s.spine.vertices[k], target_center);
                if (!best || dd < bestd) {
                    best = k;
                    bestd = dd;
                }
            }
            if (!best) throw std::runtime_error("dfs_traverse: no fork point available");
            ForkResult fr = fork(b, s, *best);
            parked.push_back(std::move(fr.parked));
            s = std::move(fr.active);
        }
        consume(b, s, m);

        // opportunistic joins with parked segments
        for (size_t i = 0; i < parked.size();) {
            bool joined = false;
            Coord gap = s.spine.head() - parked[i].spine.tail();
            if (gap.l1() == 3 && gap.linf() == 3) {
                try {
                    s = join(b, s, parked[i]);
                    parked.erase(parked.begin() + (long)i);
                    joined = true;
                } catch (const std::exception&) {
                }
            }
            if (!joined) ++i;
        }
    }
    for (size_t i = 0; i < parked.size();) {
        Coord gap = s.spine.head() - parked[i].spine.tail();
        bool joined = false;
        if (gap.l1() == 3 && gap.linf() == 3) {
            try {
                s = join(b, s, parked[i]);
                parked.erase(parked.begin() + (long)i);
                joined = true;
            } catch (const std::exception&) {
            }
        }
        if (!joined) ++i;
    }
    if (!parked.empty())
        throw std::runtime_error("dfs_traverse: " + std::to_string(parked.size()) +
                                 " spine segments left unjoined");
}

}  // namespace sc
