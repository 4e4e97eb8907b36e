#include "slidingcubes/moves.hpp"

#include <algorithm>
#include <unordered_map>

namespace sc {

namespace {

bool support_pair_exists(const CellSet& cells, const Coord& from, const Coord& to,
                         const Coord& dir) {
    for (const auto& w : kFaceDirs) {
        if (w == dir || w == -dir) continue;
        if (cells.count(from + w) && cells.count(to + w)) return true;
    }
    return false;
}

}  // namespace

bool is_legal_slide(const CellSet& cells, const Coord& from, const Coord& to) {
    if (!cells.count(from)) throw std::invalid_argument("is_legal_slide: from not occupied");
    Coord u = to - from;
    if (!is_unit_axis(u)) return false;
    if (cells.count(to)) return false;
    return support_pair_exists(cells, from, to, u);
}

bool is_legal_slide(const Configuration& c, const Coord& from, const Coord& to) {
    return is_legal_slide(c.set(), from, to);
}

bool is_legal_convex(const CellSet& cells, const Coord& from, const Coord& u, const Coord& v) {
    if (!cells.count(from)) throw std::invalid_argument("is_legal_convex: from not occupied");
    if (!is_unit_axis(u) || !is_unit_axis(v) ||
        u.x * v.x + u.y * v.y + u.z * v.z != 0)
        throw std::invalid_argument("is_legal_convex: u, v must be orthogonal unit axis vectors");
    if (!cells.count(from + u)) return false;       // pivot
    if (cells.count(from + v)) return false;        // swept corner
    if (cells.count(from + u + v)) return false;    // target
    return true;
}

bool is_legal_convex(const Configuration& c, const Coord& from, const Coord& u, const Coord& v) {
    return is_legal_convex(c.set(), from, u, v);
}

std::string rule_name(Rule r) {
    switch (r) {
        case Rule::SourceMissing: return "precondition: source not occupied";
        case Rule::DuplicateSource: return "precondition: duplicate source";
        case Rule::IllegalMove: return "illegal move";
        case Rule::BackboneNotFree: return "backbone: moving set not free";
        case Rule::BackboneEmpty: return "backbone: all modules moving";
        case Rule::TargetOccupied: return "collision: target occupied";
        case Rule::DuplicateTarget: return "collision: duplicate target";
        case Rule::CollisionSwap: return "collision: swap";
        case Rule::CollisionSwept: return "collision: swept cells";
        case Rule::Disconnected: return "disconnected result";
    }
    return "unknown";
}

ValidationResult validate_transformation(const Configuration& c, const Transformation& t) {
    ValidationResult res;
    if (t.empty()) return res;
    const CellSet& cells = c.set();

    CellSet sources;
    for (size_t i = 0; i < t.size(); ++i) {
        const Move& m = t[i];
        if (!cells.count(m.from))
            res.violations.push_back({Rule::SourceMissing, {i}, to_string(m.from)});
        if (!sources.insert(m.from).second)
            res.violations.push_back({Rule::DuplicateSource, {i}, to_string(m.from)});
    }
    if (!res.ok()) return res;

    // Moving everything leaves no backbone.
    if (sources.size() == c.size()) {
        res.violations.push_back({Rule::BackboneEmpty, {}, ""});
        return res;
    }

    auto is_static = [&](const Coord& cell) { return cells.count(cell) && !sources.count(cell); };

    // Per-move legality, evaluated against the pre-step configuration; a
    // target may coincide with another move's source (checked below).
    for (size_t i = 0; i < t.size(); ++i) {
        const Move& m = t[i];
        if (m.kind == MoveKind::Slide) {
            Coord u = m.to - m.from;
            if (!is_unit_axis(u)) {
                res.violations.push_back({Rule::IllegalMove, {i}, "slide distance != 1"});
                continue;
            }
            if (!support_pair_exists(cells, m.from, m.to, u))
                res.violations.push_back({Rule::IllegalMove, {i}, "slide without support pair"});
        } else {
            Coord u = m.to - m.corner;
            Coord v = m.corner - m.from;
            if (!is_unit_axis(u) || !is_unit_axis(v) ||
                u.x * v.x + u.y * v.y + u.z * v.z != 0) {
                res.violations.push_back({Rule::IllegalMove, {i}, "malformed convex transition"});
                continue;
            }
            if (!is_static(m.from + u))
                res.violations.push_back({Rule::IllegalMove, {i}, "convex pivot not stationary"});
            if (cells.count(m.corner))
                res.violations.push_back({Rule::IllegalMove, {i}, "convex corner occupied"});
            if (cells.count(m.to))
                res.violations.push_back({Rule::IllegalMove, {i}, "convex target occupied"});
        }
    }
    if (!res.ok()) return res;

    // Backbone: the set of sources must be free.
    CellVec mvec(sources.begin(), sources.end());
    if (!is_free_set(cells, mvec)) res.violations.push_back({Rule::BackboneNotFree, {}, ""});

    // Targets: pairwise distinct and disjoint from static modules.
    std::unordered_map<Coord, size_t, CoordHash> target_of;
    for (size_t i = 0; i < t.size(); ++i) {
        const Move& m = t[i];
        auto [it, fresh] = target_of.emplace(m.to, i);
        if (!fresh) res.violations.push_back({Rule::DuplicateTarget, {it->second, i}, to_string(m.to)});
        if (is_static(m.to))
            res.violations.push_back({Rule::TargetOccupied, {i}, to_string(m.to)});
    }

    // Collision rules on swept cells. Two slides may share exactly one cell
    // if it is the target of one and the source of the other (a handoff);
    // a convex transition's swept cells must be disjoint from every other
    // move's swept cells.
    for (size_t i = 0; i < t.size(); ++i) {
        for (size_t j = i + 1; j < t.size(); ++j) {
            auto si = t[i].swept();
            auto sj = t[j].swept();
            std::vector<Coord> shared;
            for (const auto& a : si)
                for (const auto& b : sj)
                    if (a == b) shared.push_back(a);
            if (shared.empty()) continue;
            if (t[i].kind == MoveKind::Convex || t[j].kind == MoveKind::Convex) {
                res.violations.push_back({Rule::CollisionSwept, {i, j}, "convex swept overlap"});
                continue;
            }
            if (shared.size() >= 2) {
                bool swap = (t[i].to == t[j].from && t[j].to == t[i].from);
                res.violations.push_back({swap ? Rule::CollisionSwap : Rule::CollisionSwept,
                                          {i, j},
                                          swap ? "" : "multiple shared cells"});
                continue;
            }
            const Coord& s = shared.front();
            bool handoff = (t[i].to == s && t[j].from == s) || (t[j].to == s && t[i].from == s);
            if (!handoff)
                res.violations.push_back({Rule::CollisionSwept, {i, j}, to_string(s)});
        }
    }
    if (!res.ok()) return res;

    // Resulting configuration must be connected.
    CellSet after = cells;
    for (const auto& m : t) after.erase(m.from);
    for (const auto& m : t) after.insert(m.to);
    if (after.size() != cells.size() || !is_connected(after))
        res.violations.push_back({Rule::Disconnected, {}, ""});
    return res;
}

Configuration apply_unchecked(const Configuration& c, const Transformation& t) {
    CellSet after = c.set();
    for (const auto& m : t) after.erase(m.from);
    for (const auto& m : t) after.insert(m.to);
    return Configuration::unchecked(sorted_cells(after));
}

Configuration apply_transformation(const Configuration& c, const Transformation& t) {
    auto res = validate_transformation(c, t);
    if (!res.ok())
        throw std::invalid_argument("apply_transformation: " +
                                    rule_name(res.violations.front().rule));
    return apply_unchecked(c, t);
}

std::optional<ScheduleError> validate_schedule(const Configuration& c_init,
                                               const Schedule& schedule,
                                               const Configuration& c_final) {
    Configuration cur = c_init;
    for (size_t i = 0; i < schedule.steps.size(); ++i) {
        auto res = validate_transformation(cur, schedule.steps[i]);
        if (!res.ok()) return ScheduleError{i, res.violations, ""};
        cur = apply_unchecked(cur, schedule.steps[i]);
    }
    if (!(cur == c_final))
        return ScheduleError{schedule.steps.size(), {}, "final configuration mismatch"};
    return std::nullopt;
}

Configuration apply_all(const Configuration& c, const Schedule& s) {
    Configuration cur = c;
    for (const auto& t : s.steps) cur = apply_unchecked(cur, t);
    return cur;
}

Schedule reversed(const Schedule& s) {
    Schedule out;
    out.steps.reserve(s.steps.size());
    for (auto it = s.steps.rbegin(); it != s.steps.rend(); ++it) {
        Transformation t;
        t.reserve(it->size());
        for (const auto& m : *it) t.push_back(m.reversed());
        out.steps.push_back(std::move(t));
    }
    return out;
}

Schedule concat(std::initializer_list<const Schedule*> parts) {
    Schedule out;
    for (const auto* p : parts)
        out.steps.insert(out.steps.end(), p->steps.begin(), p->steps.end());
    return out;
}

void append(Schedule& dst, const Schedule& src) {
    dst.steps.insert(dst.steps.end(), src.steps.begin(), src.steps.end());
}

}  // namespace sc
