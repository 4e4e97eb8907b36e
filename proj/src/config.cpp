#include "slidingcubes/config.hpp"

#include <algorithm>
#include <queue>

namespace sc {

CellVec neighbors_l1(const Coord& c) {
    CellVec out;
    out.reserve(6);
    for (const auto& d : kFaceDirs) out.push_back(c + d);
    return out;
}

CellVec neighbors_linf(const Coord& c) {
    CellVec out;
    out.reserve(26);
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dz = -1; dz <= 1; ++dz) {
                if (dx == 0 && dy == 0 && dz == 0) continue;
                out.push_back(c + Coord{dx, dy, dz});
            }
    return out;
}

CellSet r_neighborhood(const CellSet& cells, int r, Norm norm, bool closed) {
    if (r < 1) throw std::invalid_argument("r_neighborhood: r must be >= 1");
    CellSet acc = cells;
    for (int i = 0; i < r; ++i) {
        CellSet next = acc;
        for (const auto& c : acc) {
            if (norm == Norm::L1) {
                for (const auto& d : kFaceDirs) next.insert(c + d);
            } else {
                for (const auto& n : neighbors_linf(c)) next.insert(n);
            }
        }
        acc = std::move(next);
    }
    if (!closed)
        for (const auto& c : cells) acc.erase(c);
    return acc;
}

bool is_connected(const CellSet& cells) {
    if (cells.empty()) return false;
    std::vector<Coord> stack{*cells.begin()};
    CellSet seen{stack.front()};
    while (!stack.empty()) {
        Coord c = stack.back();
        stack.pop_back();
        for (const auto& d : kFaceDirs) {
            Coord n = c + d;
            if (cells.count(n) && !seen.count(n)) {
                seen.insert(n);
                stack.push_back(n);
            }
        }
    }
    return seen.size() == cells.size();
}

bool is_connected(const CellVec& cells) {
    return is_connected(CellSet(cells.begin(), cells.end()));
}

Configuration::Configuration(CellVec cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    if (cells.empty()) throw std::invalid_argument("Configuration: empty cell set");
    set_ = CellSet(cells.begin(), cells.end());
    if (!is_connected(set_)) throw std::invalid_argument("Configuration: not connected");
    cells_ = std::move(cells);
    bbox_ = bounding_box(cells_);
}

Configuration Configuration::unchecked(CellVec sorted_cells) {
    Configuration c;
    c.set_ = CellSet(sorted_cells.begin(), sorted_cells.end());
    c.cells_ = std::move(sorted_cells);
    c.bbox_ = bounding_box(c.cells_);
    return c;
}

Configuration Configuration::translated(const Coord& by) const {
    CellVec out;
    out.reserve(cells_.size());
    for (const auto& c : cells_) out.push_back(c + by);
    return Configuration(std::move(out));
}

bool is_free_set(const CellSet& cells, const CellVec& m) {
    CellSet mset(m.begin(), m.end());
    for (const auto& c : m)
        if (!cells.count(c)) throw std::invalid_argument("is_free_set: M not a subset of C");
    if (mset.size() >= cells.size()) throw std::invalid_argument("is_free_set: M equals C");

    CellSet rest = cells;
    for (const auto& c : m) rest.erase(c);
    if (!is_connected(rest)) return false;
    for (const auto& c : m) {
        bool touching = false;
        for (const auto& d : kFaceDirs)
            if (rest.count(c + d)) {
                touching = true;
                break;
            }
        if (!touching) return false;
    }
    return true;
}

bool is_free_set(const Configuration& c, const CellVec& m) {
    return is_free_set(c.set(), m);
}

CellVec free_modules(const Configuration& c) {
    CellVec out;
    if (c.size() == 1) return c.cells();  // vacuously free
    for (const auto& cell : c.cells())
        if (is_free_set(c, {cell})) out.push_back(cell);
    return out;
}

Projection2D project(const Configuration& c, char axis) {
    Projection2D p;
    p.axis = axis;
    std::vector<std::pair<int, int>> v;
    v.reserve(c.size());
    for (const auto& cell : c.cells()) {
        switch (axis) {
            case 'x': v.emplace_back(cell.y, cell.z); break;
            case 'y': v.emplace_back(cell.x, cell.z); break;
            case 'z': v.emplace_back(cell.x, cell.y); break;
            default: throw std::invalid_argument("project: axis must be x, y or z");
        }
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    p.cells = std::move(v);
    return p;
}

bool is_compact(const Configuration& c) {
    for (const auto& u : c.cells()) {
        int sx = u.x >= 0 ? 1 : -1, sy = u.y >= 0 ? 1 : -1, sz = u.z >= 0 ? 1 : -1;
        for (int a = 0; a != u.x + sx; a += sx)
            for (int b = 0; b != u.y + sy; b += sy)
                for (int d = 0; d != u.z + sz; d += sz)
                    if (!c.contains({a, b, d})) return false;
    }
    return true;
}

BoundingBox bounding_box(const CellVec& cells) {
    if (cells.empty()) throw std::invalid_argument("bounding_box: empty set");
    BoundingBox b{cells.front(), cells.front()};
    for (const auto& c : cells) {
        b.min.x = std::min(b.min.x, c.x);
        b.min.y = std::min(b.min.y, c.y);
        b.min.z = std::min(b.min.z, c.z);
        b.max.x = std::max(b.max.x, c.x);
        b.max.y = std::max(b.max.y, c.y);
        b.max.z = std::max(b.max.z, c.z);
    }
    return b;
}

CellVec sorted_cells(const CellSet& cells) {
    CellVec v(cells.begin(), cells.end());
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace sc
