#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <string>

namespace sc {

/// A lattice cell, anchored at its minimal coordinates. x points east,
/// y north, z up.
struct Coord {
    int x = 0;
    int y = 0;
    int z = 0;

    friend constexpr auto operator<=>(const Coord&, const Coord&) = default;

    constexpr Coord operator+(const Coord& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Coord operator-(const Coord& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Coord operator-() const { return {-x, -y, -z}; }
    constexpr Coord operator*(int k) const { return {x * k, y * k, z * k}; }

    constexpr int l1() const { return std::abs(x) + std::abs(y) + std::abs(z); }
    constexpr int linf() const {
        int a = std::abs(x), b = std::abs(y), c = std::abs(z);
        return a > b ? (a > c ? a : c) : (b > c ? b : c);
    }
};

inline int l1_dist(const Coord& a, const Coord& b) { return (a - b).l1(); }
inline int linf_dist(const Coord& a, const Coord& b) { return (a - b).linf(); }

/// The six axis directions, in the canonical order used for deterministic
/// traversals: -x, +x, -y, +y, -z, +z.
inline constexpr std::array<Coord, 6> kFaceDirs = {
    Coord{-1, 0, 0}, Coord{1, 0, 0},  Coord{0, -1, 0},
    Coord{0, 1, 0},  Coord{0, 0, -1}, Coord{0, 0, 1},
};

inline constexpr bool is_unit_axis(const Coord& v) {
    return v.l1() == 1;
}

inline std::string to_string(const Coord& c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

inline std::ostream& operator<<(std::ostream& os, const Coord& c) {
    return os << to_string(c);
}

struct CoordHash {
    size_t operator()(const Coord& c) const {
        // splitmix-style mix of the three packed coordinates
        uint64_t h = (uint64_t)(uint32_t)c.x;
        h = h * 0x9E3779B97F4A7C15ull + (uint64_t)(uint32_t)c.y;
        h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ull + (uint64_t)(uint32_t)c.z;
        h = (h ^ (h >> 27)) * 0x94D049BB133111EBull;
        return (size_t)(h ^ (h >> 31));
    }
};

}  // namespace sc

template <>
struct std::hash<sc::Coord> {
    size_t operator()(const sc::Coord& c) const { return sc::CoordHash{}(c); }
};
