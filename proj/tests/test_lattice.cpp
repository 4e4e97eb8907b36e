#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "slidingcubes/config.hpp"

using namespace sc;

namespace {

Configuration random_blob(std::mt19937_64& rng, size_t n) {
    CellSet cells{{0, 0, 0}};
    while (cells.size() < n) {
        CellVec frontier;
        for (const auto& c : cells)
            for (const auto& d : kFaceDirs)
                if (!cells.count(c + d)) frontier.push_back(c + d);
        std::sort(frontier.begin(), frontier.end());
        frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
        cells.insert(frontier[rng() % frontier.size()]);
    }
    return Configuration(sorted_cells(cells));
}

// independent oracle: all subset removals keep the configuration connected
bool free_by_enumeration(const Configuration& c, const CellVec& m) {
    size_t k = m.size();
    for (uint32_t mask = 0; mask < (1u << k); ++mask) {
        CellSet rest = c.set();
        for (size_t i = 0; i < k; ++i)
            if (mask & (1u << i)) rest.erase(m[i]);
        if (rest.empty()) continue;
        if (!is_connected(rest)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("face and box neighborhoods") {
    CHECK(neighbors_l1({0, 0, 0}).size() == 6);
    CHECK(neighbors_linf({0, 0, 0}).size() == 26);
    auto n = neighbors_l1({5, -2, 3});
    CHECK(std::count(n.begin(), n.end(), Coord{6, -2, 3}) == 1);
    CHECK(std::count(n.begin(), n.end(), Coord{5, -3, 3}) == 1);

    // closed box neighborhood has 27 cells, and the face neighbors lie in it
    CellSet closed = r_neighborhood({{0, 0, 0}}, 1, Norm::Linf, true);
    CHECK(closed.size() == 27);
    for (const auto& c : neighbors_l1({0, 0, 0})) CHECK(closed.count(c) == 1);
}

TEST_CASE("iterated L1 neighborhoods match direct enumeration") {
    auto ball_size = [](int r) {
        size_t n = 0;
        for (int x = -r; x <= r; ++x)
            for (int y = -r; y <= r; ++y)
                for (int z = -r; z <= r; ++z)
                    if (std::abs(x) + std::abs(y) + std::abs(z) <= r) ++n;
        return n;
    };
    CHECK(r_neighborhood({{0, 0, 0}}, 2, Norm::L1, true).size() == 25);
    CHECK(ball_size(2) == 25);
    CHECK(r_neighborhood({{0, 0, 0}}, 12, Norm::L1, true).size() == 2625);
    CHECK(ball_size(12) == 2625);
    CHECK(r_neighborhood({{7, 7, 7}}, 1, Norm::L1, true).size() == 7);
    CHECK(r_neighborhood({{7, 7, 7}}, 1, Norm::L1, false).size() == 6);
    CHECK_THROWS_AS(r_neighborhood({{0, 0, 0}}, 0, Norm::L1, true), std::invalid_argument);
}

TEST_CASE("connectivity is face adjacency only") {
    CHECK(is_connected(CellVec{{0, 0, 0}, {1, 0, 0}}));
    CHECK_FALSE(is_connected(CellVec{{0, 0, 0}, {1, 1, 0}}));
    CHECK_FALSE(is_connected(CellSet{}));
    CHECK(is_connected(CellVec{{4, 4, 4}}));

    // 2x2x2 cube minus one corner stays connected
    CellVec cube;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z)
                if (!(x == 1 && y == 1 && z == 1)) cube.push_back({x, y, z});
    CHECK(is_connected(cube));
}

TEST_CASE("configuration construction") {
    CHECK_THROWS_AS(Configuration(CellVec{}), std::invalid_argument);
    CHECK_THROWS_AS(Configuration(CellVec{{0, 0, 0}, {2, 0, 0}}), std::invalid_argument);
    Configuration c(CellVec{{1, 0, 0}, {0, 0, 0}, {0, 0, 0}});
    CHECK(c.size() == 2);  // duplicates collapse
    CHECK(c.cells().front() == Coord{0, 0, 0});
}

TEST_CASE("free sets: three in a row") {
    Configuration row(CellVec{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
    CHECK_FALSE(is_free_set(row, {{1, 0, 0}}));
    CHECK(is_free_set(row, {{0, 0, 0}, {2, 0, 0}}));
    CHECK_THROWS_AS(is_free_set(row, {{5, 5, 5}}), std::invalid_argument);
    CHECK_THROWS_AS(is_free_set(row, row.cells()), std::invalid_argument);
}

TEST_CASE("free set characterization matches subset enumeration") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 160; ++trial) {
        Configuration c = random_blob(rng, 4 + rng() % 3);  // n in 4..6
        const CellVec& cells = c.cells();
        size_t n = cells.size();
        for (uint32_t mask = 1; mask < (1u << n); ++mask) {
            if ((size_t)__builtin_popcount(mask) > 3) continue;
            if ((size_t)__builtin_popcount(mask) == n) continue;
            CellVec m;
            for (size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) m.push_back(cells[i]);
            CHECK(is_free_set(c, m) == free_by_enumeration(c, m));
        }
    }
}

TEST_CASE("free modules") {
    Configuration row(CellVec{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
    auto f = free_modules(row);
    REQUIRE(f.size() == 2);
    CHECK(f[0] == Coord{0, 0, 0});
    CHECK(f[1] == Coord{2, 0, 0});

    CellVec cube;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z) cube.push_back({x, y, z});
    CHECK(free_modules(Configuration(cube)).size() == 8);

    Configuration single(CellVec{{3, 3, 3}});
    CHECK(free_modules(single).size() == 1);
}

TEST_CASE("every connected configuration with n >= 2 has two free modules") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        Configuration c = random_blob(rng, 2 + rng() % 12);
        CHECK(free_modules(c).size() >= 2);
    }
}

TEST_CASE("projections") {
    Configuration c(CellVec{{0, 0, 0}, {0, 0, 1}, {1, 0, 1}});
    auto p = project(c, 'z');
    CHECK(p.area() == 2);
    CHECK(p.cells == std::vector<std::pair<int, int>>{{0, 0}, {1, 0}});
    CHECK(project(Configuration(CellVec{{4, 5, 6}}), 'x').area() == 1);

    CellVec full;
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y)
            for (int z = 0; z < 5; ++z) full.push_back({x, y, z});
    CHECK(project(Configuration(full), 'z').area() == 25);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        Configuration b = random_blob(rng, 3 + rng() % 20);
        CHECK(project(b, 'z').area() <= b.size());
    }
}

TEST_CASE("compactness") {
    CHECK(is_compact(Configuration(CellVec{{0, 0, 0}})));
    CHECK(is_compact(Configuration(CellVec{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}})));
    CHECK_FALSE(is_compact(Configuration(CellVec{{0, 0, 0}, {1, 1, 0}, {1, 0, 0}})));
}

TEST_CASE("translation invariance") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        Configuration c = random_blob(rng, 3 + rng() % 8);
        Coord t{(int)(rng() % 9) - 4, (int)(rng() % 9) - 4, (int)(rng() % 9) - 4};
        Configuration moved = c.translated(t);
        CHECK(free_modules(moved).size() == free_modules(c).size());
        CHECK(project(moved, 'z').area() == project(c, 'z').area());
        CHECK(moved.bbox().width() == c.bbox().width());
    }
}

TEST_CASE("bounding box") {
    Configuration c(CellVec{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
    CHECK(c.bbox().min == Coord{0, 0, 0});
    CHECK(c.bbox().max == Coord{2, 0, 0});
    CHECK(c.bbox().width() == 3);
    CHECK(c.bbox().depth() == 1);
}
