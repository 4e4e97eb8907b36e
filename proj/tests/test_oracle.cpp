#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "slidingcubes/oracle.hpp"

using namespace sc;

TEST_CASE("identity has makespan zero") {
    Configuration c(CellVec{{0, 0, 0}, {1, 0, 0}});
    auto res = bfs_min_makespan(c, c);
    REQUIRE(res.known);
    CHECK(res.makespan == 0);
}

TEST_CASE("domino shift: the backbone rule forbids moving everything") {
    // with a stationary backbone required, the bare domino needs two steps
    Configuration c1(CellVec{{0, 0, 0}, {1, 0, 0}});
    Configuration c2(CellVec{{1, 0, 0}, {2, 0, 0}});
    auto res = bfs_min_makespan(c1, c2);
    REQUIRE(res.known);
    CHECK(res.makespan == 2);
    CHECK_FALSE(validate_schedule(c1, res.witness, c2).has_value());
}

TEST_CASE("anchored pair shifts east in a single two-move chain") {
    Configuration c1(CellVec{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 0, 1}, {1, 0, 1}});
    Configuration c2(CellVec{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {1, 0, 1}, {2, 0, 1}});
    auto res = bfs_min_makespan(c1, c2);
    REQUIRE(res.known);
    CHECK(res.makespan == 1);
    REQUIRE(res.witness.steps.size() == 1);
    CHECK(res.witness.steps[0].size() == 2);  // a two-move chain
    CHECK_FALSE(validate_schedule(c1, res.witness, c2).has_value());
}

TEST_CASE("budget exhaustion reports unknown") {
    Configuration c1(CellVec{{0, 0, 0}, {1, 0, 0}});
    Configuration c2(CellVec{{4, 0, 0}, {5, 0, 0}});
    OracleOptions opts;
    opts.step_budget = 1;
    opts.region_margin = 5;
    auto res = bfs_min_makespan(c1, c2, opts);
    CHECK_FALSE(res.known);
}

TEST_CASE("tromino makespans: regression table") {
    // all three-cell shapes in a 2x2x2 window, pairwise distances
    Configuration line(CellVec{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
    Configuration ell(CellVec{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}});
    Configuration corner_up(CellVec{{0, 0, 0}, {1, 0, 0}, {1, 0, 1}});

    auto d = [&](const Configuration& a, const Configuration& b) {
        OracleOptions opts;
        opts.step_budget = 6;
        auto res = bfs_min_makespan(a, b, opts);
        REQUIRE(res.known);
        if (res.makespan > 0)
            CHECK_FALSE(validate_schedule(a, res.witness, b).has_value());
        return res.makespan;
    };

    // frozen after the first computation; these pin the oracle's semantics
    CHECK(d(line, ell) == 1);
    CHECK(d(line, corner_up) == 1);
    CHECK(d(ell, corner_up) == 1);
    CHECK(d(line, line) == 0);

    Configuration far_ell(CellVec{{0, 0, 0}, {0, 1, 0}, {-1, 1, 0}});
    CHECK(d(line, far_ell) == 4);
}

TEST_CASE("oracle consistency with random valid schedules") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        // random walk of valid transformations from a small start
        Configuration start(CellVec{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
        Configuration cur = start;
        Schedule walked;
        BoundingBox region = start.bbox();
        region.min = region.min + Coord{-3, -3, -3};
        region.max = region.max + Coord{3, 3, 3};
        size_t len = 1 + rng() % 3;
        for (size_t i = 0; i < len; ++i) {
            std::vector<Transformation> options;
            for_each_valid_transformation(cur, 2, region, [&](const Transformation& t) {
                options.push_back(t);
                return options.size() < 40;
            });
            if (options.empty()) break;
            Transformation pick = options[rng() % options.size()];
            walked.steps.push_back(pick);
            cur = apply_unchecked(cur, pick);
        }
        REQUIRE_FALSE(validate_schedule(start, walked, cur).has_value());
        OracleOptions opts;
        opts.step_budget = walked.steps.size() + 1;
        auto res = bfs_min_makespan(start, cur, opts);
        REQUIRE(res.known);
        CHECK(res.makespan <= walked.steps.size());
    }
}

TEST_CASE("single-step finder solves an anchored chain shift") {
    Configuration c1(CellVec{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 0, 1}, {1, 0, 1}});
    Configuration c2(CellVec{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {1, 0, 1}, {2, 0, 1}});
    auto t = find_single_step(c1, c2);
    REQUIRE(t.has_value());
    CHECK(validate_transformation(c1, *t).ok());
    CHECK(apply_unchecked(c1, *t) == c2);

    // and reports nothing for the unanchored domino
    Configuration d1(CellVec{{0, 0, 0}, {1, 0, 0}});
    Configuration d2(CellVec{{1, 0, 0}, {2, 0, 0}});
    CHECK_FALSE(find_single_step(d1, d2).has_value());
}
