#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "slidingcubes/formats.hpp"

using namespace sc;

TEST_CASE("configuration round trip is byte exact") {
    Configuration ok(CellVec{{0, 0, 0}, {0, 0, 1}, {1, 0, 1}, {-1, 0, 0}});
    std::string text = write_configuration(ok);
    std::istringstream in(text);
    Configuration back = read_configuration(in);
    CHECK(back == ok);
    CHECK(write_configuration(back) == text);
}

TEST_CASE("configuration parse errors carry line numbers") {
    {
        std::istringstream in("wrong header\n0 0 0\n");
        CHECK_THROWS_AS(read_configuration(in), ParseError);
    }
    {
        std::istringstream in("cubes v1\n0 0\n");
        try {
            read_configuration(in);
            FAIL("expected throw");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
        }
    }
    {
        std::istringstream in("cubes v1\n0 0 0\n5 5 5\n");
        CHECK_THROWS(read_configuration(in));  // disconnected
    }
}

TEST_CASE("schedule round trip") {
    Schedule s;
    s.steps.push_back({Move::slide({0, 0, 0}, {1, 0, 0}), Move::slide({1, 0, 0}, {2, 0, 0})});
    s.steps.push_back({Move::convex({5, 5, 5}, {0, 0, -1}, {1, 0, 0})});
    std::string text = write_schedule(s);
    std::istringstream in(text);
    Schedule back = read_schedule(in);
    REQUIRE(back.steps.size() == 2);
    CHECK(back.steps[0] == s.steps[0]);
    CHECK(back.steps[1] == s.steps[1]);
    CHECK(write_schedule(back) == text);
}

TEST_CASE("schedule parse errors") {
    {
        std::istringstream in("sched v1\nstep 2\n");
        CHECK_THROWS_AS(read_schedule(in), ParseError);
    }
    {
        std::istringstream in("sched v1\nS 0 0 0 -> 1 0 0\n");
        CHECK_THROWS_AS(read_schedule(in), ParseError);  // move before step
    }
    {
        std::istringstream in("sched v1\nstep 1\nQ 0 0 0 -> 1 0 0\n");
        CHECK_THROWS_AS(read_schedule(in), ParseError);
    }
    {
        std::istringstream in("sched v1\nstep 1\nC 0 0 0 -> 1 0 1\n");
        CHECK_THROWS_AS(read_schedule(in), ParseError);  // missing via
    }
}

TEST_CASE("empty schedule round trips") {
    Schedule s;
    std::string text = write_schedule(s);
    std::istringstream in(text);
    Schedule back = read_schedule(in);
    CHECK(back.steps.empty());
}
