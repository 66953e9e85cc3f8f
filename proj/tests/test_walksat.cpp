#include "doctest.h"

#include "cavsat/walksat.hpp"
#include "test_helpers.hpp"

using namespace cavsat;

TEST_CASE("walksat on the empty formula returns immediately") {
    const Formula f(5, {});
    const auto res = walksat::solve(f, walksat::Config{.seed = 1});
    CHECK(res.solved);
    CHECK(res.assignment.complete());
    CHECK(res.flips == 0);
}

TEST_CASE("walksat solves a single clause within one flip") {
    Clause c;
    c.lits = {{0, false}, {1, false}, {2, false}};
    const Formula f(3, {c});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto res = walksat::solve(f, walksat::Config{.seed = seed});
        REQUIRE(res.solved);
        CHECK(res.flips <= 1);
        CHECK(evaluate_formula(f, res.assignment));
    }
}

TEST_CASE("walksat respects frozen variables") {
    Clause c;
    c.lits = {{0, false}, {1, false}, {2, false}};
    const Formula f(3, {c});
    Assignment fixed(3);
    fixed.set(0, false);
    fixed.set(1, false);
    const auto res = walksat::solve(f, walksat::Config{.seed = 4}, &fixed);
    REQUIRE(res.solved);
    CHECK_FALSE(res.assignment.value(0));
    CHECK_FALSE(res.assignment.value(1));
    CHECK(res.assignment.value(2));
}

TEST_CASE("walksat solves easy-phase instances reliably") {
    std::uint32_t solved = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const Formula f = generate_random(1000, 2.0, derive_seed(555, seed));
        const auto res = walksat::solve(f, walksat::Config{.seed = seed});
        if (res.solved) {
            CHECK(evaluate_formula(f, res.assignment));
            ++solved;
        }
    }
    CHECK(solved == 60);
}

TEST_CASE("walksat is deterministic under a fixed seed") {
    const Formula f = generate_random(200, 3.0, 9);
    const auto a = walksat::solve(f, walksat::Config{.seed = 11});
    const auto b = walksat::solve(f, walksat::Config{.seed = 11});
    REQUIRE(a.solved);
    CHECK(a.flips == b.flips);
    CHECK(a.assignment == b.assignment);
}
