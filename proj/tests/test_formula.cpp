#include "doctest.h"

#include <set>

#include "cavsat/dimacs.hpp"
#include "cavsat/formula.hpp"
#include "cavsat/oracle.hpp"
#include "test_helpers.hpp"

using namespace cavsat;

TEST_CASE("generate_random produces round(alpha*n) clauses") {
    CHECK(generate_random(4, 1.0, 7).n_clauses() == 4);
    CHECK(generate_random(3, 1.0 / 3.0, 7).n_clauses() == 1);
    CHECK(generate_random(100, 4.267, 7).n_clauses() == 427);
}

TEST_CASE("generate_random: one clause over three variables uses them all") {
    const Formula f = generate_random(3, 1.0 / 3.0, 123);
    REQUIRE(f.n_clauses() == 1);
    std::set<VarId> vars;
    for (const auto& lit : f.clause(0).lits) vars.insert(lit.var);
    CHECK(vars == std::set<VarId>{0, 1, 2});
}

TEST_CASE("generate_random is deterministic and seed-sensitive") {
    const Formula a = generate_random(50, 4.2, 99);
    const Formula b = generate_random(50, 4.2, 99);
    const Formula c = generate_random(50, 4.2, 100);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("generate_random rejects tiny instances") {
    CHECK_THROWS_AS(generate_random(2, 1.0, 1), InvalidInstanceError);
    CHECK_THROWS_AS(generate_random(10, 0.0, 1), InvalidInstanceError);
}

TEST_CASE("clause variables are distinct and adjacency inverts membership") {
    const Formula f = generate_random(30, 4.0, 5);
    std::size_t total = 0;
    for (const Clause& c : f.clauses()) {
        std::set<VarId> vars;
        for (const auto& lit : c.lits) vars.insert(lit.var);
        CHECK(vars.size() == 3);
    }
    for (VarId v = 0; v < f.n_vars(); ++v) {
        for (const auto& occ : f.occurrences(v)) {
            CHECK(f.clause(occ.clause).lits[occ.pos].var == v);
            ++total;
        }
    }
    CHECK(total == 3 * f.n_clauses());
}

TEST_CASE("evaluate_clause implements signed disjunction") {
    Clause c;
    c.lits = {{0, false}, {1, false}, {2, false}};
    Assignment a(3);
    a.set(0, false);
    a.set(1, false);
    a.set(2, false);
    CHECK_FALSE(evaluate_clause(c, a));

    a.set(0, true);
    CHECK(evaluate_clause(c, a));

    Clause neg;
    neg.lits = {{0, true}, {1, true}, {2, true}};
    Assignment all_true(3);
    for (VarId v = 0; v < 3; ++v) all_true.set(v, true);
    CHECK_FALSE(evaluate_clause(neg, all_true));
}

TEST_CASE("evaluate_clause requires set variables") {
    Clause c;
    c.lits = {{0, false}, {1, false}, {2, false}};
    Assignment a(3);
    a.set(0, false);
    CHECK_THROWS_AS(evaluate_clause(c, a), IncompleteAssignmentError);
}

TEST_CASE("evaluate_formula is the conjunction over clauses") {
    Assignment a(3);
    for (VarId v = 0; v < 3; ++v) a.set(v, false);

    CHECK(evaluate_formula(Formula(3, {}), a));

    Clause sat;
    sat.lits = {{0, true}, {1, false}, {2, false}};
    CHECK(evaluate_formula(Formula(3, {sat}), a));

    Clause unsat;
    unsat.lits = {{0, false}, {1, false}, {2, false}};
    CHECK_FALSE(evaluate_formula(Formula(3, {sat, unsat, sat}), a));
}

TEST_CASE("simplify drops satisfied clauses and propagates units") {
    Clause c;
    c.lits = {{0, false}, {1, false}, {2, false}};
    const Formula f(3, {c});

    SUBCASE("satisfied clause is removed") {
        Assignment a(3);
        a.set(0, true);
        const auto res = simplify(f, a);
        CHECK(res.status == SimplifyStatus::Reduced);
        CHECK(res.formula.n_clauses() == 0);
    }
    SUBCASE("two falsified literals force the third") {
        Assignment a(3);
        a.set(0, false);
        a.set(1, false);
        const auto res = simplify(f, a);
        CHECK(res.status == SimplifyStatus::Reduced);
        CHECK(res.formula.n_clauses() == 0);
        CHECK(res.assignment.is_set(2));
        CHECK(res.assignment.value(2));
    }
    SUBCASE("all literals falsified is a contradiction") {
        Assignment a(3);
        a.set(0, false);
        a.set(1, false);
        a.set(2, false);
        const auto res = simplify(f, a);
        CHECK(res.status == SimplifyStatus::Contradiction);
    }
}

TEST_CASE("simplify preserves the model count over the clamped space") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng rng(derive_seed(777, seed));
        const VarId n = 8 + rng.below(8);
        const Formula f = generate_random(n, 1.0 + rng.uniform() * 3.0, seed);

        Assignment partial(n);
        const std::uint32_t n_fix = rng.below(n / 2 + 1);
        for (std::uint32_t k = 0; k < n_fix; ++k) partial.set(rng.below(n), rng.coin());

        const std::uint64_t before = oracle::count_models(f, partial);
        const auto res = simplify(f, partial);
        if (res.status == SimplifyStatus::Contradiction) {
            CHECK(before == 0);
        } else {
            const std::uint64_t after = oracle::count_models(res.formula, res.assignment);
            CHECK(before == after);
        }
    }
}

TEST_CASE("dimacs parses the standard layout") {
    const Formula f = parse_dimacs("p cnf 3 1\n1 -2 3 0\n");
    REQUIRE(f.n_clauses() == 1);
    CHECK(f.n_vars() == 3);
    CHECK(f.clause(0).lits[0] == Literal{0, false});
    CHECK(f.clause(0).lits[1] == Literal{1, true});
    CHECK(f.clause(0).lits[2] == Literal{2, false});
}

TEST_CASE("dimacs round-trip is the identity") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Formula f = generate_random(20 + seed, 3.7, seed);
        CHECK(parse_dimacs(write_dimacs(f)) == f);
    }
}

TEST_CASE("dimacs rejects malformed input") {
    CHECK_THROWS_AS(parse_dimacs("p dnf 3 1\n1 2 3 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("1 2 3 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n3 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 1\n1 2 3\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 2\n1 2 3 0\n"), ParseError);
}

TEST_CASE("dimacs keeps comments out of the clause stream") {
    const Formula f = parse_dimacs("c generated\nc by hand\np cnf 3 1\nc inline\n1 2 -3 0\n");
    CHECK(f.n_clauses() == 1);
}

TEST_CASE("tree formula helper builds acyclic adjacency") {
    // A factor tree over V variables and C clauses has V + C - (#components)
    // edges; with every variable reachable the edge count pins acyclicity.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Formula f = cavsat::testing::random_tree_formula(6, seed);
        CHECK(f.n_clauses() == 6);
        CHECK(f.n_vars() == 13);  // 3 + 2 per additional clause
    }
}
