#include <doctest.h>

#include <map>

#include "helpers.hpp"
#include "plancorpus/errors.hpp"
#include "plancorpus/exec.hpp"
#include "plancorpus/search.hpp"

using namespace plancorpus;

TEST_CASE("satisfied goal solves with the empty plan") {
    Domain d = testutil::load_domain("blocksworld");
    Problem p = parse_problem(R"(
(define (problem x) (:domain blocksworld) (:objects a - block)
  (:init (on-table a) (clear a) (hand-empty))
  (:goal (and (on-table a))))
)",
                              d);
    GroundTask task(d, p);
    CHECK(solve_reference(task, {}).empty());
}

TEST_CASE("two blocks on table: plan of length 2") {
    Domain d = testutil::load_domain("blocksworld");
    Problem p = parse_problem(testutil::kTinyBlocks2, d);
    GroundTask task(d, p);
    Plan plan = solve_reference(task, {});
    REQUIRE(plan.size() == 2);
    CHECK(plan[0].str() == "(pick-up a)");
    CHECK(plan[1].str() == "(stack a b)");
    CHECK(judge(task, plan).valid);
}

TEST_CASE("expansion limit of 1 fails on a nontrivial instance") {
    Domain d = testutil::load_domain("blocksworld");
    Problem p = parse_problem(testutil::slurp(testutil::testdata("blocksworld_tower9.pddl")), d);
    GroundTask task(d, p);
    SearchLimits limits;
    limits.max_expansions = 1;
    CHECK_THROWS_AS(solve_reference(task, limits), SearchLimitError);
}

TEST_CASE("unsolvable within length bound") {
    Domain d = testutil::load_domain("blocksworld");
    Problem p = parse_problem(testutil::kTinyBlocks2, d);
    GroundTask task(d, p);
    SearchLimits limits;
    limits.max_plan_length = 1;
    CHECK_THROWS_AS(solve_reference(task, limits), UnsolvableError);
}

TEST_CASE("greedy fallback solves the 9 block tower and re-judges valid") {
    Domain d = testutil::load_domain("blocksworld");
    Problem p = parse_problem(testutil::slurp(testutil::testdata("blocksworld_tower9.pddl")), d);
    GroundTask task(d, p);
    SearchLimits limits;
    limits.max_plan_length = 64;
    limits.max_expansions = 500000;
    Plan plan = solve_reference(task, limits);
    CHECK(judge(task, plan).valid);
}

TEST_CASE("solver is deterministic") {
    Domain d = testutil::load_domain("blocksworld");
    Problem p = parse_problem(testutil::slurp(testutil::testdata("blocksworld_tower9.pddl")), d);
    SearchLimits limits;
    limits.max_plan_length = 64;
    limits.max_expansions = 500000;
    GroundTask t1(d, p), t2(d, p);
    CHECK(solve_reference(t1, limits) == solve_reference(t2, limits));
}
