#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "plancorpus/augment.hpp"
#include "plancorpus/errors.hpp"
#include "plancorpus/exec.hpp"

using namespace plancorpus;

namespace {

struct Fix {
    Domain d;
    TemplateSet t;
    Problem p;
    Plan plan;
    Fix()
        : d(testutil::load_domain("driverlog")),
          t(testutil::load_templates("driverlog")),
          p(parse_problem(testutil::slurp(testutil::testdata("driverlog_delivery.pddl")), d)),
          plan(parse_plan_file(testutil::slurp(testutil::testdata("driverlog_delivery.plan")))) {}
};

}  // namespace

TEST_CASE("goal cot counts run n-1 down to 0") {
    Fix f;
    AugmentConfig cfg;
    cfg.goal_cot = true;
    auto r = annotate_cot(f.p, f.plan, f.d, f.t, cfg);
    REQUIRE(r.steps.size() == 7);
    for (int i = 0; i < 7; ++i) CHECK(r.steps[i].count == 6 - i);
    CHECK(r.steps[0].goal_block ==
          "My goal is to have that truck 1 is at place 1, driver 2 is at place 0, package 1 is "
          "at place 0.");

    Plan one = {f.plan[0]};
    auto r1 = annotate_cot(f.p, one, f.d, f.t, cfg);
    REQUIRE(r1.steps.size() == 1);
    CHECK(r1.steps[0].count == 0);
}

TEST_CASE("annotated render matches the fixture line shape and reparses") {
    Fix f;
    AugmentConfig cfg;
    cfg.goal_cot = true;
    cfg.state_cot = true;
    auto r = annotate_cot(f.p, f.plan, f.d, f.t, cfg);
    std::string text = render_annotated(r, f.d, f.t);
    std::string goal =
        "My goal is to have that truck 1 is at place 1, driver 2 is at place 0, package 1 is at "
        "place 0.";
    std::string first =
        "<GOAL> " + goal +
        " <COUNT> 6 </COUNT> <PRECON> A driver 1 can board a truck 1 only if the driver 1 is at "
        "the same place 1 as the truck 1. A driver 1 can board a truck 1 only if the truck 1 is "
        "empty. </PRECON> driver 1 boards truck 1 at place 1 <EFFECT> Once a driver 1 boards a "
        "truck 1, the truck 1 is no longer empty. Once a driver 1 boards a truck 1, we say the "
        "driver 1 is driving the truck 1. Once a driver 1 boards a truck 1, the driver 1 is no "
        "longer at the place 1. </EFFECT>";
    auto lines = [&] {
        std::vector<std::string> out;
        std::istringstream is(text);
        std::string l;
        while (std::getline(is, l)) out.push_back(l);
        return out;
    }();
    REQUIRE(lines.size() == 10);  // header, [PLAN], 7 steps, [PLAN END]
    CHECK(lines[2] == first);

    auto parsed = parse_response(text, f.d, f.t);
    CHECK(parsed.plan == f.plan);
    CHECK(parsed.wrong_marked.empty());
}

TEST_CASE("state cot grounds preconditions with the step's objects") {
    Domain d = testutil::load_domain("blocksworld");
    TemplateSet t = testutil::load_templates("blocksworld");
    Problem p = parse_problem(testutil::kTinyBlocks2, d);
    AugmentConfig cfg;
    cfg.state_cot = true;
    Plan plan = {{"pick-up", {"a"}}, {"stack", {"a", "b"}}};
    auto r = annotate_cot(p, plan, d, t, cfg);
    CHECK(r.steps[0].precon_block.find("the a block is on the table") != std::string::npos);
    CHECK(r.steps[0].precon_block.find("the a block is clear") != std::string::npos);
    CHECK(r.steps[0].count == -1);
}

TEST_CASE("mistake rate 0 injects nothing; short plans are rejected") {
    Fix f;
    AugmentConfig cfg;
    cfg.mistake_rate = 0.0;
    auto r = inject_mistakes(f.plan, cfg);
    REQUIRE(r.steps.size() == f.plan.size());
    for (std::size_t i = 0; i < f.plan.size(); ++i) {
        CHECK(r.steps[i].step == f.plan[i]);
        CHECK_FALSE(r.steps[i].wrong);
    }
    CHECK_THROWS_AS(inject_mistakes(Plan{f.plan[0]}, cfg), ValidationError);
}

TEST_CASE("stripping wrong steps recovers the plan exactly") {
    Fix f;
    AugmentConfig cfg;
    cfg.goal_cot = true;
    cfg.state_cot = true;
    cfg.mistake_rate = 0.5;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        cfg.seed = seed;
        auto r = inject_mistakes(annotate_cot(f.p, f.plan, f.d, f.t, cfg), cfg);
        auto parsed = parse_response(render_annotated(r, f.d, f.t), f.d, f.t);
        CHECK(parsed.plan == f.plan);
        // Injected steps are copies of later correct steps and carry
        // the borrowed position's COUNT.
        for (const auto& s : r.steps) {
            if (!s.wrong) continue;
            std::size_t j = f.plan.size() - 1 - static_cast<std::size_t>(s.count);
            REQUIRE(j < f.plan.size());
            CHECK(s.step == f.plan[j]);
        }
    }
}

TEST_CASE("injection count stays within 3 sigma of the binomial mean") {
    Fix f;
    AugmentConfig cfg;
    cfg.mistake_rate = 0.2;
    std::size_t eligible = 0, injected = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        cfg.seed = seed;
        auto r = inject_mistakes(f.plan, cfg);
        eligible += f.plan.size() - 1;
        injected += r.steps.size() - f.plan.size();
    }
    REQUIRE(eligible >= 10000);
    double mean = 0.2 * static_cast<double>(eligible);
    double sigma = std::sqrt(static_cast<double>(eligible) * 0.2 * 0.8);
    CHECK(std::abs(static_cast<double>(injected) - mean) <= 3 * sigma);
}

TEST_CASE("injection is deterministic per seed") {
    Fix f;
    AugmentConfig cfg;
    cfg.seed = 77;
    auto a = inject_mistakes(f.plan, cfg);
    auto b = inject_mistakes(f.plan, cfg);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        CHECK(a.steps[i].step == b.steps[i].step);
        CHECK(a.steps[i].wrong == b.steps[i].wrong);
    }
}

TEST_CASE("in-place perturbation also recovers the plan after stripping") {
    Fix f;
    AugmentConfig cfg;
    cfg.perturb_in_place = true;
    cfg.mistake_rate = 0.5;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        cfg.seed = seed;
        AnnotatedResponse base;
        for (const auto& s : f.plan) base.steps.push_back({s});
        auto r = perturb_mistakes(base, f.d, f.p, cfg);
        Plan kept;
        for (const auto& s : r.steps)
            if (!s.wrong) kept.push_back(s.step);
        CHECK(kept == f.plan);
    }
}

TEST_CASE("permute_query_text preserves parse semantics") {
    Fix f;
    std::string q = render_query(f.d, f.p, f.t);
    std::string shuffled = permute_query_text(q, 1111);
    CHECK(permute_query_text(q, 1111) == shuffled);  // deterministic
    CHECK(shuffled != q);
    Problem a = parse_query(q, f.d, f.t);
    Problem b = parse_query(shuffled, f.d, f.t);
    CHECK(a.init == b.init);
    CHECK(a.goal == b.goal);
    CHECK(a.objects == b.objects);
    // Line multiset is preserved.
    auto bag = [](const std::string& s) {
        std::vector<std::string> lines;
        std::istringstream is(s);
        std::string l;
        while (std::getline(is, l)) lines.push_back(l);
        std::sort(lines.begin(), lines.end());
        return lines;
    };
    auto qa = bag(q), qb = bag(shuffled);
    // init/goal lines differ internally, so compare all but those
    auto drop = [](std::vector<std::string>& v) {
        v.erase(std::remove_if(v.begin(), v.end(),
                               [](const std::string& l) {
                                   return l.rfind("As initial", 0) == 0 ||
                                          l.rfind("My goal", 0) == 0;
                               }),
                v.end());
    };
    drop(qa);
    drop(qb);
    CHECK(qa == qb);
}
