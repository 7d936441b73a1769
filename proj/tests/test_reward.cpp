#include <doctest.h>

#include <random>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "plancorpus/errors.hpp"
#include "plancorpus/reward.hpp"

using namespace plancorpus;
using json = nlohmann::json;

namespace {

Plan steps(std::initializer_list<const char*> names) {
    Plan p;
    for (const char* n : names) p.push_back({n, {}});
    return p;
}

// brute-force oracle: try every (start_a, start_b, len) window
std::size_t lccs_brute(const Plan& a, const Plan& b) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::size_t k = 0;
            while (i + k < a.size() && j + k < b.size() &&
                   a[i + k].schema == b[j + k].schema && a[i + k].args == b[j + k].args)
                ++k;
            best = std::max(best, k);
        }
    return best;
}

}  // namespace

TEST_CASE("lccs_len on hand fixtures") {
    CHECK(lccs_len(steps({"w", "x", "b", "c", "d"}), steps({"b", "c", "e", "d"})) == 2);
    CHECK(lccs_len(steps({"a", "b", "c"}), steps({"a", "b", "c"})) == 3);
    CHECK(lccs_len(steps({"a", "b"}), steps({"c", "d"})) == 0);
    CHECK(lccs_len({}, steps({"a"})) == 0);
    CHECK(lccs_len(steps({"a"}), {}) == 0);
    // subsequence but not substring
    CHECK(lccs_len(steps({"a", "x", "b"}), steps({"a", "b"})) == 1);
}

TEST_CASE("lccs_len is case and argument sensitive the right way") {
    Plan a = {{"PICK-UP", {"A"}}, {"stack", {"a", "b"}}};
    Plan b = {{"pick-up", {"a"}}, {"stack", {"a", "b"}}};
    CHECK(lccs_len(a, b) == 2);  // case-normalized
    Plan c = {{"pick-up", {"b"}}, {"stack", {"a", "b"}}};
    CHECK(lccs_len(b, c) == 1);  // args matter
}

TEST_CASE("lccs_len agrees with the brute-force oracle") {
    std::mt19937_64 g(42);
    for (int trial = 0; trial < 300; ++trial) {
        auto rand_plan = [&](std::size_t n) {
            Plan p;
            for (std::size_t i = 0; i < n; ++i)
                p.push_back({std::string(1, 'a' + g() % 4), {std::string(1, 'p' + g() % 3)}});
            return p;
        };
        Plan a = rand_plan(g() % 25);
        Plan b = rand_plan(g() % 25);
        CHECK(lccs_len(a, b) == lccs_brute(a, b));
    }
}

TEST_CASE("score follows the reward equation") {
    Domain d = testutil::load_domain("blocksworld");
    Problem p = parse_problem(testutil::kTinyBlocks2, d);
    Plan ref = {{"pick-up", {"a"}}, {"stack", {"a", "b"}}};

    SUBCASE("valid plan scores 1 regardless of overlap") {
        RewardScore r = score(d, p, ref, ref);
        CHECK(r.reward == 1.0);
        CHECK(r.valid);
        CHECK(r.ref_len == 2);
    }
    SUBCASE("invalid plan scores lccs over reference length") {
        Plan gen = {{"pick-up", {"a"}}, {"put-down", {"a"}}};
        RewardScore r = score(d, p, gen, ref);
        CHECK(!r.valid);
        CHECK(r.lccs_len == 1);
        CHECK(r.reward == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("unknown actions make the plan invalid, not the call fatal") {
        Plan gen = {{"teleport", {"a"}}};
        RewardScore r = score(d, p, gen, ref);
        CHECK(!r.valid);
        CHECK(r.reward == 0.0);
    }
    SUBCASE("empty generated plan against a goal-holding problem") {
        Problem done = p;
        done.goal = {{"on-table", {"a"}, true}};
        RewardScore r = score(d, done, {}, {});
        CHECK(r.valid);
        CHECK(r.reward == 1.0);
    }
    SUBCASE("empty reference and invalid generated scores zero") {
        Problem done = p;
        done.goal = {{"on-table", {"a"}, true}};
        Plan gen = {{"pick-up", {"a"}}};  // executable but goal broken
        RewardScore r = score(d, done, gen, {});
        CHECK(!r.valid);
        CHECK(r.ref_len == 0);
        CHECK(r.reward == 0.0);
    }
    SUBCASE("invalid reference is a hard error") {
        Plan bad_ref = {{"stack", {"a", "b"}}};
        CHECK_THROWS_AS(score(d, p, ref, bad_ref), ValidationError);
    }
}

TEST_CASE("score_multi keeps the best reference") {
    Domain d = testutil::load_domain("blocksworld");
    Problem p = parse_problem(testutil::kTinyBlocks2, d);
    Plan ref1 = {{"pick-up", {"a"}}, {"stack", {"a", "b"}}};
    Plan ref2 = {{"pick-up", {"b"}}, {"put-down", {"b"}}, {"pick-up", {"a"}},
                 {"stack", {"a", "b"}}};
    Plan gen = {{"pick-up", {"b"}}, {"put-down", {"b"}}, {"pick-up", {"b"}}};
    RewardScore r = score_multi(d, p, gen, {ref1, ref2});
    CHECK(!r.valid);
    CHECK(r.ref_len == 4);
    CHECK(r.reward == doctest::Approx(0.5));
    CHECK_THROWS_AS(score_multi(d, p, gen, {}), ValidationError);
}

TEST_CASE("reward server handles inline requests") {
    RewardServer server("");
    std::string domain = testutil::slurp(testutil::fixture("domains/blocksworld/domain.pddl"));
    json req;
    req["id"] = "r1";
    req["domain"] = domain;
    req["problem"] = testutil::kTinyBlocks2;
    req["generated"] = "(pick-up a)\n(stack a b)\n";
    req["reference"] = "(pick-up a)\n(stack a b)\n";
    json resp = json::parse(server.handle_line(req.dump()));
    CHECK(resp.at("id") == "r1");
    CHECK(resp.at("reward") == 1.0);
    CHECK(resp.at("valid") == true);
    CHECK(resp.at("ref_len") == 2);

    req["id"] = "r2";
    req["generated"] = "(pick-up a)\n(put-down a)\n";
    resp = json::parse(server.handle_line(req.dump()));
    CHECK(resp.at("valid") == false);
    CHECK(resp.at("lccs_len") == 1);
    CHECK(resp.at("reward") == doctest::Approx(0.5));
}

TEST_CASE("reward server reports errors as NDJSON, never throws") {
    RewardServer server("");
    json resp = json::parse(server.handle_line("{\"id\": \"e1\"}"));
    CHECK(resp.at("id") == "e1");
    CHECK(resp.contains("error"));
    resp = json::parse(server.handle_line("garbage"));
    CHECK(resp.contains("error"));
    resp = json::parse(server.handle_line("{\"id\":\"e2\",\"instance\":\"nope\",\"generated\":\"\"}"));
    CHECK(resp.at("id") == "e2");
    CHECK(resp.contains("error"));
}

TEST_CASE("reward server run maps lines one to one") {
    RewardServer server("");
    std::istringstream in("{\"id\":\"a\"}\n\n{\"id\":\"b\"}\n");
    std::ostringstream out;
    server.run(in, out);
    std::istringstream lines(out.str());
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
        json j = json::parse(line);
        CHECK(j.contains("error"));
        ++n;
    }
    CHECK(n == 2);  // blank input lines are skipped
}
