#include <doctest.h>

#include <algorithm>

#include <json.hpp>

#include "helpers.hpp"
#include "plancorpus/errors.hpp"
#include "plancorpus/evalkit.hpp"
#include "plancorpus/generator.hpp"
#include "plancorpus/obfuscate.hpp"

using namespace plancorpus;
using json = nlohmann::json;

namespace {

Plan mkplan(std::size_t n) {
    Plan p;
    for (std::size_t i = 0; i < n; ++i) p.push_back({"noop", {std::to_string(i)}});
    return p;
}

ResultRecord rec(bool valid, bool exec, bool sat, std::size_t len) {
    ResultRecord r;
    PlanVerdict v;
    v.valid = valid;
    v.executable = exec;
    v.goal_satisfiable = sat;
    r.plan = mkplan(len);
    r.verdict = v;
    return r;
}

ResultRecord vrec(bool valid) { return rec(valid, valid, valid, 5); }

CorpusInstance mk_instance(const DomainFixture& f, std::uint64_t seed,
                           LengthRange range = {6, 16}) {
    GeneratedInstance g = generate_instance(f.name, f.domain, range, seed);
    CorpusInstance inst;
    inst.id = f.name + "-test-000000";
    inst.domain = f.name;
    inst.split = "in_distrib";
    inst.query = render_query(f.domain, g.problem, f.templates);
    inst.response = render_response(g.reference, f.domain, f.templates);
    inst.plan_length = g.reference.size();
    inst.reference_plan = print_plan_file(g.reference);
    return inst;
}

}  // namespace

TEST_CASE("rates over a mixed batch of ten records") {
    std::vector<ResultRecord> records;
    for (int i = 0; i < 4; ++i) records.push_back(rec(true, true, true, 5));
    records.push_back(rec(false, true, true, 4));
    records.push_back(rec(false, true, true, 7));
    records.push_back(rec(false, true, false, 4));
    records.push_back(rec(false, true, false, 3));  // short: not executable-rated
    records.push_back({});                           // parse failure: all false
    records.push_back(rec(false, false, false, 6));
    Rates r = rates(records);
    CHECK(r.validity == doctest::Approx(0.4));
    CHECK(r.executability == doctest::Approx(0.7));
    CHECK(r.goal_sat == doctest::Approx(0.6));
    CHECK_THROWS_AS(rates({}), DataError);
}

TEST_CASE("executability needs at least four actions") {
    std::vector<ResultRecord> records = {rec(false, true, false, 4),
                                         rec(false, true, false, 3)};
    CHECK(rates(records).executability == doctest::Approx(0.5));
}

TEST_CASE("pass_at_k is exact best-of-k") {
    std::vector<std::vector<ResultRecord>> groups = {
        {vrec(false), vrec(true)},
        {vrec(false), vrec(false)},
        {vrec(true), vrec(true)},
        {vrec(false), vrec(false)},
    };
    CHECK(pass_at_k(groups, 1) == doctest::Approx(0.25));
    CHECK(pass_at_k(groups, 2) == doctest::Approx(0.5));
    CHECK(pass_at_k(groups, 1) <= pass_at_k(groups, 2));  // monotone in k
    CHECK_THROWS_AS(pass_at_k(groups, 3), DataError);
    CHECK_THROWS_AS(pass_at_k({}, 1), DataError);
}

TEST_CASE("probing precision and recall") {
    std::vector<ProbeRecord> records = {
        {true, 0.9, 0.1},  {true, 0.6, 0.4}, {false, 0.7, 0.3},
        {false, 0.2, 0.8}, {true, 0.5, 0.5},  // tie: predicted not-a-mistake
    };
    ProbeScores s = probing_scores(records);
    CHECK(s.precision == doctest::Approx(2.0 / 3.0));
    CHECK(s.recall == doctest::Approx(2.0 / 3.0));

    records.pop_back();  // now all actual mistakes are caught
    s = probing_scores(records);
    CHECK(s.precision == doctest::Approx(2.0 / 3.0));
    CHECK(s.recall == doctest::Approx(1.0));

    CHECK_THROWS_AS(probing_scores({{true, 0.1, 0.9}}), DataError);   // no predictions
    CHECK_THROWS_AS(probing_scores({{false, 0.9, 0.1}}), DataError);  // no mistakes
}

TEST_CASE("continuation prompt advances the problem past the prefix") {
    DomainFixture f = load_domain_fixture("blocksworld");
    CorpusInstance inst = mk_instance(f, 17);
    Plan reference = parse_plan_file(inst.reference_plan);
    REQUIRE(reference.size() >= 4);
    std::size_t cut = 3;

    ContinuationPrompt cp = continuation_prompt(inst, cut, f);
    CHECK(cp.prefix == Plan(reference.begin(), reference.begin() + cut));
    CHECK(cp.query.rfind(inst.query, 0) == 0);
    CHECK(cp.query.find("My plan is as follows:\n[PLAN]\n") != std::string::npos);
    CHECK(cp.query.find("[PLAN END]") == std::string::npos);  // block stays open
    CHECK(cp.query.find(render_step(f.domain, f.templates, reference[cut - 1])) !=
          std::string::npos);

    // judging the continuation from the advanced state must agree with
    // judging prefix+continuation from the original state
    Plan continuation(reference.begin() + cut, reference.end());
    Problem original = parse_query(inst.query, f.domain, f.templates);
    GroundTask t_orig(f.domain, original);
    GroundTask t_adv(f.domain, cp.check_problem);
    PlanVerdict whole = judge(t_orig, reference);
    PlanVerdict rest = judge(t_adv, continuation);
    CHECK(whole.valid == rest.valid);
    CHECK(whole.executable == rest.executable);
    CHECK(whole.goal_satisfiable == rest.goal_satisfiable);
    CHECK(rest.valid);

    SUBCASE("zero prefix returns the query unchanged") {
        ContinuationPrompt zero = continuation_prompt(inst, 0, f);
        CHECK(zero.query == inst.query);
        CHECK(zero.prefix.empty());
    }
    SUBCASE("prefix covering the whole plan is a data error") {
        CHECK_THROWS_AS(continuation_prompt(inst, reference.size(), f), DataError);
        CHECK_THROWS_AS(continuation_prompt(inst, reference.size() + 4, f), DataError);
    }
}

TEST_CASE("judge_outputs parses, judges and tolerates malformed responses") {
    DomainFixture f = load_domain_fixture("blocksworld");
    CorpusInstance inst = mk_instance(f, 23);
    std::string outputs;
    outputs += json{{"id", inst.id}, {"sample", 0}, {"response", inst.response}}.dump() + "\n";
    outputs += json{{"id", inst.id}, {"sample", 1}, {"response", "no plan here"}}.dump() + "\n";

    auto records = judge_outputs({inst}, outputs, f);
    REQUIRE(records.size() == 2);
    CHECK(records[0].sample == 0);
    REQUIRE(records[0].verdict);
    CHECK(records[0].verdict->valid);
    CHECK(records[1].sample == 1);
    CHECK(!records[1].verdict);  // unparseable response, scored all-false

    std::string unknown = json{{"id", "nope"}, {"sample", 0}, {"response", ""}}.dump() + "\n";
    CHECK_THROWS_AS(judge_outputs({inst}, unknown, f), DataError);
    CHECK_THROWS_AS(judge_outputs({inst}, "not json\n", f), DataError);
}

TEST_CASE("judge_outputs handles obfuscated instances") {
    DomainFixture f = load_domain_fixture("blocksworld");
    REQUIRE(f.obfuscation);
    GeneratedInstance g = generate_instance(f.name, f.domain, {4, 12}, 3);
    Obfuscated obf = obfuscate(f.domain, g.problem, *f.obfuscation);
    Plan obf_plan = obfuscate_plan(g.reference, g.problem, *f.obfuscation);
    CorpusInstance inst;
    inst.id = "blocksworld-obfuscated-000000";
    inst.domain = "blocksworld";
    inst.split = "obfuscated";
    inst.query = render_query(obf.domain, obf.problem, obf.templates);
    inst.response = render_response(obf_plan, obf.domain, obf.templates);
    inst.plan_length = obf_plan.size();
    inst.reference_plan = print_plan_file(obf_plan);

    std::string outputs =
        json{{"id", inst.id}, {"sample", 0}, {"response", inst.response}}.dump() + "\n";
    auto records = judge_outputs({inst}, outputs, f);
    REQUIRE(records.size() == 1);
    REQUIRE(records[0].verdict);
    CHECK(records[0].verdict->valid);
}

TEST_CASE("report output formats") {
    std::vector<ReportRow> rows = {
        {"blocksworld", "in_distrib", {0.5, 0.75, 1.0}, 8},
        {"hanoi", "unseen", {0.0, 0.125, 0.25}, 16},
    };
    std::string table = report_table(rows);
    CHECK(table.find("domain") != std::string::npos);
    CHECK(table.find("blocksworld    in_distrib         8    0.500    0.750     1.000") !=
          std::string::npos);
    CHECK(table.find("hanoi          unseen            16    0.000    0.125     0.250") !=
          std::string::npos);

    std::string lines = report_jsonl(rows);
    std::istringstream in(lines);
    std::string line;
    REQUIRE(std::getline(in, line));
    json j = json::parse(line);
    CHECK(j.at("domain") == "blocksworld");
    CHECK(j.at("split") == "in_distrib");
    CHECK(j.at("count") == 8);
    CHECK(j.at("validity") == doctest::Approx(0.5));
}
