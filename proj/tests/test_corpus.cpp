#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "helpers.hpp"
#include "plancorpus/corpus.hpp"
#include "plancorpus/errors.hpp"
#include "plancorpus/exec.hpp"
#include "plancorpus/fixtures.hpp"
#include "plancorpus/generator.hpp"
#include "plancorpus/obfuscate.hpp"

using namespace plancorpus;
namespace fs = std::filesystem;

namespace {

std::string canonical(const Problem& p) {
    auto q = p;
    std::sort(q.objects.begin(), q.objects.end(),
              [](const TypedParam& a, const TypedParam& b) { return a.name < b.name; });
    std::sort(q.init.begin(), q.init.end());
    std::sort(q.goal.begin(), q.goal.end());
    std::string out;
    for (const auto& o : q.objects) out += o.name + ":" + o.type + ";";
    for (const auto& a : q.init) out += a.str() + ";";
    for (const auto& l : q.goal) out += Atom{l.pred, l.args}.str() + ";";
    return out;
}

}  // namespace

TEST_CASE("generate_instance is deterministic and yields valid references") {
    for (const auto& name : generator_domains()) {
        Domain d = testutil::load_domain(name);
        LengthRange range{3, 16};
        for (std::uint64_t seed : {1ull, 99ull}) {
            GeneratedInstance a = generate_instance(name, d, range, seed);
            GeneratedInstance b = generate_instance(name, d, range, seed);
            CHECK(canonical(a.problem) == canonical(b.problem));
            CHECK(a.reference == b.reference);
            CHECK(a.reference.size() >= range.lo);
            CHECK(a.reference.size() <= range.hi);
            GroundTask task(d, a.problem);
            CHECK(judge(task, a.reference).valid);
        }
    }
}

TEST_CASE("zero length range means the goal already holds") {
    Domain d = testutil::load_domain("blocksworld");
    GeneratedInstance g = generate_instance("blocksworld", d, {0, 0}, 5);
    CHECK(g.reference.empty());
    GroundTask task(d, g.problem);
    CHECK(judge(task, g.reference).valid);
}

TEST_CASE("impossible length range exhausts generation") {
    Domain d = testutil::load_domain("blocksworld");
    GenOptions opt;
    opt.max_attempts = 4;
    // small-tier blocksworld cannot reach 3000 actions
    CHECK_THROWS_AS(generate_instance("blocksworld", d, {3000, 3000}, 1, opt), DataError);
}

TEST_CASE("corpus JSONL roundtrip preserves every field") {
    CorpusInstance inst;
    inst.id = "blocksworld-train-000007";
    inst.domain = "blocksworld";
    inst.split = "train";
    inst.query = "line one\nline two\n";
    inst.response = "My plan is as follows:\n[PLAN]\n[PLAN END]\n";
    inst.plan_length = 4;
    inst.strategies = {"permute", "goal_cot"};
    inst.reference_plan = "(pick-up a)\n";
    CorpusInstance back = from_jsonl(to_jsonl(inst));
    CHECK(back.id == inst.id);
    CHECK(back.domain == inst.domain);
    CHECK(back.split == inst.split);
    CHECK(back.query == inst.query);
    CHECK(back.response == inst.response);
    CHECK(back.plan_length == inst.plan_length);
    CHECK(back.strategies == inst.strategies);
    CHECK(back.reference_plan == inst.reference_plan);
    CHECK_THROWS_AS(from_jsonl("{\"id\": \"x\"}"), DataError);
    CHECK_THROWS_AS(from_jsonl("not json"), DataError);
}

TEST_CASE("jsonl field order is stable") {
    CorpusInstance inst;
    inst.id = "x";
    inst.domain = "d";
    inst.split = "s";
    inst.plan_length = 0;
    std::string line = to_jsonl(inst);
    std::vector<std::string> keys = {"\"id\"",          "\"domain\"",     "\"split\"",
                                     "\"query\"",       "\"response\"",   "\"plan_length\"",
                                     "\"strategies\"",  "\"reference_plan\""};
    std::size_t pos = 0;
    for (const auto& k : keys) {
        std::size_t at = line.find(k, pos);
        REQUIRE(at != std::string::npos);
        pos = at;
    }
}

TEST_CASE("default split spec matches the published layout") {
    SplitSpec s = SplitSpec::defaults();
    REQUIRE(s.splits.size() == 5);
    CHECK(s.seed == 1111);
    CHECK(s.train_per_domain == 4000);
    CHECK(s.test_per_domain == 200);
    CHECK(s.splits[0].name == "train");
    CHECK(s.splits[0].domains.size() == 8);
    CHECK(s.splits[0].train);
    CHECK(s.splits[2].name == "long");
    CHECK(s.splits[2].range.lo == 17);
    CHECK(s.splits[2].range.hi == 32);
    CHECK(s.splits[3].domains == std::vector<std::string>{"hanoi", "storage"});
    CHECK(s.splits[4].obfuscated);
    CHECK(s.splits[4].domains == std::vector<std::string>{"blocksworld", "logistics"});
}

TEST_CASE("fnv1a digest matches reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
    CHECK(digest_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("small build is reproducible and splits are disjoint") {
    SplitSpec spec = SplitSpec::defaults();
    spec.train_per_domain = 6;
    spec.test_per_domain = 3;
    for (auto& s : spec.splits)
        std::erase_if(s.domains, [](const std::string& d) {
            return d != "blocksworld" && d != "grippers" && d != "hanoi";
        });
    std::erase_if(spec.splits, [](const SplitDef& s) { return s.domains.empty(); });
    AugmentConfig cfg;
    cfg.goal_cot = true;
    cfg.self_correct = true;

    fs::path dir1 = fs::temp_directory_path() / "pc_corpus_a";
    fs::path dir2 = fs::temp_directory_path() / "pc_corpus_b";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    Manifest m1 = build_splits(spec, cfg, dir1.string());
    Manifest m2 = build_splits(spec, cfg, dir2.string());
    CHECK(m1.to_json() == m2.to_json());
    for (const auto& f : m1.files) {
        std::string a = testutil::slurp((dir1 / f.file).string());
        std::string b = testutil::slurp((dir2 / f.file).string());
        CHECK(a == b);
        CHECK(digest_hex(a) == f.digest);
    }

    // no problem is shared between train and test splits of a domain
    std::map<std::string, std::set<std::string>> keys;
    std::size_t total = 0;
    for (const auto& f : m1.files) {
        DomainFixture fx = load_domain_fixture(f.domain);
        Domain d = fx.domain;
        TemplateSet t = fx.templates;
        if (f.split == "obfuscated") {
            d = obfuscate_domain(fx.domain, *fx.obfuscation);
            t = fx.obfuscation->templates;
        }
        for (const auto& inst : read_corpus_file((dir1 / f.file).string())) {
            CHECK(inst.domain == f.domain);
            CHECK(inst.split == f.split);
            Problem p = parse_query(inst.query, d, t);
            CHECK(keys[f.domain].insert(canonical(p)).second);
            ++total;
        }
    }
    // train 6x2, in_distrib/long 3x2 each, unseen hanoi 3, obfuscated bw 3
    CHECK(total == 30);
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("train responses carry the configured strategies") {
    SplitSpec spec = SplitSpec::defaults();
    spec.train_per_domain = 4;
    spec.test_per_domain = 2;
    spec.splits = {spec.splits[0], spec.splits[1]};
    for (auto& s : spec.splits)
        std::erase_if(s.domains, [](const std::string& d) { return d != "driverlog"; });
    AugmentConfig cfg;
    cfg.permute = true;
    cfg.state_cot = true;

    fs::path dir = fs::temp_directory_path() / "pc_corpus_strat";
    fs::remove_all(dir);
    build_splits(spec, cfg, dir.string());
    auto train = read_corpus_file((dir / "driverlog.train.jsonl").string());
    auto test = read_corpus_file((dir / "driverlog.in_distrib.jsonl").string());
    REQUIRE(train.size() == 4);
    REQUIRE(test.size() == 2);
    for (const auto& inst : train) {
        CHECK(inst.strategies == std::vector<std::string>{"permute", "state_cot"});
        CHECK(inst.response.find("<PRECON>") != std::string::npos);
    }
    for (const auto& inst : test) {
        CHECK(inst.strategies.empty());
        CHECK(inst.response.find("<PRECON>") == std::string::npos);
    }
    fs::remove_all(dir);
}
