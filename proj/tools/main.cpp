// plancorpus command line: validate / gen-corpus / augment / reward /
// eval / continue. Logs go to stderr, data to files or stdout.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "plancorpus/augment.hpp"
#include "plancorpus/corpus.hpp"
#include "plancorpus/errors.hpp"
#include "plancorpus/evalkit.hpp"
#include "plancorpus/exec.hpp"
#include "plancorpus/fixtures.hpp"
#include "plancorpus/ground.hpp"
#include "plancorpus/obfuscate.hpp"
#include "plancorpus/parser.hpp"
#include "plancorpus/reward.hpp"
#include "plancorpus/templates.hpp"

using json = nlohmann::json;
using namespace plancorpus;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitConfig = 78;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shared config file; flags override its values.
struct RunConfig {
    std::uint64_t seed = 1111;
    std::string out;
    std::string corpus;
    std::size_t train_per_domain = 4000;
    std::size_t test_per_domain = 200;
    AugmentConfig aug;
    std::size_t prefix = 15;
    std::vector<std::size_t> k = {1, 3, 5};
};

void load_config(RunConfig& cfg, const std::string& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    try {
        cfg.seed = j.value("seed", cfg.seed);
        cfg.out = j.value("out", cfg.out);
        cfg.corpus = j.value("corpus", cfg.corpus);
        cfg.train_per_domain = j.value("train_per_domain", cfg.train_per_domain);
        cfg.test_per_domain = j.value("test_per_domain", cfg.test_per_domain);
        cfg.aug.permute = j.value("permute", cfg.aug.permute);
        cfg.aug.goal_cot = j.value("goal_cot", cfg.aug.goal_cot);
        cfg.aug.state_cot = j.value("state_cot", cfg.aug.state_cot);
        cfg.aug.self_correct = j.value("self_correct", cfg.aug.self_correct);
        cfg.aug.perturb_in_place = j.value("perturb_in_place", cfg.aug.perturb_in_place);
        cfg.aug.mistake_rate = j.value("mistake_rate", cfg.aug.mistake_rate);
        cfg.prefix = j.value("prefix", cfg.prefix);
        if (j.contains("k")) cfg.k = j.at("k").get<std::vector<std::size_t>>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    if (cfg.aug.mistake_rate < 0.0 || cfg.aug.mistake_rate > 1.0)
        throw ConfigError("mistake_rate out of [0,1]");
}

int cmd_validate(const std::string& domain_path, const std::string& problem_path,
                 const std::string& plan_path) {
    Domain d = parse_domain(read_file(domain_path));
    Problem p = parse_problem(read_file(problem_path), d);
    Plan plan = parse_plan_file(read_file(plan_path));
    GroundTask task(d, p);
    PlanVerdict v = judge(task, plan);
    std::cout << "valid=" << (v.valid ? "true" : "false")
              << " executable=" << (v.executable ? "true" : "false")
              << " goal_satisfiable=" << (v.goal_satisfiable ? "true" : "false") << "\n";
    if (!v.executable && v.first_failure)
        std::cerr << "first failure at step " << v.first_failure->step << "\n";
    return v.valid ? 0 : (v.executable ? 1 : 2);
}

int cmd_gen_corpus(const RunConfig& cfg, bool reduced,
                   const std::vector<std::string>& domains) {
    if (cfg.out.empty()) throw ConfigError("gen-corpus needs --out");
    SplitSpec spec = reduced ? SplitSpec::reduced() : SplitSpec::defaults();
    spec.seed = cfg.seed;
    if (!reduced) {
        spec.train_per_domain = cfg.train_per_domain;
        spec.test_per_domain = cfg.test_per_domain;
    }
    if (!domains.empty()) {
        std::set<std::string> keep(domains.begin(), domains.end());
        for (auto& split : spec.splits)
            std::erase_if(split.domains,
                          [&](const std::string& d) { return !keep.count(d); });
        std::erase_if(spec.splits, [](const SplitDef& s) { return s.domains.empty(); });
    }
    Manifest m = build_splits(spec, cfg.aug, cfg.out);
    std::size_t total = 0;
    for (const auto& f : m.files) total += f.count;
    std::cerr << "wrote " << m.files.size() << " files, " << total << " instances to "
              << cfg.out << "\n";
    return 0;
}

// Re-render responses (and optionally queries) of an existing corpus
// file with the configured strategies.
int cmd_augment(const RunConfig& cfg, const std::string& in_path,
                const std::string& out_path) {
    auto instances = read_corpus_file(in_path);
    std::map<std::string, DomainFixture> fixtures;
    std::ostringstream out;
    for (auto& inst : instances) {
        auto it = fixtures.find(inst.domain);
        if (it == fixtures.end())
            it = fixtures.emplace(inst.domain, load_domain_fixture(inst.domain)).first;
        const DomainFixture& f = it->second;
        Domain d = f.domain;
        TemplateSet t = f.templates;
        if (inst.split == "obfuscated") {
            if (!f.obfuscation) throw DataError("no obfuscation map for " + inst.domain);
            d = obfuscate_domain(f.domain, *f.obfuscation);
            t = f.obfuscation->templates;
        }
        Problem p = parse_query(inst.query, d, t);
        Plan plan = parse_plan_file(inst.reference_plan);

        AugmentConfig icfg = cfg.aug;
        icfg.seed = fnv1a64(inst.id) ^ (cfg.seed * 0x9e3779b97f4a7c15ull);
        if (icfg.permute) inst.query = permute_query_text(inst.query, icfg.seed);
        if (icfg.goal_cot || icfg.state_cot || icfg.self_correct) {
            AnnotatedResponse r;
            if (icfg.goal_cot || icfg.state_cot) {
                r = annotate_cot(p, plan, d, t, icfg);
            } else {
                for (const auto& s : plan) r.steps.push_back({s});
            }
            if (icfg.self_correct && plan.size() >= 2)
                r = icfg.perturb_in_place ? perturb_mistakes(r, d, p, icfg)
                                          : inject_mistakes(r, icfg);
            inst.response = render_annotated(r, d, t);
        } else {
            inst.response = render_response(plan, d, t);
        }
        inst.strategies.clear();
        if (icfg.permute) inst.strategies.push_back("permute");
        if (icfg.goal_cot) inst.strategies.push_back("goal_cot");
        if (icfg.state_cot) inst.strategies.push_back("state_cot");
        if (icfg.self_correct) inst.strategies.push_back("self_correct");
        out << to_jsonl(inst) << "\n";
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << out.str();
    } else {
        std::ofstream o(out_path, std::ios::binary);
        if (!o) throw DataError("cannot write " + out_path);
        o << out.str();
    }
    std::cerr << "augmented " << instances.size() << " instances\n";
    return 0;
}

int cmd_reward(const RunConfig& cfg, bool serve, const std::string& in_path) {
    RewardServer server(cfg.corpus);
    if (serve || in_path.empty() || in_path == "-") {
        server.run(std::cin, std::cout);
        return 0;
    }
    std::istringstream in(read_file(in_path));
    server.run(in, std::cout);
    return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& outputs_path,
             const std::vector<std::string>& domains, const std::string& split) {
    if (cfg.corpus.empty()) throw ConfigError("eval needs --corpus");
    std::string outputs = read_file(outputs_path);

    // pick corpus files by domain/split filters
    Manifest dummy;
    std::vector<ReportRow> rows;
    std::map<std::string, DomainFixture> fixtures;
    std::string manifest_text = read_file(cfg.corpus + "/manifest.json");
    json mj = json::parse(manifest_text);
    std::set<std::string> want_domains(domains.begin(), domains.end());

    std::vector<std::vector<ResultRecord>> groups;
    for (const auto& fe : mj.at("files")) {
        std::string fdom = fe.at("domain").get<std::string>();
        std::string fsplit = fe.at("split").get<std::string>();
        if (!want_domains.empty() && !want_domains.count(fdom)) continue;
        if (!split.empty() && fsplit != split) continue;
        auto instances = read_corpus_file(cfg.corpus + "/" + fe.at("file").get<std::string>());
        auto it = fixtures.find(fdom);
        if (it == fixtures.end()) it = fixtures.emplace(fdom, load_domain_fixture(fdom)).first;

        // judge_outputs is strict about ids, so keep only this file's lines
        std::set<std::string> ids;
        for (const auto& inst : instances) ids.insert(inst.id);
        std::string filtered;
        std::istringstream olines(outputs);
        std::string oline;
        while (std::getline(olines, oline)) {
            if (oline.empty()) continue;
            json oj;
            try {
                oj = json::parse(oline);
            } catch (const json::exception& e) {
                throw DataError(std::string("bad output line: ") + e.what());
            }
            if (ids.count(oj.value("id", ""))) filtered += oline + "\n";
        }
        auto records = judge_outputs(instances, filtered, it->second);
        if (records.empty()) continue;

        std::map<std::string, std::vector<ResultRecord>> by_id;
        std::vector<ResultRecord> firsts;
        for (auto& r : records) by_id[r.id].push_back(r);
        for (auto& [id, g] : by_id) {
            std::sort(g.begin(), g.end(), [](const ResultRecord& a, const ResultRecord& b) {
                return a.sample < b.sample;
            });
            firsts.push_back(g.front());
            groups.push_back(g);
        }
        rows.push_back({fdom, fsplit, rates(firsts), firsts.size()});
    }
    if (rows.empty()) throw DataError("no instances matched the eval filters");

    std::cout << report_table(rows);
    std::size_t min_group = SIZE_MAX;
    for (const auto& g : groups) min_group = std::min(min_group, g.size());
    for (std::size_t k : cfg.k) {
        if (k > min_group) continue;  // not enough samples for this k
        char buf[64];
        std::snprintf(buf, sizeof buf, "pass@%zu %.3f\n", k, pass_at_k(groups, k));
        std::cout << buf;
    }
    if (!cfg.out.empty()) {
        std::ofstream o(cfg.out, std::ios::binary);
        if (!o) throw DataError("cannot write " + cfg.out);
        o << report_jsonl(rows);
        std::cerr << "report written to " << cfg.out << "\n";
    }
    return 0;
}

int cmd_continue(const RunConfig& cfg, const std::string& in_path) {
    auto instances = read_corpus_file(in_path);
    std::map<std::string, DomainFixture> fixtures;
    std::size_t emitted = 0, skipped = 0;
    for (const auto& inst : instances) {
        if (inst.plan_length <= cfg.prefix) {
            ++skipped;
            continue;
        }
        auto it = fixtures.find(inst.domain);
        if (it == fixtures.end())
            it = fixtures.emplace(inst.domain, load_domain_fixture(inst.domain)).first;
        ContinuationPrompt cp = continuation_prompt(inst, cfg.prefix, it->second);
        nlohmann::ordered_json j;
        j["id"] = inst.id;
        j["prefix"] = cfg.prefix;
        j["query"] = cp.query;
        std::cout << j.dump() << "\n";
        ++emitted;
    }
    std::cerr << "emitted " << emitted << " prompts, skipped " << skipped
              << " short instances\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"planning corpus toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, in_path, out_path, split;
    std::vector<std::string> domains;
    bool reduced = false, serve = false;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--seed", cfg.seed, "global seed");
    app.add_option("--out", cfg.out, "output directory or file");
    app.add_option("--corpus", cfg.corpus, "corpus directory (with manifest.json)");

    auto* validate = app.add_subcommand("validate", "judge a plan against a PDDL task");
    std::string v_domain, v_problem, v_plan;
    validate->add_option("domain", v_domain)->required();
    validate->add_option("problem", v_problem)->required();
    validate->add_option("plan", v_plan)->required();

    auto* gen = app.add_subcommand("gen-corpus", "generate the corpus splits");
    gen->add_flag("--reduced", reduced, "desk-scale counts (200 train / 20 test)");
    gen->add_option("--domains", domains, "restrict to these domains")->delimiter(',');
    gen->add_option("--train-count", cfg.train_per_domain, "train instances per domain");
    gen->add_option("--test-count", cfg.test_per_domain, "test instances per domain");
    gen->add_flag("--permute", cfg.aug.permute, "permutation augmentation");
    gen->add_flag("--goal-cot", cfg.aug.goal_cot, "goal/count annotations");
    gen->add_flag("--state-cot", cfg.aug.state_cot, "precondition/effect annotations");
    gen->add_flag("--self-correct", cfg.aug.self_correct, "mistake injection");
    gen->add_option("--mistake-rate", cfg.aug.mistake_rate, "mistake probability");

    auto* aug = app.add_subcommand("augment", "re-apply strategies to a corpus file");
    aug->add_option("--in", in_path, "corpus JSONL file")->required();
    aug->add_option("--out-file", out_path, "output file (default stdout)");
    aug->add_flag("--permute", cfg.aug.permute, "permutation augmentation");
    aug->add_flag("--goal-cot", cfg.aug.goal_cot, "goal/count annotations");
    aug->add_flag("--state-cot", cfg.aug.state_cot, "precondition/effect annotations");
    aug->add_flag("--self-correct", cfg.aug.self_correct, "mistake injection");
    aug->add_option("--mistake-rate", cfg.aug.mistake_rate, "mistake probability");

    auto* reward = app.add_subcommand("reward", "score NDJSON requests");
    reward->add_flag("--serve", serve, "read requests from stdin");
    reward->add_option("--in", in_path, "requests file (default stdin)");

    auto* eval = app.add_subcommand("eval", "metric report for model outputs");
    eval->add_option("--outputs", in_path, "model outputs JSONL")->required();
    eval->add_option("--domains", domains, "restrict to these domains")->delimiter(',');
    eval->add_option("--split", split, "restrict to one split");
    eval->add_option("--k", cfg.k, "pass@k values")->delimiter(',');

    auto* cont = app.add_subcommand("continue", "continuation prompts for long plans");
    cont->add_option("--in", in_path, "corpus JSONL file")->required();
    cont->add_option("--prefix", cfg.prefix, "reference actions to reveal");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (!config_path.empty()) load_config(cfg, config_path);
        if (validate->parsed()) return cmd_validate(v_domain, v_problem, v_plan);
        if (gen->parsed()) return cmd_gen_corpus(cfg, reduced, domains);
        if (aug->parsed()) return cmd_augment(cfg, in_path, out_path);
        if (reward->parsed()) return cmd_reward(cfg, serve, in_path);
        if (eval->parsed()) return cmd_eval(cfg, in_path, domains, split);
        if (cont->parsed()) return cmd_continue(cfg, in_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PlanError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
