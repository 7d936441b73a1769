#include "plancorpus/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "plancorpus/errors.hpp"
#include "plancorpus/exec.hpp"
#include "plancorpus/obfuscate.hpp"
#include "plancorpus/templates.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace plancorpus {
namespace {

const std::vector<std::string> kTrainDomains = {
    "barman",   "blocksworld", "childsnack", "depots",
    "driverlog", "grippers",   "logistics",  "satellite"};

std::string pad6(std::size_t i) {
    std::string s = std::to_string(i);
    return std::string(s.size() < 6 ? 6 - s.size() : 0, '0') + s;
}

// dedup identity: canonical text of sorted objects, init and goal
std::string canonical_key(const Problem& p) {
    auto objects = p.objects;
    auto init = p.init;
    auto goal = p.goal;
    std::sort(objects.begin(), objects.end(),
              [](const TypedParam& a, const TypedParam& b) { return a.name < b.name; });
    std::sort(init.begin(), init.end());
    std::sort(goal.begin(), goal.end());
    std::ostringstream out;
    for (const auto& o : objects) out << o.name << ':' << o.type << ';';
    out << '|';
    for (const auto& a : init) out << a.str() << ';';
    out << '|';
    for (const auto& l : goal) out << (l.positive ? "" : "!") << Atom{l.pred, l.args}.str() << ';';
    return out.str();
}

std::vector<std::string> enabled_strategies(const AugmentConfig& cfg) {
    std::vector<std::string> s;
    if (cfg.permute) s.push_back("permute");
    if (cfg.goal_cot) s.push_back("goal_cot");
    if (cfg.state_cot) s.push_back("state_cot");
    if (cfg.self_correct) s.push_back("self_correct");
    return s;
}

std::string train_response(const Problem& p, const Plan& plan, const Domain& d,
                           const TemplateSet& t, const AugmentConfig& cfg) {
    if (!cfg.goal_cot && !cfg.state_cot && !cfg.self_correct)
        return render_response(plan, d, t);
    AnnotatedResponse r;
    if (cfg.goal_cot || cfg.state_cot) {
        r = annotate_cot(p, plan, d, t, cfg);
    } else {
        for (const auto& s : plan) r.steps.push_back({s});
    }
    if (cfg.self_correct && plan.size() >= 2)
        r = cfg.perturb_in_place ? perturb_mistakes(r, d, p, cfg) : inject_mistakes(r, cfg);
    return render_annotated(r, d, t);
}

}  // namespace

std::string to_jsonl(const CorpusInstance& inst) {
    ordered_json j;
    j["id"] = inst.id;
    j["domain"] = inst.domain;
    j["split"] = inst.split;
    j["query"] = inst.query;
    j["response"] = inst.response;
    j["plan_length"] = inst.plan_length;
    j["strategies"] = inst.strategies;
    j["reference_plan"] = inst.reference_plan;
    return j.dump();
}

CorpusInstance from_jsonl(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw DataError(std::string("bad corpus line: ") + e.what());
    }
    CorpusInstance inst;
    try {
        inst.id = j.at("id").get<std::string>();
        inst.domain = j.at("domain").get<std::string>();
        inst.split = j.at("split").get<std::string>();
        inst.query = j.at("query").get<std::string>();
        inst.response = j.at("response").get<std::string>();
        inst.plan_length = j.at("plan_length").get<std::size_t>();
        inst.strategies = j.at("strategies").get<std::vector<std::string>>();
        inst.reference_plan = j.at("reference_plan").get<std::string>();
    } catch (const json::exception& e) {
        throw DataError(std::string("corpus line missing field: ") + e.what());
    }
    return inst;
}

std::vector<CorpusInstance> read_corpus_file(const std::string& path) {
    std::vector<CorpusInstance> out;
    std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(from_jsonl(line));
    return out;
}

SplitSpec SplitSpec::defaults() {
    SplitSpec s;
    s.splits = {
        {"train", kTrainDomains, {3, 16}, true, false},
        {"in_distrib", kTrainDomains, {3, 16}, false, false},
        {"long", kTrainDomains, {17, 32}, false, false},
        {"unseen", {"hanoi", "storage"}, {3, 16}, false, false},
        {"obfuscated", {"blocksworld", "logistics"}, {3, 16}, false, true},
    };
    return s;
}

SplitSpec SplitSpec::reduced() {
    SplitSpec s = defaults();
    s.train_per_domain = 200;
    s.test_per_domain = 20;
    return s;
}

std::uint64_t fnv1a64(const std::string& s, std::uint64_t h) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string digest_hex(const std::string& bytes) {
    static const char* hex = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 0xf];
    return out;
}

std::string Manifest::to_json() const {
    ordered_json j;
    j["seed"] = seed;
    j["files"] = ordered_json::array();
    for (const auto& f : files) {
        ordered_json e;
        e["file"] = f.file;
        e["domain"] = f.domain;
        e["split"] = f.split;
        e["count"] = f.count;
        e["digest"] = f.digest;
        j["files"].push_back(e);
    }
    return j.dump(2) + "\n";
}

std::vector<CorpusInstance> generate_domain_split(
    const DomainFixture& f, const SplitDef& split, const SplitSpec& spec,
    const AugmentConfig& cfg, std::map<std::string, std::set<std::string>>& seen) {
    if (split.obfuscated && !f.obfuscation)
        throw DataError("no obfuscation map for domain: " + f.name);
    std::size_t count = split.train ? spec.train_per_domain : spec.test_per_domain;
    auto& keys = seen[f.name];
    std::vector<CorpusInstance> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        CorpusInstance inst;
        inst.id = f.name + "-" + split.name + "-" + pad6(i);
        inst.domain = f.name;
        inst.split = split.name;
        std::uint64_t base = fnv1a64(inst.id) ^ (spec.seed * 0x9e3779b97f4a7c15ull);

        GeneratedInstance gi;
        bool found = false;
        for (std::uint64_t salt = 0; salt < 32 && !found; ++salt) {
            try {
                gi = generate_instance(f.name, f.domain, split.range, base + salt);
            } catch (const DataError&) {
                continue;  // unlucky seed, next salt
            }
            std::string key = canonical_key(gi.problem);
            if (keys.count(key)) continue;
            keys.insert(key);
            found = true;
        }
        if (!found)
            throw DataError("count unsatisfiable: " + inst.id + " (duplicates exhausted)");

        const Domain* dd = &f.domain;
        const Problem* pp = &gi.problem;
        const TemplateSet* tt = &f.templates;
        const Plan* plan = &gi.reference;
        Obfuscated obf;
        Plan obf_plan;
        if (split.obfuscated) {
            obf = obfuscate(f.domain, gi.problem, *f.obfuscation);
            obf_plan = obfuscate_plan(gi.reference, gi.problem, *f.obfuscation);
            dd = &obf.domain;
            pp = &obf.problem;
            tt = &obf.templates;
            plan = &obf_plan;
        }

        AugmentConfig icfg = cfg;
        icfg.seed = base;
        inst.query = render_query(*dd, *pp, *tt);
        if (split.train) {
            if (cfg.permute) inst.query = permute_query_text(inst.query, icfg.seed);
            inst.response = train_response(*pp, *plan, *dd, *tt, icfg);
            inst.strategies = enabled_strategies(cfg);
        } else {
            inst.response = render_response(*plan, *dd, *tt);
        }
        inst.plan_length = plan->size();
        inst.reference_plan = print_plan_file(*plan);
        out.push_back(std::move(inst));
    }
    return out;
}

Manifest build_splits(const SplitSpec& spec, const AugmentConfig& cfg,
                      const std::string& out_dir) {
    fs::create_directories(out_dir);
    Manifest m;
    m.seed = spec.seed;
    std::map<std::string, std::set<std::string>> seen;
    std::map<std::string, DomainFixture> fixtures;
    for (const auto& split : spec.splits) {
        for (const auto& name : split.domains) {
            auto it = fixtures.find(name);
            if (it == fixtures.end())
                it = fixtures.emplace(name, load_domain_fixture(name)).first;
            auto instances = generate_domain_split(it->second, split, spec, cfg, seen);
            std::string content;
            for (const auto& inst : instances) content += to_jsonl(inst) + "\n";
            std::string file = name + "." + split.name + ".jsonl";
            std::ofstream o(fs::path(out_dir) / file, std::ios::binary);
            if (!o) throw DataError("cannot write " + file);
            o << content;
            m.files.push_back({file, name, split.name, instances.size(), digest_hex(content)});
        }
    }
    std::ofstream o(fs::path(out_dir) / "manifest.json", std::ios::binary);
    o << m.to_json();
    return m;
}

}  // namespace plancorpus
