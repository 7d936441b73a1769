#include "plancorpus/reward.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "plancorpus/corpus.hpp"
#include "plancorpus/errors.hpp"
#include "plancorpus/exec.hpp"
#include "plancorpus/ground.hpp"
#include "plancorpus/obfuscate.hpp"
#include "plancorpus/parser.hpp"
#include "plancorpus/templates.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace plancorpus {
namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

PlanStep canon(const PlanStep& s) {
    PlanStep c{lower(s.schema), s.args};
    for (auto& a : c.args) a = lower(a);
    return c;
}

}  // namespace

std::size_t lccs_len(const Plan& a, const Plan& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<PlanStep> ca, cb;
    for (const auto& s : a) ca.push_back(canon(s));
    for (const auto& s : b) cb.push_back(canon(s));
    // run[j]: longest common run ending at ca[i], cb[j]
    std::vector<std::size_t> run(cb.size() + 1, 0), next(cb.size() + 1, 0);
    std::size_t best = 0;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        for (std::size_t j = 0; j < cb.size(); ++j) {
            next[j + 1] = ca[i] == cb[j] ? run[j] + 1 : 0;
            best = std::max(best, next[j + 1]);
        }
        std::swap(run, next);
    }
    return best;
}

RewardScore score(const Domain& d, const Problem& p, const Plan& generated,
                  const Plan& reference) {
    GroundTask task(d, p);
    if (!judge(task, reference).valid)
        throw ValidationError("reference plan does not judge valid");
    RewardScore r;
    r.ref_len = reference.size();
    bool valid = false;
    try {
        valid = judge(task, generated).valid;
    } catch (const ValidationError&) {
        valid = false;  // unknown action or bad arity: scored, not fatal
    }
    r.valid = valid;
    r.lccs_len = lccs_len(generated, reference);
    if (valid)
        r.reward = 1.0;
    else
        r.reward = r.ref_len == 0 ? 0.0 : static_cast<double>(r.lccs_len) / r.ref_len;
    return r;
}

RewardScore score_multi(const Domain& d, const Problem& p, const Plan& generated,
                        const std::vector<Plan>& references) {
    if (references.empty()) throw ValidationError("no reference plans");
    RewardScore best;
    bool first = true;
    for (const auto& ref : references) {
        RewardScore r = score(d, p, generated, ref);
        if (first || r.reward > best.reward) best = r;
        first = false;
    }
    return best;
}

RewardServer::RewardServer(std::string corpus_dir) : corpus_dir_(std::move(corpus_dir)) {}

const RewardServer::Entry* RewardServer::find_instance(const std::string& id) {
    if (!corpus_loaded_) {
        corpus_loaded_ = true;
        if (!corpus_dir_.empty()) {
            for (const auto& e : fs::directory_iterator(corpus_dir_)) {
                if (e.path().extension() != ".jsonl") continue;
                for (auto& inst : read_corpus_file(e.path().string()))
                    instances_[inst.id] = {inst.domain, inst.split, inst.query,
                                           inst.reference_plan};
            }
        }
    }
    auto it = instances_.find(id);
    return it == instances_.end() ? nullptr : &it->second;
}

DomainFixture& RewardServer::fixture(const std::string& name) {
    auto it = fixtures_.find(name);
    if (it == fixtures_.end()) it = fixtures_.emplace(name, load_domain_fixture(name)).first;
    return it->second;
}

std::string RewardServer::handle_line(const std::string& line) {
    json resp;
    std::string id;
    try {
        json req = json::parse(line);
        id = req.value("id", "");
        resp["id"] = id;
        if (id.empty()) throw DataError("missing id");

        Domain d;
        Problem p;
        TemplateSet t;
        bool have_templates = false;
        std::vector<Plan> references;
        Plan generated;

        if (req.contains("instance")) {
            std::string iid = req.at("instance").get<std::string>();
            const Entry* e = find_instance(iid);
            if (!e) throw DataError("unknown instance id: " + iid);
            DomainFixture& f = fixture(e->domain);
            if (e->split == "obfuscated") {
                if (!f.obfuscation) throw DataError("no obfuscation map for " + e->domain);
                d = obfuscate_domain(f.domain, *f.obfuscation);
                t = f.obfuscation->templates;
            } else {
                d = f.domain;
                t = f.templates;
            }
            have_templates = true;
            p = parse_query(e->query, d, t);
            if (!req.contains("reference") && !req.contains("references"))
                references.push_back(parse_plan_file(e->reference_plan));
        } else {
            d = parse_domain(req.at("domain").get<std::string>());
            p = parse_problem(req.at("problem").get<std::string>(), d);
        }

        if (req.contains("reference"))
            references.push_back(parse_plan_file(req.at("reference").get<std::string>()));
        if (req.contains("references"))
            for (const auto& r : req.at("references"))
                references.push_back(parse_plan_file(r.get<std::string>()));
        if (references.empty()) throw DataError("missing reference");

        std::string gen = req.at("generated").get<std::string>();
        if (have_templates) {
            // NL response; keep the parseable prefix of a malformed one
            generated = parse_response_lenient(gen, d, t).parsed.plan;
        } else {
            generated = parse_plan_file(gen);
        }

        RewardScore s = score_multi(d, p, generated, references);
        resp["reward"] = s.reward;
        resp["valid"] = s.valid;
        resp["lccs_len"] = s.lccs_len;
        resp["ref_len"] = s.ref_len;
    } catch (const std::exception& e) {
        resp = json{{"id", id}, {"error", e.what()}};
    }
    return resp.dump();
}

void RewardServer::run(std::istream& in, std::ostream& out) {
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out << handle_line(line) << "\n";
        out.flush();
    }
}

}  // namespace plancorpus
