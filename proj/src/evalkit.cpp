#include "plancorpus/evalkit.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "plancorpus/errors.hpp"
#include "plancorpus/ground.hpp"
#include "plancorpus/obfuscate.hpp"
#include "plancorpus/templates.hpp"

using json = nlohmann::json;

namespace plancorpus {
namespace {

// domain + templates an instance's text was rendered with
struct InstanceView {
    Domain domain;
    TemplateSet templates;
};

InstanceView view_for(const std::string& split, const DomainFixture& f) {
    if (split == "obfuscated") {
        if (!f.obfuscation) throw DataError("no obfuscation map for " + f.name);
        return {obfuscate_domain(f.domain, *f.obfuscation), f.obfuscation->templates};
    }
    return {f.domain, f.templates};
}

}  // namespace

Rates rates(const std::vector<ResultRecord>& records) {
    if (records.empty()) throw DataError("no result records");
    std::size_t valid = 0, exec = 0, sat = 0;
    for (const auto& r : records) {
        if (!r.verdict) continue;  // parse failure: all false
        if (r.verdict->valid) ++valid;
        if (r.verdict->executable && r.plan && r.plan->size() >= 4) ++exec;
        if (r.verdict->goal_satisfiable) ++sat;
    }
    double n = static_cast<double>(records.size());
    return {valid / n, exec / n, sat / n};
}

double pass_at_k(const std::vector<std::vector<ResultRecord>>& groups, std::size_t k) {
    if (groups.empty()) throw DataError("no sample groups");
    std::size_t hits = 0;
    for (const auto& g : groups) {
        if (g.size() < k) throw DataError("sample group smaller than k");
        for (std::size_t i = 0; i < k; ++i)
            if (g[i].verdict && g[i].verdict->valid) {
                ++hits;
                break;
            }
    }
    return static_cast<double>(hits) / groups.size();
}

ProbeScores probing_scores(const std::vector<ProbeRecord>& records) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& r : records) {
        bool predicted = r.p_wrong > r.p_continue;  // tie: not a mistake
        if (predicted && r.is_wrong) ++tp;
        else if (predicted) ++fp;
        else if (r.is_wrong) ++fn;
    }
    if (tp + fp == 0) throw DataError("undefined precision: no predicted mistakes");
    if (tp + fn == 0) throw DataError("undefined recall: no actual mistakes");
    return {static_cast<double>(tp) / (tp + fp), static_cast<double>(tp) / (tp + fn)};
}

ContinuationPrompt continuation_prompt(const CorpusInstance& inst, std::size_t prefix_len,
                                       const DomainFixture& f) {
    InstanceView v = view_for(inst.split, f);
    Problem p = parse_query(inst.query, v.domain, v.templates);
    Plan reference = parse_plan_file(inst.reference_plan);
    if (prefix_len >= reference.size())
        throw DataError("prefix too long: " + std::to_string(prefix_len) + " of " +
                        std::to_string(reference.size()));
    ContinuationPrompt out;
    out.check_problem = p;
    if (prefix_len == 0) {
        out.query = inst.query;
        return out;
    }
    out.prefix.assign(reference.begin(), reference.begin() + prefix_len);
    GroundTask task(v.domain, p);
    ExecutionResult res = execute(task, out.prefix);
    if (!res.ok())
        throw DataError("prefix inexecutable at step " +
                        std::to_string(res.failure->step));
    const State& s = res.trace->states.back();
    out.check_problem.init.clear();
    for (AtomId id : s.atoms) out.check_problem.init.push_back(task.atom(id));
    std::sort(out.check_problem.init.begin(), out.check_problem.init.end());

    ResponseSyntax syn;
    std::ostringstream q;
    q << inst.query << "My plan is as follows:\n" << syn.plan_open << "\n";
    for (const auto& step : out.prefix)
        q << render_step(v.domain, v.templates, step) << "\n";
    out.query = q.str();
    return out;
}

std::vector<ResultRecord> judge_outputs(const std::vector<CorpusInstance>& instances,
                                        const std::string& outputs_jsonl,
                                        const DomainFixture& f) {
    InstanceView v = view_for(instances.empty() ? "" : instances.front().split, f);
    std::map<std::string, Problem> problems;
    for (const auto& inst : instances)
        problems.emplace(inst.id, parse_query(inst.query, v.domain, v.templates));

    std::vector<ResultRecord> out;
    std::istringstream in(outputs_jsonl);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError(std::string("bad output line: ") + e.what());
        }
        ResultRecord r;
        r.id = j.at("id").get<std::string>();
        r.sample = j.value("sample", 0);
        auto it = problems.find(r.id);
        if (it == problems.end()) throw DataError("unknown instance id: " + r.id);
        try {
            r.plan = parse_response(j.at("response").get<std::string>(), v.domain, v.templates).plan;
            GroundTask task(v.domain, it->second);
            r.verdict = judge(task, *r.plan);
        } catch (const PlanError&) {
            r.plan.reset();
            r.verdict.reset();
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string report_jsonl(const std::vector<ReportRow>& rows) {
    std::string out;
    for (const auto& row : rows) {
        nlohmann::ordered_json j;
        j["domain"] = row.domain;
        j["split"] = row.split;
        j["count"] = row.count;
        j["validity"] = row.r.validity;
        j["executability"] = row.r.executability;
        j["goal_sat"] = row.r.goal_sat;
        out += j.dump() + "\n";
    }
    return out;
}

std::string report_table(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-14s %-12s %7s %8s %8s %9s\n", "domain", "split",
                  "count", "valid.", "exec.", "goal-sat.");
    out << buf;
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%-14s %-12s %7zu %8.3f %8.3f %9.3f\n",
                      row.domain.c_str(), row.split.c_str(), row.count, row.r.validity,
                      row.r.executability, row.r.goal_sat);
        out << buf;
    }
    return out.str();
}

}  // namespace plancorpus
