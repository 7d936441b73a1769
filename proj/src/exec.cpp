#include "plancorpus/exec.hpp"

#include <sstream>

#include "plancorpus/errors.hpp"

namespace plancorpus {

namespace {

std::vector<Literal> unmet_preconditions(GroundTask& task, const GroundTask::Binding& b,
                                         const State& s) {
    std::vector<Literal> unmet(b.failed_eq);
    for (AtomId id : b.action.pre_pos)
        if (!s.contains(id)) unmet.push_back({task.atom(id).pred, task.atom(id).args, true});
    for (AtomId id : b.action.pre_neg)
        if (s.contains(id)) unmet.push_back({task.atom(id).pred, task.atom(id).args, false});
    return unmet;
}

}  // namespace

ExecutionResult execute(GroundTask& task, const Plan& plan) {
    ExecutionResult res;
    Trace trace;
    trace.states.push_back(task.init());
    for (std::size_t i = 0; i < plan.size(); ++i) {
        GroundTask::Binding b = task.resolve(plan[i]);
        auto unmet = unmet_preconditions(task, b, trace.states.back());
        if (!unmet.empty()) {
            res.failure = ExecutionFailure{i, std::move(unmet)};
            return res;
        }
        trace.states.push_back(apply(trace.states.back(), b.action));
    }
    res.trace = std::move(trace);
    return res;
}

PlanVerdict judge(GroundTask& task, const Plan& plan) {
    PlanVerdict v;
    ExecutionResult res = execute(task, plan);
    if (res.ok()) {
        v.executable = true;
        v.final_state = res.trace->states.back();
        v.valid = task.goal_holds(v.final_state);
    } else {
        v.first_failure = res.failure;
    }
    // Effects applied unconditionally in plan order, delete before add
    // per step, preconditions ignored.
    State s = task.init();
    for (const auto& step : plan) s = apply(s, task.resolve(step).action);
    v.goal_satisfiable = task.goal_holds(s);
    if (!v.executable) v.final_state = s;
    return v;
}

Plan parse_plan_file(const std::string& text) {
    Plan plan;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto sc = line.find(';');
        if (sc != std::string::npos) line.erase(sc);
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> toks;
        while (ls >> tok) toks.push_back(tok);
        if (toks.empty()) continue;
        std::string joined;
        for (const auto& t : toks) joined += (joined.empty() ? "" : " ") + t;
        if (joined.front() != '(' || joined.back() != ')')
            throw DataError("malformed plan step at line " + std::to_string(lineno) + ": " + line);
        joined = joined.substr(1, joined.size() - 2);
        std::istringstream ss(joined);
        PlanStep step;
        if (!(ss >> step.schema))
            throw DataError("empty plan step at line " + std::to_string(lineno));
        for (auto& c : step.schema) c = static_cast<char>(std::tolower((unsigned char)c));
        while (ss >> tok) {
            for (auto& c : tok) c = static_cast<char>(std::tolower((unsigned char)c));
            step.args.push_back(tok);
        }
        plan.push_back(std::move(step));
    }
    return plan;
}

std::string print_plan_file(const Plan& plan) {
    std::string out;
    for (const auto& s : plan) out += s.str() + "\n";
    return out;
}

}  // namespace plancorpus
