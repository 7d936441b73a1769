#pragma once
#include <optional>
#include <string>
#include <vector>

#include "plancorpus/ground.hpp"

namespace plancorpus {

// State sequence of an executable plan; states[0] is the initial state.
struct Trace {
    std::vector<State> states;
};

// First step whose preconditions do not hold, with the full set of
// unmet ground precondition literals at that step.
struct ExecutionFailure {
    std::size_t step = 0;
    std::vector<Literal> unmet;
};

struct ExecutionResult {
    std::optional<Trace> trace;
    std::optional<ExecutionFailure> failure;
    bool ok() const { return trace.has_value(); }
};

struct PlanVerdict {
    bool executable = false;
    bool valid = false;
    bool goal_satisfiable = false;
    std::optional<ExecutionFailure> first_failure;  // present iff not executable
    State final_state;                              // trace end, or unconditional-effects end
};

// Execute with precondition checking; stops at the first unmet
// precondition. An inexecutable plan is a result, not a program fault.
ExecutionResult execute(GroundTask& task, const Plan& plan);

// Three-way judgment: executable per execute; valid = executable and
// goal holds in the trace's final state; goal-satisfiable = goal holds
// after applying every action's effects in order ignoring preconditions.
PlanVerdict judge(GroundTask& task, const Plan& plan);

// VAL-convention plan files: one (action arg...) per line, ';' comments.
Plan parse_plan_file(const std::string& text);
std::string print_plan_file(const Plan& plan);

}  // namespace plancorpus
