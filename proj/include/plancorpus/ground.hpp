#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plancorpus/model.hpp"

namespace plancorpus {

using AtomId = std::uint32_t;

// Set of ground atoms, kept sorted and duplicate free.
struct State {
    std::vector<AtomId> atoms;

    bool contains(AtomId a) const;
    bool contains_all(const std::vector<AtomId>& ids) const;
    void normalize();

    auto operator<=>(const State&) const = default;
};

struct GroundAction {
    std::string schema;
    std::vector<std::string> args;
    std::vector<AtomId> pre_pos;
    std::vector<AtomId> pre_neg;
    std::vector<AtomId> add;
    std::vector<AtomId> del;

    PlanStep step() const { return {schema, args}; }
    std::string str() const { return step().str(); }
};

// A domain/problem pair with interned ground atoms, the full typed
// grounding, and the interned initial state and goal.
class GroundTask {
public:
    GroundTask(Domain domain, Problem problem);

    const Domain& domain() const { return domain_; }
    const Problem& problem() const { return problem_; }
    const std::vector<GroundAction>& actions() const { return actions_; }
    const State& init() const { return init_; }
    const std::vector<AtomId>& goal_pos() const { return goal_pos_; }
    const std::vector<AtomId>& goal_neg() const { return goal_neg_; }

    AtomId intern(const Atom& a);
    const Atom& atom(AtomId id) const { return atom_defs_[id]; }
    std::size_t atom_count() const { return atom_defs_.size(); }

    // Instantiate one schema with the given objects. Type and arity are
    // checked (ValidationError on failure). Statically false equality
    // preconditions are kept as an unmet marker via `static_ok = false`.
    struct Binding {
        GroundAction action;
        bool static_ok = true;            // all equality preconditions hold
        std::vector<Literal> failed_eq;   // the violated equality literals
    };
    Binding ground_step(const std::string& schema, const std::vector<std::string>& args);

    // Resolve a plan step against the grounding (type checked).
    Binding resolve(const PlanStep& s) { return ground_step(s.schema, s.args); }

    bool goal_holds(const State& s) const;

private:
    void ground_all();

    Domain domain_;
    Problem problem_;
    std::map<std::string, std::string> object_type_;
    std::vector<Atom> atom_defs_;
    std::map<Atom, AtomId> atom_ids_;
    std::vector<GroundAction> actions_;
    State init_;
    std::vector<AtomId> goal_pos_, goal_neg_;
};

// Effect application, delete before add: (s \ del) U add. The input
// state is not modified. Preconditions are the caller's concern.
State apply(const State& s, const GroundAction& a);

// All type-consistent instantiations in lexicographic order of
// (schema name, argument tuple), with statically false equality
// preconditions pruned.
std::vector<GroundAction> ground_actions(const Domain& d, const Problem& p);

}  // namespace plancorpus
