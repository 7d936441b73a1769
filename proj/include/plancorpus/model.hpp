#pragma once
#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace plancorpus {

struct TypedParam {
    std::string name;
    std::string type;
    auto operator<=>(const TypedParam&) const = default;
};

// A (possibly negated) predicate application. Arguments are variables
// (leading '?') in schema context, object names in ground context.
struct Literal {
    std::string pred;
    std::vector<std::string> args;
    bool positive = true;
    auto operator<=>(const Literal&) const = default;
};

struct Atom {
    std::string pred;
    std::vector<std::string> args;
    auto operator<=>(const Atom&) const = default;
    std::string str() const;
};

struct Predicate {
    std::string name;
    std::vector<TypedParam> params;
    auto operator<=>(const Predicate&) const = default;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedParam> params;
    std::vector<Literal> precond;  // may contain the builtin "=" predicate
    std::vector<Atom> add;
    std::vector<Atom> del;
    auto operator<=>(const ActionSchema&) const = default;
};

struct Domain {
    std::string name;
    std::vector<std::string> requirements;
    // Type hierarchy: child -> parent. "object" is the implicit root.
    std::map<std::string, std::string> supertype;
    std::vector<std::string> type_order;  // declaration order, for printing
    std::vector<Predicate> predicates;
    std::vector<ActionSchema> schemas;
    std::vector<TypedParam> constants;

    bool has_type(const std::string& t) const;
    // True if t equals anc or anc is reachable via supertype links.
    bool is_subtype(const std::string& t, const std::string& anc) const;
    const Predicate* find_predicate(const std::string& name) const;
    const ActionSchema* find_schema(const std::string& name) const;

    auto operator<=>(const Domain&) const = default;
};

struct Problem {
    std::string name;
    std::string domain_name;
    std::vector<TypedParam> objects;  // problem objects, excluding domain constants
    std::vector<Atom> init;
    std::vector<Literal> goal;

    // Problem objects plus domain constants.
    std::vector<TypedParam> universe(const Domain& d) const;

    auto operator<=>(const Problem&) const = default;
};

// One ground action reference as written in a plan file.
struct PlanStep {
    std::string schema;
    std::vector<std::string> args;
    auto operator<=>(const PlanStep&) const = default;
    std::string str() const;
};

using Plan = std::vector<PlanStep>;

}  // namespace plancorpus
