#pragma once
#include <map>
#include <string>

#include "plancorpus/model.hpp"
#include "plancorpus/templates.hpp"

namespace plancorpus {

// Vocabulary renaming for one domain: bijective action and predicate
// name maps plus a replacement TemplateSet keyed by the new names.
// Objects are renamed deterministically: with `object_nouns`, per type
// in sorted order to <noun>1, <noun>2, ...; otherwise (when
// `rename_objects` is set) to a, b, c, ... (then aa, ab, ... past 'z').
struct ObfuscationMap {
    std::map<std::string, std::string> actions;
    std::map<std::string, std::string> predicates;
    std::map<std::string, std::string> object_nouns;  // type -> new name base
    TemplateSet templates;
    bool rename_objects = true;

    // Identity map over the domain's vocabulary; output equals input.
    static ObfuscationMap identity(const Domain& d, const TemplateSet& t);

    // Throws ValidationError on an uncovered symbol or a collision.
    void check_bijective(const Domain& d) const;
};

ObfuscationMap parse_obfuscation(const std::string& json_text);

// Deterministic object renaming for a problem (sorted name order).
// Identity when rename_objects is off.
std::map<std::string, std::string> object_renaming(const Problem& p, const ObfuscationMap& m);

Domain obfuscate_domain(const Domain& d, const ObfuscationMap& m);
Problem obfuscate_problem(const Problem& p, const ObfuscationMap& m);
Plan obfuscate_plan(const Plan& plan, const Problem& p, const ObfuscationMap& m);

struct Obfuscated {
    Domain domain;
    Problem problem;
    TemplateSet templates;
};

// Composed rename; structure is isomorphic to the input.
Obfuscated obfuscate(const Domain& d, const Problem& p, const ObfuscationMap& m);

}  // namespace plancorpus
