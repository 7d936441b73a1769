#pragma once
#include <string>

#include "plancorpus/errors.hpp"
#include "plancorpus/model.hpp"

namespace plancorpus {

// Parse a typed-STRIPS PDDL domain. Identifiers are normalized to lower
// case. Rejects ADL, axioms and numeric fluents with
// UnsupportedFeatureError naming the construct.
Domain parse_domain(const std::string& text);

// Parse a problem and cross-check it against an already parsed domain
// (declared predicates, arity, argument types, matching domain name).
Problem parse_problem(const std::string& text, const Domain& domain);

// Canonical PDDL renderings. parse(print(x)) == x.
std::string print_domain(const Domain& d);
std::string print_problem(const Problem& p);

}  // namespace plancorpus
