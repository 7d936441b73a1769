#pragma once
#include <stdexcept>
#include <string>

namespace plancorpus {

struct PlanError : std::runtime_error {
    explicit PlanError(const std::string& msg) : std::runtime_error(msg) {}
};

// Lexical/syntactic failure in a PDDL document, with source position.
struct ParseError : PlanError {
    ParseError(const std::string& msg, int line, int col)
        : PlanError(msg + " (line " + std::to_string(line) + ", col " + std::to_string(col) + ")"),
          line(line), col(col) {}
    int line;
    int col;
};

// Construct outside the supported typed-STRIPS subset (quantifiers,
// conditional effects, numeric fluents, ...).
struct UnsupportedFeatureError : PlanError {
    UnsupportedFeatureError(const std::string& construct, int line, int col)
        : PlanError("unsupported construct '" + construct + "' (line " + std::to_string(line) +
                    ", col " + std::to_string(col) + ")"),
          construct(construct) {}
    std::string construct;
};

// Semantic cross-check failure (undeclared symbol, arity/type mismatch, ...).
struct ValidationError : PlanError {
    using PlanError::PlanError;
};

// Missing or malformed NL template entry.
struct TemplateError : PlanError {
    using PlanError::PlanError;
};

// Malformed external data (plan file, response text, corpus file, config).
struct DataError : PlanError {
    using PlanError::PlanError;
};

// Search gave up before exhausting the space.
struct SearchLimitError : PlanError {
    using PlanError::PlanError;
};

// Search exhausted the reachable space without finding a plan.
struct UnsolvableError : PlanError {
    using PlanError::PlanError;
};

}  // namespace plancorpus
