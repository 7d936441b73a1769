#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plancorpus/model.hpp"

namespace plancorpus {

// Slotted sentence templates for one action schema. Slots are written
// {0}, {1}, ... and refer to schema parameter positions. `desc` is the
// verbatim line for the query's action list; `restrictions` optionally
// overrides the query's restriction lines (otherwise they are derived
// from precond/effect with type nouns substituted for the slots).
struct ActionTemplate {
    std::string desc;
    std::string phrase;
    std::vector<std::string> precond;
    std::vector<std::string> effect;
    std::vector<std::string> restrictions;
};

// How objects of one type read in NL. With a pattern ("{name} block",
// "object {name}") the name is substituted literally; without one the
// name is digit-split ("driver1" -> "driver 1"). `parse_nouns` lists
// the name prefixes that identify this type when parsing digit-split
// phrases (defaults to the singular `noun`).
struct TypeStyle {
    std::string noun;
    std::string pattern;
    std::vector<std::string> parse_nouns;
};

struct TemplateSet {
    std::string context;
    std::map<std::string, ActionTemplate> actions;
    std::map<std::string, std::string> predicates;  // name -> sentence template
    std::map<std::string, TypeStyle> types;

    // Throws TemplateError if any schema or predicate lacks a template.
    void check_covers(const Domain& d) const;

    // Style lookup walks up the type hierarchy; digit-split fallback.
    const TypeStyle* style_for(const Domain& d, const std::string& type) const;
};

TemplateSet parse_templates(const std::string& json_text);

// Tag dialect for CoT annotations and plan markers. The square-bracket
// variants ([GOAL]...[GOAL END] etc.) are always accepted on input.
struct ResponseSyntax {
    std::string plan_open = "[PLAN]";
    std::string plan_close = "[PLAN END]";
    std::string goal_open = "<GOAL>";
    std::string goal_close = "</GOAL>";
    std::string count_open = "<COUNT>";
    std::string count_close = "</COUNT>";
    std::string precon_open = "<PRECON>";
    std::string precon_close = "</PRECON>";
    std::string effect_open = "<EFFECT>";
    std::string effect_close = "</EFFECT>";
    std::string wrong = "[WRONG]";
};

// NL phrase for one object; `type` is the declared type at its slot.
std::string render_object(const Domain& d, const TemplateSet& t, const std::string& name,
                          const std::string& type);

// One init/goal atom as a sentence (no trailing period).
std::string render_atom(const Domain& d, const TemplateSet& t, const Atom& a);

// One plan step as a sentence.
std::string render_step(const Domain& d, const TemplateSet& t, const PlanStep& s);

// Grounded precondition / effect sentence blocks for a step.
std::string render_precon_block(const Domain& d, const TemplateSet& t, const PlanStep& s);
std::string render_effect_block(const Domain& d, const TemplateSet& t, const PlanStep& s);

// "My goal is to have that g1, g2." sentence for the problem.
std::string render_goal_sentence(const Domain& d, const TemplateSet& t, const Problem& p);

// [CONTEXT] / [ACTION DESCRIPTION] / [STATEMENT] query text.
std::string render_query(const Domain& d, const Problem& p, const TemplateSet& t);

// Inverse of render_query; objects are recovered from the rendered
// init and goal atoms, so every object must occur in one of them.
Problem parse_query(const std::string& text, const Domain& d, const TemplateSet& t);

// Plain response: "My plan is as follows:" and the [PLAN] block.
std::string render_response(const Plan& plan, const Domain& d, const TemplateSet& t,
                            const ResponseSyntax& syn = {});

struct ParsedResponse {
    Plan plan;                         // wrong-marked steps excluded
    std::size_t raw_step_count = 0;    // all step sentences seen
    std::vector<std::size_t> wrong_marked;  // raw indices of [WRONG] steps
};

// Template-inverse parse of a model response. Throws DataError on a
// missing plan block or an unparseable step line.
ParsedResponse parse_response(const std::string& text, const Domain& d, const TemplateSet& t,
                              const ResponseSyntax& syn = {});

// Lenient variant: stops at the first unparseable step instead of
// throwing and reports the offending line.
struct LenientResponse {
    ParsedResponse parsed;
    bool complete = false;
    std::string error;  // empty when complete
};
LenientResponse parse_response_lenient(const std::string& text, const Domain& d,
                                       const TemplateSet& t, const ResponseSyntax& syn = {});

// Parse one step sentence; nullopt if no schema phrase matches.
std::optional<PlanStep> parse_step(const std::string& line, const Domain& d,
                                   const TemplateSet& t);

}  // namespace plancorpus
