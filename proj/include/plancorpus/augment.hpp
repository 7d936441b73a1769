#pragma once
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "plancorpus/templates.hpp"

namespace plancorpus {

struct AugmentConfig {
    bool permute = false;
    bool goal_cot = false;
    bool state_cot = false;
    bool self_correct = false;
    // Alternative in-place perturbation instead of borrowing a later
    // step; reported worse, so off by default.
    bool perturb_in_place = false;
    double mistake_rate = 0.2;
    std::uint64_t seed = 1111;
};

struct AnnotatedStep {
    PlanStep step;
    std::string goal_block;    // rendered goal sentence, empty when absent
    int count = -1;            // steps remaining after this one, -1 = absent
    std::string precon_block;
    std::string effect_block;
    bool wrong = false;
};

struct AnnotatedResponse {
    std::vector<AnnotatedStep> steps;
};

// Portable deterministic shuffle / draws (stdlib distributions are
// implementation-defined across platforms).
template <class T>
void det_shuffle(std::vector<T>& v, std::mt19937_64& g) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[g() % i]);
}
inline bool det_bernoulli(std::mt19937_64& g, double p) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53 < p;
}

// Goal/State CoT blocks per cfg flags; counts run n-1 .. 0.
AnnotatedResponse annotate_cot(const Problem& p, const Plan& plan, const Domain& d,
                               const TemplateSet& t, const AugmentConfig& cfg);

// Error injection on an annotated response: before step i (i < last),
// with probability mistake_rate, insert a copy of a uniformly chosen
// later step flagged wrong, annotations (incl. COUNT) copied from the
// borrowed position. Throws ValidationError when the plan is shorter
// than 2 steps.
AnnotatedResponse inject_mistakes(const AnnotatedResponse& r, const AugmentConfig& cfg);
AnnotatedResponse inject_mistakes(const Plan& plan, const AugmentConfig& cfg);

// In-place perturbation variant (cfg.perturb_in_place): the wrong step
// replaces the correct action with a mutated copy, the correct step
// follows it.
AnnotatedResponse perturb_mistakes(const AnnotatedResponse& r, const Domain& d, const Problem& p,
                                   const AugmentConfig& cfg);

// Annotated steps back to response text ([PLAN] block with tags).
std::string render_annotated(const AnnotatedResponse& r, const Domain& d, const TemplateSet& t,
                             const ResponseSyntax& syn = {});

// Section-wise shuffles of a rendered query: action list, restriction
// list, init sentences, goal sentences. Parse semantics preserved.
std::string permute_query_text(const std::string& query, std::uint64_t seed);

}  // namespace plancorpus
