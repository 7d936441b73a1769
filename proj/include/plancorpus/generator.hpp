#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "plancorpus/model.hpp"

namespace plancorpus {

// Reference-plan length window, inclusive. [0, 0] asks for an already
// satisfied goal with an empty reference plan.
struct LengthRange {
    std::size_t lo = 3;
    std::size_t hi = 16;
};

struct GenOptions {
    std::size_t max_attempts = 64;
    int size_tier = -1;  // -1: derive from range (hi > 16 -> large), 0 small, 1 large
};

struct GeneratedInstance {
    Problem problem;
    Plan reference;
};

// Random problem for one shipped domain: sampled objects and initial
// state, with the goal drawn from a biased random walk. Does not solve.
// Objects, init and goal come out sorted; objects that appear in
// neither init nor goal are dropped.
Problem sample_problem(const std::string& domain_name, const Domain& d,
                       const LengthRange& range, std::uint64_t seed,
                       const GenOptions& opt = {});

// sample_problem + solve_reference, retried with derived seeds until
// the reference length lands in [lo, hi]. Throws DataError when the
// attempt budget runs out.
GeneratedInstance generate_instance(const std::string& domain_name, const Domain& d,
                                    const LengthRange& range, std::uint64_t seed,
                                    const GenOptions& opt = {});

// Names with a registered sampler.
std::vector<std::string> generator_domains();

}  // namespace plancorpus
