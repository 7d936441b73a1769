#pragma once
#include <cstddef>

#include "plancorpus/ground.hpp"

namespace plancorpus {

struct SearchLimits {
    std::size_t max_expansions = 200000;
    std::size_t max_plan_length = 16;
};

// Deterministic reference planner. Breadth-first search with duplicate
// state detection while the length bound allows it (<= 16), greedy
// best-first on unsatisfied-goal-count beyond that; ties broken by
// lexicographic action order. Throws SearchLimitError when the
// expansion budget runs out, UnsolvableError when the reachable space
// is exhausted. The returned plan always re-judges valid.
Plan solve_reference(GroundTask& task, const SearchLimits& limits);

}  // namespace plancorpus
