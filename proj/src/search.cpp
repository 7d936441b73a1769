#include "plancorpus/search.hpp"

#include <cstdint>
#include <deque>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "plancorpus/errors.hpp"

namespace plancorpus {

namespace {

struct StateHash {
    std::size_t operator()(const std::vector<AtomId>& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (AtomId a : v) {
            h ^= a + 1;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

struct Node {
    State state;
    int parent = -1;
    int action = -1;  // index into task.actions()
};

bool applicable(const State& s, const GroundAction& a) {
    if (!s.contains_all(a.pre_pos)) return false;
    for (AtomId id : a.pre_neg)
        if (s.contains(id)) return false;
    return true;
}

Plan extract(const GroundTask& task, const std::vector<Node>& nodes, int goal_idx) {
    Plan plan;
    for (int i = goal_idx; nodes[i].parent >= 0; i = nodes[i].parent)
        plan.push_back(task.actions()[nodes[i].action].step());
    std::reverse(plan.begin(), plan.end());
    return plan;
}

Plan bfs(GroundTask& task, const SearchLimits& limits) {
    if (task.goal_holds(task.init())) return {};
    std::vector<Node> nodes;
    nodes.push_back({task.init(), -1, -1});
    std::vector<std::size_t> depth{0};
    std::unordered_set<std::vector<AtomId>, StateHash> seen;
    seen.insert(task.init().atoms);
    std::deque<int> open{0};
    std::size_t expansions = 0;

    while (!open.empty()) {
        int cur = open.front();
        open.pop_front();
        if (++expansions > limits.max_expansions)
            throw SearchLimitError("expansion limit exceeded");
        if (depth[cur] >= limits.max_plan_length) continue;
        for (std::size_t ai = 0; ai < task.actions().size(); ++ai) {
            const GroundAction& a = task.actions()[ai];
            if (!applicable(nodes[cur].state, a)) continue;
            State next = apply(nodes[cur].state, a);
            if (!seen.insert(next.atoms).second) continue;
            nodes.push_back({std::move(next), cur, static_cast<int>(ai)});
            depth.push_back(depth[cur] + 1);
            int idx = static_cast<int>(nodes.size()) - 1;
            if (task.goal_holds(nodes[idx].state)) return extract(task, nodes, idx);
            open.push_back(idx);
        }
    }
    throw UnsolvableError("goal unreachable within length bound");
}

Plan greedy(GroundTask& task, const SearchLimits& limits) {
    if (task.goal_holds(task.init())) return {};
    auto h = [&](const State& s) {
        std::size_t miss = 0;
        for (AtomId a : task.goal_pos())
            if (!s.contains(a)) ++miss;
        for (AtomId a : task.goal_neg())
            if (s.contains(a)) ++miss;
        return miss;
    };
    std::vector<Node> nodes;
    nodes.push_back({task.init(), -1, -1});
    std::vector<std::size_t> depth{0};
    std::unordered_set<std::vector<AtomId>, StateHash> seen;
    seen.insert(task.init().atoms);
    using Entry = std::pair<std::pair<std::size_t, std::size_t>, int>;  // ((h, seq), node)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    std::size_t seq = 0;
    open.push({{h(task.init()), seq++}, 0});
    std::size_t expansions = 0;

    while (!open.empty()) {
        int cur = open.top().second;
        open.pop();
        if (++expansions > limits.max_expansions)
            throw SearchLimitError("expansion limit exceeded");
        if (depth[cur] >= limits.max_plan_length) continue;
        for (std::size_t ai = 0; ai < task.actions().size(); ++ai) {
            const GroundAction& a = task.actions()[ai];
            if (!applicable(nodes[cur].state, a)) continue;
            State next = apply(nodes[cur].state, a);
            if (!seen.insert(next.atoms).second) continue;
            nodes.push_back({std::move(next), cur, static_cast<int>(ai)});
            depth.push_back(depth[cur] + 1);
            int idx = static_cast<int>(nodes.size()) - 1;
            if (task.goal_holds(nodes[idx].state)) return extract(task, nodes, idx);
            open.push({{h(nodes[idx].state), seq++}, idx});
        }
    }
    throw UnsolvableError("goal unreachable within length bound");
}

}  // namespace

Plan solve_reference(GroundTask& task, const SearchLimits& limits) {
    if (limits.max_expansions == 0 || limits.max_plan_length == 0)
        throw ValidationError("search limits must be positive");
    if (limits.max_plan_length <= 16) return bfs(task, limits);
    return greedy(task, limits);
}

}  // namespace plancorpus
