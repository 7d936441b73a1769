#include "plancorpus/ground.hpp"

#include <algorithm>

#include "plancorpus/errors.hpp"

namespace plancorpus {

bool State::contains(AtomId a) const {
    return std::binary_search(atoms.begin(), atoms.end(), a);
}

bool State::contains_all(const std::vector<AtomId>& ids) const {
    for (AtomId a : ids)
        if (!contains(a)) return false;
    return true;
}

void State::normalize() {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

State apply(const State& s, const GroundAction& a) {
    State out;
    out.atoms.reserve(s.atoms.size() + a.add.size());
    std::set_difference(s.atoms.begin(), s.atoms.end(), a.del.begin(), a.del.end(),
                        std::back_inserter(out.atoms));
    std::vector<AtomId> merged;
    merged.reserve(out.atoms.size() + a.add.size());
    std::set_union(out.atoms.begin(), out.atoms.end(), a.add.begin(), a.add.end(),
                   std::back_inserter(merged));
    out.atoms = std::move(merged);
    return out;
}

GroundTask::GroundTask(Domain domain, Problem problem)
    : domain_(std::move(domain)), problem_(std::move(problem)) {
    for (const auto& o : problem_.universe(domain_)) object_type_[o.name] = o.type;
    ground_all();
    for (const auto& a : problem_.init) init_.atoms.push_back(intern(a));
    init_.normalize();
    for (const auto& g : problem_.goal) {
        AtomId id = intern({g.pred, g.args});
        (g.positive ? goal_pos_ : goal_neg_).push_back(id);
    }
    std::sort(goal_pos_.begin(), goal_pos_.end());
    std::sort(goal_neg_.begin(), goal_neg_.end());
}

AtomId GroundTask::intern(const Atom& a) {
    auto it = atom_ids_.find(a);
    if (it != atom_ids_.end()) return it->second;
    AtomId id = static_cast<AtomId>(atom_defs_.size());
    atom_defs_.push_back(a);
    atom_ids_.emplace(a, id);
    return id;
}

GroundTask::Binding GroundTask::ground_step(const std::string& schema,
                                            const std::vector<std::string>& args) {
    const ActionSchema* s = domain_.find_schema(schema);
    if (!s) throw ValidationError("unknown action '" + schema + "'");
    if (s->params.size() != args.size())
        throw ValidationError("arity mismatch for action '" + schema + "'");
    std::map<std::string, std::string> bind;
    for (size_t i = 0; i < args.size(); ++i) {
        auto it = object_type_.find(args[i]);
        if (it == object_type_.end())
            throw ValidationError("unknown object '" + args[i] + "' in action '" + schema + "'");
        if (!domain_.is_subtype(it->second, s->params[i].type))
            throw ValidationError("object '" + args[i] + "' does not conform to type '" +
                                  s->params[i].type + "' in action '" + schema + "'");
        bind[s->params[i].name] = args[i];
    }
    auto subst = [&](const std::vector<std::string>& xs) {
        std::vector<std::string> out;
        out.reserve(xs.size());
        for (const auto& x : xs)
            out.push_back(!x.empty() && x[0] == '?' ? bind.at(x) : x);
        return out;
    };

    Binding b;
    b.action.schema = schema;
    b.action.args = args;
    for (const auto& l : s->precond) {
        auto ga = subst(l.args);
        if (l.pred == "=") {
            bool eq = ga[0] == ga[1];
            if (eq != l.positive) {
                b.static_ok = false;
                b.failed_eq.push_back({l.pred, ga, l.positive});
            }
            continue;
        }
        AtomId id = intern({l.pred, ga});
        (l.positive ? b.action.pre_pos : b.action.pre_neg).push_back(id);
    }
    for (const auto& a : s->add) b.action.add.push_back(intern({a.pred, subst(a.args)}));
    for (const auto& a : s->del) b.action.del.push_back(intern({a.pred, subst(a.args)}));
    auto norm = [](std::vector<AtomId>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    norm(b.action.pre_pos);
    norm(b.action.pre_neg);
    norm(b.action.add);
    norm(b.action.del);
    return b;
}

void GroundTask::ground_all() {
    // Objects sorted by name per type query, schemas in declaration
    // order sorted by name afterwards.
    std::vector<TypedParam> universe = problem_.universe(domain_);
    std::sort(universe.begin(), universe.end(),
              [](const TypedParam& a, const TypedParam& b) { return a.name < b.name; });

    std::vector<const ActionSchema*> schemas;
    for (const auto& s : domain_.schemas) schemas.push_back(&s);
    std::sort(schemas.begin(), schemas.end(),
              [](const ActionSchema* a, const ActionSchema* b) { return a->name < b->name; });

    for (const ActionSchema* s : schemas) {
        std::vector<std::vector<std::string>> candidates(s->params.size());
        for (size_t i = 0; i < s->params.size(); ++i)
            for (const auto& o : universe)
                if (domain_.is_subtype(o.type, s->params[i].type))
                    candidates[i].push_back(o.name);

        std::vector<std::string> args(s->params.size());
        // Depth-first enumeration yields lexicographic argument order
        // because candidate lists are sorted.
        auto enumerate = [&](auto&& self, size_t depth) -> void {
            if (depth == s->params.size()) {
                Binding b = ground_step(s->name, args);
                if (b.static_ok) actions_.push_back(std::move(b.action));
                return;
            }
            for (const auto& c : candidates[depth]) {
                args[depth] = c;
                self(self, depth + 1);
            }
        };
        enumerate(enumerate, 0);
    }
}

bool GroundTask::goal_holds(const State& s) const {
    if (!s.contains_all(goal_pos_)) return false;
    for (AtomId a : goal_neg_)
        if (s.contains(a)) return false;
    return true;
}

std::vector<GroundAction> ground_actions(const Domain& d, const Problem& p) {
    GroundTask task(d, p);
    return task.actions();
}

}  // namespace plancorpus
