#include "plancorpus/model.hpp"

namespace plancorpus {

std::string Atom::str() const {
    std::string s = "(" + pred;
    for (const auto& a : args) s += " " + a;
    return s + ")";
}

std::string PlanStep::str() const {
    std::string s = "(" + schema;
    for (const auto& a : args) s += " " + a;
    return s + ")";
}

bool Domain::has_type(const std::string& t) const {
    if (t == "object") return true;
    return supertype.count(t) > 0;
}

bool Domain::is_subtype(const std::string& t, const std::string& anc) const {
    if (anc == "object") return true;
    std::string cur = t;
    while (true) {
        if (cur == anc) return true;
        auto it = supertype.find(cur);
        if (it == supertype.end()) return false;
        if (it->second == cur) return false;
        cur = it->second;
    }
}

const Predicate* Domain::find_predicate(const std::string& n) const {
    for (const auto& p : predicates)
        if (p.name == n) return &p;
    return nullptr;
}

const ActionSchema* Domain::find_schema(const std::string& n) const {
    for (const auto& s : schemas)
        if (s.name == n) return &s;
    return nullptr;
}

std::vector<TypedParam> Problem::universe(const Domain& d) const {
    std::vector<TypedParam> u = d.constants;
    u.insert(u.end(), objects.begin(), objects.end());
    return u;
}

}  // namespace plancorpus
