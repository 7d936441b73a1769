#include "plancorpus/obfuscate.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "plancorpus/errors.hpp"

namespace plancorpus {

namespace {

std::string rename(const std::map<std::string, std::string>& m, const std::string& name,
                   const char* what) {
    if (name == "=") return name;  // builtin equality is never renamed
    auto it = m.find(name);
    if (it == m.end())
        throw ValidationError(std::string("obfuscation map misses ") + what + " '" + name + "'");
    return it->second;
}

void check_injective(const std::map<std::string, std::string>& m, const char* what) {
    std::set<std::string> seen;
    for (const auto& [k, v] : m)
        if (!seen.insert(v).second)
            throw ValidationError(std::string("obfuscation ") + what + " map collides on '" + v +
                                  "'");
}

// a, b, ..., z, aa, ab, ...
std::string letters(size_t i) {
    std::string s;
    do {
        s.insert(s.begin(), static_cast<char>('a' + i % 26));
        i = i / 26;
    } while (i-- > 0);
    return s;
}

}  // namespace

ObfuscationMap ObfuscationMap::identity(const Domain& d, const TemplateSet& t) {
    ObfuscationMap m;
    for (const auto& s : d.schemas) m.actions[s.name] = s.name;
    for (const auto& p : d.predicates) m.predicates[p.name] = p.name;
    m.templates = t;
    m.rename_objects = false;
    return m;
}

void ObfuscationMap::check_bijective(const Domain& d) const {
    for (const auto& s : d.schemas) rename(actions, s.name, "action");
    for (const auto& p : d.predicates) rename(predicates, p.name, "predicate");
    check_injective(actions, "action");
    check_injective(predicates, "predicate");
}

ObfuscationMap parse_obfuscation(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw TemplateError(std::string("bad obfuscation file: ") + e.what());
    }
    ObfuscationMap m;
    try {
        for (auto& [k, v] : j.at("actions").items()) m.actions[k] = v.get<std::string>();
        for (auto& [k, v] : j.at("predicates").items()) m.predicates[k] = v.get<std::string>();
        if (j.contains("object_nouns"))
            for (auto& [k, v] : j.at("object_nouns").items())
                m.object_nouns[k] = v.get<std::string>();
        m.rename_objects = j.value("rename_objects", true);
        m.templates = parse_templates(j.at("templates").dump());
    } catch (const nlohmann::json::exception& e) {
        throw TemplateError(std::string("bad obfuscation file: ") + e.what());
    }
    return m;
}

std::map<std::string, std::string> object_renaming(const Problem& p, const ObfuscationMap& m) {
    std::map<std::string, std::string> out;
    std::vector<TypedParam> objs = p.objects;
    std::sort(objs.begin(), objs.end(),
              [](const TypedParam& a, const TypedParam& b) { return a.name < b.name; });
    if (!m.object_nouns.empty()) {
        std::map<std::string, size_t> counters;
        for (const auto& o : objs) {
            auto it = m.object_nouns.find(o.type);
            if (it == m.object_nouns.end())
                throw ValidationError("obfuscation map misses object noun for type '" + o.type +
                                      "'");
            out[o.name] = it->second + std::to_string(++counters[o.type]);
        }
        return out;
    }
    for (size_t i = 0; i < objs.size(); ++i)
        out[objs[i].name] = m.rename_objects ? letters(i) : objs[i].name;
    return out;
}

Domain obfuscate_domain(const Domain& d, const ObfuscationMap& m) {
    m.check_bijective(d);
    Domain out = d;
    for (auto& p : out.predicates) p.name = rename(m.predicates, p.name, "predicate");
    for (auto& s : out.schemas) {
        s.name = rename(m.actions, s.name, "action");
        for (auto& l : s.precond) l.pred = rename(m.predicates, l.pred, "predicate");
        for (auto& a : s.add) a.pred = rename(m.predicates, a.pred, "predicate");
        for (auto& a : s.del) a.pred = rename(m.predicates, a.pred, "predicate");
    }
    return out;
}

Problem obfuscate_problem(const Problem& p, const ObfuscationMap& m) {
    auto objs = object_renaming(p, m);
    auto ren = [&](const std::string& name) {
        auto it = objs.find(name);
        return it == objs.end() ? name : it->second;  // constants unchanged
    };
    Problem out = p;
    for (auto& o : out.objects) o.name = ren(o.name);
    std::sort(out.objects.begin(), out.objects.end(),
              [](const TypedParam& a, const TypedParam& b) { return a.name < b.name; });
    for (auto& a : out.init) {
        a.pred = rename(m.predicates, a.pred, "predicate");
        for (auto& x : a.args) x = ren(x);
    }
    for (auto& l : out.goal) {
        l.pred = rename(m.predicates, l.pred, "predicate");
        for (auto& x : l.args) x = ren(x);
    }
    return out;
}

Plan obfuscate_plan(const Plan& plan, const Problem& p, const ObfuscationMap& m) {
    auto objs = object_renaming(p, m);
    Plan out;
    for (const auto& s : plan) {
        PlanStep t;
        t.schema = rename(m.actions, s.schema, "action");
        for (const auto& x : s.args) {
            auto it = objs.find(x);
            t.args.push_back(it == objs.end() ? x : it->second);
        }
        out.push_back(t);
    }
    return out;
}

Obfuscated obfuscate(const Domain& d, const Problem& p, const ObfuscationMap& m) {
    Obfuscated out{obfuscate_domain(d, m), obfuscate_problem(p, m), m.templates};
    out.templates.check_covers(out.domain);
    return out;
}

}  // namespace plancorpus
