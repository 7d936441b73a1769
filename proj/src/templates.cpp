#include "plancorpus/templates.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

#include "plancorpus/errors.hpp"

namespace plancorpus {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Template text split into literal runs and {i} slots.
struct Seg {
    bool slot = false;
    std::string lit;
    int idx = 0;
};

std::vector<Seg> split_template(const std::string& tpl) {
    std::vector<Seg> segs;
    std::string lit;
    size_t i = 0;
    while (i < tpl.size()) {
        if (tpl[i] == '{') {
            size_t close = tpl.find('}', i);
            if (close != std::string::npos) {
                std::string inner = tpl.substr(i + 1, close - i - 1);
                if (!inner.empty() &&
                    std::all_of(inner.begin(), inner.end(),
                                [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
                    if (!lit.empty()) segs.push_back({false, lit, 0});
                    lit.clear();
                    segs.push_back({true, "", std::stoi(inner)});
                    i = close + 1;
                    continue;
                }
            }
        }
        lit += tpl[i++];
    }
    if (!lit.empty()) segs.push_back({false, lit, 0});
    return segs;
}

std::string subst(const std::string& tpl, const std::vector<std::string>& vals) {
    std::string out;
    for (const Seg& s : split_template(tpl)) {
        if (!s.slot) {
            out += s.lit;
        } else {
            if (s.idx < 0 || static_cast<size_t>(s.idx) >= vals.size())
                throw TemplateError("slot {" + std::to_string(s.idx) + "} out of range in '" + tpl +
                                    "'");
            out += vals[s.idx];
        }
    }
    return out;
}

// Leftmost (non-greedy) match of a slotted template against text.
// Captures must be nonempty; repeated slots must capture equal text.
bool match_template(const std::string& text, const std::vector<Seg>& segs,
                    std::vector<std::pair<int, std::string>>& caps) {
    caps.clear();
    size_t pos = 0;
    int pending = -1;
    auto emit = [&](int idx, const std::string& val) {
        if (val.empty()) return false;
        for (const auto& [i, v] : caps)
            if (i == idx) return v == val;
        caps.emplace_back(idx, val);
        return true;
    };
    for (const Seg& s : segs) {
        if (s.slot) {
            if (pending != -1) return false;  // adjacent slots unsupported
            pending = s.idx;
            continue;
        }
        if (pending == -1) {
            if (text.compare(pos, s.lit.size(), s.lit) != 0) return false;
            pos += s.lit.size();
        } else {
            size_t found = text.find(s.lit, pos);
            if (found == std::string::npos) return false;
            if (!emit(pending, text.substr(pos, found - pos))) return false;
            pending = -1;
            pos = found + s.lit.size();
        }
    }
    if (pending != -1) return emit(pending, text.substr(pos));
    return pos == text.size();
}

// "driver1" -> "driver 1", "path1-0" -> "path 1-0"; no digits -> as is.
std::string digit_split(const std::string& name) {
    size_t i = name.find_first_of("0123456789");
    if (i == std::string::npos || i == 0) return name;
    return name.substr(0, i) + " " + name.substr(i);
}

// Inverse: "path 1-0" -> ("path", "path1-0"); plain word -> (word, word).
bool digit_unsplit(const std::string& phrase, std::string& noun, std::string& name) {
    size_t sp = phrase.find(' ');
    if (sp == std::string::npos) {
        if (phrase.find_first_of("0123456789") != std::string::npos) return false;
        noun = phrase;
        name = phrase;
        return true;
    }
    std::string head = phrase.substr(0, sp), tail = phrase.substr(sp + 1);
    if (head.empty() || tail.empty()) return false;
    if (head.find_first_of("0123456789") != std::string::npos) return false;
    if (!std::isdigit(static_cast<unsigned char>(tail[0]))) return false;
    if (tail.find(' ') != std::string::npos) return false;
    noun = head;
    name = head + tail;
    return true;
}

// Type patterns use {name} for the object name; rewrite to slot 0.
std::string name_pattern(const std::string& pattern) {
    std::string out = pattern;
    size_t pos;
    while ((pos = out.find("{name}")) != std::string::npos) out.replace(pos, 6, "{0}");
    return out;
}

const std::string kInitPrefix = "As initial conditions I have that,";
const std::string kGoalPrefix = "My goal is to have that";
const std::string kNegPrefix = "it is not the case that ";

}  // namespace

void TemplateSet::check_covers(const Domain& d) const {
    for (const auto& s : d.schemas) {
        auto it = actions.find(s.name);
        if (it == actions.end() || it->second.phrase.empty())
            throw TemplateError("no action template for '" + s.name + "'");
    }
    for (const auto& p : d.predicates)
        if (!predicates.count(p.name))
            throw TemplateError("no predicate template for '" + p.name + "'");
}

const TypeStyle* TemplateSet::style_for(const Domain& d, const std::string& type) const {
    std::string t = type;
    while (true) {
        auto it = types.find(t);
        if (it != types.end()) return &it->second;
        if (t == "object") return nullptr;
        auto up = d.supertype.find(t);
        t = up == d.supertype.end() ? "object" : up->second;
    }
}

TemplateSet parse_templates(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw TemplateError(std::string("bad template file: ") + e.what());
    }
    TemplateSet t;
    try {
        t.context = j.at("context").get<std::string>();
        for (auto& [name, a] : j.at("actions").items()) {
            ActionTemplate at;
            at.desc = a.value("desc", "");
            at.phrase = a.at("phrase").get<std::string>();
            for (auto& s : a.value("precond", nlohmann::json::array()))
                at.precond.push_back(s.get<std::string>());
            for (auto& s : a.value("effect", nlohmann::json::array()))
                at.effect.push_back(s.get<std::string>());
            for (auto& s : a.value("restrictions", nlohmann::json::array()))
                at.restrictions.push_back(s.get<std::string>());
            t.actions[name] = std::move(at);
        }
        for (auto& [name, s] : j.at("predicates").items())
            t.predicates[name] = s.get<std::string>();
        nlohmann::json types = j.value("types", nlohmann::json::object());
        for (auto& [name, y] : types.items()) {
            TypeStyle ts;
            ts.noun = y.value("noun", name);
            ts.pattern = y.value("pattern", "");
            for (auto& n : y.value("parse_nouns", nlohmann::json::array()))
                ts.parse_nouns.push_back(n.get<std::string>());
            if (ts.parse_nouns.empty() && ts.pattern.empty()) ts.parse_nouns.push_back(ts.noun);
            t.types[name] = std::move(ts);
        }
    } catch (const nlohmann::json::exception& e) {
        throw TemplateError(std::string("bad template file: ") + e.what());
    }
    return t;
}

std::string render_object(const Domain& d, const TemplateSet& t, const std::string& name,
                          const std::string& type) {
    const TypeStyle* st = t.style_for(d, type);
    if (st && !st->pattern.empty()) return subst(name_pattern(st->pattern), {name});
    return digit_split(name);
}

namespace {

// Phrase -> (object name, concrete type). `declared` constrains the
// admissible types; returns false if nothing fits.
bool parse_object(const Domain& d, const TemplateSet& t, const std::string& phrase,
                  const std::string& declared, std::string& name, std::string& type) {
    for (const auto& [ty, st] : t.types) {
        if (st.pattern.empty()) continue;
        if (!d.is_subtype(ty, declared) && !d.is_subtype(declared, ty)) continue;
        std::vector<std::pair<int, std::string>> caps;
        if (match_template(phrase, split_template(name_pattern(lower(st.pattern))), caps) &&
            caps.size() == 1) {
            name = caps[0].second;
            if (name.find(' ') != std::string::npos) continue;
            type = ty;
            return true;
        }
    }
    std::string noun, nm;
    if (!digit_unsplit(phrase, noun, nm)) return false;
    for (const auto& [ty, st] : t.types) {
        if (!st.pattern.empty()) continue;
        if (!d.is_subtype(ty, declared) && !d.is_subtype(declared, ty)) continue;
        const auto& nouns = st.parse_nouns.empty() ? std::vector<std::string>{st.noun}
                                                   : st.parse_nouns;
        for (const auto& n : nouns) {
            if (n == noun || n == nm) {
                name = nm;
                type = ty;
                return true;
            }
        }
    }
    return false;
}

std::vector<std::string> arg_phrases(const Domain& d, const TemplateSet& t,
                                     const std::vector<std::string>& args,
                                     const std::vector<TypedParam>& params,
                                     const std::string& what) {
    if (args.size() != params.size())
        throw ValidationError("arity mismatch rendering " + what);
    std::vector<std::string> out;
    for (size_t i = 0; i < args.size(); ++i)
        out.push_back(render_object(d, t, args[i], params[i].type));
    return out;
}

}  // namespace

std::string render_atom(const Domain& d, const TemplateSet& t, const Atom& a) {
    const Predicate* p = d.find_predicate(a.pred);
    if (!p) throw ValidationError("unknown predicate '" + a.pred + "'");
    auto it = t.predicates.find(a.pred);
    if (it == t.predicates.end()) throw TemplateError("no predicate template for '" + a.pred + "'");
    return subst(it->second, arg_phrases(d, t, a.args, p->params, "(" + a.pred + ")"));
}

std::string render_step(const Domain& d, const TemplateSet& t, const PlanStep& s) {
    const ActionSchema* sc = d.find_schema(s.schema);
    if (!sc) throw ValidationError("unknown action '" + s.schema + "'");
    auto it = t.actions.find(s.schema);
    if (it == t.actions.end()) throw TemplateError("no action template for '" + s.schema + "'");
    return subst(it->second.phrase, arg_phrases(d, t, s.args, sc->params, s.str()));
}

namespace {

std::string render_block(const Domain& d, const TemplateSet& t, const PlanStep& s,
                         bool effects) {
    const ActionSchema* sc = d.find_schema(s.schema);
    if (!sc) throw ValidationError("unknown action '" + s.schema + "'");
    auto it = t.actions.find(s.schema);
    if (it == t.actions.end()) throw TemplateError("no action template for '" + s.schema + "'");
    auto phrases = arg_phrases(d, t, s.args, sc->params, s.str());
    const auto& tpls = effects ? it->second.effect : it->second.precond;
    std::string out;
    for (const auto& tpl : tpls) {
        if (!out.empty()) out += " ";
        out += subst(tpl, phrases);
    }
    return out;
}

}  // namespace

std::string render_precon_block(const Domain& d, const TemplateSet& t, const PlanStep& s) {
    return render_block(d, t, s, false);
}

std::string render_effect_block(const Domain& d, const TemplateSet& t, const PlanStep& s) {
    return render_block(d, t, s, true);
}

std::string render_goal_sentence(const Domain& d, const TemplateSet& t, const Problem& p) {
    if (p.goal.empty()) throw ValidationError("degenerate goal: no literals to render");
    std::string out = kGoalPrefix + " ";
    for (size_t i = 0; i < p.goal.size(); ++i) {
        if (i) out += ", ";
        const Literal& l = p.goal[i];
        std::string s = render_atom(d, t, Atom{l.pred, l.args});
        out += l.positive ? s : kNegPrefix + s;
    }
    return out + ".";
}

std::string render_query(const Domain& d, const Problem& p, const TemplateSet& t) {
    t.check_covers(d);
    if (p.goal.empty()) throw ValidationError("degenerate goal: no literals to render");
    std::ostringstream os;
    auto type_nouns = [&](const ActionSchema& s) {
        std::vector<std::string> nouns;
        for (const auto& prm : s.params) {
            const TypeStyle* st = t.style_for(d, prm.type);
            nouns.push_back(st && !st->noun.empty() ? st->noun : prm.type);
        }
        return nouns;
    };
    os << "[CONTEXT]\n" << t.context << "\n";
    os << "[ACTION DESCRIPTION]\n";
    os << "Here are the actions that can be performed:\n";
    for (const auto& s : d.schemas) {
        const ActionTemplate& at = t.actions.at(s.name);
        os << (at.desc.empty() ? subst(at.phrase, type_nouns(s)) : at.desc) << "\n";
    }
    os << "\nThe following are the restrictions on the actions:\n";
    for (const auto& s : d.schemas) {
        const ActionTemplate& at = t.actions.at(s.name);
        if (!at.restrictions.empty()) {
            for (const auto& r : at.restrictions) os << r << "\n";
            continue;
        }
        auto nouns = type_nouns(s);
        for (const auto& tpl : at.precond) os << subst(tpl, nouns) << "\n";
        for (const auto& tpl : at.effect) os << subst(tpl, nouns) << "\n";
    }
    os << "\n[STATEMENT]\n" << kInitPrefix << " ";
    for (size_t i = 0; i < p.init.size(); ++i) {
        if (i) os << ", ";
        os << render_atom(d, t, p.init[i]);
    }
    os << ".\n\n" << render_goal_sentence(d, t, p) << "\n";
    return os.str();
}

namespace {

struct AtomMatch {
    Atom atom;
    std::vector<std::pair<std::string, std::string>> objects;  // name, type
};

bool parse_atom_sentence(const Domain& d, const TemplateSet& t, const std::string& sentence,
                         AtomMatch& out) {
    std::string text = lower(trim(sentence));
    for (const auto& p : d.predicates) {
        auto it = t.predicates.find(p.name);
        if (it == t.predicates.end()) continue;
        std::vector<std::pair<int, std::string>> caps;
        if (!match_template(text, split_template(lower(it->second)), caps)) continue;
        if (caps.size() != p.params.size()) continue;
        std::vector<std::string> args(p.params.size());
        std::vector<std::pair<std::string, std::string>> objs;
        bool ok = true;
        for (const auto& [idx, phrase] : caps) {
            if (idx < 0 || static_cast<size_t>(idx) >= p.params.size()) {
                ok = false;
                break;
            }
            std::string name, type;
            if (!parse_object(d, t, phrase, p.params[idx].type, name, type)) {
                ok = false;
                break;
            }
            args[idx] = name;
            objs.emplace_back(name, type);
        }
        if (!ok) continue;
        out.atom = Atom{p.name, args};
        out.objects = objs;
        return true;
    }
    return false;
}

}  // namespace

Problem parse_query(const std::string& text, const Domain& d, const TemplateSet& t) {
    std::string init_line, goal_line;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::string tr = trim(line);
        if (tr.rfind(kInitPrefix, 0) == 0) init_line = tr;
        else if (tr.rfind(kGoalPrefix, 0) == 0) goal_line = tr;
    }
    if (init_line.empty()) throw DataError("query has no initial-conditions statement");
    if (goal_line.empty()) throw DataError("query has no goal statement");

    auto split_clause = [](std::string s, const std::string& prefix) {
        s = trim(s.substr(prefix.size()));
        if (!s.empty() && s.back() == '.') s.pop_back();
        std::vector<std::string> parts;
        size_t pos = 0;
        while (true) {
            size_t c = s.find(", ", pos);
            if (c == std::string::npos) {
                parts.push_back(trim(s.substr(pos)));
                break;
            }
            parts.push_back(trim(s.substr(pos, c - pos)));
            pos = c + 2;
        }
        return parts;
    };

    Problem p;
    p.name = "parsed";
    p.domain_name = d.name;
    std::map<std::string, std::string> obj_types;
    std::map<std::string, std::string> constants;
    for (const auto& c : d.constants) constants[c.name] = c.type;
    auto note_objects = [&](const AtomMatch& m) {
        for (const auto& [name, type] : m.objects) {
            if (constants.count(name)) continue;
            auto it = obj_types.find(name);
            if (it == obj_types.end())
                obj_types[name] = type;
            else if (it->second != type && d.is_subtype(type, it->second))
                it->second = type;  // keep the more specific reading
            else if (it->second != type && !d.is_subtype(it->second, type))
                throw DataError("object '" + name + "' used with conflicting types");
        }
    };

    for (const auto& s : split_clause(init_line, kInitPrefix)) {
        if (s.empty()) continue;
        AtomMatch m;
        if (!parse_atom_sentence(d, t, s, m))
            throw DataError("unparseable initial condition: '" + s + "'");
        note_objects(m);
        p.init.push_back(m.atom);
    }
    for (std::string s : split_clause(goal_line, kGoalPrefix)) {
        if (s.empty()) continue;
        bool positive = true;
        if (lower(s).rfind(kNegPrefix, 0) == 0) {
            positive = false;
            s = s.substr(kNegPrefix.size());
        }
        AtomMatch m;
        if (!parse_atom_sentence(d, t, s, m))
            throw DataError("unparseable goal condition: '" + s + "'");
        note_objects(m);
        p.goal.push_back(Literal{m.atom.pred, m.atom.args, positive});
    }
    for (const auto& [name, type] : obj_types) p.objects.push_back({name, type});
    std::sort(p.init.begin(), p.init.end());
    p.init.erase(std::unique(p.init.begin(), p.init.end()), p.init.end());
    std::sort(p.goal.begin(), p.goal.end());
    return p;
}

std::string render_response(const Plan& plan, const Domain& d, const TemplateSet& t,
                            const ResponseSyntax& syn) {
    std::ostringstream os;
    os << "My plan is as follows:\n" << syn.plan_open << "\n";
    for (const auto& s : plan) os << render_step(d, t, s) << "\n";
    os << syn.plan_close << "\n";
    return os.str();
}

std::optional<PlanStep> parse_step(const std::string& line, const Domain& d,
                                   const TemplateSet& t) {
    std::string text = lower(trim(line));
    // Tolerated phrasing variant across the corpus.
    for (size_t pos; (pos = text.find(" from top of ")) != std::string::npos;)
        text.replace(pos, 13, " from on top of ");
    for (const auto& sc : d.schemas) {
        auto it = t.actions.find(sc.name);
        if (it == t.actions.end()) continue;
        std::vector<std::pair<int, std::string>> caps;
        if (!match_template(text, split_template(lower(it->second.phrase)), caps)) continue;
        if (caps.size() != sc.params.size()) continue;
        std::vector<std::string> args(sc.params.size());
        bool ok = true;
        for (const auto& [idx, phrase] : caps) {
            if (idx < 0 || static_cast<size_t>(idx) >= sc.params.size()) {
                ok = false;
                break;
            }
            std::string name, type;
            if (!parse_object(d, t, phrase, sc.params[idx].type, name, type)) {
                ok = false;
                break;
            }
            args[idx] = name;
        }
        if (!ok) continue;
        return PlanStep{sc.name, args};
    }
    return std::nullopt;
}

namespace {

void strip_span(std::string& s, const std::string& open, const std::string& close) {
    size_t pos = 0;
    while ((pos = s.find(open, pos)) != std::string::npos) {
        size_t end = s.find(close, pos + open.size());
        if (end != std::string::npos) {
            s.erase(pos, end + close.size() - pos);
        } else {
            size_t eol = s.find('\n', pos);
            s.erase(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        }
    }
}

// Goal span runs to its own close tag or, in the run-on canonical
// layout, to the end of the count block.
void strip_goal_span(std::string& s, const ResponseSyntax& syn) {
    size_t pos = 0;
    while ((pos = s.find(syn.goal_open, pos)) != std::string::npos) {
        size_t gc = s.find(syn.goal_close, pos + syn.goal_open.size());
        size_t cc = s.find(syn.count_close, pos + syn.goal_open.size());
        size_t end;
        std::string closer;
        if (gc != std::string::npos && (cc == std::string::npos || gc < cc)) {
            end = gc;
            closer = syn.goal_close;
        } else if (cc != std::string::npos) {
            end = cc;
            closer = syn.count_close;
        } else {
            size_t eol = s.find('\n', pos);
            s.erase(pos, eol == std::string::npos ? std::string::npos : eol - pos);
            continue;
        }
        s.erase(pos, end + closer.size() - pos);
    }
}

LenientResponse parse_response_impl(const std::string& text, const Domain& d,
                                    const TemplateSet& t, const ResponseSyntax& syn,
                                    bool lenient) {
    LenientResponse out;
    size_t open = text.find(syn.plan_open);
    if (open == std::string::npos) {
        if (lenient) {
            out.error = "missing plan markers";
            return out;
        }
        throw DataError("missing plan markers");
    }
    size_t body_start = open + syn.plan_open.size();
    size_t close = text.find(syn.plan_close, body_start);
    std::string body =
        close == std::string::npos ? text.substr(body_start) : text.substr(body_start, close - body_start);
    if (close == std::string::npos && !lenient) throw DataError("missing plan markers");
    if (close == std::string::npos) out.error = "missing plan end marker";

    strip_goal_span(body, syn);
    strip_span(body, syn.count_open, syn.count_close);
    strip_span(body, syn.precon_open, syn.precon_close);
    strip_span(body, syn.effect_open, syn.effect_close);
    strip_span(body, "[GOAL]", "[GOAL END]");
    strip_span(body, "[COUNT]", "[COUNT END]");
    strip_span(body, "[PRECON]", "[PRECON END]");
    strip_span(body, "[EFFECT]", "[EFFECT END]");

    std::vector<std::string> fragments;
    std::istringstream is(body);
    std::string line;
    while (std::getline(is, line)) {
        size_t pos = 0;
        while (true) {
            size_t semi = line.find(';', pos);
            std::string frag =
                trim(semi == std::string::npos ? line.substr(pos) : line.substr(pos, semi - pos));
            if (!frag.empty()) fragments.push_back(frag);
            if (semi == std::string::npos) break;
            pos = semi + 1;
        }
    }

    auto strip_wrong = [&](std::string& frag) {
        for (const std::string& tok : {syn.wrong, std::string("WRONG")}) {
            if (frag == tok) {
                frag.clear();
                return true;
            }
            if (frag.size() > tok.size() + 1 &&
                frag.compare(frag.size() - tok.size(), tok.size(), tok) == 0 &&
                std::isspace(static_cast<unsigned char>(frag[frag.size() - tok.size() - 1]))) {
                frag = trim(frag.substr(0, frag.size() - tok.size()));
                return true;
            }
        }
        return false;
    };

    ParsedResponse& r = out.parsed;
    std::vector<bool> wrong_flags;
    for (std::string frag : fragments) {
        bool wrong = strip_wrong(frag);
        if (frag.empty()) {
            // Bare removal token marks the preceding step.
            if (wrong && !wrong_flags.empty()) wrong_flags.back() = true;
            continue;
        }
        auto step = parse_step(frag, d, t);
        if (!step) {
            if (lenient) {
                out.error = "unparseable step: '" + frag + "'";
                break;
            }
            throw DataError("unparseable step: '" + frag + "'");
        }
        r.plan.push_back(*step);
        wrong_flags.push_back(wrong);
    }
    r.raw_step_count = r.plan.size();
    Plan kept;
    for (size_t i = 0; i < r.plan.size(); ++i) {
        if (wrong_flags[i])
            r.wrong_marked.push_back(i);
        else
            kept.push_back(r.plan[i]);
    }
    r.plan = std::move(kept);
    out.complete = out.error.empty();
    return out;
}

}  // namespace

ParsedResponse parse_response(const std::string& text, const Domain& d, const TemplateSet& t,
                              const ResponseSyntax& syn) {
    return parse_response_impl(text, d, t, syn, false).parsed;
}

LenientResponse parse_response_lenient(const std::string& text, const Domain& d,
                                       const TemplateSet& t, const ResponseSyntax& syn) {
    return parse_response_impl(text, d, t, syn, true);
}

}  // namespace plancorpus
