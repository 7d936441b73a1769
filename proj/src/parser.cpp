#include "plancorpus/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace plancorpus {
namespace {

struct Sexpr {
    bool is_list = false;
    std::string atom;
    std::vector<Sexpr> items;
    int line = 0, col = 0;

    const std::string& head() const {
        static const std::string empty;
        if (!is_list || items.empty() || items[0].is_list) return empty;
        return items[0].atom;
    }
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Sexpr parse_all() {
        Sexpr e = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) throw ParseError("trailing content after top-level form", line_, col_);
        return e;
    }

private:
    Sexpr parse_expr() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
        Sexpr e;
        e.line = line_;
        e.col = col_;
        if (text_[pos_] == '(') {
            advance();
            e.is_list = true;
            while (true) {
                skip_ws();
                if (pos_ >= text_.size()) throw ParseError("unbalanced '('", e.line, e.col);
                if (text_[pos_] == ')') {
                    advance();
                    break;
                }
                e.items.push_back(parse_expr());
            }
        } else if (text_[pos_] == ')') {
            throw ParseError("unexpected ')'", line_, col_);
        } else {
            std::string tok;
            while (pos_ < text_.size() && !std::isspace((unsigned char)text_[pos_]) &&
                   text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
                tok += text_[pos_];
                advance();
            }
            e.atom = lower(tok);
        }
        return e;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace((unsigned char)c)) {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

[[noreturn]] void unsupported(const std::string& construct, const Sexpr& at) {
    throw UnsupportedFeatureError(construct, at.line, at.col);
}

const std::set<std::string> kAllowedRequirements = {
    ":strips", ":typing", ":equality", ":negative-preconditions"};

const std::set<std::string> kRejectedHeads = {
    "forall", "exists", "when",  "or",       "imply",    "increase",
    "assign", "decrease", "scale-up", "scale-down", ">=", "<=", ">", "<"};

// name+ [- type] repeated; untyped names default to "object".
std::vector<TypedParam> parse_typed_list(const std::vector<Sexpr>& items, size_t begin,
                                         const Sexpr& ctx) {
    std::vector<TypedParam> out;
    std::vector<std::string> pending;
    for (size_t i = begin; i < items.size(); ++i) {
        const Sexpr& it = items[i];
        if (it.is_list) throw ParseError("expected name in typed list", it.line, it.col);
        if (it.atom == "-") {
            ++i;
            if (i >= items.size() || items[i].is_list)
                throw ParseError("expected type name after '-'", ctx.line, ctx.col);
            if (items[i].atom == "either") unsupported("either-type", items[i]);
            if (items[i].is_list) unsupported("either-type", items[i]);
            for (const auto& n : pending) out.push_back({n, items[i].atom});
            pending.clear();
        } else {
            pending.push_back(it.atom);
        }
    }
    for (const auto& n : pending) out.push_back({n, "object"});
    return out;
}

Atom parse_atom_expr(const Sexpr& e) {
    if (!e.is_list || e.items.empty() || e.items[0].is_list)
        throw ParseError("expected atom", e.line, e.col);
    Atom a;
    a.pred = e.items[0].atom;
    for (size_t i = 1; i < e.items.size(); ++i) {
        if (e.items[i].is_list) throw ParseError("nested list in atom arguments", e.line, e.col);
        a.args.push_back(e.items[i].atom);
    }
    return a;
}

void collect_condition(const Sexpr& e, std::vector<Literal>& out) {
    if (!e.is_list) throw ParseError("expected condition", e.line, e.col);
    const std::string& h = e.head();
    if (kRejectedHeads.count(h)) unsupported(h, e);
    if (h == "and") {
        for (size_t i = 1; i < e.items.size(); ++i) collect_condition(e.items[i], out);
        return;
    }
    if (h == "not") {
        if (e.items.size() != 2) throw ParseError("'not' takes one argument", e.line, e.col);
        const Sexpr& inner = e.items[1];
        const std::string& ih = inner.head();
        if (kRejectedHeads.count(ih) || ih == "and" || ih == "not")
            unsupported("non-literal negation", inner);
        Atom a = parse_atom_expr(inner);
        out.push_back({a.pred, a.args, false});
        return;
    }
    Atom a = parse_atom_expr(e);
    out.push_back({a.pred, a.args, true});
}

void collect_effect(const Sexpr& e, std::vector<Atom>& add, std::vector<Atom>& del) {
    if (!e.is_list) throw ParseError("expected effect", e.line, e.col);
    const std::string& h = e.head();
    if (kRejectedHeads.count(h)) unsupported(h, e);
    if (h == "and") {
        for (size_t i = 1; i < e.items.size(); ++i) collect_effect(e.items[i], add, del);
        return;
    }
    if (h == "not") {
        if (e.items.size() != 2) throw ParseError("'not' takes one argument", e.line, e.col);
        del.push_back(parse_atom_expr(e.items[1]));
        return;
    }
    if (h == "=") unsupported("equality effect", e);
    add.push_back(parse_atom_expr(e));
}

void check_type_declared(const Domain& d, const std::string& t, const std::string& where) {
    if (!d.has_type(t))
        throw ValidationError("undeclared type '" + t + "' in " + where);
}

// Arity and declaredness of a literal; var args must be schema params,
// constant args must be declared domain constants of a conforming type.
void check_schema_literal(const Domain& d, const ActionSchema& s, const std::string& pred,
                          const std::vector<std::string>& args, bool allow_equality) {
    if (pred == "=") {
        if (!allow_equality)
            throw ValidationError("'=' not allowed outside preconditions in action '" + s.name + "'");
        if (args.size() != 2)
            throw ValidationError("'=' takes two arguments in action '" + s.name + "'");
    } else {
        const Predicate* p = d.find_predicate(pred);
        if (!p)
            throw ValidationError("undeclared predicate '" + pred + "' in action '" + s.name + "'");
        if (p->params.size() != args.size())
            throw ValidationError("arity mismatch for predicate '" + pred + "' in action '" +
                                  s.name + "'");
    }
    for (const auto& arg : args) {
        if (!arg.empty() && arg[0] == '?') {
            bool found = false;
            for (const auto& prm : s.params)
                if (prm.name == arg) found = true;
            if (!found)
                throw ValidationError("variable '" + arg + "' not a parameter of action '" +
                                      s.name + "'");
        } else {
            bool found = false;
            for (const auto& c : d.constants)
                if (c.name == arg) found = true;
            if (!found)
                throw ValidationError("undeclared constant '" + arg + "' in action '" + s.name +
                                      "'");
        }
    }
}

}  // namespace

Domain parse_domain(const std::string& text) {
    Sexpr root = Lexer(text).parse_all();
    if (root.head() != "define")
        throw ParseError("expected (define (domain ...))", root.line, root.col);
    if (root.items.size() < 2 || root.items[1].head() != "domain")
        throw ParseError("expected (domain <name>)", root.line, root.col);
    Domain d;
    if (root.items[1].items.size() != 2)
        throw ParseError("domain name missing", root.items[1].line, root.items[1].col);
    d.name = root.items[1].items[1].atom;

    for (size_t si = 2; si < root.items.size(); ++si) {
        const Sexpr& sec = root.items[si];
        const std::string& h = sec.head();
        if (h == ":requirements") {
            for (size_t i = 1; i < sec.items.size(); ++i) {
                const std::string& r = sec.items[i].atom;
                if (!kAllowedRequirements.count(r)) unsupported("requirement " + r, sec.items[i]);
                d.requirements.push_back(r);
            }
        } else if (h == ":types") {
            auto typed = parse_typed_list(sec.items, 1, sec);
            for (const auto& tp : typed) {
                if (tp.name == "object") continue;
                d.supertype[tp.name] = tp.type;
                d.type_order.push_back(tp.name);
                if (tp.type != "object" && !d.supertype.count(tp.type)) {
                    d.supertype[tp.type] = "object";
                    d.type_order.push_back(tp.type);
                }
            }
        } else if (h == ":constants") {
            d.constants = parse_typed_list(sec.items, 1, sec);
        } else if (h == ":predicates") {
            for (size_t i = 1; i < sec.items.size(); ++i) {
                const Sexpr& pe = sec.items[i];
                if (!pe.is_list || pe.items.empty())
                    throw ParseError("expected predicate declaration", pe.line, pe.col);
                Predicate p;
                p.name = pe.items[0].atom;
                p.params = parse_typed_list(pe.items, 1, pe);
                d.predicates.push_back(p);
            }
        } else if (h == ":functions") {
            unsupported("numeric fluents (:functions)", sec);
        } else if (h == ":derived" || h == ":axiom") {
            unsupported("derived predicates", sec);
        } else if (h == ":durative-action") {
            unsupported("durative actions", sec);
        } else if (h == ":action") {
            ActionSchema s;
            if (sec.items.size() < 2 || sec.items[1].is_list)
                throw ParseError("action name missing", sec.line, sec.col);
            s.name = sec.items[1].atom;
            for (size_t i = 2; i + 1 < sec.items.size(); i += 2) {
                const std::string& key = sec.items[i].atom;
                const Sexpr& val = sec.items[i + 1];
                if (key == ":parameters") {
                    s.params = parse_typed_list(val.items, 0, val);
                } else if (key == ":precondition") {
                    collect_condition(val, s.precond);
                } else if (key == ":effect") {
                    collect_effect(val, s.add, s.del);
                } else {
                    unsupported("action field " + key, sec.items[i]);
                }
            }
            d.schemas.push_back(s);
        } else {
            unsupported("section " + h, sec);
        }
    }

    // Cross checks.
    std::set<std::string> seen;
    for (const auto& p : d.predicates) {
        if (p.name == "=") throw ValidationError("predicate name '=' is reserved");
        if (!seen.insert(p.name).second)
            throw ValidationError("duplicate predicate '" + p.name + "'");
        for (const auto& prm : p.params)
            check_type_declared(d, prm.type, "predicate '" + p.name + "'");
    }
    for (const auto& c : d.constants) check_type_declared(d, c.type, "constants");
    for (const auto& [t, parent] : d.supertype)
        check_type_declared(d, parent, "type declaration of '" + t + "'");
    seen.clear();
    for (const auto& s : d.schemas) {
        if (!seen.insert(s.name).second)
            throw ValidationError("duplicate action '" + s.name + "'");
        std::set<std::string> pnames;
        for (const auto& prm : s.params) {
            if (prm.name.empty() || prm.name[0] != '?')
                throw ValidationError("action parameter must start with '?' in '" + s.name + "'");
            if (!pnames.insert(prm.name).second)
                throw ValidationError("duplicate parameter '" + prm.name + "' in '" + s.name + "'");
            check_type_declared(d, prm.type, "action '" + s.name + "'");
        }
        for (const auto& l : s.precond) check_schema_literal(d, s, l.pred, l.args, true);
        for (const auto& a : s.add) check_schema_literal(d, s, a.pred, a.args, false);
        for (const auto& a : s.del) check_schema_literal(d, s, a.pred, a.args, false);
        for (const auto& a : s.add)
            for (const auto& b : s.del)
                if (a == b)
                    throw ValidationError("atom " + a.str() + " in both add and delete of '" +
                                          s.name + "'");
    }
    return d;
}

namespace {

void check_ground_atom(const Domain& d, const std::vector<TypedParam>& universe,
                       const std::string& pred, const std::vector<std::string>& args,
                       const std::string& where) {
    const Predicate* p = d.find_predicate(pred);
    if (!p) throw ValidationError("undeclared predicate '" + pred + "' in " + where);
    if (p->params.size() != args.size())
        throw ValidationError("arity mismatch for '" + pred + "' in " + where);
    for (size_t i = 0; i < args.size(); ++i) {
        const TypedParam* obj = nullptr;
        for (const auto& o : universe)
            if (o.name == args[i]) obj = &o;
        if (!obj) throw ValidationError("undeclared object '" + args[i] + "' in " + where);
        if (!d.is_subtype(obj->type, p->params[i].type))
            throw ValidationError("object '" + args[i] + "' of type '" + obj->type +
                                  "' does not conform to '" + p->params[i].type + "' in " + where);
    }
}

}  // namespace

Problem parse_problem(const std::string& text, const Domain& domain) {
    Sexpr root = Lexer(text).parse_all();
    if (root.head() != "define")
        throw ParseError("expected (define (problem ...))", root.line, root.col);
    if (root.items.size() < 2 || root.items[1].head() != "problem")
        throw ParseError("expected (problem <name>)", root.line, root.col);
    Problem p;
    if (root.items[1].items.size() != 2)
        throw ParseError("problem name missing", root.items[1].line, root.items[1].col);
    p.name = root.items[1].items[1].atom;

    for (size_t si = 2; si < root.items.size(); ++si) {
        const Sexpr& sec = root.items[si];
        const std::string& h = sec.head();
        if (h == ":domain") {
            if (sec.items.size() != 2)
                throw ParseError(":domain takes one name", sec.line, sec.col);
            p.domain_name = sec.items[1].atom;
        } else if (h == ":objects") {
            p.objects = parse_typed_list(sec.items, 1, sec);
        } else if (h == ":init") {
            for (size_t i = 1; i < sec.items.size(); ++i) {
                const Sexpr& ae = sec.items[i];
                if (ae.head() == "=") unsupported("numeric fluent in :init", ae);
                if (ae.head() == "not") unsupported("negative :init literal", ae);
                if (ae.head() == "at" && ae.items.size() == 3 && ae.items[1].is_list)
                    unsupported("timed initial literal", ae);
                p.init.push_back(parse_atom_expr(ae));
            }
        } else if (h == ":goal") {
            if (sec.items.size() != 2) throw ParseError(":goal takes one formula", sec.line, sec.col);
            collect_condition(sec.items[1], p.goal);
        } else if (h == ":metric") {
            unsupported(":metric", sec);
        } else {
            unsupported("section " + h, sec);
        }
    }

    if (p.domain_name != domain.name)
        throw ValidationError("problem references domain '" + p.domain_name +
                              "' but '" + domain.name + "' was supplied");
    std::set<std::string> names;
    for (const auto& c : domain.constants) names.insert(c.name);
    for (const auto& o : p.objects) {
        if (!names.insert(o.name).second)
            throw ValidationError("duplicate object '" + o.name + "'");
        if (!domain.has_type(o.type))
            throw ValidationError("undeclared type '" + o.type + "' for object '" + o.name + "'");
    }
    auto universe = p.universe(domain);
    for (const auto& a : p.init) check_ground_atom(domain, universe, a.pred, a.args, ":init");
    for (const auto& g : p.goal) check_ground_atom(domain, universe, g.pred, g.args, ":goal");

    // Set semantics: drop duplicate init atoms.
    std::sort(p.init.begin(), p.init.end());
    p.init.erase(std::unique(p.init.begin(), p.init.end()), p.init.end());
    return p;
}

namespace {

void print_typed_list(std::ostringstream& os, const std::vector<TypedParam>& list) {
    for (size_t i = 0; i < list.size(); ++i) {
        if (i) os << " ";
        os << list[i].name << " - " << list[i].type;
    }
}

void print_literal(std::ostringstream& os, const Literal& l) {
    if (!l.positive) os << "(not ";
    os << "(" << l.pred;
    for (const auto& a : l.args) os << " " << a;
    os << ")";
    if (!l.positive) os << ")";
}

}  // namespace

std::string print_domain(const Domain& d) {
    std::ostringstream os;
    os << "(define (domain " << d.name << ")\n";
    if (!d.requirements.empty()) {
        os << "  (:requirements";
        for (const auto& r : d.requirements) os << " " << r;
        os << ")\n";
    }
    if (!d.type_order.empty()) {
        os << "  (:types";
        for (const auto& t : d.type_order) os << " " << t << " - " << d.supertype.at(t);
        os << ")\n";
    }
    if (!d.constants.empty()) {
        os << "  (:constants ";
        print_typed_list(os, d.constants);
        os << ")\n";
    }
    os << "  (:predicates";
    for (const auto& p : d.predicates) {
        os << "\n    (" << p.name;
        if (!p.params.empty()) {
            os << " ";
            print_typed_list(os, p.params);
        }
        os << ")";
    }
    os << ")\n";
    for (const auto& s : d.schemas) {
        os << "  (:action " << s.name << "\n    :parameters (";
        print_typed_list(os, s.params);
        os << ")\n    :precondition (and";
        for (const auto& l : s.precond) {
            os << " ";
            print_literal(os, l);
        }
        os << ")\n    :effect (and";
        for (const auto& a : s.add) os << " " << a.str();
        for (const auto& a : s.del) os << " (not " << a.str() << ")";
        os << "))\n";
    }
    os << ")\n";
    return os.str();
}

std::string print_problem(const Problem& p) {
    std::ostringstream os;
    os << "(define (problem " << p.name << ")\n  (:domain " << p.domain_name << ")\n";
    os << "  (:objects ";
    print_typed_list(os, p.objects);
    os << ")\n  (:init";
    for (const auto& a : p.init) os << " " << a.str();
    os << ")\n  (:goal (and";
    for (const auto& g : p.goal) {
        os << " ";
        print_literal(os, g);
    }
    os << ")))\n";
    return os.str();
}

}  // namespace plancorpus
