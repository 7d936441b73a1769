#include "plancorpus/augment.hpp"

#include <sstream>

#include "plancorpus/errors.hpp"

namespace plancorpus {

AnnotatedResponse annotate_cot(const Problem& p, const Plan& plan, const Domain& d,
                               const TemplateSet& t, const AugmentConfig& cfg) {
    AnnotatedResponse r;
    std::string goal = cfg.goal_cot ? render_goal_sentence(d, t, p) : "";
    for (std::size_t i = 0; i < plan.size(); ++i) {
        AnnotatedStep s;
        s.step = plan[i];
        if (cfg.goal_cot) {
            s.goal_block = goal;
            s.count = static_cast<int>(plan.size() - 1 - i);
        }
        if (cfg.state_cot) {
            s.precon_block = render_precon_block(d, t, plan[i]);
            s.effect_block = render_effect_block(d, t, plan[i]);
        }
        r.steps.push_back(std::move(s));
    }
    return r;
}

AnnotatedResponse inject_mistakes(const AnnotatedResponse& r, const AugmentConfig& cfg) {
    const std::size_t n = r.steps.size();
    if (n < 2) throw ValidationError("plan too short for mistake injection");
    std::mt19937_64 g(cfg.seed);
    AnnotatedResponse out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n && det_bernoulli(g, cfg.mistake_rate)) {
            std::size_t j = i + 1 + g() % (n - 1 - i);  // uniform in (i, n-1]
            AnnotatedStep wrong = r.steps[j];
            wrong.wrong = true;
            out.steps.push_back(std::move(wrong));
        }
        out.steps.push_back(r.steps[i]);
    }
    return out;
}

AnnotatedResponse inject_mistakes(const Plan& plan, const AugmentConfig& cfg) {
    AnnotatedResponse r;
    for (const auto& s : plan) r.steps.push_back({s});
    return inject_mistakes(r, cfg);
}

AnnotatedResponse perturb_mistakes(const AnnotatedResponse& r, const Domain& d, const Problem& p,
                                   const AugmentConfig& cfg) {
    const std::size_t n = r.steps.size();
    if (n < 2) throw ValidationError("plan too short for mistake injection");
    std::mt19937_64 g(cfg.seed);
    std::vector<std::string> objects;
    for (const auto& o : p.objects) objects.push_back(o.name);
    AnnotatedResponse out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n && det_bernoulli(g, cfg.mistake_rate) && !objects.empty()) {
            AnnotatedStep wrong = r.steps[i];
            wrong.wrong = true;
            if (g() % 2 == 0 && !wrong.step.args.empty()) {
                // keep the action, swap one object
                std::size_t slot = g() % wrong.step.args.size();
                wrong.step.args[slot] = objects[g() % objects.size()];
            } else {
                // keep the objects, swap the action among same-arity schemas
                std::vector<const ActionSchema*> alts;
                for (const auto& sc : d.schemas)
                    if (sc.params.size() == wrong.step.args.size() &&
                        sc.name != wrong.step.schema)
                        alts.push_back(&sc);
                if (!alts.empty()) wrong.step.schema = alts[g() % alts.size()]->name;
            }
            // annotations no longer describe the mutated step; drop them
            wrong.precon_block.clear();
            wrong.effect_block.clear();
            out.steps.push_back(std::move(wrong));
        }
        out.steps.push_back(r.steps[i]);
    }
    return out;
}

std::string render_annotated(const AnnotatedResponse& r, const Domain& d, const TemplateSet& t,
                             const ResponseSyntax& syn) {
    std::ostringstream os;
    os << "My plan is as follows:\n" << syn.plan_open << "\n";
    for (const auto& s : r.steps) {
        if (s.count >= 0)
            os << syn.goal_open << " " << s.goal_block << " " << syn.count_open << " " << s.count
               << " " << syn.count_close << " ";
        if (!s.precon_block.empty())
            os << syn.precon_open << " " << s.precon_block << " " << syn.precon_close << " ";
        os << render_step(d, t, s.step);
        if (!s.effect_block.empty())
            os << " " << syn.effect_open << " " << s.effect_block << " " << syn.effect_close;
        if (s.wrong) os << " " << syn.wrong;
        os << "\n";
    }
    os << syn.plan_close << "\n";
    return os.str();
}

namespace {

const std::string kActionsHead = "Here are the actions that can be performed:";
const std::string kRestrictHead = "The following are the restrictions on the actions:";
const std::string kInitPrefix = "As initial conditions I have that,";
const std::string kGoalPrefix = "My goal is to have that";

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream is(s);
    std::string line;
    while (std::getline(is, line)) lines.push_back(line);
    return lines;
}

void shuffle_clause(std::string& line, const std::string& prefix, std::mt19937_64& g) {
    std::string rest = line.substr(prefix.size());
    bool dot = !rest.empty() && rest.back() == '.';
    if (dot) rest.pop_back();
    if (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t c = rest.find(", ", pos);
        if (c == std::string::npos) {
            parts.push_back(rest.substr(pos));
            break;
        }
        parts.push_back(rest.substr(pos, c - pos));
        pos = c + 2;
    }
    det_shuffle(parts, g);
    line = prefix + " ";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) line += ", ";
        line += parts[i];
    }
    if (dot) line += ".";
}

}  // namespace

std::string permute_query_text(const std::string& query, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::vector<std::string> lines = split_lines(query);
    auto shuffle_block = [&](std::size_t head) {
        std::size_t b = head + 1, e = b;
        while (e < lines.size() && !lines[e].empty() && lines[e][0] != '[') ++e;
        std::vector<std::string> block(lines.begin() + b, lines.begin() + e);
        det_shuffle(block, g);
        std::copy(block.begin(), block.end(), lines.begin() + b);
    };
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i] == kActionsHead || lines[i] == kRestrictHead)
            shuffle_block(i);
        else if (lines[i].rfind(kInitPrefix, 0) == 0)
            shuffle_clause(lines[i], kInitPrefix, g);
        else if (lines[i].rfind(kGoalPrefix, 0) == 0)
            shuffle_clause(lines[i], kGoalPrefix, g);
    }
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += "\n";
    }
    // preserve a missing trailing newline
    if (!query.empty() && query.back() != '\n') out.pop_back();
    return out;
}

}  // namespace plancorpus
