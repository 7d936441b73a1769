#include "plancorpus/generator.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "plancorpus/augment.hpp"
#include "plancorpus/errors.hpp"
#include "plancorpus/ground.hpp"
#include "plancorpus/search.hpp"

namespace plancorpus {
namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& g, std::size_t n) { return n ? g() % n : 0; }

int irange(Rng& g, int lo, int hi) { return lo + static_cast<int>(g() % (hi - lo + 1)); }

// a..z, aa, ab, ...
std::string letter_name(std::size_t i) {
    std::string s;
    do {
        s.insert(s.begin(), static_cast<char>('a' + i % 26));
        i = i / 26;
    } while (i-- > 0);
    return s;
}

void obj(Problem& p, std::string name, std::string type) {
    p.objects.push_back({std::move(name), std::move(type)});
}

void atom(Problem& p, std::string pred, std::vector<std::string> args) {
    p.init.push_back({std::move(pred), std::move(args)});
}

// ---- per-domain samplers: objects and init only ----

void sample_blocksworld(Problem& p, Rng& g, bool big) {
    int n = big ? irange(g, 8, 9) : irange(g, 4, 6);
    std::vector<std::string> blocks;
    for (int i = 0; i < n; ++i) blocks.push_back(letter_name(i));
    for (const auto& b : blocks) obj(p, b, "block");
    det_shuffle(blocks, g);
    atom(p, "hand-empty", {});
    std::string below;
    for (const auto& b : blocks) {
        if (below.empty() || g() % 2 == 0) {
            if (!below.empty()) atom(p, "clear", {below});
            atom(p, "on-table", {b});
        } else {
            atom(p, "on-top-of", {b, below});
        }
        below = b;
    }
    atom(p, "clear", {below});
}

void sample_driverlog(Problem& p, Rng& g, bool big) {
    int nl = big ? 5 : 3;
    int nd = 2, nt = big ? 2 : 1, np = big ? 4 : 2;
    std::vector<std::string> places;
    for (int i = 1; i <= nl; ++i) {
        places.push_back("place" + std::to_string(i));
        obj(p, places.back(), "location");
    }
    // ring of links, both directions
    for (int i = 0; i < nl; ++i) {
        const auto& a = places[i];
        const auto& b = places[(i + 1) % nl];
        atom(p, "link", {a, b});
        atom(p, "link", {b, a});
    }
    // foot paths via intermediate nodes on a few ring edges
    int npaths = big ? 3 : 2;
    for (int i = 0; i < npaths; ++i) {
        int a = i, b = (i + 1) % nl;
        std::string node = "path" + std::to_string(a + 1) + "-" + std::to_string(b + 1);
        obj(p, node, "location");
        atom(p, "path", {places[a], node});
        atom(p, "path", {node, places[b]});
        atom(p, "path", {places[b], node});
        atom(p, "path", {node, places[a]});
    }
    for (int i = 1; i <= nd; ++i) {
        std::string d = "driver" + std::to_string(i);
        obj(p, d, "driver");
        atom(p, "at", {d, places[pick(g, places.size())]});
    }
    for (int i = 1; i <= nt; ++i) {
        std::string t = "truck" + std::to_string(i);
        obj(p, t, "truck");
        atom(p, "at", {t, places[pick(g, places.size())]});
        atom(p, "empty", {t});
    }
    for (int i = 1; i <= np; ++i) {
        std::string pk = "package" + std::to_string(i);
        obj(p, pk, "package");
        atom(p, "at", {pk, places[pick(g, places.size())]});
    }
}

void sample_logistics(Problem& p, Rng& g, bool big) {
    int nc = big ? irange(g, 2, 3) : 2;
    int locs_per_city = big ? 2 : 1;
    int np = big ? irange(g, 4, 5) : 2;
    std::vector<std::string> all_locs, airports;
    std::vector<std::vector<std::string>> city_locs(nc);
    int l = 1;
    for (int c = 1; c <= nc; ++c) {
        std::string city = "city" + std::to_string(c);
        obj(p, city, "city");
        std::string apt = "apt" + std::to_string(c);
        obj(p, apt, "airport");
        atom(p, "in-city", {apt, city});
        city_locs[c - 1].push_back(apt);
        airports.push_back(apt);
        all_locs.push_back(apt);
        for (int k = 0; k < locs_per_city; ++k, ++l) {
            std::string pos = "pos" + std::to_string(l);
            obj(p, pos, "location");
            atom(p, "in-city", {pos, city});
            city_locs[c - 1].push_back(pos);
            all_locs.push_back(pos);
        }
    }
    for (int c = 1; c <= nc; ++c) {
        std::string t = "truck" + std::to_string(c);
        obj(p, t, "truck");
        const auto& locs = city_locs[c - 1];
        atom(p, "at", {t, locs[pick(g, locs.size())]});
    }
    obj(p, "apn1", "airplane");
    atom(p, "at", {"apn1", airports[pick(g, airports.size())]});
    for (int i = 1; i <= np; ++i) {
        std::string pk = "package" + std::to_string(i);
        obj(p, pk, "package");
        atom(p, "at", {pk, all_locs[pick(g, all_locs.size())]});
    }
}

void sample_grippers(Problem& p, Rng& g, bool big) {
    int nr = big ? 4 : irange(g, 2, 3);
    int nb = big ? irange(g, 6, 8) : 3;
    std::vector<std::string> rooms;
    for (int i = 1; i <= nr; ++i) {
        rooms.push_back("room" + std::to_string(i));
        obj(p, rooms.back(), "room");
    }
    obj(p, "robot1", "robot");
    atom(p, "at-robby", {"robot1", rooms[pick(g, rooms.size())]});
    for (const char* gr : {"lgripper1", "rgripper1"}) {
        obj(p, gr, "gripper");
        atom(p, "owns", {"robot1", gr});
        atom(p, "free", {"robot1", gr});
    }
    for (int i = 1; i <= nb; ++i) {
        std::string b = "ball" + std::to_string(i);
        obj(p, b, "ball");
        atom(p, "at", {b, rooms[pick(g, rooms.size())]});
    }
}

void sample_satellite(Problem& p, Rng& g, bool big) {
    int ns = big ? 2 : 1;
    int nm = big ? 3 : 2;
    int ndir = big ? 5 : 3;
    std::vector<std::string> modes, dirs;
    for (int i = 1; i <= nm; ++i) {
        modes.push_back("mode" + std::to_string(i));
        obj(p, modes.back(), "mode");
    }
    for (int i = 1; i <= ndir; ++i) {
        dirs.push_back((i % 2 ? "star" : "planet") + std::to_string(i));
        obj(p, dirs.back(), "direction");
    }
    int k = 1;
    for (int s = 1; s <= ns; ++s) {
        std::string sat = "satellite" + std::to_string(s);
        obj(p, sat, "satellite");
        atom(p, "power-avail", {sat});
        atom(p, "pointing", {sat, dirs[pick(g, dirs.size())]});
        for (int i = 0; i < 2; ++i, ++k) {
            std::string ins = "instrument" + std::to_string(k);
            obj(p, ins, "instrument");
            atom(p, "on-board", {ins, sat});
            atom(p, "calibration-target", {ins, dirs[pick(g, dirs.size())]});
            int supported = irange(g, 1, nm);
            auto ms = modes;
            det_shuffle(ms, g);
            for (int j = 0; j < supported; ++j) atom(p, "supports", {ins, ms[j]});
        }
    }
}

void sample_depots(Problem& p, Rng& g, bool big) {
    std::vector<std::string> places = {"depot1", "distributor1"};
    obj(p, "depot1", "depot");
    obj(p, "distributor1", "distributor");
    if (big) {
        places.push_back("distributor2");
        obj(p, "distributor2", "distributor");
    }
    std::map<std::string, std::string> top;  // place -> current top surface
    for (std::size_t i = 0; i < places.size(); ++i) {
        std::string n = std::to_string(i + 1);
        obj(p, "hoist" + n, "hoist");
        atom(p, "at", {"hoist" + n, places[i]});
        atom(p, "available", {"hoist" + n});
        obj(p, "pallet" + n, "pallet");
        atom(p, "at", {"pallet" + n, places[i]});
        top[places[i]] = "pallet" + n;
    }
    int nt = big ? 2 : 1;
    for (int i = 1; i <= nt; ++i) {
        std::string t = "truck" + std::to_string(i);
        obj(p, t, "truck");
        atom(p, "at", {t, places[pick(g, places.size())]});
    }
    int ncr = big ? irange(g, 4, 6) : irange(g, 2, 3);
    for (int i = 1; i <= ncr; ++i) {
        std::string c = "crate" + std::to_string(i);
        obj(p, c, "crate");
        const auto& pl = places[pick(g, places.size())];
        atom(p, "at", {c, pl});
        atom(p, "on", {c, top[pl]});
        top[pl] = c;
    }
    for (const auto& [pl, s] : top) atom(p, "clear", {s});
}

void sample_barman(Problem& p, Rng& g, bool big) {
    for (const char* h : {"hand1", "hand2"}) {
        obj(p, h, "hand");
        atom(p, "handempty", {h});
    }
    int nsh = big ? irange(g, 5, 7) : irange(g, 2, 4);
    int ni = big ? 3 : irange(g, 2, 3);
    for (int i = 1; i <= ni; ++i) {
        std::string ing = "ingredient" + std::to_string(i);
        std::string dis = "dispenser" + std::to_string(i);
        obj(p, ing, "ingredient");
        obj(p, dis, "dispenser");
        atom(p, "dispenses", {dis, ing});
    }
    for (int i = 1; i <= nsh; ++i) {
        std::string s = "shot" + std::to_string(i);
        obj(p, s, "shot");
        atom(p, "ontable", {s});
        // dirty shots make longer plans, so the large tier has only those
        int state = big ? 1 : static_cast<int>(pick(g, 3));
        if (state == 2) {
            atom(p, "contains", {s, "ingredient" + std::to_string(1 + pick(g, ni))});
        } else {
            atom(p, "empty", {s});
            if (state == 0) atom(p, "clean", {s});
        }
    }
}

void sample_childsnack(Problem& p, Rng& g, bool big) {
    int nch = big ? irange(g, 5, 7) : irange(g, 2, 4);
    int ntb = 2;
    std::vector<std::string> tables;
    for (int i = 1; i <= ntb; ++i) {
        tables.push_back("table" + std::to_string(i));
        obj(p, tables.back(), "place");
    }
    int allergic = 0;
    for (int i = 1; i <= nch; ++i) {
        std::string c = "child" + std::to_string(i);
        obj(p, c, "child");
        atom(p, "waiting", {c, tables[pick(g, tables.size())]});
        if (det_bernoulli(g, 0.4)) {
            atom(p, "allergic-gluten", {c});
            ++allergic;
        } else {
            atom(p, "not-allergic-gluten", {c});
        }
    }
    for (int i = 1; i <= nch; ++i) {
        std::string b = "bread" + std::to_string(i);
        std::string c = "content" + std::to_string(i);
        std::string s = "sandw" + std::to_string(i);
        obj(p, b, "bread");
        obj(p, c, "content");
        obj(p, s, "sandwich");
        atom(p, "at-kitchen-bread", {b});
        atom(p, "at-kitchen-content", {c});
        atom(p, "notexist", {s});
        if (i <= allergic) {
            atom(p, "no-gluten-bread", {b});
            atom(p, "no-gluten-content", {c});
        }
    }
    obj(p, "tray1", "tray");
    atom(p, "at", {"tray1", "kitchen"});
}

void sample_hanoi(Problem& p, Rng& g, bool) {
    int nd = irange(g, 3, 5);
    std::vector<std::string> discs, pegs;
    for (int i = 1; i <= nd; ++i) {
        discs.push_back("disc" + std::to_string(i));  // disc1 is smallest
        obj(p, discs.back(), "disc");
    }
    for (int i = 1; i <= 3; ++i) {
        pegs.push_back("peg" + std::to_string(i));
        obj(p, pegs.back(), "peg");
    }
    for (const auto& peg : pegs)
        for (const auto& d : discs) atom(p, "smaller", {peg, d});
    for (int i = 0; i < nd; ++i)
        for (int j = 0; j < i; ++j) atom(p, "smaller", {discs[i], discs[j]});
    atom(p, "on", {discs[nd - 1], pegs[0]});
    for (int i = nd - 1; i > 0; --i) atom(p, "on", {discs[i - 1], discs[i]});
    atom(p, "clear", {discs[0]});
    atom(p, "clear", {pegs[1]});
    atom(p, "clear", {pegs[2]});
}

void sample_storage(Problem& p, Rng& g, bool) {
    int na = irange(g, 4, 6);
    std::vector<std::string> areas;
    for (int i = 1; i <= na; ++i) {
        areas.push_back("area" + std::to_string(i));
        obj(p, areas.back(), "area");
    }
    for (int i = 0; i + 1 < na; ++i) {
        atom(p, "connected", {areas[i], areas[i + 1]});
        atom(p, "connected", {areas[i + 1], areas[i]});
    }
    std::set<std::string> occupied;
    std::size_t hpos = pick(g, areas.size());
    occupied.insert(areas[hpos]);
    obj(p, "hoist1", "hoist");
    atom(p, "at", {"hoist1", areas[hpos]});
    atom(p, "available", {"hoist1"});
    int ncr = irange(g, 2, 3);
    for (int i = 1; i <= ncr && occupied.size() < areas.size(); ++i) {
        std::string a;
        do {
            a = areas[pick(g, areas.size())];
        } while (occupied.count(a));
        occupied.insert(a);
        std::string c = "crate" + std::to_string(i);
        obj(p, c, "crate");
        atom(p, "on", {c, a});
    }
    for (const auto& a : areas)
        if (!occupied.count(a)) atom(p, "clear", {a});
}

// ---- registry ----

struct GenSpec {
    void (*sample)(Problem&, Rng&, bool);
    std::vector<std::string> goal_preds;
    int gs_lo, gs_hi;  // goal atoms, small tier
    int gl_lo, gl_hi;  // goal atoms, large tier
    // extra per-atom admission check (nullptr: accept all)
    bool (*goal_ok)(const Atom&, const Problem&, const std::map<std::string, std::string>&);
    // direct goal construction for domains where any assignment is
    // reachable; bypasses the walk (nullptr: sample goals from a walk)
    void (*direct_goal)(Problem&, Rng&, int want);
};

// cross-city destination per package; always reachable (a truck per
// city plus the airplane connect everything)
void logistics_direct_goal(Problem& p, Rng& g, int want) {
    std::map<std::string, std::string> city, start;
    std::vector<std::string> pkgs;
    std::vector<std::pair<std::string, std::string>> locs;  // loc, city
    for (const auto& i : p.init) {
        if (i.pred == "in-city") {
            city[i.args[0]] = i.args[1];
            locs.emplace_back(i.args[0], i.args[1]);
        }
        if (i.pred == "at" && i.args[0].starts_with("package")) {
            pkgs.push_back(i.args[0]);
            start[i.args[0]] = i.args[1];
        }
    }
    det_shuffle(pkgs, g);
    for (int i = 0; i < want && i < static_cast<int>(pkgs.size()); ++i) {
        std::string dest;
        do {
            dest = locs[pick(g, locs.size())].first;
        } while (city[dest] == city[start[pkgs[i]]]);
        p.goal.push_back({"at", {pkgs[i], dest}, true});
    }
}

// any supported (direction, mode) pair; have-image is permanent and
// calibration plus pointing are always recoverable
void satellite_direct_goal(Problem& p, Rng& g, int want) {
    std::vector<std::string> dirs;
    std::set<std::string> modes;
    for (const auto& o : p.objects)
        if (o.type == "direction") dirs.push_back(o.name);
    for (const auto& i : p.init)
        if (i.pred == "supports") modes.insert(i.args[1]);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& d : dirs)
        for (const auto& m : modes) pairs.emplace_back(d, m);
    det_shuffle(pairs, g);
    for (int i = 0; i < want && i < static_cast<int>(pairs.size()); ++i)
        p.goal.push_back({"have-image", {pairs[i].first, pairs[i].second}, true});
}

// any subset of children; the sampler guarantees enough gluten-free
// bread and content for every allergic child
void childsnack_direct_goal(Problem& p, Rng& g, int want) {
    std::vector<std::string> kids;
    for (const auto& o : p.objects)
        if (o.type == "child") kids.push_back(o.name);
    det_shuffle(kids, g);
    for (int i = 0; i < want && i < static_cast<int>(kids.size()); ++i)
        p.goal.push_back({"served", {kids[i]}, true});
}

const std::map<std::string, GenSpec>& registry() {
    static const std::map<std::string, GenSpec> reg = {
        {"blocksworld", {sample_blocksworld, {"on-top-of"}, 2, 3, 6, 7, nullptr, nullptr}},
        {"driverlog", {sample_driverlog, {"at"}, 2, 3, 3, 5, nullptr, nullptr}},
        {"logistics", {sample_logistics, {"at"}, 1, 2, 3, 4, nullptr, logistics_direct_goal}},
        {"grippers", {sample_grippers, {"at"}, 1, 3, 4, 6, nullptr, nullptr}},
        {"satellite", {sample_satellite, {"have-image"}, 1, 2, 4, 6, nullptr, satellite_direct_goal}},
        {"depots", {sample_depots, {"on"}, 1, 2, 3, 4, nullptr, nullptr}},
        {"barman", {sample_barman, {"contains"}, 1, 3, 5, 7, nullptr, nullptr}},
        {"childsnack", {sample_childsnack, {"served"}, 1, 3, 4, 6, nullptr, childsnack_direct_goal}},
        {"hanoi", {sample_hanoi, {"on"}, 2, 3, 3, 4, nullptr, nullptr}},
        {"storage", {sample_storage, {"on"}, 1, 2, 2, 3, nullptr, nullptr}},
    };
    return reg;
}

const GenSpec& spec_for(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) throw DataError("no generator for domain: " + name);
    return it->second;
}

// Random walk over applicable ground actions, biased toward actions
// that add a new goal-predicate atom. Returns the final state.
State walk(GroundTask& task, const GenSpec& spec, std::size_t steps, Rng& g) {
    std::set<std::string> goal_preds(spec.goal_preds.begin(), spec.goal_preds.end());
    const State init = task.init();
    State s = init;
    for (std::size_t n = 0; n < steps; ++n) {
        std::vector<std::size_t> app, adds_goal;
        const auto& actions = task.actions();
        for (std::size_t i = 0; i < actions.size(); ++i) {
            const auto& a = actions[i];
            if (!s.contains_all(a.pre_pos)) continue;
            bool blocked = false;
            for (AtomId id : a.pre_neg)
                if (s.contains(id)) { blocked = true; break; }
            if (blocked) continue;
            app.push_back(i);
            // goal atoms the initial state does not already have
            for (AtomId id : a.add)
                if (!s.contains(id) && !init.contains(id) &&
                    goal_preds.count(task.atom(id).pred)) {
                    adds_goal.push_back(i);
                    break;
                }
        }
        if (app.empty()) break;
        const auto& pool = (!adds_goal.empty() && det_bernoulli(g, 0.75)) ? adds_goal : app;
        s = apply(s, actions[pool[pick(g, pool.size())]]);
    }
    return s;
}

void normalize_problem(Problem& p) {
    std::sort(p.init.begin(), p.init.end());
    p.init.erase(std::unique(p.init.begin(), p.init.end()), p.init.end());
    std::sort(p.goal.begin(), p.goal.end());
    // keep only objects that the rendered query can recover
    std::set<std::string> used;
    for (const auto& a : p.init) used.insert(a.args.begin(), a.args.end());
    for (const auto& l : p.goal) used.insert(l.args.begin(), l.args.end());
    std::erase_if(p.objects, [&](const TypedParam& o) { return !used.count(o.name); });
    std::sort(p.objects.begin(), p.objects.end(),
              [](const TypedParam& a, const TypedParam& b) { return a.name < b.name; });
}

// One sampling attempt; empty goal means no candidate goal atom showed up.
Problem attempt_problem(const std::string& domain_name, const Domain& d,
                        const LengthRange& range, bool big, Rng& g) {
    const GenSpec& spec = spec_for(domain_name);
    Problem p;
    p.name = domain_name + "-gen";
    p.domain_name = d.name;
    spec.sample(p, g, big);

    std::map<std::string, std::string> type_of;
    for (const auto& o : p.universe(d)) type_of[o.name] = o.type;

    int want = big ? irange(g, spec.gl_lo, spec.gl_hi) : irange(g, spec.gs_lo, spec.gs_hi);
    if (spec.direct_goal && !(range.lo == 0 && range.hi == 0)) {
        spec.direct_goal(p, g, want);
        normalize_problem(p);
        return p;
    }

    std::set<Atom> init_set(p.init.begin(), p.init.end());
    std::vector<Atom> fresh, stale;
    if (range.lo == 0 && range.hi == 0) {
        for (const auto& a : p.init)
            if (std::find(spec.goal_preds.begin(), spec.goal_preds.end(), a.pred) !=
                    spec.goal_preds.end() &&
                (!spec.goal_ok || spec.goal_ok(a, p, type_of)))
                stale.push_back(a);
    } else {
        Problem nogoal = p;
        GroundTask task(d, nogoal);
        std::size_t steps = (big ? 2 * range.hi : range.hi) + pick(g, 4);
        State fin = walk(task, spec, steps, g);
        for (AtomId id : fin.atoms) {
            const Atom& a = task.atom(id);
            if (std::find(spec.goal_preds.begin(), spec.goal_preds.end(), a.pred) ==
                spec.goal_preds.end())
                continue;
            if (spec.goal_ok && !spec.goal_ok(a, p, type_of)) continue;
            (init_set.count(a) ? stale : fresh).push_back(a);
        }
    }
    det_shuffle(fresh, g);
    det_shuffle(stale, g);
    int need = big ? spec.gl_lo : spec.gs_lo;
    int fresh_needed = (range.lo == 0 && range.hi == 0) ? 0 : (big ? need : 1);
    fresh.insert(fresh.end(), stale.begin(), stale.end());
    if (static_cast<int>(fresh.size()) - static_cast<int>(stale.size()) >= fresh_needed &&
        static_cast<int>(fresh.size()) >= need)
        for (int i = 0; i < want && i < static_cast<int>(fresh.size()); ++i)
            p.goal.push_back({fresh[i].pred, fresh[i].args, true});
    normalize_problem(p);
    return p;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t attempt) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (attempt + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    return x;
}

}  // namespace

Problem sample_problem(const std::string& domain_name, const Domain& d,
                       const LengthRange& range, std::uint64_t seed, const GenOptions& opt) {
    bool big = opt.size_tier < 0 ? range.hi > 16 : opt.size_tier > 0;
    for (std::size_t att = 0; att < opt.max_attempts; ++att) {
        Rng g(mix(seed, att));
        Problem p = attempt_problem(domain_name, d, range, big, g);
        if (!p.goal.empty()) return p;
    }
    throw DataError("could not sample a goal for " + domain_name);
}

GeneratedInstance generate_instance(const std::string& domain_name, const Domain& d,
                                    const LengthRange& range, std::uint64_t seed,
                                    const GenOptions& opt) {
    bool big = opt.size_tier < 0 ? range.hi > 16 : opt.size_tier > 0;
    SearchLimits limits;
    if (range.hi <= 16) {
        limits.max_plan_length = range.hi;
    } else {
        limits.max_plan_length = range.hi;
        limits.max_expansions = 500000;
    }
    for (std::size_t att = 0; att < opt.max_attempts; ++att) {
        Rng g(mix(seed, att));
        Problem p = attempt_problem(domain_name, d, range, big, g);
        if (p.goal.empty()) continue;
        if (range.lo == 0 && range.hi == 0) return {std::move(p), {}};
        try {
            GroundTask task(d, p);
            Plan plan = solve_reference(task, limits);
            if (plan.size() >= range.lo && plan.size() <= range.hi)
                return {std::move(p), std::move(plan)};
        } catch (const SearchLimitError&) {
        } catch (const UnsolvableError&) {
        }
    }
    throw DataError("generation exhausted for " + domain_name + " after " +
                    std::to_string(opt.max_attempts) + " attempts");
}

std::vector<std::string> generator_domains() {
    std::vector<std::string> names;
    for (const auto& [k, v] : registry()) names.push_back(k);
    return names;
}

}  // namespace plancorpus
