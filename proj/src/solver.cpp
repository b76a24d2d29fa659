#include "incasp/solver.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>

#include "incasp/scc.hpp"

namespace incasp {

namespace {

// ---------------------------------------------------------------------------
// Bit-compiled program over the possibly-true atom universe. Everything the
// enumeration touches is a 64-bit mask; programs needing more than 64
// relevant atoms are beyond desk scale and rejected up front.
// ---------------------------------------------------------------------------

struct CompiledRule {
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
    std::uint64_t head = 0;
    int head_count = 0;
};

struct CompiledWeak {
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
    std::int64_t weight = 0;
    int level = 0;
};

struct Compiled {
    std::vector<AtomId> atoms; // bit position -> atom id, ascending
    std::map<AtomId, int> bit_of;
    std::uint64_t fact_mask = 0;
    std::vector<CompiledRule> rules; // normal rules and constraints
    std::vector<CompiledWeak> weaks; // deduplicated
    std::set<int> levels;            // every level occurring in the weaks
};

// Atoms with any chance of membership in an answer set: the least set
// containing the facts and closed under rule heads whose positive bodies are
// already inside (negation ignored). Every answer set is a subset of it.
std::set<AtomId> possibly_true(const SolverProgram& program) {
    std::set<AtomId> x(program.facts.begin(), program.facts.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (const SolverRule& rule : program.rules) {
            if (rule.head.empty()) continue;
            bool applicable = true;
            for (const SolverLiteral& lit : rule.body)
                if (!lit.negated && x.count(lit.atom) == 0) {
                    applicable = false;
                    break;
                }
            if (!applicable) continue;
            for (AtomId h : rule.head)
                if (x.insert(h).second) changed = true;
        }
    }
    return x;
}

// Deduplication key of a ground weak constraint: the sorted signed body plus
// weight and level. Identical weak constraints are charged once.
std::vector<std::int64_t> weak_key(const std::vector<SolverLiteral>& body, std::int64_t weight,
                                   int level) {
    std::vector<std::int64_t> key;
    key.reserve(body.size() + 2);
    for (const SolverLiteral& lit : body)
        key.push_back(static_cast<std::int64_t>(lit.atom) * 2 + (lit.negated ? 1 : 0));
    std::sort(key.begin(), key.end());
    key.push_back(weight);
    key.push_back(level);
    return key;
}

Compiled compile(const SolverProgram& program) {
    Compiled c;
    std::set<AtomId> universe = possibly_true(program);
    if (universe.size() > 64)
        throw CapExceeded("solver universe of " + std::to_string(universe.size()) +
                          " possibly-true atoms exceeds the desk-scale limit of 64");
    c.atoms.assign(universe.begin(), universe.end());
    for (int b = 0; b < static_cast<int>(c.atoms.size()); ++b) c.bit_of[c.atoms[b]] = b;

    for (AtomId f : program.facts) c.fact_mask |= std::uint64_t{1} << c.bit_of.at(f);

    for (const SolverRule& rule : program.rules) {
        if (rule.kind == RuleKind::Weak) continue; // defensively: weaks live in .weaks
        CompiledRule cr;
        bool applicable = true;
        for (const SolverLiteral& lit : rule.body) {
            auto it = c.bit_of.find(lit.atom);
            if (it == c.bit_of.end()) {
                if (!lit.negated) {
                    applicable = false; // positive atom can never hold
                    break;
                }
                continue; // negated atom can never hold: literal always true
            }
            (lit.negated ? cr.neg : cr.pos) |= std::uint64_t{1} << it->second;
        }
        if (!applicable) continue;
        for (AtomId h : rule.head) {
            cr.head |= std::uint64_t{1} << c.bit_of.at(h);
            ++cr.head_count;
        }
        c.rules.push_back(cr);
    }

    std::set<std::vector<std::int64_t>> seen_weaks;
    for (const SolverRule& rule : program.weaks) {
        c.levels.insert(rule.level);
        if (!seen_weaks.insert(weak_key(rule.body, rule.weight, rule.level)).second) continue;
        CompiledWeak cw;
        cw.weight = rule.weight;
        cw.level = rule.level;
        bool applicable = true;
        for (const SolverLiteral& lit : rule.body) {
            auto it = c.bit_of.find(lit.atom);
            if (it == c.bit_of.end()) {
                if (!lit.negated) {
                    applicable = false; // body can never hold: charges nothing
                    break;
                }
                continue;
            }
            (lit.negated ? cw.neg : cw.pos) |= std::uint64_t{1} << it->second;
        }
        if (applicable) c.weaks.push_back(cw);
    }
    return c;
}

std::uint64_t spread(std::uint64_t compact, const std::vector<int>& positions) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < positions.size(); ++i)
        if (compact >> i & 1) mask |= std::uint64_t{1} << positions[i];
    return mask;
}

std::vector<int> bit_positions(std::uint64_t mask) {
    std::vector<int> out;
    for (int b = 0; b < 64; ++b)
        if (mask >> b & 1) out.push_back(b);
    return out;
}

bool satisfies_all(const Compiled& c, std::uint64_t interp) {
    for (const CompiledRule& r : c.rules)
        if ((interp & r.pos) == r.pos && (interp & r.neg) == 0 && (interp & r.head) == 0)
            return false; // fired rule with no true head (constraints have none)
    return true;
}

// Is `interp` a minimal model of the reduct of the compiled program w.r.t.
// itself? Assumes the model check has already passed and facts are inside.
bool reduct_minimal(const Compiled& c, std::uint64_t interp) {
    std::vector<const CompiledRule*> kept;
    kept.reserve(c.rules.size());
    bool disjunctive = false;
    for (const CompiledRule& r : c.rules)
        if ((interp & r.neg) == 0) {
            kept.push_back(&r);
            if (r.head_count >= 2) disjunctive = true;
        }

    if (!disjunctive) {
        // The reduct is definite: its unique minimal model is the least
        // fixpoint over facts and single-head rules.
        std::uint64_t lfp = c.fact_mask;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const CompiledRule* r : kept)
                if ((lfp & r->pos) == r->pos && (lfp | r->head) != lfp) {
                    lfp |= r->head;
                    changed = true;
                }
        }
        return lfp == interp;
    }

    // Pin atoms every submodel must contain: facts, plus the single permitted
    // head of any rule whose body is already pinned.
    std::uint64_t pinned = c.fact_mask;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const CompiledRule* r : kept) {
            if ((pinned & r->pos) != r->pos) continue;
            std::uint64_t allowed = r->head & interp;
            bool single = allowed != 0 && (allowed & (allowed - 1)) == 0;
            if (single && (pinned | allowed) != pinned) {
                pinned |= allowed;
                changed = true;
            }
        }
    }
    if (pinned == interp) return true;

    std::vector<int> free_bits = bit_positions(interp & ~pinned);
    if (free_bits.size() > 30)
        throw CapExceeded("minimality check over " + std::to_string(free_bits.size()) +
                          " unpinned atoms exceeds the desk-scale limit of 30");
    std::uint64_t full = (std::uint64_t{1} << free_bits.size()) - 1;
    for (std::uint64_t m = 0; m < full; ++m) { // excludes m == full, i.e. interp itself
        std::uint64_t candidate = pinned | spread(m, free_bits);
        bool model = true;
        for (const CompiledRule* r : kept)
            if ((candidate & r->pos) == r->pos && (candidate & r->head) == 0) {
                model = false;
                break;
            }
        if (model) return false; // a proper submodel exists
    }
    return true;
}

bool stable(const Compiled& c, std::uint64_t interp) {
    return satisfies_all(c, interp) && reduct_minimal(c, interp);
}

void enumerate_exhaustive(const Compiled& c, const std::vector<int>& free_bits,
                          std::vector<std::uint64_t>& out) {
    std::uint64_t limit = std::uint64_t{1} << free_bits.size();
    for (std::uint64_t m = 0; m < limit; ++m) {
        std::uint64_t interp = c.fact_mask | spread(m, free_bits);
        if (stable(c, interp)) out.push_back(interp);
    }
}

// Guess only the atoms whose truth is genuinely undetermined: heads of
// disjunctive rules and members of dependency cycles through negation. All
// remaining atoms follow deterministically, stratum by stratum, and the full
// stability check validates every completed candidate.
void enumerate_guess_restricted(const Compiled& c, int cap, std::vector<std::uint64_t>& out) {
    const int n = static_cast<int>(c.atoms.size());
    std::set<std::pair<int, int>> pos_edges;
    std::set<std::pair<int, int>> neg_edges;
    for (const CompiledRule& r : c.rules) {
        std::vector<int> heads = bit_positions(r.head);
        for (int b : bit_positions(r.pos))
            for (int h : heads) pos_edges.emplace(b, h);
        for (int b : bit_positions(r.neg))
            for (int h : heads) neg_edges.emplace(b, h);
    }
    std::vector<std::vector<int>> adjacency(n);
    for (const auto& [u, v] : pos_edges) adjacency[u].push_back(v);
    for (const auto& [u, v] : neg_edges)
        if (!pos_edges.count({u, v})) adjacency[u].push_back(v);
    SccResult scc = strongly_connected_components(adjacency);

    std::uint64_t gamma = 0;
    for (const CompiledRule& r : c.rules)
        if (r.head_count >= 2) gamma |= r.head;
    for (const auto& [u, v] : neg_edges)
        if (scc.component_of[u] == scc.component_of[v])
            for (int member : scc.components[scc.component_of[u]])
                gamma |= std::uint64_t{1} << member;
    gamma &= ~c.fact_mask;

    std::vector<int> guess_bits = bit_positions(gamma);
    if (static_cast<int>(guess_bits.size()) > cap)
        throw CapExceeded("guess-restricted enumeration needs " +
                          std::to_string(guess_bits.size()) + " atoms, beyond the cap of " +
                          std::to_string(cap));

    // Single-head rules defining a residual (non-guessed, non-fact) atom,
    // grouped by the strongly connected component of their head.
    std::vector<std::vector<const CompiledRule*>> groups(scc.components.size());
    for (const CompiledRule& r : c.rules) {
        if (r.head_count != 1) continue;
        if (r.head & (gamma | c.fact_mask)) continue;
        groups[scc.component_of[bit_positions(r.head)[0]]].push_back(&r);
    }

    std::uint64_t limit = std::uint64_t{1} << guess_bits.size();
    for (std::uint64_t m = 0; m < limit; ++m) {
        std::uint64_t interp = c.fact_mask | spread(m, guess_bits);
        // Components come out of Tarjan sinks-first; walk them in reverse so
        // body strata are complete before the rules that read them fire.
        for (std::size_t ci = scc.components.size(); ci-- > 0;) {
            if (groups[ci].empty()) continue;
            bool changed = true;
            while (changed) {
                changed = false;
                for (const CompiledRule* r : groups[ci])
                    if ((interp & r->pos) == r->pos && (interp & r->neg) == 0 &&
                        (interp & r->head) == 0) {
                        interp |= r->head;
                        changed = true;
                    }
            }
        }
        if (stable(c, interp)) out.push_back(interp);
    }
}

AnswerSet decode(const Compiled& c, std::uint64_t interp) {
    AnswerSet set;
    for (int b = 0; b < static_cast<int>(c.atoms.size()); ++b)
        if (interp >> b & 1) set.atoms.push_back(c.atoms[b]);
    for (const CompiledWeak& w : c.weaks)
        if ((interp & w.pos) == w.pos && (interp & w.neg) == 0) set.cost[w.level] += w.weight;
    // canonical cost maps: zero totals are omitted (see weak_cost)
    std::erase_if(set.cost, [](const auto& entry) { return entry.second == 0; });
    return set;
}

} // namespace

std::vector<AnswerSet> answer_sets(const SolverProgram& program, const AtomTable& table,
                                   const SolveRequest& request) {
    (void)table; // the table defines the id order the result is sorted by
    Compiled c = compile(program);

    std::uint64_t universe_mask = c.atoms.size() == 64
                                      ? ~std::uint64_t{0}
                                      : (std::uint64_t{1} << c.atoms.size()) - 1;
    std::vector<int> free_bits = bit_positions(universe_mask & ~c.fact_mask);
    const int cap = std::min(request.options.cap, 62); // keep mask shifts defined
    const auto mode = request.options.mode;
    bool fits = static_cast<int>(free_bits.size()) <= cap;
    if (mode == SolverOptions::Mode::Exhaustive && !fits)
        throw CapExceeded("exhaustive enumeration over " + std::to_string(free_bits.size()) +
                          " free atoms exceeds the cap of " + std::to_string(cap) +
                          "; use the guess-restricted mode");

    std::vector<std::uint64_t> models;
    if (mode == SolverOptions::Mode::Exhaustive ||
        (mode == SolverOptions::Mode::Auto && fits))
        enumerate_exhaustive(c, free_bits, models);
    else
        enumerate_guess_restricted(c, cap, models);

    std::vector<AnswerSet> sets;
    sets.reserve(models.size());
    for (std::uint64_t interp : models) sets.push_back(decode(c, interp));
    std::sort(sets.begin(), sets.end(),
              [](const AnswerSet& a, const AnswerSet& b) { return a.atoms < b.atoms; });

    if (request.optimize && !sets.empty() && !c.levels.empty()) {
        const std::map<int, std::int64_t>* best = &sets.front().cost;
        for (const AnswerSet& s : sets)
            if (cost_less(s.cost, *best)) best = &s.cost;
        std::map<int, std::int64_t> target = *best;
        std::erase_if(sets, [&](const AnswerSet& s) { return cost_less(target, s.cost); });
    }
    if (request.count > 0 && static_cast<int>(sets.size()) > request.count)
        sets.resize(static_cast<std::size_t>(request.count));
    return sets;
}

PositiveProgram gl_reduct(const SolverProgram& program, const std::set<AtomId>& interpretation) {
    PositiveProgram out;
    for (AtomId f : program.facts) out.rules.push_back({{f}, {}});
    for (const SolverRule& rule : program.rules) {
        if (rule.kind == RuleKind::Weak) continue;
        bool dropped = false;
        PositiveRule pr;
        pr.head = rule.head;
        for (const SolverLiteral& lit : rule.body) {
            if (lit.negated) {
                if (interpretation.count(lit.atom)) {
                    dropped = true;
                    break;
                }
            } else {
                pr.body.push_back(lit.atom);
            }
        }
        if (!dropped) out.rules.push_back(std::move(pr));
    }
    return out;
}

namespace {

bool satisfies(const PositiveProgram& program, const std::set<AtomId>& interpretation) {
    for (const PositiveRule& rule : program.rules) {
        bool fires = true;
        for (AtomId b : rule.body)
            if (interpretation.count(b) == 0) {
                fires = false;
                break;
            }
        if (!fires) continue;
        bool head_true = false;
        for (AtomId h : rule.head)
            if (interpretation.count(h)) {
                head_true = true;
                break;
            }
        if (!head_true) return false; // constraints have empty heads
    }
    return true;
}

} // namespace

bool is_minimal_model(const PositiveProgram& program, const std::set<AtomId>& interpretation) {
    if (!satisfies(program, interpretation)) return false;
    std::vector<AtomId> elements(interpretation.begin(), interpretation.end());
    if (elements.size() > 24)
        throw CapExceeded("minimal-model check over " + std::to_string(elements.size()) +
                          " atoms exceeds the desk-scale limit of 24");
    std::uint64_t full = (std::uint64_t{1} << elements.size()) - 1;
    for (std::uint64_t m = 0; m < full; ++m) { // every proper subset
        std::set<AtomId> subset;
        for (std::size_t i = 0; i < elements.size(); ++i)
            if (m >> i & 1) subset.insert(elements[i]);
        if (satisfies(program, subset)) return false;
    }
    return true;
}

std::map<int, std::int64_t> weak_cost(const SolverProgram& program,
                                      const std::set<AtomId>& interpretation) {
    std::map<int, std::int64_t> total;
    std::set<std::vector<std::int64_t>> seen;
    for (const SolverRule& rule : program.weaks) {
        if (!seen.insert(weak_key(rule.body, rule.weight, rule.level)).second) continue;
        bool fires = true;
        for (const SolverLiteral& lit : rule.body)
            if (lit.negated == (interpretation.count(lit.atom) != 0)) {
                fires = false;
                break;
            }
        if (fires) total[rule.level] += rule.weight;
    }
    // Canonical form: levels whose weights sum to zero are omitted, so costs
    // compare equal across differently grounded but equivalent programs.
    std::erase_if(total, [](const auto& entry) { return entry.second == 0; });
    return total;
}

bool cost_less(const std::map<int, std::int64_t>& a, const std::map<int, std::int64_t>& b) {
    std::set<int> levels;
    for (const auto& [level, _] : a) levels.insert(level);
    for (const auto& [level, _] : b) levels.insert(level);
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
        auto ia = a.find(*it);
        auto ib = b.find(*it);
        std::int64_t va = ia == a.end() ? 0 : ia->second;
        std::int64_t vb = ib == b.end() ? 0 : ib->second;
        if (va != vb) return va < vb;
    }
    return false;
}

bool NamedAnswerSet::operator<(const NamedAnswerSet& other) const {
    if (atoms != other.atoms) return atoms < other.atoms;
    return cost < other.cost;
}

NamedAnswerSet to_named(const AnswerSet& set, const AtomTable& table) {
    NamedAnswerSet named;
    named.atoms.reserve(set.atoms.size());
    for (AtomId id : set.atoms) named.atoms.push_back(to_string(table.resolve(id)));
    std::sort(named.atoms.begin(), named.atoms.end());
    named.cost = set.cost;
    return named;
}

std::vector<NamedAnswerSet> to_named(const std::vector<AnswerSet>& sets, const AtomTable& table) {
    std::vector<NamedAnswerSet> out;
    out.reserve(sets.size());
    for (const AnswerSet& s : sets) out.push_back(to_named(s, table));
    return out;
}

std::string format_answer_set(const AnswerSet& set, const AtomTable& table) {
    std::vector<Atom> atoms;
    atoms.reserve(set.atoms.size());
    for (AtomId id : set.atoms) atoms.push_back(table.resolve(id));
    std::sort(atoms.begin(), atoms.end());
    std::string out = "{";
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i > 0) out += ", ";
        out += to_string(atoms[i]);
    }
    out += "}";
    return out;
}

std::string format_cost(const std::map<int, std::int64_t>& cost) {
    std::string out;
    for (const auto& [level, weight] : cost) {
        if (level < 1) continue;
        out += out.empty() ? "COST " : " ";
        out += std::to_string(weight) + "@" + std::to_string(level);
    }
    return out;
}

namespace {

void collect_constants(const Atom& atom, std::set<Term>& constants) {
    for (const Term& t : atom.terms)
        if (t.is_constant()) constants.insert(t);
}

void collect_variables(const Atom& atom, std::vector<std::string>& order,
                       std::set<std::string>& seen) {
    for (const Term& t : atom.terms)
        if (t.is_variable() && seen.insert(t.name).second) order.push_back(t.name);
}

} // namespace

std::vector<NamedAnswerSet> brute_force_oracle(const Program& program,
                                               const std::vector<Atom>& facts,
                                               const SolveRequest& request) {
    AtomTable table;
    SolverProgram ground;

    std::set<AtomId> seen_facts;
    for (const Atom& fact : facts) {
        AtomId id = table.intern(fact);
        if (seen_facts.insert(id).second) ground.facts.push_back(id);
    }

    std::set<Term> constant_set;
    for (const Rule& rule : program.rules) {
        for (const Atom& a : rule.head) collect_constants(a, constant_set);
        for (const Literal& l : rule.body) collect_constants(l.atom, constant_set);
    }
    for (const Atom& fact : facts) collect_constants(fact, constant_set);
    std::vector<Term> constants(constant_set.begin(), constant_set.end());

    long long budget = 200000;
    int next_index = 0;
    auto emit = [&](const Rule& instance) {
        if (--budget < 0)
            throw CapExceeded("naive instantiation exceeds the oracle cap of 200000 instances");
        SolverRule sr;
        sr.store_index = next_index++;
        sr.kind = instance.kind;
        sr.weight = instance.weight;
        sr.level = instance.level;
        for (const Atom& a : instance.head) sr.head.push_back(table.intern(a));
        for (const Literal& l : instance.body)
            sr.body.push_back({table.intern(l.atom), l.negated});
        (instance.kind == RuleKind::Weak ? ground.weaks : ground.rules).push_back(std::move(sr));
    };

    for (const Rule& rule : program.rules) {
        std::vector<std::string> variables;
        std::set<std::string> seen;
        for (const Atom& a : rule.head) collect_variables(a, variables, seen);
        for (const Literal& l : rule.body) collect_variables(l.atom, variables, seen);

        if (variables.empty()) {
            emit(rule);
            continue;
        }
        if (constants.empty()) continue; // no ground instances exist

        std::vector<std::size_t> odometer(variables.size(), 0);
        while (true) {
            Substitution subst;
            for (std::size_t i = 0; i < variables.size(); ++i)
                subst.bind(variables[i], constants[odometer[i]]);
            emit(apply_substitution(rule, subst));

            std::size_t wheel = 0;
            while (wheel < odometer.size() && ++odometer[wheel] == constants.size()) {
                odometer[wheel] = 0;
                ++wheel;
            }
            if (wheel == odometer.size()) break;
        }
    }

    return to_named(answer_sets(ground, table, request), table);
}

} // namespace incasp
