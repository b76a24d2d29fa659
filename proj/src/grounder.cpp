#include "incasp/grounder.hpp"

#include <algorithm>
#include <functional>

namespace incasp {

namespace {

// Unifies a body atom pattern with a ground atom, extending `subst`. Returns
// the number of fresh bindings on success; rolls its own bindings back and
// returns -1 on mismatch.
int unify(const Atom& pattern, const Atom& ground, Substitution& subst) {
    if (pattern.predicate != ground.predicate || pattern.terms.size() != ground.terms.size()) {
        return -1;
    }
    int added = 0;
    for (std::size_t i = 0; i < pattern.terms.size(); ++i) {
        const Term& t = pattern.terms[i];
        const Term& g = ground.terms[i];
        if (t.is_variable()) {
            if (const Term* bound = subst.lookup(t.name)) {
                if (*bound == g) continue;
            } else {
                subst.bind(t.name, g);
                ++added;
                continue;
            }
        } else if (t == g) {
            continue;
        }
        for (int k = 0; k < added; ++k) subst.pop();
        return -1;
    }
    return added;
}

} // namespace

IncrementalGrounder::IncrementalGrounder(const Program& program, bool tailoring)
    : program_(program), tailoring_(tailoring), graph_(build_graph(program)),
      order_(condense(program, graph_)) {}

CertaintySets IncrementalGrounder::compute_certain(OvergroundStore& store) const {
    CertaintySets out;
    std::map<PredicateKey, std::vector<AtomId>> by_pred;
    auto add = [&](AtomId id) {
        if (!out.certainly_true.insert(id).second) return false;
        by_pred[predicate_of(store.table().resolve(id))].push_back(id);
        return true;
    };
    for (AtomId id : store.shot_facts()) add(id);

    std::vector<const Rule*> eligible;
    for (const Rule& rule : program_.rules) {
        if (rule.kind != RuleKind::Normal || rule.head.size() != 1) continue;
        bool all_positive = std::all_of(rule.body.begin(), rule.body.end(),
                                        [](const Literal& lit) { return !lit.negated; });
        if (all_positive) eligible.push_back(&rule);
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (const Rule* rule : eligible) {
            Substitution subst;
            std::function<void(std::size_t)> descend = [&](std::size_t j) {
                if (j == rule->body.size()) {
                    AtomId id = store.table().intern(apply_substitution(rule->head.front(), subst));
                    if (add(id)) changed = true;
                    return;
                }
                auto it = by_pred.find(predicate_of(rule->body[j].atom));
                if (it == by_pred.end()) return;
                for (std::size_t k = 0; k < it->second.size(); ++k) {
                    int bound = unify(rule->body[j].atom, store.table().resolve(it->second[k]), subst);
                    if (bound < 0) continue;
                    descend(j + 1);
                    for (int n = 0; n < bound; ++n) subst.pop();
                }
            };
            descend(0);
        }
    }

    std::set<PredicateKey> head_predicates;
    for (const Rule& rule : program_.rules) {
        for (const Atom& atom : rule.head) head_predicates.insert(predicate_of(atom));
    }
    for (const PredicateKey& key : graph_.predicates) {
        if (!head_predicates.count(key)) out.underivable_predicates.insert(key);
    }
    return out;
}

void IncrementalGrounder::simplify_instance(GroundRule& instance, const std::set<AtomId>& ct) const {
    if (!tailoring_ || instance.kind == RuleKind::Weak) return;
    for (const GroundLiteral& lit : instance.body) {
        if (lit.negated && ct.count(lit.atom)) {
            instance.deleted = true;
            instance.delete_reason = lit.atom;
            return; // deleted rules keep their body unsimplified
        }
    }
    for (GroundLiteral& lit : instance.body) {
        if (!lit.negated && ct.count(lit.atom)) lit.strike_kind = StrikeKind::CertainlyTruePositive;
    }
}

void IncrementalGrounder::emit_instance(const Rule& rule, const Substitution& binding,
                                        OvergroundStore& store, const std::set<AtomId>& ct,
                                        ShotCounters& counters, bool& changed) const {
    ++counters.instances_attempted;
    GroundRule instance;
    instance.origin = rule.id;
    instance.kind = rule.kind;
    instance.weight = rule.weight;
    instance.level = rule.level;
    instance.generation = store.shot();
    for (const Atom& head : rule.head) {
        instance.head.push_back(store.table().intern(apply_substitution(head, binding)));
    }
    for (const Literal& lit : rule.body) {
        AtomId id = store.table().intern(apply_substitution(lit.atom, binding));
        instance.body.push_back(GroundLiteral{id, lit.negated, StrikeKind::None});
    }
    simplify_instance(instance, ct);

    OvergroundStore::RecordResult result = store.record_rule(std::move(instance));
    if (result.added) {
        ++counters.instances_added;
        if (store.rule(result.index).deleted) ++counters.rules_deleted;
        changed = true;
    }
}

void IncrementalGrounder::instantiate_rule(const Rule& rule, OvergroundStore& store,
                                           const std::set<AtomId>& ct, ShotCounters& counters,
                                           bool& changed) const {
    std::vector<std::size_t> positive;
    for (std::size_t pos = 0; pos < rule.body.size(); ++pos) {
        if (!rule.body[pos].negated) positive.push_back(pos);
    }

    const std::int64_t lo = store.watermark(rule.id);
    const std::int64_t hi = store.seq();

    if (positive.empty()) {
        // A safe rule without positive body literals is ground and has exactly
        // one instance, proposed the first time the rule is (re)considered.
        if (lo == 0) {
            emit_instance(rule, Substitution{}, store, ct, counters, changed);
            store.set_watermark(rule.id, std::max<std::int64_t>(hi, 1));
        }
        return;
    }
    if (lo >= hi) return;

    // Semi-naive window: one positive position holds an atom stamped in
    // [lo, hi), positions to its left hold atoms stamped before lo, positions
    // to its right hold atoms stamped before hi. Every instance whose newest
    // positive atom falls in the window is proposed exactly once.
    Substitution subst;
    for (std::size_t delta = 0; delta < positive.size(); ++delta) {
        std::function<void(std::size_t)> descend = [&](std::size_t j) {
            if (j == positive.size()) {
                emit_instance(rule, subst, store, ct, counters, changed);
                return;
            }
            const Atom& pattern = rule.body[positive[j]].atom;
            const std::vector<AtomId>& candidates = store.atoms_of(predicate_of(pattern));
            // Index loop: emitting an instance can intern a head atom of this
            // very predicate, growing the candidate vector under our feet.
            // Such atoms are stamped at or past hi, so the window skips them.
            for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
                AtomId cand = candidates[idx];
                std::int64_t s = store.stamp(cand);
                if (s < 0) continue;
                if (j == delta) {
                    if (s < lo || s >= hi) continue;
                } else if (j < delta) {
                    if (s >= lo) continue;
                } else {
                    if (s >= hi) continue;
                }
                int bound = unify(pattern, store.table().resolve(cand), subst);
                if (bound < 0) continue;
                descend(j + 1);
                for (int n = 0; n < bound; ++n) subst.pop();
            }
        };
        descend(0);
    }
    store.set_watermark(rule.id, hi);
}

void IncrementalGrounder::desimplify(OvergroundStore& store, const std::set<AtomId>& ct,
                                     ShotCounters& counters, bool& changed) const {
    for (int i = 0; i < static_cast<int>(store.stored_size()); ++i) {
        if (store.is_removed(i)) continue;
        const GroundRule& rule = store.rule(i);
        if (rule.kind == RuleKind::Weak) continue;
        if (rule.deleted) {
            if (ct.count(rule.delete_reason)) continue;
            store.reinstate_rule(i);
            ++counters.rules_reinstated;
            changed = true;
            // Deletion-only recheck: another certainly-true negated atom may
            // still justify keeping the freshly reinstated rule deleted.
            for (const GroundLiteral& lit : store.rule(i).body) {
                if (lit.negated && ct.count(lit.atom)) {
                    store.mark_deleted(i, lit.atom);
                    ++counters.rules_deleted;
                    break;
                }
            }
        } else {
            for (std::size_t pos = 0; pos < rule.body.size(); ++pos) {
                if (rule.body[pos].struck() && !ct.count(rule.body[pos].atom)) {
                    store.restore_literal(i, static_cast<int>(pos));
                    ++counters.literals_restored;
                    changed = true;
                }
            }
        }
    }
}

ShotCounters IncrementalGrounder::ground_shot(OvergroundStore& store) const {
    ShotCounters counters;
    std::set<AtomId> ct;
    if (tailoring_) ct = compute_certain(store).certainly_true;

    bool changed = true;
    while (changed) {
        changed = false;
        if (tailoring_) desimplify(store, ct, counters, changed);
        for (std::size_t c = 0; c < order_.components.size(); ++c) {
            bool pass_added = true;
            while (pass_added) {
                pass_added = false;
                for (int rid : order_.component_rules[c]) {
                    instantiate_rule(program_.rules[rid], store, ct, counters, pass_added);
                }
                changed = changed || pass_added;
            }
        }
        for (int rid : order_.trailing_rules) {
            instantiate_rule(program_.rules[rid], store, ct, counters, changed);
        }
    }
    return counters;
}

} // namespace incasp
