#include "incasp/store.hpp"

#include "incasp/error.hpp"

#include <algorithm>

namespace incasp {

namespace {

std::string literal_text(const SolverLiteral& lit, const AtomTable& table) {
    std::string text = lit.negated ? "not " : "";
    return text + to_string(table.resolve(lit.atom));
}

std::string rule_text(const SolverRule& rule, const AtomTable& table) {
    std::string text;
    if (rule.kind == RuleKind::Weak) {
        text = ":~ ";
    } else if (rule.head.empty()) {
        text = ":- ";
    } else {
        for (std::size_t i = 0; i < rule.head.size(); ++i) {
            if (i > 0) text += " | ";
            text += to_string(table.resolve(rule.head[i]));
        }
        if (!rule.body.empty()) text += " :- ";
    }
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
        if (i > 0) text += ", ";
        text += literal_text(rule.body[i], table);
    }
    text += ".";
    if (rule.kind == RuleKind::Weak) {
        text += " [" + std::to_string(rule.weight) + "@" + std::to_string(rule.level) + "]";
    }
    return text;
}

} // namespace

std::string to_text(const SolverProgram& program, const AtomTable& table) {
    std::vector<const SolverRule*> ordered;
    ordered.reserve(program.rules.size() + program.weaks.size());
    for (const SolverRule& r : program.rules) ordered.push_back(&r);
    for (const SolverRule& r : program.weaks) ordered.push_back(&r);
    std::sort(ordered.begin(), ordered.end(),
              [](const SolverRule* a, const SolverRule* b) { return a->store_index < b->store_index; });
    std::string out;
    for (const SolverRule* r : ordered) out += rule_text(*r, table) + "\n";
    return out;
}

ShotDelta OvergroundStore::begin_shot(const std::vector<Atom>& facts) {
    ++shot_;
    std::vector<AtomId> ids;
    std::set<AtomId> id_set;
    for (const Atom& fact : facts) {
        AtomId id = table_.intern(fact);
        if (id_set.insert(id).second) ids.push_back(id);
    }

    ShotDelta delta;
    for (AtomId id : ids) {
        if (!in_af(id)) delta.new_facts.push_back(id);
    }
    for (AtomId id : pf_) {
        if (!id_set.count(id)) delta.departed_facts.push_back(id);
    }

    for (AtomId id : ids) touch_atom(id);
    if (shot_ == 1) {
        pf_ = id_set;
    } else {
        for (auto it = pf_.begin(); it != pf_.end();) {
            if (!id_set.count(*it)) {
                it = pf_.erase(it);
            } else {
                ++it;
            }
        }
    }
    shot_facts_ = std::move(ids);
    return delta;
}

bool OvergroundStore::touch_atom(AtomId id) {
    if (stamps_.size() < table_.size()) stamps_.resize(table_.size(), -1);
    if (stamps_[id] >= 0) return false;
    stamps_[id] = seq_++;
    af_.insert(id);
    pred_atoms_[predicate_of(table_.resolve(id))].push_back(id);
    return true;
}

void OvergroundStore::restamp_atom(AtomId id) {
    if (!touch_atom(id)) stamps_[id] = seq_++;
}

bool OvergroundStore::in_af(AtomId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < stamps_.size() && stamps_[id] >= 0;
}

std::int64_t OvergroundStore::stamp(AtomId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= stamps_.size()) return -1;
    return stamps_[id];
}

const std::vector<AtomId>& OvergroundStore::atoms_of(const PredicateKey& key) const {
    static const std::vector<AtomId> kEmpty;
    auto it = pred_atoms_.find(key);
    return it == pred_atoms_.end() ? kEmpty : it->second;
}

std::vector<std::int64_t> OvergroundStore::dedup_key(const GroundRule& rule) const {
    std::vector<std::int64_t> key;
    key.reserve(rule.head.size() + rule.body.size() + 3);
    key.push_back(rule.origin);
    for (AtomId h : rule.head) key.push_back(h);
    key.push_back(-1);
    for (const GroundLiteral& lit : rule.body) {
        key.push_back(static_cast<std::int64_t>(lit.atom) * 2 + (lit.negated ? 1 : 0));
    }
    return key;
}

OvergroundStore::RecordResult OvergroundStore::record_rule(GroundRule rule) {
    std::vector<std::int64_t> key = dedup_key(rule);
    auto it = dedup_.find(key);
    if (it != dedup_.end()) return RecordResult{it->second, false};

    int index = static_cast<int>(rules_.size());
    for (AtomId h : rule.head) touch_atom(h);
    if (rule.deleted) deleted_.insert(index);
    rules_.push_back(std::move(rule));
    removed_.push_back(0);
    ++live_rules_;
    dedup_.emplace(std::move(key), index);
    index_rule(index);
    return RecordResult{index, true};
}

void OvergroundStore::index_rule(int index) {
    const GroundRule& rule = rules_[index];
    for (AtomId h : rule.head) head_index_[h].push_back(index);
    for (std::size_t pos = 0; pos < rule.body.size(); ++pos) {
        body_index_[rule.body[pos].atom].emplace_back(index, static_cast<int>(pos));
    }
}

void OvergroundStore::rebuild_indices() {
    head_index_.clear();
    body_index_.clear();
    for (int i = 0; i < static_cast<int>(rules_.size()); ++i) {
        if (!removed_[i]) index_rule(i);
    }
}

void OvergroundStore::reinstate_rule(int index) {
    if (index < 0 || static_cast<std::size_t>(index) >= rules_.size() || removed_[index]) {
        throw Error("reinstate_rule: no such rule");
    }
    GroundRule& rule = rules_[index];
    if (!rule.deleted) throw Error("reinstate_rule: rule is not deleted");
    rule.deleted = false;
    rule.delete_reason = kNoAtom;
    for (GroundLiteral& lit : rule.body) lit.strike_kind = StrikeKind::None;
    deleted_.erase(index);
    for (AtomId h : rule.head) restamp_atom(h);
}

void OvergroundStore::restore_literal(int index, int body_position) {
    if (index < 0 || static_cast<std::size_t>(index) >= rules_.size() || removed_[index]) {
        throw Error("restore_literal: no such rule");
    }
    GroundRule& rule = rules_[index];
    if (body_position < 0 || static_cast<std::size_t>(body_position) >= rule.body.size()) {
        throw Error("restore_literal: no such body position");
    }
    GroundLiteral& lit = rule.body[body_position];
    if (!lit.struck()) throw Error("restore_literal: literal is already active");
    lit.strike_kind = StrikeKind::None;
}

void OvergroundStore::mark_deleted(int index, AtomId reason) {
    if (index < 0 || static_cast<std::size_t>(index) >= rules_.size() || removed_[index]) {
        throw Error("mark_deleted: no such rule");
    }
    GroundRule& rule = rules_[index];
    if (rule.deleted) throw Error("mark_deleted: rule is already deleted");
    rule.deleted = true;
    rule.delete_reason = reason;
    deleted_.insert(index);
}

const std::vector<int>& OvergroundStore::rules_with_head(AtomId id) const {
    static const std::vector<int> kEmpty;
    auto it = head_index_.find(id);
    return it == head_index_.end() ? kEmpty : it->second;
}

const std::vector<std::pair<int, int>>& OvergroundStore::body_occurrences(AtomId id) const {
    static const std::vector<std::pair<int, int>> kEmpty;
    auto it = body_index_.find(id);
    return it == body_index_.end() ? kEmpty : it->second;
}

std::int64_t OvergroundStore::watermark(int origin) const {
    auto it = watermarks_.find(origin);
    return it == watermarks_.end() ? 0 : it->second;
}

void OvergroundStore::set_watermark(int origin, std::int64_t value) {
    watermarks_[origin] = value;
}

void OvergroundStore::forget_rules() {
    rules_.clear();
    removed_.clear();
    live_rules_ = 0;
    deleted_.clear();
    dedup_.clear();
    head_index_.clear();
    body_index_.clear();
    watermarks_.clear();
}

void OvergroundStore::remove_af_atoms_of(const std::set<PredicateKey>& keys) {
    for (const PredicateKey& key : keys) {
        auto it = pred_atoms_.find(key);
        if (it == pred_atoms_.end()) continue;
        for (AtomId id : it->second) {
            af_.erase(id);
            stamps_[id] = -1;
            pf_.erase(id);
        }
        pred_atoms_.erase(it);
    }
}

void OvergroundStore::forget_predicates(const std::set<PredicateKey>& keys) {
    remove_af_atoms_of(keys);
}

void OvergroundStore::apply_annotations(const Program& program) {
    if (program.forget_predicates.empty() && program.forget_rules.empty()) return;
    bool removed_any = false;

    auto remove_rule = [&](int index) {
        dedup_.erase(dedup_key(rules_[index]));
        removed_[index] = 1;
        --live_rules_;
        deleted_.erase(index);
        removed_any = true;
    };

    for (const GlobalForget& gf : program.forget_predicates) {
        PredicateKey key{gf.predicate, gf.arity};
        remove_af_atoms_of({key});

        auto mentions = [&](const GroundRule& rule) {
            for (AtomId h : rule.head) {
                if (predicate_of(table_.resolve(h)) == key) return true;
            }
            for (const GroundLiteral& lit : rule.body) {
                if (predicate_of(table_.resolve(lit.atom)) == key) return true;
            }
            return false;
        };
        for (int i = 0; i < static_cast<int>(rules_.size()); ++i) {
            if (!removed_[i] && mentions(rules_[i])) remove_rule(i);
        }
        for (const Rule& rule : program.rules) {
            auto atom_mentions = [&](const Atom& atom) {
                return atom.predicate == key.name && static_cast<int>(atom.arity()) == key.arity;
            };
            bool touched = std::any_of(rule.head.begin(), rule.head.end(), atom_mentions) ||
                           std::any_of(rule.body.begin(), rule.body.end(),
                                       [&](const Literal& lit) { return atom_mentions(lit.atom); });
            if (touched) watermarks_[rule.id] = 0;
        }
    }

    for (int origin : program.forget_rules) {
        for (int i = 0; i < static_cast<int>(rules_.size()); ++i) {
            if (!removed_[i] && rules_[i].origin == origin) remove_rule(i);
        }
        watermarks_[origin] = 0;
    }

    if (removed_any) rebuild_indices();
}

SolverProgram OvergroundStore::extract_solver_view() const {
    std::set<AtomId> closure(shot_facts_.begin(), shot_facts_.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < static_cast<int>(rules_.size()); ++i) {
            if (removed_[i]) continue;
            const GroundRule& rule = rules_[i];
            if (rule.deleted || rule.kind == RuleKind::Weak || rule.head.empty()) continue;
            bool supported = true;
            for (const GroundLiteral& lit : rule.body) {
                if (!lit.negated && !lit.struck() && !closure.count(lit.atom)) {
                    supported = false;
                    break;
                }
            }
            if (!supported) continue;
            for (AtomId h : rule.head) {
                if (closure.insert(h).second) changed = true;
            }
        }
    }

    SolverProgram view;
    view.facts = shot_facts_;
    for (int i = 0; i < static_cast<int>(rules_.size()); ++i) {
        if (removed_[i]) continue;
        const GroundRule& rule = rules_[i];
        if (rule.deleted) continue;
        bool relevant = true;
        for (const GroundLiteral& lit : rule.body) {
            if (!lit.negated && !lit.struck() && !closure.count(lit.atom)) {
                relevant = false;
                break;
            }
        }
        if (!relevant) continue;
        SolverRule out;
        out.store_index = i;
        out.head = rule.head;
        out.kind = rule.kind;
        out.weight = rule.weight;
        out.level = rule.level;
        for (const GroundLiteral& lit : rule.body) {
            if (lit.struck()) continue;
            out.body.push_back(SolverLiteral{lit.atom, lit.negated});
        }
        (rule.kind == RuleKind::Weak ? view.weaks : view.rules).push_back(std::move(out));
    }
    return view;
}

std::string annotated_dump(const OvergroundStore& store) {
    std::string out;
    for (int i = 0; i < static_cast<int>(store.stored_size()); ++i) {
        if (store.is_removed(i)) continue;
        out += annotated_text(store.rule(i), store.table()) + "\n";
    }
    return out;
}

} // namespace incasp
