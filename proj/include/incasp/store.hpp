#pragma once

#include "incasp/core.hpp"
#include "incasp/dependency.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace incasp {

// Facts entering and leaving between one shot and the previous one:
// NF = F_i \ AF and OF = PF_prev \ F_i, both computed before AF/PF update.
struct ShotDelta {
    std::vector<AtomId> new_facts;      // fact-file order
    std::vector<AtomId> departed_facts; // ascending atom id
};

struct SolverLiteral {
    AtomId atom = kNoAtom;
    bool negated = false;
};

struct SolverRule {
    int store_index = -1;
    std::vector<AtomId> head;
    std::vector<SolverLiteral> body; // active literals only
    RuleKind kind = RuleKind::Normal;
    std::int64_t weight = 0;
    int level = 0;
};

// The tailored view handed to the solver: effective rules that survived the
// possibly-true relevance filter, the ground weak constraints whose positive
// bodies are possibly true, and the current shot's facts.
struct SolverProgram {
    std::vector<SolverRule> rules; // normal rules and constraints, store order
    std::vector<SolverRule> weaks; // weak constraints, store order
    std::vector<AtomId> facts;     // fact-file order, deduplicated
};

// One rule per line in store order (weak constraints interleaved at their
// store positions); struck literals and deleted rules are already absent
// from the view. Facts are not rules and are not printed.
std::string to_text(const SolverProgram& program, const AtomTable& table);

// Persistent multi-shot state: the overgrounded program G with tailoring
// metadata, accumulated possibly-true atoms AF, persistent facts PF, the
// deleted-rule set D, join watermarks, and the indices over all of it.
class OvergroundStore {
public:
    AtomTable& table() { return table_; }
    const AtomTable& table() const { return table_; }

    // -- shot lifecycle -----------------------------------------------------
    ShotDelta begin_shot(const std::vector<Atom>& facts);
    int shot() const { return shot_; }
    const std::vector<AtomId>& shot_facts() const { return shot_facts_; }

    // -- accumulated atoms --------------------------------------------------
    // Adds the atom to AF with a fresh insertion stamp; returns false when
    // it is already accumulated (its stamp is then left untouched).
    bool touch_atom(AtomId id);
    // Gives an accumulated atom a fresh stamp so joins will see it as new
    // again (used for the heads of reinstated rules).
    void restamp_atom(AtomId id);
    bool in_af(AtomId id) const;
    const std::set<AtomId>& af() const { return af_; }
    const std::set<AtomId>& pf() const { return pf_; }
    std::int64_t stamp(AtomId id) const; // -1 when not accumulated
    std::int64_t seq() const { return seq_; }
    // Accumulated atoms of one predicate, in first-touch order.
    const std::vector<AtomId>& atoms_of(const PredicateKey& key) const;

    // -- rules ----------------------------------------------------------------
    struct RecordResult {
        int index = -1;
        bool added = false;
    };
    // Stores a fully ground, already-simplified instance. Duplicates (same
    // origin, heads, and signed body) are reported, not re-added. Head atoms
    // of a newly added rule are touched into AF.
    RecordResult record_rule(GroundRule rule);
    const GroundRule& rule(int index) const { return rules_[index]; }
    std::size_t stored_size() const { return rules_.size(); }
    std::size_t rule_count() const { return live_rules_; } // non-removed
    bool is_removed(int index) const { return removed_[index] != 0; }
    const std::set<int>& deleted_rules() const { return deleted_; }

    // Moves a rule out of D: body restored to its complete form (all strikes
    // cleared for good) and head atoms re-stamped so they feed joins again.
    void reinstate_rule(int index);
    // Clears one strike for good.
    void restore_literal(int index, int body_position);
    // Moves an active rule into D (deletion-only recheck at reinstatement).
    void mark_deleted(int index, AtomId reason);

    const std::vector<int>& rules_with_head(AtomId id) const;
    const std::vector<std::pair<int, int>>& body_occurrences(AtomId id) const;

    // -- join watermarks ------------------------------------------------------
    // Per origin rule of P: the stamp up to which joins are complete. 0 means
    // the rule must be (re)instantiated from the very beginning.
    std::int64_t watermark(int origin) const;
    void set_watermark(int origin, std::int64_t value);

    // -- forgetting -----------------------------------------------------------
    void forget_rules();                                         // mode r
    void forget_predicates(const std::set<PredicateKey>& keys);  // mode p extra step
    void apply_annotations(const Program& program);

    // -- extraction -----------------------------------------------------------
    SolverProgram extract_solver_view() const;

private:
    std::vector<std::int64_t> dedup_key(const GroundRule& rule) const;
    void index_rule(int index);
    void rebuild_indices();
    void remove_af_atoms_of(const std::set<PredicateKey>& keys);

    AtomTable table_;
    std::vector<GroundRule> rules_;
    std::vector<char> removed_;
    std::size_t live_rules_ = 0;
    std::set<int> deleted_;
    std::map<std::vector<std::int64_t>, int> dedup_;
    std::unordered_map<AtomId, std::vector<int>> head_index_;
    std::unordered_map<AtomId, std::vector<std::pair<int, int>>> body_index_;

    std::set<AtomId> af_;
    std::set<AtomId> pf_;
    std::vector<std::int64_t> stamps_; // by atom id; -1 = not accumulated
    std::map<PredicateKey, std::vector<AtomId>> pred_atoms_;
    std::int64_t seq_ = 0;

    std::map<int, std::int64_t> watermarks_;
    int shot_ = 0;
    std::vector<AtomId> shot_facts_;
};

// Every stored rule (deleted ones included, removed ones not) as annotated
// text, one per line, store order. Test and debugging aid.
std::string annotated_dump(const OvergroundStore& store);

} // namespace incasp
