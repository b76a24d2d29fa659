#pragma once

#include "incasp/core.hpp"
#include "incasp/dependency.hpp"
#include "incasp/store.hpp"

#include <cstdint>
#include <set>

namespace incasp {

// Deterministic certainty knowledge for one shot.
struct CertaintySets {
    std::set<AtomId> certainly_true;
    // Predicates no rule of P can derive (never in a head). Tracked for
    // completeness; certainly-false simplification is disabled, so this set
    // is informational only.
    std::set<PredicateKey> underivable_predicates;
};

struct ShotCounters {
    std::int64_t instances_attempted = 0; // complete positive-body matches proposed
    std::int64_t instances_added = 0;     // proposals that were new to the store
    std::int64_t literals_restored = 0;
    std::int64_t rules_reinstated = 0;
    std::int64_t rules_deleted = 0;       // deletions at birth and at recheck

    bool operator==(const ShotCounters&) const = default;
};

// Incremental instantiation with tailoring: per shot, alternate the
// desimplification sweep and per-component semi-naive instantiation until
// nothing changes. With tailoring off, grounds the same instances without
// ever simplifying or deleting (plain overgrounding).
class IncrementalGrounder {
public:
    explicit IncrementalGrounder(const Program& program, bool tailoring = true);

    // Requires store.begin_shot to have been called for this shot.
    ShotCounters ground_shot(OvergroundStore& store) const;

    // CT = least fixpoint of the current shot's facts under P's single-head
    // rules whose bodies are entirely positive.
    CertaintySets compute_certain(OvergroundStore& store) const;

    const ComponentOrder& order() const { return order_; }
    const PredicateGraph& graph() const { return graph_; }
    bool tailoring() const { return tailoring_; }

private:
    void desimplify(OvergroundStore& store, const std::set<AtomId>& ct, ShotCounters& counters,
                    bool& changed) const;
    void instantiate_rule(const Rule& rule, OvergroundStore& store, const std::set<AtomId>& ct,
                          ShotCounters& counters, bool& changed) const;
    void emit_instance(const Rule& rule, const Substitution& binding, OvergroundStore& store,
                       const std::set<AtomId>& ct, ShotCounters& counters, bool& changed) const;
    void simplify_instance(GroundRule& instance, const std::set<AtomId>& ct) const;

    const Program& program_;
    bool tailoring_;
    PredicateGraph graph_;
    ComponentOrder order_;
};

} // namespace incasp
