#pragma once

#include "incasp/core.hpp"
#include "incasp/store.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace incasp {

struct AnswerSet {
    std::vector<AtomId> atoms;           // ascending atom id
    std::map<int, std::int64_t> cost;    // level -> total violated weight

    bool operator==(const AnswerSet&) const = default;
};

struct SolverOptions {
    enum class Mode {
        Auto,           // exhaustive when it fits the cap, else guess-restricted
        Exhaustive,     // enumerate every interpretation of the free atoms
        GuessRestricted // enumerate only disjunctive heads and negative-loop atoms
    };
    Mode mode = Mode::Auto;
    int cap = 24; // maximum number of enumerated atoms
};

struct SolveRequest {
    int count = 0;        // how many sets to return; 0 = all
    bool optimize = true; // keep only cost-optimal sets (no-op without weak constraints)
    SolverOptions options{};
};

// All (or the first `count`) answer sets of a ground program, in
// deterministic order: sorted lexicographically by their ascending atom-id
// lists. Facts are pinned true. Throws CapExceeded when the program needs
// more enumeration than the configured mode allows.
std::vector<AnswerSet> answer_sets(const SolverProgram& program, const AtomTable& table,
                                   const SolveRequest& request = {});

// A negation-free ground program: rules with positive bodies; a rule with an
// empty head is a constraint.
struct PositiveRule {
    std::vector<AtomId> head;
    std::vector<AtomId> body;
};
struct PositiveProgram {
    std::vector<PositiveRule> rules;
};

// The Gelfond-Lifschitz reduct of the program (facts included as empty-body
// rules, weak constraints excluded) with respect to an interpretation: rules
// whose negated atoms intersect the interpretation are dropped, remaining
// negative literals are deleted.
PositiveProgram gl_reduct(const SolverProgram& program, const std::set<AtomId>& interpretation);

// True iff the interpretation satisfies every rule and constraint and no
// proper subset of it does.
bool is_minimal_model(const PositiveProgram& program, const std::set<AtomId>& interpretation);

// Total violated weight per level under the program's weak constraints.
// Identical ground weak constraints (same signed body, weight, and level)
// are counted once. Levels that occur in the program appear in the result
// even when their total is zero.
std::map<int, std::int64_t> weak_cost(const SolverProgram& program,
                                      const std::set<AtomId>& interpretation);

// Lexicographic cost comparison, higher levels dominating; absent levels
// count as zero.
bool cost_less(const std::map<int, std::int64_t>& a, const std::map<int, std::int64_t>& b);

// Table-independent answer set for cross-pipeline comparison.
struct NamedAnswerSet {
    std::vector<std::string> atoms; // sorted canonical text
    std::map<int, std::int64_t> cost;

    bool operator==(const NamedAnswerSet&) const = default;
    bool operator<(const NamedAnswerSet& other) const;
};

NamedAnswerSet to_named(const AnswerSet& set, const AtomTable& table);
std::vector<NamedAnswerSet> to_named(const std::vector<AnswerSet>& sets, const AtomTable& table);

// `{atom1, atom2, ...}` with atoms sorted by predicate then arguments.
std::string format_answer_set(const AnswerSet& set, const AtomTable& table);

// `COST <w>@<l> ...` with one entry per level >= 1, ascending; returns an
// empty string when no such level exists.
std::string format_cost(const std::map<int, std::int64_t>& cost);

// Independent oracle: full naive instantiation of P over all constants of
// P and F (no increments, no tailoring, own atom table), then answer_sets.
std::vector<NamedAnswerSet> brute_force_oracle(const Program& program,
                                               const std::vector<Atom>& facts,
                                               const SolveRequest& request = {});

} // namespace incasp
