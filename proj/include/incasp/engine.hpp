#pragma once

#include "incasp/core.hpp"
#include "incasp/grounder.hpp"
#include "incasp/solver.hpp"
#include "incasp/store.hpp"

#include <vector>

namespace incasp {

struct EngineConfig {
    bool tailoring = true;
    SolveRequest solve{};
};

// Everything one shot produced, captured before end-of-shot forgetting.
struct ShotOutcome {
    ShotDelta delta;
    ShotCounters counters;
    SolverProgram view;
    std::vector<AnswerSet> models;
    bool solved = false; // false when the shot was ground-only
    double grounding_seconds = 0.0;
    double solving_seconds = 0.0;
};

// The multi-shot loop: a fixed program P, a growing overgrounded store, and
// one incremental grounding + solve per shot. Forget annotations of P are
// applied at the end of every shot, after the view and models are captured.
class MultiShotEngine {
public:
    explicit MultiShotEngine(Program program, EngineConfig config = {});

    MultiShotEngine(const MultiShotEngine&) = delete;
    MultiShotEngine& operator=(const MultiShotEngine&) = delete;

    // Runs one shot on the given input facts. With solve = false the shot is
    // grounded and tailored but no answer sets are computed.
    ShotOutcome run_shot(const std::vector<Atom>& facts, bool solve = true);

    // 'r' drops every stored instance; 'p' additionally drops the accumulated
    // atoms of every predicate that occurs in P.
    void forget(char what);

    const Program& program() const { return program_; }
    const OvergroundStore& store() const { return store_; }
    OvergroundStore& store() { return store_; }
    const IncrementalGrounder& grounder() const { return grounder_; }
    const EngineConfig& config() const { return config_; }

private:
    Program program_; // must outlive grounder_, which refers to it
    EngineConfig config_;
    OvergroundStore store_;
    IncrementalGrounder grounder_;
};

} // namespace incasp
