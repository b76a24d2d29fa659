#include "incasp/engine.hpp"

#include <chrono>
#include <set>
#include <utility>

#include "incasp/dependency.hpp"

namespace incasp {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

MultiShotEngine::MultiShotEngine(Program program, EngineConfig config)
    : program_(std::move(program)),
      config_(config),
      store_(),
      grounder_(program_, config.tailoring) {}

ShotOutcome MultiShotEngine::run_shot(const std::vector<Atom>& facts, bool solve) {
    ShotOutcome outcome;

    auto ground_start = std::chrono::steady_clock::now();
    outcome.delta = store_.begin_shot(facts);
    outcome.counters = grounder_.ground_shot(store_);
    outcome.view = store_.extract_solver_view();
    outcome.grounding_seconds = seconds_since(ground_start);

    // End-of-shot forgetting happens before solving: the captured view is
    // self-contained, so a solver failure cannot leave the store half-updated.
    store_.apply_annotations(program_);

    if (solve) {
        auto solve_start = std::chrono::steady_clock::now();
        outcome.models = answer_sets(outcome.view, store_.table(), config_.solve);
        outcome.solving_seconds = seconds_since(solve_start);
        outcome.solved = true;
    }
    return outcome;
}

void MultiShotEngine::forget(char what) {
    if (what == 'r') {
        store_.forget_rules();
        return;
    }
    if (what == 'p') {
        store_.forget_rules();
        std::set<PredicateKey> predicates;
        for (const Rule& rule : program_.rules) {
            for (const Atom& a : rule.head) predicates.insert(predicate_of(a));
            for (const Literal& l : rule.body) predicates.insert(predicate_of(l.atom));
        }
        store_.forget_predicates(predicates);
        return;
    }
    throw Error(std::string("unknown forget kind '") + what + "': expected 'r' or 'p'");
}

} // namespace incasp
