#pragma once

#include "incasp/engine.hpp"
#include "incasp/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace incasp {

// A multi-shot run described by files: a program and one fact file per shot.
struct ShotScript {
    std::string program_path;
    std::vector<std::string> fact_paths;
};

// First non-empty, non-# line names the program file, each further line one
// shot's fact file; relative paths resolve against the script's directory.
ShotScript load_script(const std::string& path);

struct ShotMetrics {
    int shot = 0;
    double grounding_seconds = 0.0;
    double solving_seconds = 0.0;
    double cumulative_seconds = 0.0;
    std::int64_t instances_attempted = 0;
    std::int64_t instances_added = 0;
    std::int64_t rules_reinstated = 0;
    std::int64_t literals_restored = 0;
    std::int64_t store_rules = 0; // live stored instances after the shot
    std::int64_t store_atoms = 0; // accumulated possibly-true atoms
};

enum class BenchMode {
    Incremental, // one engine across all shots
    Scratch      // a fresh engine per shot, grounding from zero
};

struct BenchResult {
    std::vector<ShotMetrics> metrics;                // one row per shot
    std::vector<std::vector<NamedAnswerSet>> models; // per shot, sorted
};

BenchResult run_multishot(const ShotScript& script, BenchMode mode,
                          const EngineConfig& config = {});

// Runs the script incrementally, from scratch, and through the naive oracle,
// comparing the complete answer-set lists of every shot. Returns the empty
// string on agreement, else a description of the first mismatch including
// the symmetric difference.
std::string verify_equivalence(const ShotScript& script, const EngineConfig& config = {});

// Header plus one row per shot, in ShotMetrics field order.
std::string emit_csv(const std::vector<ShotMetrics>& metrics);

} // namespace incasp
