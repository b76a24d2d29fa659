#pragma once

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "incasp/engine.hpp"
#include "incasp/parser.hpp"
#include "incasp/solver.hpp"
#include "incasp/store.hpp"

namespace incasp::test {

// A scratch directory with a unique name, removed when the test scope ends.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path = std::filesystem::temp_directory_path() /
               (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    // Writes `content` under `name` and returns the absolute path.
    std::string write(const std::string& name, const std::string& content) const {
        std::ofstream out(path / name);
        out << content;
        return (path / name).string();
    }

    std::string dir() const { return path.string(); }
};

inline Atom atom(std::string predicate, std::vector<Term> terms = {}) {
    return Atom{std::move(predicate), std::move(terms)};
}

inline Term num(std::int64_t n) { return Term::integer(n); }
inline Term sym(std::string s) { return Term::symbol(std::move(s)); }
inline Term var(std::string v) { return Term::variable(std::move(v)); }

// Builds a fixed program from source text.
inline Program program_from(std::string_view text) {
    Program p;
    append_unit(p, parse_program(text));
    return p;
}

// The annotated store listing as a sorted multiset of lines.
inline std::vector<std::string> annotated_lines(const OvergroundStore& store) {
    std::vector<std::string> lines;
    std::istringstream in(annotated_dump(store));
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    std::sort(lines.begin(), lines.end());
    return lines;
}

inline std::vector<std::string> sorted(std::vector<std::string> lines) {
    std::sort(lines.begin(), lines.end());
    return lines;
}

// ---------------------------------------------------------------------------
// Reference stable-model checker, coded directly from the textbook definition
// over plain sets — independently of the production solver's representation.
// ---------------------------------------------------------------------------

struct RefProgram {
    // rules as (heads, body signed literals); facts folded as empty-body rules
    std::vector<std::pair<std::vector<AtomId>, std::vector<std::pair<AtomId, bool>>>> rules;
};

inline RefProgram ref_program(const SolverProgram& program) {
    RefProgram ref;
    for (AtomId f : program.facts) ref.rules.push_back({{f}, {}});
    for (const SolverRule& rule : program.rules) {
        std::vector<std::pair<AtomId, bool>> body;
        for (const SolverLiteral& lit : rule.body) body.emplace_back(lit.atom, lit.negated);
        ref.rules.push_back({rule.head, body});
    }
    return ref;
}

inline bool ref_satisfies(const RefProgram& program, const std::set<AtomId>& interp,
                          const std::set<AtomId>& reduct_base) {
    // checks `interp` against the reduct of the program w.r.t. `reduct_base`
    for (const auto& [head, body] : program.rules) {
        bool kept = true;
        bool fires = true;
        for (const auto& [a, negated] : body) {
            if (negated) {
                if (reduct_base.count(a)) kept = false;
            } else if (!interp.count(a)) {
                fires = false;
            }
        }
        if (!kept || !fires) continue;
        bool head_true = false;
        for (AtomId h : head)
            if (interp.count(h)) head_true = true;
        if (!head_true) return false;
    }
    return true;
}

// Textbook definition: I is stable iff it is a minimal model of the reduct
// of the program with respect to I. Subset minimality is checked by brute
// force over all proper subsets.
inline bool ref_is_stable(const RefProgram& program, const std::set<AtomId>& interp) {
    if (!ref_satisfies(program, interp, interp)) return false;
    std::vector<AtomId> elements(interp.begin(), interp.end());
    std::uint64_t full = (std::uint64_t{1} << elements.size()) - 1;
    for (std::uint64_t mask = 0; mask < full; ++mask) {
        std::set<AtomId> subset;
        for (std::size_t i = 0; i < elements.size(); ++i)
            if (mask >> i & 1) subset.insert(elements[i]);
        if (ref_satisfies(program, subset, interp)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Random multi-shot cases: a small safe program over predicates a/1, b/2,
// c/1 and constants 1..3, plus five shots of random facts. Everything is
// generated as text so the parser is part of the pipeline under test.
// ---------------------------------------------------------------------------

struct RandomCase {
    std::string program_text;
    std::vector<std::string> shot_texts; // five fact files
};

inline RandomCase generate_case(std::mt19937& rng) {
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    const std::vector<std::pair<std::string, int>> predicates = {{"a", 1}, {"b", 2}, {"c", 1}};

    auto random_literal = [&](const std::vector<std::string>& vars, bool allow_vars) {
        const auto& [name, arity] = predicates[static_cast<std::size_t>(pick(3))];
        std::string text = name + "(";
        for (int i = 0; i < arity; ++i) {
            if (i > 0) text += ",";
            if (allow_vars && !vars.empty() && pick(100) < 60)
                text += vars[static_cast<std::size_t>(pick(static_cast<int>(vars.size())))];
            else
                text += std::to_string(1 + pick(3));
        }
        return text + ")";
    };

    std::string program;
    int rule_count = 2 + pick(5); // 2..6
    for (int r = 0; r < rule_count; ++r) {
        // positive body first: its variables make everything else safe
        int positives = 1 + pick(3);
        std::vector<std::string> vars;
        if (pick(100) < 70) vars.push_back("X");
        if (pick(100) < 40) vars.push_back("Y");

        std::vector<std::string> body;
        for (int i = 0; i < positives; ++i) body.push_back(random_literal(vars, true));
        // variables are safe only if they actually occur positively
        std::vector<std::string> safe_vars;
        for (const std::string& v : vars)
            for (const std::string& lit : body)
                if (lit.find(v) != std::string::npos) {
                    safe_vars.push_back(v);
                    break;
                }

        int negatives = pick(3);
        for (int i = 0; i < negatives; ++i) body.push_back("not " + random_literal(safe_vars, true));

        std::string body_text;
        for (std::size_t i = 0; i < body.size(); ++i)
            body_text += (i ? ", " : "") + body[i];

        int shape = pick(10);
        if (shape < 1) {
            program += ":- " + body_text + ".\n";
        } else if (shape < 3) {
            program += ":~ " + body_text + ". [" + std::to_string(1 + pick(3)) + "@" +
                       std::to_string(1 + pick(2)) + "]\n";
        } else if (shape < 5) {
            program += random_literal(safe_vars, true) + " | " + random_literal(safe_vars, true) +
                       " :- " + body_text + ".\n";
        } else {
            program += random_literal(safe_vars, true) + " :- " + body_text + ".\n";
        }
    }

    RandomCase result;
    result.program_text = program;
    for (int shot = 0; shot < 5; ++shot) {
        std::string facts;
        int fact_count = 1 + pick(6);
        for (int i = 0; i < fact_count; ++i) facts += random_literal({}, false) + ". ";
        result.shot_texts.push_back(facts + "\n");
    }
    return result;
}

// Runs one case through the incremental pipeline, the scratch pipeline, and
// the naive oracle; returns a description of the first mismatch or "".
inline std::string check_case(const RandomCase& random_case, bool tailoring = true) {
    Program program = program_from(random_case.program_text);

    EngineConfig config;
    config.tailoring = tailoring;
    config.solve.count = 0;
    config.solve.optimize = false;

    MultiShotEngine incremental(program, config);
    for (std::size_t shot = 0; shot < random_case.shot_texts.size(); ++shot) {
        std::vector<Atom> facts = parse_facts(random_case.shot_texts[shot]);

        ShotOutcome inc = incremental.run_shot(facts);
        std::vector<NamedAnswerSet> inc_named = to_named(inc.models, incremental.store().table());
        std::sort(inc_named.begin(), inc_named.end());

        MultiShotEngine scratch(program, config);
        ShotOutcome scr = scratch.run_shot(facts);
        std::vector<NamedAnswerSet> scr_named = to_named(scr.models, scratch.store().table());
        std::sort(scr_named.begin(), scr_named.end());

        std::vector<NamedAnswerSet> oracle = brute_force_oracle(program, facts, config.solve);
        std::sort(oracle.begin(), oracle.end());

        if (inc_named != scr_named) return "shot " + std::to_string(shot + 1) + ": incremental != scratch";
        if (inc_named != oracle) return "shot " + std::to_string(shot + 1) + ": incremental != oracle";
    }
    return "";
}

} // namespace incasp::test
