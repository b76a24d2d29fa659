#include "incasp/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include "incasp/parser.hpp"

namespace incasp {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string strip(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

Program load_program(const std::string& path) {
    Program program;
    append_unit(program, parse_program(read_file(path)));
    return program;
}

std::string format_named(const NamedAnswerSet& set) {
    std::string out = "{";
    for (std::size_t i = 0; i < set.atoms.size(); ++i) {
        if (i > 0) out += ", ";
        out += set.atoms[i];
    }
    out += "}";
    std::string cost = format_cost(set.cost);
    if (!cost.empty()) out += " " + cost;
    return out;
}

std::string format_difference(const std::vector<NamedAnswerSet>& left,
                              const std::vector<NamedAnswerSet>& right,
                              const std::string& left_name, const std::string& right_name) {
    std::vector<NamedAnswerSet> only_left;
    std::vector<NamedAnswerSet> only_right;
    std::set_difference(left.begin(), left.end(), right.begin(), right.end(),
                        std::back_inserter(only_left));
    std::set_difference(right.begin(), right.end(), left.begin(), left.end(),
                        std::back_inserter(only_right));
    std::string out;
    out += "  only " + left_name + ":";
    for (const NamedAnswerSet& s : only_left) out += " " + format_named(s);
    if (only_left.empty()) out += " (none)";
    out += "\n  only " + right_name + ":";
    for (const NamedAnswerSet& s : only_right) out += " " + format_named(s);
    if (only_right.empty()) out += " (none)";
    out += "\n";
    return out;
}

} // namespace

ShotScript load_script(const std::string& path) {
    std::filesystem::path script_path(path);
    std::filesystem::path base = script_path.parent_path();
    auto resolve = [&](const std::string& rel) {
        std::filesystem::path p(rel);
        return p.is_absolute() ? p.string() : (base / p).string();
    };

    ShotScript script;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        std::string entry = strip(line);
        if (entry.empty() || entry.front() == '#') continue;
        if (script.program_path.empty())
            script.program_path = resolve(entry);
        else
            script.fact_paths.push_back(resolve(entry));
    }
    if (script.program_path.empty()) throw Error("script names no program file: " + path);
    return script;
}

BenchResult run_multishot(const ShotScript& script, BenchMode mode, const EngineConfig& config) {
    Program program = load_program(script.program_path);

    std::vector<std::vector<Atom>> shots;
    shots.reserve(script.fact_paths.size());
    for (const std::string& path : script.fact_paths)
        shots.push_back(parse_facts(read_file(path)));

    BenchResult result;
    double cumulative = 0.0;

    std::unique_ptr<MultiShotEngine> engine;
    if (mode == BenchMode::Incremental)
        engine = std::make_unique<MultiShotEngine>(program, config);

    for (std::size_t i = 0; i < shots.size(); ++i) {
        if (mode == BenchMode::Scratch)
            engine = std::make_unique<MultiShotEngine>(program, config);

        ShotOutcome outcome = engine->run_shot(shots[i]);

        ShotMetrics row;
        row.shot = static_cast<int>(i) + 1;
        row.grounding_seconds = outcome.grounding_seconds;
        row.solving_seconds = outcome.solving_seconds;
        cumulative += outcome.grounding_seconds + outcome.solving_seconds;
        row.cumulative_seconds = cumulative;
        row.instances_attempted = outcome.counters.instances_attempted;
        row.instances_added = outcome.counters.instances_added;
        row.rules_reinstated = outcome.counters.rules_reinstated;
        row.literals_restored = outcome.counters.literals_restored;
        row.store_rules = static_cast<std::int64_t>(engine->store().rule_count());
        row.store_atoms = static_cast<std::int64_t>(engine->store().af().size());
        result.metrics.push_back(row);

        std::vector<NamedAnswerSet> named = to_named(outcome.models, engine->store().table());
        std::sort(named.begin(), named.end());
        result.models.push_back(std::move(named));
    }
    return result;
}

std::string verify_equivalence(const ShotScript& script, const EngineConfig& config) {
    EngineConfig full = config;
    full.solve.count = 0;      // every answer set
    full.solve.optimize = false;

    BenchResult incremental = run_multishot(script, BenchMode::Incremental, full);
    BenchResult scratch = run_multishot(script, BenchMode::Scratch, full);

    Program program = load_program(script.program_path);

    for (std::size_t i = 0; i < script.fact_paths.size(); ++i) {
        std::vector<Atom> facts = parse_facts(read_file(script.fact_paths[i]));
        std::vector<NamedAnswerSet> oracle = brute_force_oracle(program, facts, full.solve);
        std::sort(oracle.begin(), oracle.end());

        const std::vector<NamedAnswerSet>& inc = incremental.models[i];
        const std::vector<NamedAnswerSet>& scr = scratch.models[i];
        std::string shot = "shot " + std::to_string(i + 1);
        if (inc != scr)
            return shot + ": incremental and scratch answer sets differ\n" +
                   format_difference(inc, scr, "incremental", "scratch");
        if (inc != oracle)
            return shot + ": incremental and oracle answer sets differ\n" +
                   format_difference(inc, oracle, "incremental", "oracle");
    }
    return "";
}

std::string emit_csv(const std::vector<ShotMetrics>& metrics) {
    std::string out = "shot,grounding_seconds,solving_seconds,cumulative_seconds,"
                      "instances_attempted,instances_added,rules_reinstated,"
                      "literals_restored,store_rules,store_atoms\n";
    char buffer[64];
    for (const ShotMetrics& row : metrics) {
        out += std::to_string(row.shot);
        std::snprintf(buffer, sizeof buffer, ",%.6f,%.6f,%.6f", row.grounding_seconds,
                      row.solving_seconds, row.cumulative_seconds);
        out += buffer;
        out += "," + std::to_string(row.instances_attempted);
        out += "," + std::to_string(row.instances_added);
        out += "," + std::to_string(row.rules_reinstated);
        out += "," + std::to_string(row.literals_restored);
        out += "," + std::to_string(row.store_rules);
        out += "," + std::to_string(row.store_atoms);
        out += "\n";
    }
    return out;
}

} // namespace incasp
