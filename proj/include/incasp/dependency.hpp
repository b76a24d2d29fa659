#pragma once

#include "incasp/core.hpp"

#include <compare>
#include <string>
#include <vector>

namespace incasp {

struct PredicateKey {
    std::string name;
    int arity = 0;

    bool operator==(const PredicateKey&) const = default;
    auto operator<=>(const PredicateKey&) const = default;
};

std::string to_string(const PredicateKey& key); // "name/arity"

PredicateKey predicate_of(const Atom& atom);

struct PredicateEdge {
    int from = 0; // index into PredicateGraph::predicates
    int to = 0;
    bool negative = false;

    bool operator==(const PredicateEdge&) const = default;
};

// Predicate dependency graph of a program: one node per predicate occurring
// anywhere in the program, one edge per (body predicate, head predicate)
// pair of a rule with a head, labeled negative when the body literal is
// negated. Distinct predicates sharing a disjunctive head are mutually
// dependent. Constraints and weak constraints contribute nodes only.
struct PredicateGraph {
    std::vector<PredicateKey> predicates; // sorted ascending, unique
    std::vector<PredicateEdge> edges;     // sorted by (from, to, negative), unique

    int index_of(const PredicateKey& key) const; // -1 when absent
    bool has_edge(const PredicateKey& from, const PredicateKey& to) const;
};

// Component evaluation order: strongly connected components of the
// dependency graph in topological order (ties broken by the smallest
// predicate of the ready components), each with the rules whose head lies
// in it; constraints and weak constraints follow all components.
struct ComponentOrder {
    std::vector<std::vector<PredicateKey>> components; // each sorted ascending
    std::vector<std::vector<int>> component_rules;     // rule ids, ascending
    std::vector<int> trailing_rules;                   // rule ids, ascending
};

PredicateGraph build_graph(const Program& program);
ComponentOrder condense(const Program& program, const PredicateGraph& graph);

std::string dump(const PredicateGraph& graph);
std::string dump(const ComponentOrder& order);

} // namespace incasp
