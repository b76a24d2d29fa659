#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "incasp/core.hpp"

namespace incasp {

// An %@-directive read from a program file.
struct Annotation {
    enum class Kind { GlobalForgetPredicate, RuleForget };

    Kind kind = Kind::GlobalForgetPredicate;
    std::string predicate; // GlobalForgetPredicate
    int arity = 0;         // GlobalForgetPredicate
    int rule_index = -1;   // RuleForget: index into ParsedUnit::rules

    bool operator==(const Annotation& other) const {
        return kind == other.kind && predicate == other.predicate &&
               arity == other.arity && rule_index == other.rule_index;
    }
};

// One parsed source file. Facts are bare ground atoms (intervals expanded);
// everything with a body, a weak tail, or a disjunctive head is a rule.
struct ParsedUnit {
    std::vector<Rule> rules;
    std::vector<Atom> facts;
    std::vector<Annotation> annotations;
};

struct SafetyResult {
    bool ok = true;
    std::vector<std::string> unsafe_variables; // sorted, unique
};

// Parses rules, facts, and annotations. Throws ParseError with a 1-based
// line/column on syntax errors and on safety violations.
ParsedUnit parse_program(std::string_view text);

// Accepts only facts (intervals allowed). Throws ParseError on anything else.
std::vector<Atom> parse_facts(std::string_view text);

// Every variable occurring anywhere in the rule must occur in at least one
// positive body literal.
SafetyResult check_safety(const Rule& rule);

// Canonical text that parses back to an equal unit.
std::string to_string(const ParsedUnit& unit);

// Appends a parsed unit to the fixed program: assigns rule ids, turns facts
// into empty-body rules, and resolves annotations to global rule ids.
void append_unit(Program& program, const ParsedUnit& unit);

} // namespace incasp
