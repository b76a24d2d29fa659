#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "incasp/error.hpp"

namespace incasp {

// Dense handle for an interned ground atom.
using AtomId = std::int32_t;
inline constexpr AtomId kNoAtom = -1;

inline std::size_t hash_combine(std::size_t seed, std::size_t value) {
    return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

// A term is an integer constant, a symbolic constant, or a variable.
// Integers and symbols live in one constant namespace but never compare equal.
struct Term {
    enum class Kind : std::uint8_t { Integer, Symbol, Variable };

    Kind kind = Kind::Integer;
    std::int64_t number = 0; // Kind::Integer
    std::string name;        // Kind::Symbol / Kind::Variable

    static Term integer(std::int64_t value) {
        Term t;
        t.kind = Kind::Integer;
        t.number = value;
        return t;
    }
    static Term symbol(std::string text) {
        Term t;
        t.kind = Kind::Symbol;
        t.name = std::move(text);
        return t;
    }
    static Term variable(std::string text) {
        Term t;
        t.kind = Kind::Variable;
        t.name = std::move(text);
        return t;
    }

    bool is_variable() const { return kind == Kind::Variable; }
    bool is_constant() const { return kind != Kind::Variable; }

    bool operator==(const Term& other) const {
        if (kind != other.kind) return false;
        return kind == Kind::Integer ? number == other.number : name == other.name;
    }
    bool operator!=(const Term& other) const { return !(*this == other); }
    // Integers order before symbols; used for canonical output only.
    bool operator<(const Term& other) const {
        if (kind != other.kind) return static_cast<int>(kind) < static_cast<int>(other.kind);
        return kind == Kind::Integer ? number < other.number : name < other.name;
    }
};

std::string to_string(const Term& term);

struct Atom {
    std::string predicate;
    std::vector<Term> terms;

    std::size_t arity() const { return terms.size(); }
    bool ground() const {
        for (const Term& t : terms)
            if (t.is_variable()) return false;
        return true;
    }

    bool operator==(const Atom& other) const {
        return predicate == other.predicate && terms == other.terms;
    }
    bool operator!=(const Atom& other) const { return !(*this == other); }
    bool operator<(const Atom& other) const;
};

std::string to_string(const Atom& atom);

struct AtomHash {
    std::size_t operator()(const Atom& atom) const;
};

struct Literal {
    Atom atom;
    bool negated = false;

    bool operator==(const Literal& other) const {
        return negated == other.negated && atom == other.atom;
    }
    bool operator!=(const Literal& other) const { return !(*this == other); }
};

std::string to_string(const Literal& literal);

enum class RuleKind : std::uint8_t {
    Normal,     // one or more head atoms
    Constraint, // empty head
    Weak,       // empty head, weighted at a level
};

// A non-ground rule of the fixed program P. Facts written in program files are
// represented as rules with an empty body.
struct Rule {
    int id = -1;
    std::vector<Atom> head;
    std::vector<Literal> body;
    RuleKind kind = RuleKind::Normal;
    std::int64_t weight = 0; // RuleKind::Weak only
    int level = 0;           // RuleKind::Weak only

    bool operator==(const Rule& other) const {
        return head == other.head && body == other.body && kind == other.kind &&
               weight == other.weight && level == other.level;
    }
};

std::string to_string(const Rule& rule);

// A predicate forgotten after every shot via %@global_forget_predicate(p/n).
struct GlobalForget {
    std::string predicate;
    int arity = 0;

    bool operator==(const GlobalForget& other) const {
        return arity == other.arity && predicate == other.predicate;
    }
};

// The fixed program P, accumulated over pre-run loads.
struct Program {
    std::vector<Rule> rules;
    std::vector<GlobalForget> forget_predicates;
    std::vector<int> forget_rules; // ids of rules whose instances drop after each shot
};

// Maps variable names to constant terms.
class Substitution {
public:
    // `value` must be a constant; binding the same name twice must agree.
    void bind(std::string name, Term value);
    const Term* lookup(std::string_view name) const;
    void pop(); // undo the most recent bind (backtracking joins)

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<std::pair<std::string, Term>> entries_;
};

// Replace variables by their bound constants. Throws Error naming the variable
// if any variable is unbound; the results are fully ground.
Atom apply_substitution(const Atom& atom, const Substitution& subst);
Rule apply_substitution(const Rule& rule, const Substitution& subst);

// Append-only table assigning dense ids to ground atoms.
class AtomTable {
public:
    AtomId intern(const Atom& atom); // throws Error on a non-ground atom
    AtomId find(const Atom& atom) const; // kNoAtom if absent
    const Atom& resolve(AtomId id) const;
    std::size_t size() const { return atoms_.size(); }

private:
    std::vector<Atom> atoms_;
    std::unordered_map<Atom, AtomId, AtomHash> index_;
};

// How a stored body literal is currently simplified away, if at all. Strikes
// happen only when the owning instance is newly added; restoring a literal
// clears the strike for good (old rules are never re-simplified). The
// justifying atom of a strike is always the literal's own atom.
enum class StrikeKind : std::uint8_t {
    None,
    CertainlyTruePositive,
    CertainlyFalseNegative, // representable but never produced (disabled)
};

struct GroundLiteral {
    AtomId atom = kNoAtom;
    bool negated = false;
    StrikeKind strike_kind = StrikeKind::None;

    bool struck() const { return strike_kind != StrikeKind::None; }
};

// A stored ground instance. Deleted rules keep their complete body; `deleted`
// is a rule-level state justified by `delete_reason` (a certainly-true negated
// body atom).
struct GroundRule {
    int origin = -1; // id of the rule of P this instance came from
    std::vector<AtomId> head;
    std::vector<GroundLiteral> body;
    RuleKind kind = RuleKind::Normal;
    std::int64_t weight = 0;
    int level = 0;
    int generation = 0; // shot that created the instance
    bool deleted = false;
    AtomId delete_reason = kNoAtom;
};

// Instance identity: origin, heads, and signed body atoms; metadata excluded.
bool same_instance(const GroundRule& a, const GroundRule& b);

class AtomTable;

// Canonical rule text with struck literals omitted.
std::string effective_text(const GroundRule& rule, const AtomTable& table);
// Rule text with `*lit*` marking struck literals and a "deleted: " prefix on
// deleted rules; used by tests and debug dumps.
std::string annotated_text(const GroundRule& rule, const AtomTable& table);

} // namespace incasp
