#include "incasp/core.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace incasp {

std::string to_string(const Term& term) {
    switch (term.kind) {
    case Term::Kind::Integer: return std::to_string(term.number);
    case Term::Kind::Symbol:
    case Term::Kind::Variable: return term.name;
    }
    return {};
}

bool Atom::operator<(const Atom& other) const {
    if (predicate != other.predicate) return predicate < other.predicate;
    if (terms.size() != other.terms.size()) return terms.size() < other.terms.size();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i] != other.terms[i]) return terms[i] < other.terms[i];
    }
    return false;
}

std::string to_string(const Atom& atom) {
    if (atom.terms.empty()) return atom.predicate;
    std::string out = atom.predicate;
    out += '(';
    for (std::size_t i = 0; i < atom.terms.size(); ++i) {
        if (i > 0) out += ',';
        out += to_string(atom.terms[i]);
    }
    out += ')';
    return out;
}

std::size_t AtomHash::operator()(const Atom& atom) const {
    std::size_t seed = std::hash<std::string>{}(atom.predicate);
    for (const Term& t : atom.terms) {
        seed = hash_combine(seed, static_cast<std::size_t>(t.kind));
        if (t.kind == Term::Kind::Integer) {
            seed = hash_combine(seed, std::hash<std::int64_t>{}(t.number));
        } else {
            seed = hash_combine(seed, std::hash<std::string>{}(t.name));
        }
    }
    return seed;
}

std::string to_string(const Literal& literal) {
    return literal.negated ? "not " + to_string(literal.atom) : to_string(literal.atom);
}

std::string to_string(const Rule& rule) {
    std::string out;
    if (rule.kind == RuleKind::Weak) {
        out = ":~ ";
    } else if (rule.head.empty()) {
        out = ":- ";
    } else {
        for (std::size_t i = 0; i < rule.head.size(); ++i) {
            if (i > 0) out += " | ";
            out += to_string(rule.head[i]);
        }
        if (!rule.body.empty()) out += " :- ";
    }
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
        if (i > 0) out += ", ";
        out += to_string(rule.body[i]);
    }
    out += '.';
    if (rule.kind == RuleKind::Weak) {
        out += " [" + std::to_string(rule.weight) + '@' + std::to_string(rule.level) + ']';
    }
    return out;
}

void Substitution::bind(std::string name, Term value) {
    if (value.is_variable()) {
        throw Error("substitution value for " + name + " is not a constant");
    }
    entries_.emplace_back(std::move(name), std::move(value));
}

const Term* Substitution::lookup(std::string_view name) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
        if (it->first == name) return &it->second;
    }
    return nullptr;
}

void Substitution::pop() {
    entries_.pop_back();
}

Atom apply_substitution(const Atom& atom, const Substitution& subst) {
    Atom out;
    out.predicate = atom.predicate;
    out.terms.reserve(atom.terms.size());
    for (const Term& t : atom.terms) {
        if (t.is_variable()) {
            const Term* bound = subst.lookup(t.name);
            if (!bound) throw Error("unbound variable " + t.name);
            out.terms.push_back(*bound);
        } else {
            out.terms.push_back(t);
        }
    }
    return out;
}

Rule apply_substitution(const Rule& rule, const Substitution& subst) {
    Rule out;
    out.id = rule.id;
    out.kind = rule.kind;
    out.weight = rule.weight;
    out.level = rule.level;
    out.head.reserve(rule.head.size());
    for (const Atom& a : rule.head) out.head.push_back(apply_substitution(a, subst));
    out.body.reserve(rule.body.size());
    for (const Literal& l : rule.body) {
        out.body.push_back(Literal{apply_substitution(l.atom, subst), l.negated});
    }
    return out;
}

AtomId AtomTable::intern(const Atom& atom) {
    if (!atom.ground()) {
        throw Error("cannot intern non-ground atom " + to_string(atom));
    }
    auto it = index_.find(atom);
    if (it != index_.end()) return it->second;
    AtomId id = static_cast<AtomId>(atoms_.size());
    atoms_.push_back(atom);
    index_.emplace(atoms_.back(), id);
    return id;
}

AtomId AtomTable::find(const Atom& atom) const {
    auto it = index_.find(atom);
    return it == index_.end() ? kNoAtom : it->second;
}

const Atom& AtomTable::resolve(AtomId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= atoms_.size()) {
        throw Error("unknown atom id " + std::to_string(id));
    }
    return atoms_[static_cast<std::size_t>(id)];
}

bool same_instance(const GroundRule& a, const GroundRule& b) {
    if (a.origin != b.origin || a.head != b.head) return false;
    if (a.body.size() != b.body.size()) return false;
    for (std::size_t i = 0; i < a.body.size(); ++i) {
        if (a.body[i].atom != b.body[i].atom || a.body[i].negated != b.body[i].negated) {
            return false;
        }
    }
    return true;
}

namespace {

std::string ground_rule_text(const GroundRule& rule, const AtomTable& table, bool annotate) {
    std::string out;
    if (annotate && rule.deleted) out += "deleted: ";
    if (rule.kind == RuleKind::Weak) {
        out += ":~ ";
    } else if (rule.head.empty()) {
        out += ":- ";
    } else {
        for (std::size_t i = 0; i < rule.head.size(); ++i) {
            if (i > 0) out += " | ";
            out += to_string(table.resolve(rule.head[i]));
        }
    }
    bool wrote_body = false;
    for (const GroundLiteral& lit : rule.body) {
        if (!annotate && lit.struck()) continue;
        if (!wrote_body && rule.kind == RuleKind::Normal && !rule.head.empty()) out += " :- ";
        if (wrote_body) out += ", ";
        wrote_body = true;
        std::string text = (lit.negated ? "not " : "") + to_string(table.resolve(lit.atom));
        if (annotate && lit.struck()) text = "*" + text + "*";
        out += text;
    }
    out += '.';
    if (rule.kind == RuleKind::Weak) {
        out += " [" + std::to_string(rule.weight) + '@' + std::to_string(rule.level) + ']';
    }
    return out;
}

} // namespace

std::string effective_text(const GroundRule& rule, const AtomTable& table) {
    return ground_rule_text(rule, table, false);
}

std::string annotated_text(const GroundRule& rule, const AtomTable& table) {
    return ground_rule_text(rule, table, true);
}

} // namespace incasp
