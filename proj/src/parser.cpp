#include "incasp/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace incasp {

namespace {

enum class Tok : std::uint8_t {
    Ident,
    Variable,
    Integer,
    LParen,
    RParen,
    Comma,
    Dot,
    DotDot,
    Pipe,
    If,     // :-
    WeakIf, // :~
    LBracket,
    RBracket,
    At,
    Slash,
    Annotation, // %@name
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t number = 0;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }
    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_trivia();
        current_.line = line_;
        current_.column = column_;
        if (pos_ >= text_.size()) {
            current_.kind = Tok::End;
            current_.text.clear();
            return;
        }
        char c = text_[pos_];
        if (c == '%') {
            // skip_trivia leaves only %@ in place
            bump();
            bump(); // '@'
            std::string name;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                name += text_[pos_];
                bump();
            }
            if (name.empty()) fail("expected annotation name after %@");
            current_.kind = Tok::Annotation;
            current_.text = std::move(name);
            return;
        }
        if (std::islower(static_cast<unsigned char>(c))) {
            current_.kind = Tok::Ident;
            current_.text = read_word();
            return;
        }
        if (std::isupper(static_cast<unsigned char>(c))) {
            current_.kind = Tok::Variable;
            current_.text = read_word();
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            bool negative = c == '-';
            if (negative) bump();
            std::int64_t value = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                value = value * 10 + (text_[pos_] - '0');
                bump();
            }
            current_.kind = Tok::Integer;
            current_.number = negative ? -value : value;
            return;
        }
        switch (c) {
        case '(': bump(); current_.kind = Tok::LParen; return;
        case ')': bump(); current_.kind = Tok::RParen; return;
        case ',': bump(); current_.kind = Tok::Comma; return;
        case '|': bump(); current_.kind = Tok::Pipe; return;
        case '[': bump(); current_.kind = Tok::LBracket; return;
        case ']': bump(); current_.kind = Tok::RBracket; return;
        case '@': bump(); current_.kind = Tok::At; return;
        case '/': bump(); current_.kind = Tok::Slash; return;
        case '.':
            bump();
            if (pos_ < text_.size() && text_[pos_] == '.') {
                bump();
                current_.kind = Tok::DotDot;
            } else {
                current_.kind = Tok::Dot;
            }
            return;
        case ':':
            bump();
            if (pos_ < text_.size() && text_[pos_] == '-') {
                bump();
                current_.kind = Tok::If;
                return;
            }
            if (pos_ < text_.size() && text_[pos_] == '~') {
                bump();
                current_.kind = Tok::WeakIf;
                return;
            }
            fail("expected ':-' or ':~'");
        default:
            fail(std::string("unexpected character '") + c + "'");
        }
    }

    void skip_trivia() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else if (c == '%') {
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '@') return; // annotation
                while (pos_ < text_.size() && text_[pos_] != '\n') bump();
            } else {
                return;
            }
        }
    }

    std::string read_word() {
        std::string word;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            word += text_[pos_];
            bump();
        }
        return word;
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(line_, column_, message);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    Token current_;
};

// A parsed term that may still be an interval; intervals are legal in facts only.
struct PTerm {
    Term term;
    bool is_interval = false;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    int line = 1;
    int column = 1;
};

struct PAtom {
    std::string predicate;
    std::vector<PTerm> terms;
    int line = 1;
    int column = 1;

    bool has_interval() const {
        return std::any_of(terms.begin(), terms.end(), [](const PTerm& t) { return t.is_interval; });
    }
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    ParsedUnit parse_unit(bool facts_only) {
        ParsedUnit unit;
        bool rule_forget_pending = false;
        int pending_line = 0;
        int pending_column = 0;
        while (lex_.peek().kind != Tok::End) {
            if (lex_.peek().kind == Tok::Annotation) {
                Token ann = lex_.take();
                if (facts_only) {
                    throw ParseError(ann.line, ann.column, "annotations are not allowed in fact files");
                }
                if (ann.text == "global_forget_predicate") {
                    unit.annotations.push_back(parse_global_forget());
                } else if (ann.text == "rule_forget") {
                    expect(Tok::LParen, "expected '('");
                    expect(Tok::RParen, "expected ')'");
                    expect(Tok::Dot, "expected '.'");
                    rule_forget_pending = true;
                    pending_line = ann.line;
                    pending_column = ann.column;
                } else {
                    throw ParseError(ann.line, ann.column, "unknown annotation %@" + ann.text);
                }
                continue;
            }
            bool was_rule = parse_statement(unit, facts_only);
            if (rule_forget_pending) {
                if (!was_rule) {
                    throw ParseError(pending_line, pending_column,
                                     "%@rule_forget() must be followed by a rule");
                }
                Annotation a;
                a.kind = Annotation::Kind::RuleForget;
                a.rule_index = static_cast<int>(unit.rules.size()) - 1;
                unit.annotations.push_back(a);
                rule_forget_pending = false;
            }
        }
        if (rule_forget_pending) {
            throw ParseError(pending_line, pending_column, "%@rule_forget() must be followed by a rule");
        }
        return unit;
    }

private:
    Annotation parse_global_forget() {
        expect(Tok::LParen, "expected '('");
        Token name = expect(Tok::Ident, "expected predicate name");
        expect(Tok::Slash, "expected '/'");
        Token arity = expect(Tok::Integer, "expected arity");
        if (arity.number < 0) {
            throw ParseError(arity.line, arity.column, "arity must be nonnegative");
        }
        expect(Tok::RParen, "expected ')'");
        expect(Tok::Dot, "expected '.'");
        Annotation a;
        a.kind = Annotation::Kind::GlobalForgetPredicate;
        a.predicate = name.text;
        a.arity = static_cast<int>(arity.number);
        return a;
    }

    // Returns true if the statement produced a rule (rather than facts).
    bool parse_statement(ParsedUnit& unit, bool facts_only) {
        // copy: the peeked token is overwritten as the statement is consumed,
        // and `first` anchors diagnostics that fire at the end of the rule
        Token first = lex_.peek();
        if (first.kind == Tok::If || first.kind == Tok::WeakIf) {
            if (facts_only) {
                throw ParseError(first.line, first.column, "fact files may contain only facts");
            }
            bool weak = lex_.take().kind == Tok::WeakIf;
            Rule rule;
            rule.kind = weak ? RuleKind::Weak : RuleKind::Constraint;
            rule.body = parse_body();
            expect(Tok::Dot, "expected '.'");
            if (weak) parse_weak_tail(rule);
            finish_rule(unit, std::move(rule), first);
            return true;
        }
        if (first.kind != Tok::Ident) {
            throw ParseError(first.line, first.column, "expected a rule or fact");
        }
        std::vector<PAtom> head;
        head.push_back(parse_atom());
        while (lex_.peek().kind == Tok::Pipe) {
            lex_.take();
            head.push_back(parse_atom());
        }
        if (lex_.peek().kind == Tok::If) {
            if (facts_only) {
                const Token& t = lex_.peek();
                throw ParseError(t.line, t.column, "fact files may contain only facts");
            }
            lex_.take();
            Rule rule;
            rule.body = parse_body();
            expect(Tok::Dot, "expected '.'");
            for (const PAtom& a : head) rule.head.push_back(to_plain_atom(a));
            finish_rule(unit, std::move(rule), first);
            return true;
        }
        expect(Tok::Dot, "expected '.'");
        if (head.size() > 1) {
            if (facts_only) {
                throw ParseError(first.line, first.column, "fact files may contain only facts");
            }
            Rule rule;
            for (const PAtom& a : head) rule.head.push_back(to_plain_atom(a));
            finish_rule(unit, std::move(rule), first);
            return true;
        }
        // A single head atom with no body: a fact, unless it needs variables.
        if (!facts_only && atom_has_variable(head.front())) {
            Rule rule;
            rule.head.push_back(to_plain_atom(head.front()));
            finish_rule(unit, std::move(rule), first);
            return true;
        }
        expand_fact(head.front(), unit.facts);
        return false;
    }

    std::vector<Literal> parse_body() {
        std::vector<Literal> body;
        while (true) {
            Literal lit;
            if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "not") {
                lex_.take();
                lit.negated = true;
            }
            lit.atom = to_plain_atom(parse_atom());
            body.push_back(std::move(lit));
            if (lex_.peek().kind != Tok::Comma) break;
            lex_.take();
        }
        return body;
    }

    void parse_weak_tail(Rule& rule) {
        expect(Tok::LBracket, "expected '[' after weak constraint");
        Token weight = expect(Tok::Integer, "expected weight");
        if (weight.number < 0) {
            throw ParseError(weight.line, weight.column, "negative weights are not supported");
        }
        expect(Tok::At, "expected '@'");
        Token level = expect(Tok::Integer, "expected level");
        if (level.number < 0) {
            throw ParseError(level.line, level.column, "negative levels are not supported");
        }
        expect(Tok::RBracket, "expected ']'");
        rule.weight = weight.number;
        rule.level = static_cast<int>(level.number);
    }

    PAtom parse_atom() {
        Token name = expect(Tok::Ident, "expected predicate name");
        PAtom atom;
        atom.predicate = name.text;
        atom.line = name.line;
        atom.column = name.column;
        if (lex_.peek().kind != Tok::LParen) return atom;
        lex_.take();
        while (true) {
            atom.terms.push_back(parse_term());
            if (lex_.peek().kind != Tok::Comma) break;
            lex_.take();
        }
        expect(Tok::RParen, "expected ')'");
        return atom;
    }

    PTerm parse_term() {
        const Token& first = lex_.peek();
        PTerm out;
        out.line = first.line;
        out.column = first.column;
        switch (first.kind) {
        case Tok::Integer: {
            Token lo = lex_.take();
            if (lex_.peek().kind == Tok::DotDot) {
                lex_.take();
                Token hi = expect(Tok::Integer, "expected interval upper bound");
                out.is_interval = true;
                out.lo = lo.number;
                out.hi = hi.number;
                return out;
            }
            out.term = Term::integer(lo.number);
            return out;
        }
        case Tok::Ident:
            out.term = Term::symbol(lex_.take().text);
            return out;
        case Tok::Variable:
            out.term = Term::variable(lex_.take().text);
            return out;
        default:
            throw ParseError(first.line, first.column, "expected a term");
        }
    }

    static bool atom_has_variable(const PAtom& atom) {
        return std::any_of(atom.terms.begin(), atom.terms.end(),
                           [](const PTerm& t) { return !t.is_interval && t.term.is_variable(); });
    }

    // Converts a pattern atom for use inside a rule; intervals are rejected.
    static Atom to_plain_atom(const PAtom& atom) {
        Atom out;
        out.predicate = atom.predicate;
        out.terms.reserve(atom.terms.size());
        for (const PTerm& t : atom.terms) {
            if (t.is_interval) {
                throw ParseError(t.line, t.column, "intervals are only allowed in facts");
            }
            out.terms.push_back(t.term);
        }
        return out;
    }

    static void expand_fact(const PAtom& atom, std::vector<Atom>& out) {
        for (const PTerm& t : atom.terms) {
            if (t.is_interval && t.lo > t.hi) {
                throw ParseError(t.line, t.column,
                                 "empty interval " + std::to_string(t.lo) + ".." + std::to_string(t.hi));
            }
            if (!t.is_interval && t.term.is_variable()) {
                throw ParseError(t.line, t.column, "facts must be ground");
            }
        }
        Atom base;
        base.predicate = atom.predicate;
        base.terms.resize(atom.terms.size());
        expand_fact_rec(atom, 0, base, out);
    }

    static void expand_fact_rec(const PAtom& atom, std::size_t index, Atom& base, std::vector<Atom>& out) {
        if (index == atom.terms.size()) {
            out.push_back(base);
            return;
        }
        const PTerm& t = atom.terms[index];
        if (!t.is_interval) {
            base.terms[index] = t.term;
            expand_fact_rec(atom, index + 1, base, out);
            return;
        }
        for (std::int64_t v = t.lo; v <= t.hi; ++v) {
            base.terms[index] = Term::integer(v);
            expand_fact_rec(atom, index + 1, base, out);
        }
    }

    void finish_rule(ParsedUnit& unit, Rule rule, const Token& at) {
        SafetyResult safety = check_safety(rule);
        if (!safety.ok) {
            std::string vars;
            for (std::size_t i = 0; i < safety.unsafe_variables.size(); ++i) {
                if (i > 0) vars += ", ";
                vars += safety.unsafe_variables[i];
            }
            throw ParseError(at.line, at.column,
                             "unsafe variables " + vars + " in rule: " + incasp::to_string(rule));
        }
        unit.rules.push_back(std::move(rule));
    }

    Token expect(Tok kind, const std::string& message) {
        if (lex_.peek().kind != kind) {
            const Token& t = lex_.peek();
            throw ParseError(t.line, t.column, message);
        }
        return lex_.take();
    }

    Lexer lex_;
};

} // namespace

ParsedUnit parse_program(std::string_view text) {
    return Parser(text).parse_unit(false);
}

std::vector<Atom> parse_facts(std::string_view text) {
    return Parser(text).parse_unit(true).facts;
}

SafetyResult check_safety(const Rule& rule) {
    std::set<std::string> safe;
    for (const Literal& lit : rule.body) {
        if (lit.negated) continue;
        for (const Term& t : lit.atom.terms) {
            if (t.is_variable()) safe.insert(t.name);
        }
    }
    std::set<std::string> unsafe;
    auto scan = [&](const Atom& atom) {
        for (const Term& t : atom.terms) {
            if (t.is_variable() && !safe.count(t.name)) unsafe.insert(t.name);
        }
    };
    for (const Atom& a : rule.head) scan(a);
    for (const Literal& lit : rule.body) {
        if (lit.negated) scan(lit.atom);
    }
    SafetyResult result;
    result.ok = unsafe.empty();
    result.unsafe_variables.assign(unsafe.begin(), unsafe.end());
    return result;
}

std::string to_string(const ParsedUnit& unit) {
    std::string out;
    for (const Annotation& a : unit.annotations) {
        if (a.kind == Annotation::Kind::GlobalForgetPredicate) {
            out += "%@global_forget_predicate(" + a.predicate + "/" + std::to_string(a.arity) + ").\n";
        }
    }
    for (std::size_t i = 0; i < unit.rules.size(); ++i) {
        for (const Annotation& a : unit.annotations) {
            if (a.kind == Annotation::Kind::RuleForget && a.rule_index == static_cast<int>(i)) {
                out += "%@rule_forget().\n";
            }
        }
        out += to_string(unit.rules[i]) + "\n";
    }
    for (const Atom& fact : unit.facts) {
        out += to_string(fact) + ".\n";
    }
    return out;
}

void append_unit(Program& program, const ParsedUnit& unit) {
    int base = static_cast<int>(program.rules.size());
    for (const Rule& rule : unit.rules) {
        Rule copy = rule;
        copy.id = static_cast<int>(program.rules.size());
        program.rules.push_back(std::move(copy));
    }
    for (const Atom& fact : unit.facts) {
        Rule r;
        r.id = static_cast<int>(program.rules.size());
        r.head.push_back(fact);
        program.rules.push_back(std::move(r));
    }
    for (const Annotation& a : unit.annotations) {
        if (a.kind == Annotation::Kind::GlobalForgetPredicate) {
            GlobalForget gf{a.predicate, a.arity};
            bool known = std::any_of(program.forget_predicates.begin(), program.forget_predicates.end(),
                                     [&](const GlobalForget& g) { return g == gf; });
            if (!known) program.forget_predicates.push_back(std::move(gf));
        } else {
            program.forget_rules.push_back(base + a.rule_index);
        }
    }
}

} // namespace incasp
