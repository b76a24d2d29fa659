#include "doctest.h"

#include <random>

#include "incasp/parser.hpp"
#include "support/helpers.hpp"

using namespace incasp;
using namespace incasp::test;

TEST_SUITE("parser") {

TEST_CASE("facts, comments, and intervals") {
    ParsedUnit unit = parse_program("% a comment\n"
                                    "e(3,1). e(1,2).\n"
                                    "q(3).   % trailing comment\n"
                                    "node(1..3).\n"
                                    "empty.\n");
    CHECK(unit.rules.empty());
    REQUIRE(unit.facts.size() == 7);
    CHECK(unit.facts[0] == atom("e", {num(3), num(1)}));
    CHECK(unit.facts[1] == atom("e", {num(1), num(2)}));
    CHECK(unit.facts[2] == atom("q", {num(3)}));
    CHECK(unit.facts[3] == atom("node", {num(1)}));
    CHECK(unit.facts[4] == atom("node", {num(2)}));
    CHECK(unit.facts[5] == atom("node", {num(3)}));
    CHECK(unit.facts[6] == atom("empty"));
}

TEST_CASE("intervals expand as a cross product and may be negative") {
    ParsedUnit unit = parse_program("p(1..2,4..5). q(-1..1).");
    REQUIRE(unit.facts.size() == 7);
    CHECK(unit.facts[0] == atom("p", {num(1), num(4)}));
    CHECK(unit.facts[1] == atom("p", {num(1), num(5)}));
    CHECK(unit.facts[2] == atom("p", {num(2), num(4)}));
    CHECK(unit.facts[3] == atom("p", {num(2), num(5)}));
    CHECK(unit.facts[4] == atom("q", {num(-1)}));
    CHECK(unit.facts[6] == atom("q", {num(1)}));

    CHECK_THROWS_WITH_AS(parse_program("p(3..1)."), "parse error at 1:3: empty interval 3..1",
                         ParseError);
    CHECK_THROWS_AS(parse_program("p(X) :- q(1..2,X)."), ParseError); // intervals only in facts
}

TEST_CASE("rule forms") {
    ParsedUnit unit = parse_program("r(X,Y) :- e(X,Y), not q(X).\n"
                                    "r(X,Z) | s(X,Z) :- e(X,Y), r(Y,Z).\n"
                                    ":- edge(X,Y), col(X,C), col(Y,C).\n"
                                    ":~ not col(1,red). [1@2]\n"
                                    "p(X) | q(X,X) :- r(X,X).\n"
                                    "a | b.\n");
    REQUIRE(unit.rules.size() == 6);
    CHECK(unit.facts.empty());

    CHECK(unit.rules[0].kind == RuleKind::Normal);
    CHECK(unit.rules[0].head.size() == 1);
    CHECK(unit.rules[0].body.size() == 2);
    CHECK(unit.rules[0].body[1].negated);

    CHECK(unit.rules[1].head.size() == 2);

    CHECK(unit.rules[2].kind == RuleKind::Constraint);
    CHECK(unit.rules[2].head.empty());

    CHECK(unit.rules[3].kind == RuleKind::Weak);
    CHECK(unit.rules[3].weight == 1);
    CHECK(unit.rules[3].level == 2);

    // a bare disjunction is a rule, not a fact
    CHECK(unit.rules[5].head.size() == 2);
    CHECK(unit.rules[5].body.empty());
}

TEST_CASE("symbols, integers, and variables in terms") {
    ParsedUnit unit = parse_program("col(X,red) :- node(X), not col(X,blue).");
    const Rule& rule = unit.rules.at(0);
    CHECK(rule.head[0].terms[0] == var("X"));
    CHECK(rule.head[0].terms[1] == sym("red"));
    CHECK(rule.body[1].atom.terms[1] == sym("blue"));
}

TEST_CASE("safety violations are rejected with the offending variables") {
    CHECK_THROWS_WITH_AS(parse_program("p(X) :- q(Y)."),
                         "parse error at 1:1: unsafe variables X in rule: p(X) :- q(Y).",
                         ParseError);
    // a variable occurring only under negation is unsafe
    CHECK_THROWS_WITH_AS(parse_program("p :- q, not r(Z)."),
                         "parse error at 1:1: unsafe variables Z in rule: p :- q, not r(Z).",
                         ParseError);
    // unsafe variables are reported sorted and unique
    CHECK_THROWS_WITH_AS(parse_program(":- not e(Y,X), not e(X,Y)."),
                         "parse error at 1:1: unsafe variables X, Y in rule: :- not e(Y,X), not e(X,Y).",
                         ParseError);
    // weak constraints obey the same safety rule
    CHECK_THROWS_AS(parse_program(":~ not p(X). [1@1]"), ParseError);
    // a body-less head with a variable has nothing to bind it
    CHECK_THROWS_WITH_AS(parse_program("univ(X)."),
                         "parse error at 1:1: unsafe variables X in rule: univ(X).",
                         ParseError);
}

TEST_CASE("check_safety accepts positively bound variables") {
    ParsedUnit unit = parse_program("r(X,Z) | s(X,Z) :- e(X,Y), r(Y,Z), not q(X).");
    SafetyResult result = check_safety(unit.rules.at(0));
    CHECK(result.ok);
    CHECK(result.unsafe_variables.empty());

    Rule unsafe;
    unsafe.head = {atom("p", {var("A"), var("B")})};
    unsafe.body = {Literal{atom("q", {var("B")}), false}, Literal{atom("r", {var("C")}), true}};
    SafetyResult bad = check_safety(unsafe);
    CHECK_FALSE(bad.ok);
    CHECK(bad.unsafe_variables == std::vector<std::string>{"A", "C"});
}

TEST_CASE("syntax errors carry precise positions") {
    CHECK_THROWS_WITH_AS(parse_program("p :- q"), "parse error at 1:7: expected '.'", ParseError);
    CHECK_THROWS_WITH_AS(parse_program("p(1,)."), "parse error at 1:5: expected a term", ParseError);
    CHECK_THROWS_WITH_AS(parse_program("p.\n? q."),
                         "parse error at 2:1: unexpected character '?'", ParseError);
    CHECK_THROWS_WITH_AS(parse_program(": p."), "parse error at 1:2: expected ':-' or ':~'",
                         ParseError);
    CHECK_THROWS_AS(parse_program(":~ p. [1@1"), ParseError);       // missing ']'
    CHECK_THROWS_AS(parse_program(":~ p. 1@1]"), ParseError);       // missing '['
    CHECK_THROWS_AS(parse_program(":~ p. [-1@1]"), ParseError);     // negative weight
    CHECK_THROWS_AS(parse_program(":~ p. [1@-1]"), ParseError);     // negative level
    CHECK_THROWS_AS(parse_program("p(X) :-."), ParseError);         // empty body
    CHECK_THROWS_AS(parse_program("X :- p."), ParseError);          // variable as head name
}

TEST_CASE("fact files accept facts only") {
    std::vector<Atom> facts = parse_facts("e(3,1). e(1,2).\nq(3). node(1..2).");
    REQUIRE(facts.size() == 5);
    CHECK(facts[3] == atom("node", {num(1)}));

    CHECK_THROWS_WITH_AS(parse_facts("p :- q."), "parse error at 1:3: fact files may contain only facts",
                         ParseError);
    CHECK_THROWS_WITH_AS(parse_facts(":- q."), "parse error at 1:1: fact files may contain only facts",
                         ParseError);
    CHECK_THROWS_AS(parse_facts("a | b."), ParseError);
    CHECK_THROWS_AS(parse_facts(":~ q. [1@1]"), ParseError);
    CHECK_THROWS_AS(parse_facts("p(X)."), ParseError); // facts must be ground
    CHECK_THROWS_WITH_AS(parse_facts("%@rule_forget().\np."),
                         "parse error at 1:1: annotations are not allowed in fact files", ParseError);
}

TEST_CASE("annotations attach to predicates and rules") {
    ParsedUnit unit = parse_program("%@global_forget_predicate(obs/2).\n"
                                    "p(X) :- obs(X,Y).\n"
                                    "%@rule_forget().\n"
                                    "q(X) :- p(X).\n");
    REQUIRE(unit.rules.size() == 2);
    REQUIRE(unit.annotations.size() == 2);
    CHECK(unit.annotations[0].kind == Annotation::Kind::GlobalForgetPredicate);
    CHECK(unit.annotations[0].predicate == "obs");
    CHECK(unit.annotations[0].arity == 2);
    CHECK(unit.annotations[1].kind == Annotation::Kind::RuleForget);
    CHECK(unit.annotations[1].rule_index == 1);

    CHECK_THROWS_WITH_AS(parse_program("%@rule_forget().\nfact(1)."),
                         "parse error at 1:1: %@rule_forget() must be followed by a rule", ParseError);
    CHECK_THROWS_WITH_AS(parse_program("%@rule_forget().\n"),
                         "parse error at 1:1: %@rule_forget() must be followed by a rule", ParseError);
    CHECK_THROWS_WITH_AS(parse_program("%@vintage().\n"),
                         "parse error at 1:1: unknown annotation %@vintage", ParseError);
    CHECK_THROWS_AS(parse_program("%@global_forget_predicate(p).\n"), ParseError); // missing /arity
}

TEST_CASE("append_unit assigns ids, folds facts, resolves annotations") {
    Program program;
    append_unit(program, parse_program("p(X) :- e(X).\n%@rule_forget().\nq(X) :- p(X).\ne(1). e(2)."));
    append_unit(program, parse_program("%@global_forget_predicate(e/1).\nr(X) :- q(X)."));

    // two rules + two fact rules from the first unit, one rule from the second
    REQUIRE(program.rules.size() == 5);
    for (std::size_t i = 0; i < program.rules.size(); ++i)
        CHECK(program.rules[i].id == static_cast<int>(i));

    // facts become empty-body single-head rules after the unit's rules
    CHECK(program.rules[2].head == std::vector<Atom>{atom("e", {num(1)})});
    CHECK(program.rules[2].body.empty());
    CHECK(program.rules[4].head == std::vector<Atom>{atom("r", {var("X")})});

    CHECK(program.forget_rules == std::vector<int>{1});
    REQUIRE(program.forget_predicates.size() == 1);
    CHECK(program.forget_predicates[0] == GlobalForget{"e", 1});
}

TEST_CASE("canonical text round-trips") {
    const char* text = "%@global_forget_predicate(obs/1).\n"
                       "%@rule_forget().\n"
                       "r(X,Z) | s(X,Z) :- e(X,Y), r(Y,Z).\n"
                       ":- edge(X,Y), col(X,C), col(Y,C).\n"
                       ":~ not col(1,red). [1@1]\n"
                       "e(3,1).\n"
                       "obs(42).\n";
    ParsedUnit once = parse_program(text);
    std::string canonical = to_string(once);
    ParsedUnit twice = parse_program(canonical);
    CHECK(once.rules == twice.rules);
    CHECK(once.facts == twice.facts);
    CHECK(once.annotations == twice.annotations);
    CHECK(canonical == to_string(twice)); // canonical form is a fixed point
}

TEST_CASE("generated programs round-trip through canonical text") {
    for (int seed = 0; seed < 25; ++seed) {
        std::mt19937 rng(static_cast<unsigned>(7000 + seed));
        RandomCase random_case = generate_case(rng);
        CAPTURE(random_case.program_text);
        ParsedUnit once = parse_program(random_case.program_text);
        ParsedUnit twice = parse_program(to_string(once));
        CHECK(once.rules == twice.rules);
        CHECK(once.facts == twice.facts);
        for (const std::string& shot : random_case.shot_texts) {
            std::vector<Atom> facts_once = parse_facts(shot);
            ParsedUnit unit;
            unit.facts = facts_once;
            CHECK(parse_facts(to_string(unit)) == facts_once);
        }
    }
}

} // TEST_SUITE("parser")
