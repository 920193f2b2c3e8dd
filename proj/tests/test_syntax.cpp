// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// Syntax layer: lexical rules, parser/printer agreement on canonical forms,
// connective folding, variables, substitution, and iteration.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "alwb/syntax.hpp"
#include "support.hpp"

using namespace alwb;
namespace ts = alwb::testsupport;

TEST_CASE("identifier lexicon") {
  CHECK(is_identifier("x"));
  CHECK(is_identifier("x'"));
  CHECK(is_identifier("x'y"));
  CHECK(is_identifier("acc_1"));
  CHECK(is_identifier("odd"));  // prefix of a reserved word, but not reserved
  CHECK_FALSE(is_identifier(""));
  CHECK_FALSE(is_identifier("'x"));
  CHECK_FALSE(is_identifier("0x"));
  CHECK_FALSE(is_identifier("x y"));
  for (const char* w : {"0", "s", "P", "if", "then", "else", "fi", "while", "do", "od", "skip",
                        "true", "false", "forall", "exists", "U", "I"})
    CHECK_FALSE(is_identifier(w));
}

TEST_CASE("term parse and print") {
  CHECK(print(parse_term("s(P((x+y)))")) == "s(P((x + y)))");
  CHECK(print(parse_term("((a*b)-.c)")) == "((a * b) -. c)");
  CHECK(print(Term::monus(Term::var("x"), Term::var("y"))) == "(x -. y)");
  CHECK(parse_term("P(x)")->kind == Term::Kind::Pred);
  CHECK(parse_term("0")->kind == Term::Kind::Zero);
  CHECK(equal(parse_term(" s ( 0 ) "), Term::succ(Term::zero())));

  CHECK_THROWS_AS(parse_term("3"), SyntaxError);        // no numerals
  CHECK_THROWS_AS(parse_term("od"), SyntaxError);       // reserved word
  CHECK_THROWS_AS(parse_term("s(x, y)"), SyntaxError);  // unary functor
  CHECK_THROWS_AS(parse_term("x + y"), SyntaxError);    // binary ops need parens
  CHECK_THROWS_AS(parse_term("(x + y"), SyntaxError);
  CHECK_THROWS_AS(parse_term(""), SyntaxError);
}

TEST_CASE("open formula parse and print") {
  CHECK(print(parse_open("!(x=0)")) == "!(x = 0)");
  CHECK(print(parse_open("((x<y)&true)")) == "((x < y) & true)");
  CHECK(print(parse_open("((?p | false) -> (0 = 0))")) == "((?p | false) -> (0 = 0))");
  CHECK(parse_open("?halt'")->kind == OpenFormula::Kind::BoolVar);

  CHECK_THROWS_AS(parse_open("x"), SyntaxError);         // bare identifier is not open
  CHECK_THROWS_AS(parse_open("((x = 0))"), SyntaxError); // no parenthesized singleton
  CHECK_THROWS_AS(parse_open("(x = 0) & (y = 0)"), SyntaxError);  // binary needs own parens
}

TEST_CASE("program parse and print") {
  CHECK(print(parse_program("skip")) == "skip");
  CHECK(print(parse_program("{x:=0;y:=s(x)}")) == "{ x := 0 ; y := s(x) }");
  CHECK(print(parse_program("if(x=0)then x:=s(x)fi")) == "if (x = 0) then x := s(x) fi");
  CHECK(print(parse_program("if(x=0)then skip else ?q:=true fi")) ==
        "if (x = 0) then skip else ?q := true fi");
  CHECK(print(parse_program("while!(n=m)do n:=(n-.m)od")) ==
        "while !(n = m) do n := (n -. m) od");
  CHECK(equal(parse_program("  while ! ( n = m ) do n := s ( n ) od  "),
              parse_program("while !(n=m) do n:=s(n) od")));

  // A one-armed conditional carries skip as its else branch, so the two
  // spellings denote the same program.
  ProgramPtr one_armed = Program::if_(parse_open("(x = 0)"), parse_program("x := s(x)"));
  CHECK(print(one_armed) == "if (x = 0) then x := s(x) fi");
  CHECK(equal(one_armed, parse_program("if (x = 0) then x := s(x) else skip fi")));

  CHECK_THROWS_AS(parse_program("x := "), SyntaxError);
  CHECK_THROWS_AS(parse_program("{ x := 0 }"), SyntaxError);  // seq is binary
  CHECK_THROWS_AS(parse_program("while (x = 0) do skip"), SyntaxError);
}

TEST_CASE("formula parse and print: modal chains and quantifiers") {
  // A modal operator directly inside a box abuts it; any other body is
  // separated by one space.
  FormulaPtr f = Formula::box(
      Program::assign("y", Term::zero()),
      Formula::iter_union(Program::assign("y", Term::succ(Term::var("y"))),
                          Formula::wrap(OpenFormula::eq(Term::var("x"), Term::var("y")))));
  CHECK(print(f) == "[y := 0]U[y := s(y)] (x = y)");
  CHECK(equal(parse_formula(print(f)), f));

  // Quantifier directly under a box: no parentheses, since the grammar has no
  // parenthesized-singleton production.
  FormulaPtr g = Formula::box(
      Program::assign("z", Term::zero()),
      Formula::exists("x", Formula::wrap(OpenFormula::eq(Term::var("x"), Term::var("x")))));
  CHECK(print(g) == "[z := 0] exists x . (x = x)");
  CHECK(equal(parse_formula(print(g)), g));
  CHECK_THROWS_AS(parse_formula("[z := 0](exists x . (x = x))"), SyntaxError);

  // A quantifier body extends as far as possible: a binary connective whose
  // left side is quantified needs its own parentheses.
  FormulaPtr imp = Formula::f_implies(
      Formula::exists("w", Formula::wrap(OpenFormula::eq(Term::var("x"), Term::var("x")))),
      Formula::wrap(OpenFormula::eq(Term::zero(), Term::zero())));
  CHECK(print(imp) == "(exists w . (x = x) -> (0 = 0))");
  CHECK(equal(parse_formula(print(imp)), imp));

  // Negated box.
  FormulaPtr nb = Formula::f_not(Formula::box(
      Program::assign("x", Term::zero()),
      Formula::wrap(OpenFormula::eq(Term::var("x"), Term::zero()))));
  CHECK(print(nb) == "![x := 0] (x = 0)");
  CHECK(equal(parse_formula(print(nb)), nb));

  CHECK_THROWS_AS(parse_formula("((0 = 0))"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("((x = y) <-> (y = x))"), SyntaxError);  // no biconditional
}

TEST_CASE("connectives fold to open formulas") {
  FormulaPtr a = Formula::wrap(OpenFormula::eq(Term::var("x"), Term::zero()));
  FormulaPtr b = Formula::wrap(OpenFormula::less(Term::zero(), Term::var("x")));
  CHECK(Formula::f_and(a, b)->kind == Formula::Kind::Open);
  CHECK(Formula::f_not(a)->kind == Formula::Kind::Open);
  // A modal operand blocks folding.
  FormulaPtr boxed = Formula::box(Program::skip(), a);
  CHECK(Formula::f_and(a, boxed)->kind == Formula::Kind::And);
  // The parser produces the folded form, so both routes agree.
  CHECK(equal(parse_formula("((x = 0) & (0 < x))"), Formula::f_and(a, b)));
}

TEST_CASE("f_iff expands to a conjunction of implications") {
  FormulaPtr a = Formula::box(Program::skip(),
                              Formula::wrap(OpenFormula::eq(Term::var("x"), Term::zero())));
  FormulaPtr b = Formula::wrap(OpenFormula::less(Term::zero(), Term::var("x")));
  FormulaPtr iff = f_iff(a, b);
  REQUIRE(iff->kind == Formula::Kind::And);
  CHECK(equal(iff->f1, Formula::f_implies(a, b)));
  CHECK(equal(iff->f2, Formula::f_implies(b, a)));
}

TEST_CASE("free variables") {
  FormulaPtr f = parse_formula("[n := s(n)] (n = m)");
  CHECK(free_vars(f) == std::set<std::string>{"n", "m"});
  CHECK(free_vars(parse_formula("forall x . (x = y)")) == std::set<std::string>{"y"});
  CHECK(free_vars(parse_formula("exists x . [y := x] (y = 0)")) == std::set<std::string>{"y"});
  CHECK(free_bool_vars(parse_formula("((?p & ?q) -> [?p := false] true)")) ==
        std::set<std::string>{"p", "q"});
  CHECK(vars_of_program(parse_program("while !(n = m) do n := (n -. m) od")) ==
        std::set<std::string>{"n", "m"});
  CHECK(assigned_vars(parse_program("{ x := 0 ; if true then ?q := false else y := 0 fi }")) ==
        std::set<std::string>{"x", "q", "y"});
}

TEST_CASE("substitution") {
  // Plain replacement.
  CHECK(print(substitute(parse_term("(x + s(x))"), "x", parse_term("0"))) == "(0 + s(0))");
  // Bound occurrences are untouched.
  CHECK(print(substitute(parse_formula("forall x . (x = y)"), "x", parse_term("0"))) ==
        "forall x . (x = y)");
  // Capture avoidance: the binder is renamed with a prime.
  FormulaPtr f = parse_formula("exists y . (x = y)");
  CHECK(print(substitute(f, "x", parse_term("y"))) == "exists y' . (y = y')");
  // Substitution reaches into programs.
  CHECK(print(substitute(parse_formula("[x := s(x)] (x = z)"), "z", parse_term("0"))) ==
        "[x := s(x)] (x = 0)");
  // Boolean substitution.
  CHECK(print(substitute_bool(parse_open("(?q -> ?p)"), "q", parse_open("(x = 0)"))) ==
        "((x = 0) -> ?p)");
}

TEST_CASE("iterate builds box towers") {
  ProgramPtr k = parse_program("x := s(x)");
  FormulaPtr f = parse_formula("(x = y)");
  CHECK(equal(iterate(k, 0, f), f));
  CHECK(equal(iterate(k, 2, f), Formula::box(k, Formula::box(k, f))));
  CHECK(print(iterate(k, 2, f)) == "[x := s(x)][x := s(x)] (x = y)");
}

TEST_CASE("structural equality is pointer-independent") {
  CHECK(equal(parse_formula("[x := 0] (x = 0)"), parse_formula("[ x := 0 ] ( x = 0 )")));
  CHECK_FALSE(equal(parse_formula("[x := 0] (x = 0)"), parse_formula("[x := 0] (x = y)")));
  CHECK_FALSE(equal(parse_term("s(0)"), parse_term("P(0)")));
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_formula("(0 = 0");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line >= 1);
    CHECK(e.column >= 1);
  }
  try {
    parse_program("x :=\n  @");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("seeded round-trip corpus") {
  ts::Gen gen(ts::corpus_seed());
  for (int i = 0; i < 200; ++i) {
    TermPtr t = gen.term(3);
    CHECK(equal(parse_term(print(t)), t));
    OpenPtr o = gen.open(3);
    CHECK(equal(parse_open(print(o)), o));
    ProgramPtr p = gen.program(3);
    CHECK(equal(parse_program(print(p)), p));
    FormulaPtr f = gen.formula(3);
    CHECK(equal(parse_formula(print(f)), f));
  }
}
