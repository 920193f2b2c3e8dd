// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// Abstract syntax for terms, open (program-free, quantifier-free) formulas,
// while-programs and algorithmic formulas, plus the concrete-syntax parser,
// the canonical printer, and the variable/substitution toolbox.

#ifndef ALWB_SYNTAX_HPP
#define ALWB_SYNTAX_HPP

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace alwb {

// ---------------------------------------------------------------------------
// Errors

/// Raised by parse() on malformed input; carries position and expectations.
struct SyntaxError : std::runtime_error {
  int line;
  int column;
  std::vector<std::string> expected;
  SyntaxError(std::string msg, int line_, int column_,
              std::vector<std::string> expected_ = {})
      : std::runtime_error(std::move(msg)),
        line(line_),
        column(column_),
        expected(std::move(expected_)) {}
};

/// Raised when an operation is applied to syntax of the wrong sort
/// (e.g. substituting a term for a boolean variable).
struct SortError : std::logic_error {
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Terms

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Zero, Succ, Pred, Add, Mul, Monus };
  Kind kind;
  std::string name;  // Var
  TermPtr a, b;      // unary: a; binary: a, b

  static TermPtr var(std::string n);
  static TermPtr zero();
  static TermPtr succ(TermPtr t);
  static TermPtr pred(TermPtr t);
  static TermPtr add(TermPtr l, TermPtr r);
  static TermPtr mul(TermPtr l, TermPtr r);
  static TermPtr monus(TermPtr l, TermPtr r);
};

// ---------------------------------------------------------------------------
// Open formulas: quantifier-free, program-free

struct OpenFormula;
using OpenPtr = std::shared_ptr<const OpenFormula>;

struct OpenFormula {
  enum class Kind { Eq, Less, TrueConst, FalseConst, And, Or, Implies, Not, BoolVar };
  Kind kind;
  TermPtr t1, t2;  // Eq, Less
  OpenPtr f1, f2;  // connectives (Not uses f1)
  std::string name;  // BoolVar

  static OpenPtr eq(TermPtr l, TermPtr r);
  static OpenPtr less(TermPtr l, TermPtr r);
  static OpenPtr true_const();
  static OpenPtr false_const();
  static OpenPtr o_and(OpenPtr l, OpenPtr r);
  static OpenPtr o_or(OpenPtr l, OpenPtr r);
  static OpenPtr o_implies(OpenPtr l, OpenPtr r);
  static OpenPtr o_not(OpenPtr f);
  static OpenPtr bool_var(std::string n);
};

// ---------------------------------------------------------------------------
// Programs: deterministic while-programs; guards are open formulas

struct Program;
using ProgramPtr = std::shared_ptr<const Program>;

struct Program {
  enum class Kind { Assign, BoolAssign, Seq, If, While, Skip };
  Kind kind;
  std::string target;     // Assign / BoolAssign left-hand side
  TermPtr rhs_term;       // Assign
  OpenPtr rhs_open;       // BoolAssign
  OpenPtr guard;          // If / While
  ProgramPtr p1, p2;      // Seq: p1;p2   If: then/else   While: body=p1

  static ProgramPtr assign(std::string x, TermPtr t);
  static ProgramPtr bool_assign(std::string q, OpenPtr g);
  static ProgramPtr seq(ProgramPtr a, ProgramPtr b);
  /// A null else branch stands for the one-armed conditional and is stored
  /// as skip, which is also how it prints and parses.
  static ProgramPtr if_(OpenPtr g, ProgramPtr then_b, ProgramPtr else_b = nullptr);
  static ProgramPtr while_(OpenPtr g, ProgramPtr body);
  static ProgramPtr skip();
};

// ---------------------------------------------------------------------------
// Algorithmic formulas

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Open, Box, IterUnion, IterInter, Forall, Exists, Not, And, Or, Implies };
  Kind kind;
  OpenPtr open;        // Open
  ProgramPtr prog;     // Box, IterUnion, IterInter
  FormulaPtr f1, f2;   // sub-formulas (Not/Box/Iter*/quantifiers use f1)
  std::string var;     // Forall / Exists bound variable

  static FormulaPtr wrap(OpenPtr g);
  static FormulaPtr box(ProgramPtr k, FormulaPtr f);
  static FormulaPtr iter_union(ProgramPtr k, FormulaPtr f);
  static FormulaPtr iter_inter(ProgramPtr k, FormulaPtr f);
  static FormulaPtr forall(std::string x, FormulaPtr f);
  static FormulaPtr exists(std::string x, FormulaPtr f);
  // The four connectives fold into an OpenFormula when every operand is Open,
  // keeping trees canonical: the parser and printer agree on a unique form.
  static FormulaPtr f_not(FormulaPtr f);
  static FormulaPtr f_and(FormulaPtr l, FormulaPtr r);
  static FormulaPtr f_or(FormulaPtr l, FormulaPtr r);
  static FormulaPtr f_implies(FormulaPtr l, FormulaPtr r);
};

/// (α -> β) & (β -> α); the concrete grammar has no biconditional.
FormulaPtr f_iff(FormulaPtr l, FormulaPtr r);

// ---------------------------------------------------------------------------
// Structural equality (pointer-independent, exact tree comparison)

bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const OpenPtr& a, const OpenPtr& b);
bool equal(const ProgramPtr& a, const ProgramPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

// ---------------------------------------------------------------------------
// Printing (canonical concrete syntax: parse(print(x)) == x)

std::string print(const TermPtr& t);
std::string print(const OpenPtr& g);
std::string print(const ProgramPtr& k);
std::string print(const FormulaPtr& f);

// ---------------------------------------------------------------------------
// Parsing (whitespace-insensitive; errors carry line/column + expectations)

TermPtr parse_term(const std::string& text);
OpenPtr parse_open(const std::string& text);
ProgramPtr parse_program(const std::string& text);
FormulaPtr parse_formula(const std::string& text);

/// True iff `name` is a lexically valid, non-reserved identifier.
bool is_identifier(const std::string& name);

// ---------------------------------------------------------------------------
// Variables

/// Free individual variables. Quantifiers bind; boxes and assignments do not:
/// free_vars of [n := s(n)](n = m) is {n, m}.
std::set<std::string> free_vars(const FormulaPtr& f);
std::set<std::string> free_vars(const OpenPtr& g);
std::set<std::string> free_vars(const TermPtr& t);

/// Free boolean variables (?q occurrences; boolean-assign targets included).
std::set<std::string> free_bool_vars(const FormulaPtr& f);
std::set<std::string> free_bool_vars(const OpenPtr& g);

/// Every individual variable occurring in the program (read or written).
std::set<std::string> vars_of_program(const ProgramPtr& k);
/// Left-hand sides of all assignments (individual and boolean targets).
std::set<std::string> assigned_vars(const ProgramPtr& k);

// ---------------------------------------------------------------------------
// Substitution (capture-avoiding; bound variables that would capture a
// variable of `t` are renamed deterministically with the smallest number of
// trailing primes making them fresh)

TermPtr substitute(const TermPtr& s, const std::string& x, const TermPtr& t);
OpenPtr substitute(const OpenPtr& g, const std::string& x, const TermPtr& t);
ProgramPtr substitute(const ProgramPtr& k, const std::string& x, const TermPtr& t);
FormulaPtr substitute(const FormulaPtr& f, const std::string& x, const TermPtr& t);

/// Replace the boolean variable ?q by an open formula.
OpenPtr substitute_bool(const OpenPtr& g, const std::string& q, const OpenPtr& h);
FormulaPtr substitute_bool(const FormulaPtr& f, const std::string& q, const OpenPtr& h);

// ---------------------------------------------------------------------------
// Program iteration: iterate(k, i, f) = [k][k]...[k] f (i boxes)

FormulaPtr iterate(const ProgramPtr& k, long i, const FormulaPtr& f);

}  // namespace alwb

#endif  // ALWB_SYNTAX_HPP
