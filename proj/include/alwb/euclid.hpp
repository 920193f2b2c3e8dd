// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// The gcd suite: built-in named programs and formulas around the subtractive
// gcd loop, independent arithmetic oracles for checking them, the coprime
// disjunct generator with its witness function, and three demo runners whose
// reports are reproduced by the test suite and the CLI.

#ifndef ALWB_EUCLID_HPP
#define ALWB_EUCLID_HPP

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "alwb/semantics.hpp"
#include "alwb/syntax.hpp"

namespace alwb {

// ---------------------------------------------------------------------------
// Errors

/// artifact() was asked for a name the registry does not contain.
struct UnknownArtifact : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An oracle or demo precondition was violated (e.g. gcd of zero).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Artifact registry: named built-in programs and formulas. Every artifact's
// tree is parsed from its canonical grammar string, which print() reproduces.

struct Artifact {
  std::string name;
  std::string note;  // one-line description
  std::variant<ProgramPtr, FormulaPtr> tree;
  std::string text;  // canonical grammar string

  bool is_program() const { return std::holds_alternative<ProgramPtr>(tree); }
  const ProgramPtr& program() const;  // throws DomainError if not a program
  const FormulaPtr& formula() const;  // throws DomainError if not a formula
};

/// Look up a built-in artifact by name. Known names:
///   "E"                subtractive gcd loop over n, m
///   "H"                halting formula of "E" (universally quantified)
///   "H-union"          the same statement through the iteration quantifier
///   "E-nested"         gcd via two one-sided inner subtraction loops
///   "E-remainder-loop" remainder of n by m via repeated subtraction
///   "E-division"       quotient and remainder of n by m
///   "E-gcd-remainder"  gcd via repeated remainder steps
/// Throws UnknownArtifact for any other name.
const Artifact& artifact(const std::string& name);

/// Registry names in their canonical order.
const std::vector<std::string>& artifact_names();

// ---------------------------------------------------------------------------
// Oracles. These live in the harness only: gcd and max are never symbols of
// the object language, so properties mentioning them are checked by asserting
// around object-language runs.

/// Greatest common divisor by brute-force divisor scan (largest d <= min(n,m)
/// dividing both). Throws DomainError unless n, m >= 1.
long gcd_oracle(long n, long m);

/// Standard maximum.
long max_oracle(long n, long m);

/// Number of guard evaluations the subtractive gcd loop performs from (n, m)
/// on the standard naturals: the 1-based ordinal of the iteration whose guard
/// test fails. Computed by direct simulation, independent of the interpreter.
/// Throws DomainError unless n, m >= 1.
long loop_iteration_count(long n, long m);

// ---------------------------------------------------------------------------
// Coprime disjuncts: the infinite disjunction (a.n = b.m over coprime a, b)
// truncated to max(a,b) <= k, plus the witness selector.

struct EngelerDisjunct {
  long a = 1;  // coefficient of n
  long b = 1;  // coefficient of m
  OpenPtr rendered;  // a.n = b.m over variables n, m, numerals as repeated Add
};

/// Render a.n = b.m as an open formula over variables "n" and "m"; the
/// coefficient a appears as the a-fold sum n + n + ... + n (left-nested).
/// Requires a, b >= 1.
OpenPtr render_disjunct(long a, long b);

/// All coprime pairs (a, b) with max(a, b) <= k, ordered by max(a, b)
/// ascending; within one band j = max(a, b), first the pairs (a, j) with a
/// ascending, then the pairs (j, b) with b descending. Requires k >= 1.
std::vector<EngelerDisjunct> engeler_disjunction(long k);

struct EngelerWitness {
  long a = 1;
  long b = 1;
  long k = 1;  // least truncation index whose disjunction contains (a, b)
};

/// The unique coprime (a, b) with a.n = b.m — that is a = m/g, b = n/g for
/// g = gcd(n, m) — and k = max(a, b). Throws DomainError unless n, m >= 1.
EngelerWitness engeler_witness(long n, long m);

// ---------------------------------------------------------------------------
// Demo runners. Each returns a report whose text is the run's trace table
// prefixed by "demo: <name>" and suffixed by "verdict: PASS|FAIL <detail>".

struct DemoReport {
  std::string name;
  bool pass = false;
  std::string detail;  // outcome summary, or the first failed assertion
  std::string text;    // full rendered report
  RunResult run;       // the underlying run, for programmatic inspection
};

/// Run the gcd loop from (n, m) on the standard naturals and assert the final
/// n equals gcd_oracle(n, m). Throws DomainError unless n, m >= 1.
DemoReport demo_standard(long n, long m, const EvalConfig& cfg);

/// Run the gcd loop on the non-standard model from n = NSN(12,0,1),
/// m = NSN(15,0,2) and assert it halts with final n equal (in the model) to
/// NSN(3,0,1).
DemoReport demo_nsn_halt(const EvalConfig& cfg);

/// Run the gcd loop on the non-standard model from n = NSN(12,0,1),
/// m = NSN(15,1,2); assert the budget runs out, every trace row i holds
/// exactly n = NSN(12,0,1) and m = NSN(15-12i,1,2), and the registered
/// fraction-mismatch divergence certificate certifies the loop.
DemoReport demo_nsn_diverge(const EvalConfig& cfg);

/// Run the demo with the given registry name: "standard" (accepts n, m),
/// "nsn-halt", or "nsn-diverge". Throws UnknownArtifact for other names.
DemoReport run_demo(const std::string& name, long n, long m, const EvalConfig& cfg);

/// Names accepted by run_demo.
const std::vector<std::string>& demo_names();

}  // namespace alwb

#endif  // ALWB_EUCLID_HPP
