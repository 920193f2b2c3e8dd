// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// Budgeted program execution and three-valued formula evaluation over an
// arbitrary structure, plus bounded validity sweeps and divergence
// certificates. Truth values follow the strong Kleene tables; Unknown marks
// a verdict the budgets could not settle and is only ever strengthened to
// False by a checked divergence certificate.

#ifndef ALWB_SEMANTICS_HPP
#define ALWB_SEMANTICS_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "alwb/models.hpp"
#include "alwb/syntax.hpp"

namespace alwb {

// ---------------------------------------------------------------------------
// Errors

/// Artifact-level evaluation fault: unbound variable, unsupported operation
/// reached during evaluation, malformed input. Never used for ordinary
/// non-termination, which is reported through outcomes and Unknown.
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Truth values (strong Kleene)

enum class Truth { False, Unknown, True };

Truth t_not(Truth a);
Truth t_and(Truth a, Truth b);
Truth t_or(Truth a, Truth b);
Truth t_implies(Truth a, Truth b);
std::string to_string(Truth t);

// ---------------------------------------------------------------------------
// Valuations: individual variables to carrier elements, boolean variables to
// booleans. The two namespaces are disjoint.

struct Valuation {
  std::map<std::string, Elem> elems;
  std::map<std::string, bool> bools;
};

// ---------------------------------------------------------------------------
// Evaluation configuration

struct EvalConfig {
  long step_budget = 10000;   // program steps per run
  long iter_bound = 64;       // iteration depth explored for U[.] / I[.]
  long carrier_bound = 6;     // enumerate() bound for quantifier sweeps
  bool trace_on = false;      // record valuation snapshots during runs
  bool certificates_enabled = true;  // allow Unknown -> False via certificates
};

// ---------------------------------------------------------------------------
// Running programs

/// One trace row: the step count when the snapshot was taken and the traced
/// variables' values at that point (restricted to the traced columns).
struct TraceRow {
  long step = 0;
  Valuation state;
};

struct Trace {
  std::vector<std::string> vars;  // column order: assigned variables, sorted
  std::vector<TraceRow> rows;     // rows[0] is the initial state
};

struct Halted {
  Valuation final;
  long steps = 0;
};
struct BudgetExhausted {
  Valuation last;  // state when the budget ran out
  long steps = 0;
};
struct RuntimeError {
  std::string reason;
  long steps = 0;
};

struct RunResult {
  std::variant<Halted, BudgetExhausted, RuntimeError> outcome;
  Trace trace;  // populated when cfg.trace_on

  bool halted() const { return std::holds_alternative<Halted>(outcome); }
  bool exhausted() const { return std::holds_alternative<BudgetExhausted>(outcome); }
  bool errored() const { return std::holds_alternative<RuntimeError>(outcome); }
};

/// Execute k from v. Step accounting: each assignment and each guard test
/// costs one step; skip costs nothing. Deterministic throughout.
RunResult run_program(const ProgramPtr& k, const StructurePtr& s, const Valuation& v,
                      const EvalConfig& cfg);

/// Render a trace as a fixed text table: header "step | x | y", one row per
/// snapshot, fields separated by " | ".
std::string render_trace(const Trace& trace, const Structure& s);

// ---------------------------------------------------------------------------
// Evaluating terms, open formulas, formulas

/// Total on bound variables; raises EvalError on unbound ones and forwards
/// UnsupportedOperation from the structure.
Elem eval_term(const TermPtr& t, const StructurePtr& s, const Valuation& v);

/// Open formulas are program-free and quantifier-free, hence two-valued.
bool eval_open(const OpenPtr& g, const StructurePtr& s, const Valuation& v);

/// Three-valued evaluation. Boxes over non-halting runs give Unknown unless
/// a registered divergence certificate proves the loop can never exit, in
/// which case the box is False. U[.]/I[.] explore iterates up to
/// cfg.iter_bound; quantifiers sweep enumerate(cfg.carrier_bound) and are
/// exact only on structures reporting the sweep exhaustive.
Truth eval_formula(const FormulaPtr& f, const StructurePtr& s, const Valuation& v,
                   const EvalConfig& cfg);

/// Least i <= cfg.iter_bound with iterate(k, i, body) true at v, if any.
/// Shares the evaluation rules of U[.]; used for witness reporting.
std::optional<long> least_union_witness(const ProgramPtr& k, const FormulaPtr& body,
                                        const StructurePtr& s, const Valuation& v,
                                        const EvalConfig& cfg);

// ---------------------------------------------------------------------------
// Bounded validation

struct ValidUpToBound {};
struct Refuted {
  Valuation counterexample;
};
struct Inconclusive {};

struct ValidationResult {
  std::variant<ValidUpToBound, Refuted, Inconclusive> verdict;
  long valuations_checked = 0;

  bool valid() const { return std::holds_alternative<ValidUpToBound>(verdict); }
  bool refuted() const { return std::holds_alternative<Refuted>(verdict); }
  bool inconclusive() const { return std::holds_alternative<Inconclusive>(verdict); }
};

/// Sweep every free individual variable of f over enumerate(var_bound) and
/// every free boolean variable over {false, true}; evaluate under cfg.
/// ValidUpToBound if every valuation gives True, Refuted (with the first
/// counterexample in sweep order) if any gives False, else Inconclusive.
ValidationResult bounded_validate(const FormulaPtr& f, const StructurePtr& s,
                                  const EvalConfig& cfg, long var_bound);

// ---------------------------------------------------------------------------
// Divergence certificates

struct Certified {
  std::string certificate;  // name of the certificate that fired
};
struct CertificateFailed {
  long step = 0;       // first live step where an obligation broke (see reason)
  std::string reason;  // which obligation failed
};

struct CertificateResult {
  std::variant<Certified, CertificateFailed> outcome;
  bool certified() const { return std::holds_alternative<Certified>(outcome); }
};

/// Check a divergence certificate for the while-loop k at state v:
///  - the invariant holds at v;
///  - through n_steps live loop iterations from v, the invariant is preserved
///    and keeps implying the guard;
///  - the invariant is inductive on the sampled carrier: for every valuation
///    of the loop's variables drawn from enumerate(cfg.carrier_bound), if the
///    invariant and the guard hold, one body pass preserves the invariant,
///    and the invariant implies the guard.
/// `inv` may be a caller-supplied predicate; eval_formula uses the
/// structure's registered certificates through the same checks.
CertificateResult check_divergence_certificate(
    const ProgramPtr& k, const StructurePtr& s, const Valuation& v,
    const DivergenceCertificate::Invariant& inv, long n_steps, const EvalConfig& cfg,
    const std::string& cert_name = "supplied");

/// Name of the registered certificate that certifies divergence of k at v,
/// if any (the integration point used by eval_formula on exhausted boxes).
std::optional<std::string> certified_divergence(const ProgramPtr& k, const StructurePtr& s,
                                                const Valuation& v, const EvalConfig& cfg);

}  // namespace alwb

#endif  // ALWB_SEMANTICS_HPP
