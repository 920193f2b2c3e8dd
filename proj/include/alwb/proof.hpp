#pragma once

#include "alwb/semantics.hpp"
#include "alwb/syntax.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace alwb {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct UnknownAxiom : std::runtime_error {
  explicit UnknownAxiom(const std::string& what) : std::runtime_error(what) {}
};

struct NotFirstOrder : std::runtime_error {
  explicit NotFirstOrder(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Schema matching
//
// Axiom schemas Ax1..Ax23 are pattern trees over metavariables. Sorts:
//   alpha, beta, delta        : arbitrary formulas
//   gamma, gamma2             : open formulas
//   K, M                      : programs
//   tau                       : terms
//   x, y                      : individual variables
//   q                         : boolean variables
// Matching is plain first-order structural unification: each metavariable
// binds on first occurrence and must agree on every later occurrence.
// Substitution patterns like alpha(x/tau) are solved after their operands
// are bound and verified by re-substitution.
// ---------------------------------------------------------------------------

struct Bindings {
  std::map<std::string, FormulaPtr> formulas;   // alpha, beta, delta
  std::map<std::string, OpenPtr> opens;         // gamma, gamma2
  std::map<std::string, ProgramPtr> programs;   // K, M
  std::map<std::string, TermPtr> terms;         // tau
  std::map<std::string, std::string> ind_vars;  // x, y
  std::map<std::string, std::string> bool_vars; // q
};

// True iff `id` names a known axiom schema (Ax1..Ax23).
bool schema_exists(const std::string& id);

// All schema ids in numeric order: Ax1..Ax23.
std::vector<std::string> schema_ids();

// Match `conclusion` against the named schema. `seed` pre-binds
// metavariables (used for explicit `bind` entries in scripts); a seeded
// binding that disagrees with the matched one is a mismatch.
std::optional<Bindings> match_schema(const std::string& schema_id,
                                     const FormulaPtr& conclusion,
                                     const Bindings* seed = nullptr);

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

enum class StepVerdict {
  OK,
  SchemaMismatch,
  SideConditionViolated,
  PremiseMissing,
  TrustedLemmaRefuted,
  OmegaSampleFailed,
};

std::string to_string(StepVerdict v);

// Finitary rule application. Rule ids: R1, R2, R2', R6, R7, D1, D2.
// Premises must be listed in rule order. `extras` may carry consistency
// hints (e.g. K="y := 0" for R2); a hint that contradicts the matched
// structure is a mismatch. R3/R4/R5 are omega rules and are rejected here.
StepVerdict check_rule(const std::string& rule_id,
                       const std::vector<FormulaPtr>& premises,
                       const FormulaPtr& conclusion,
                       const std::map<std::string, std::string>& extras = {});

// ---------------------------------------------------------------------------
// Theories
// ---------------------------------------------------------------------------

// Returns the named specific axiom of a theory.
//   Th0, Th2: names "1".."9", "11", "12", "induction"
//   Th1     : names "1".."9", "induction"
//   Th3     : names "I", "M", "S", "A", "L", "P", "O"
// Axioms are registered in open form (no outer universal closure) so that
// bounded validation can sweep their free variables. "induction" requires
// `phi`, a first-order formula in the distinguished variable x; the result
// is phi(x/0) & forall x (phi -> phi(x/s(x))) -> forall x phi.
// Throws UnknownAxiom / NotFirstOrder.
FormulaPtr theory_axiom(const std::string& theory, const std::string& name,
                        const FormulaPtr* phi = nullptr);

// True iff the formula contains no program constructs (Box/IterUnion/IterInter).
bool is_first_order(const FormulaPtr& f);

// ---------------------------------------------------------------------------
// Proof scripts
// ---------------------------------------------------------------------------

struct ScriptStep {
  enum class Just { Axiom, Theory, Rule, Omega, Trusted };
  std::string id;
  std::string formula_text;
  FormulaPtr formula; // null for template-local steps until instantiation
  Just kind = Just::Axiom;
  // Axiom
  std::string schema_id;
  std::map<std::string, std::string> binds;
  // Theory
  std::string theory;
  std::string axiom_name;
  std::string phi_text;
  // Rule
  std::string rule_id;
  std::vector<std::string> premise_ids;
  std::map<std::string, std::string> extras;
  // Omega
  std::string omega_rule;
  std::string template_id;
  long samples = 0;
  // Trusted
  std::string trusted_name;
  long validate_bound = 0;
  long validate_budget = 0;
};

struct ScriptTemplate {
  std::string id;
  std::string index_var;
  std::vector<ScriptStep> steps; // formulas kept as text; expanded per sample
};

struct ProofScript {
  std::vector<ScriptStep> steps;
  std::map<std::string, ScriptTemplate> templates;
};

// Parses the proof-script text format:
//   step <id>:
//     formula: <formula>
//     by: axiom <AxN> [bind <mv>=<value> ...]
//       | theory <ThK> <name> [phi=<value>]
//       | rule <R1|R2|R2'|R6|R7|D1|D2> from <id,...> [with <k>=<v> ...]
//       | omega <R3|R4|R5> template <id> samples <n>
//       | trusted <name> validate bound=<n> budget=<n>
// plus omega premise templates:
//   template <id> index <var>:
//     <step blocks>
//   end
// Values with spaces are double-quoted. Template step formulas may use
// [K]^<var> / [K]^<digits> for iterated modalities; the marker expands to
// that many copies of [K] when the template is instantiated.
// Blank lines and lines starting with # are ignored. Throws SyntaxError.
ProofScript parse_proof_script(const std::string& text);

struct StepReport {
  std::string id;
  StepVerdict verdict = StepVerdict::OK;
  long omega_samples = -1; // >= 0 for omega steps
  long failed_sample = -1; // >= 0 for OmegaSampleFailed
  std::string detail;      // extra diagnostics (not part of the verdict token)
};

struct CheckReport {
  std::vector<StepReport> steps;
  bool accepted = false;
  std::string rejected_at;           // first failing step id if not accepted
  std::vector<std::string> trusted;  // trusted-lemma names in first-use order
  std::string render() const;        // deterministic text report
};

// Checks a script in order. Trusted steps run bounded_validate on the
// standard structure with the step's declared bound/budget. Failed steps
// still record their stated formulas, so later steps are checked against
// what was claimed; the overall verdict is REJECTED at the first failure.
CheckReport check_proof(const ProofScript& script, const EvalConfig& cfg = {});

// Convenience: parse + check.
CheckReport check_proof_text(const std::string& text, const EvalConfig& cfg = {});

// Trusted-lemma screening: bounded_validate on `s` with the given bounds.
// Returns OK or TrustedLemmaRefuted.
StepVerdict validate_trusted(const FormulaPtr& formula, const StructurePtr& s,
                             long var_bound, long step_budget);

// ---------------------------------------------------------------------------
// Shipped demonstration instances
// ---------------------------------------------------------------------------

// At least three concrete instances per axiom schema, each matching its
// schema and expected to bounded-validate without refutation on the
// standard structure.
std::vector<std::pair<std::string, FormulaPtr>> axiom_demo_instances();

} // namespace alwb
