// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT

#include "alwb/euclid.hpp"

#include <algorithm>
#include <sstream>

#include "alwb/models.hpp"

namespace alwb {

// ---------------------------------------------------------------------------
// Artifacts

const ProgramPtr& Artifact::program() const {
  if (!is_program()) throw DomainError("artifact '" + name + "' is a formula, not a program");
  return std::get<ProgramPtr>(tree);
}

const FormulaPtr& Artifact::formula() const {
  if (is_program()) throw DomainError("artifact '" + name + "' is a program, not a formula");
  return std::get<FormulaPtr>(tree);
}

namespace {

Artifact program_artifact(std::string name, std::string note, std::string text) {
  Artifact a;
  a.name = std::move(name);
  a.note = std::move(note);
  a.tree = parse_program(text);
  a.text = std::move(text);
  return a;
}

Artifact formula_artifact(std::string name, std::string note, std::string text) {
  Artifact a;
  a.name = std::move(name);
  a.note = std::move(note);
  a.tree = parse_formula(text);
  a.text = std::move(text);
  return a;
}

std::vector<Artifact> build_registry() {
  const std::string gcd_loop =
      "while !(n = m) do if (m < n) then n := (n -. m) else m := (m -. n) fi od";
  const std::string gcd_body = "if (m < n) then n := (n -. m) else m := (m -. n) fi";
  const std::string positive = "(!(n = 0) & !(m = 0))";

  std::vector<Artifact> r;
  r.push_back(program_artifact("E", "subtractive gcd loop over n and m", gcd_loop));
  r.push_back(formula_artifact(
      "H", "halting statement for the gcd loop: positive inputs reach a state with n = m",
      "forall n . forall m . (" + positive + " -> [" + gcd_loop + "] (n = m))"));
  r.push_back(formula_artifact(
      "H-union", "the halting statement through the iteration quantifier over the loop body",
      "forall n . forall m . (" + positive + " -> U[" + gcd_body + "] (n = m))"));
  r.push_back(program_artifact(
      "E-nested", "gcd via two one-sided inner subtraction loops",
      "while !(n = m) do { while (m < n) do n := (n -. m) od ; "
      "while (n < m) do m := (m -. n) od } od"));
  r.push_back(program_artifact(
      "E-remainder-loop", "remainder of n by m via repeated subtraction into r",
      "{ r := n ; while !(r < m) do r := (r -. m) od }"));
  r.push_back(program_artifact(
      "E-division", "quotient q and remainder r of n by m via repeated subtraction",
      "{ r := n ; { q := 0 ; while !(r < m) do { r := (r -. m) ; q := s(q) } od } }"));
  r.push_back(program_artifact(
      "E-gcd-remainder", "gcd via repeated remainder steps (requires n > m >= 1)",
      "{ r := n ; while !(r = 0) do { r := n ; { while !(r < m) do r := (r -. m) od ; "
      "{ n := m ; m := r } } } od }"));
  return r;
}

const std::vector<Artifact>& registry() {
  static const std::vector<Artifact> r = build_registry();
  return r;
}

}  // namespace

const Artifact& artifact(const std::string& name) {
  for (const Artifact& a : registry())
    if (a.name == name) return a;
  throw UnknownArtifact("unknown artifact '" + name + "'");
}

const std::vector<std::string>& artifact_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const Artifact& a : registry()) out.push_back(a.name);
    return out;
  }();
  return names;
}

// ---------------------------------------------------------------------------
// Oracles

long gcd_oracle(long n, long m) {
  if (n < 1 || m < 1)
    throw DomainError("gcd_oracle requires n, m >= 1 (got " + std::to_string(n) + ", " +
                      std::to_string(m) + ")");
  long best = 1;
  long lo = std::min(n, m);
  for (long d = 2; d <= lo; ++d)
    if (n % d == 0 && m % d == 0) best = d;
  return best;
}

long max_oracle(long n, long m) { return std::max(n, m); }

long loop_iteration_count(long n, long m) {
  if (n < 1 || m < 1)
    throw DomainError("loop_iteration_count requires n, m >= 1 (got " + std::to_string(n) + ", " +
                      std::to_string(m) + ")");
  long guards = 0;
  for (;;) {
    ++guards;
    if (n == m) return guards;
    if (m < n)
      n -= m;
    else
      m -= n;
  }
}

// ---------------------------------------------------------------------------
// Coprime disjuncts

namespace {

// c-fold left-nested sum of the variable: v, (v + v), ((v + v) + v), ...
TermPtr repeated(const std::string& var, long c) {
  TermPtr t = Term::var(var);
  for (long i = 1; i < c; ++i) t = Term::add(std::move(t), Term::var(var));
  return t;
}

EngelerDisjunct make_disjunct(long a, long b) {
  EngelerDisjunct d;
  d.a = a;
  d.b = b;
  d.rendered = render_disjunct(a, b);
  return d;
}

}  // namespace

OpenPtr render_disjunct(long a, long b) {
  if (a < 1 || b < 1)
    throw DomainError("render_disjunct requires a, b >= 1 (got " + std::to_string(a) + ", " +
                      std::to_string(b) + ")");
  return OpenFormula::eq(repeated("n", a), repeated("m", b));
}

std::vector<EngelerDisjunct> engeler_disjunction(long k) {
  if (k < 1) throw DomainError("engeler_disjunction requires k >= 1 (got " + std::to_string(k) + ")");
  std::vector<EngelerDisjunct> out;
  out.push_back(make_disjunct(1, 1));
  for (long j = 2; j <= k; ++j) {
    for (long a = 1; a < j; ++a)
      if (gcd_oracle(a, j) == 1) out.push_back(make_disjunct(a, j));
    for (long b = j - 1; b >= 1; --b)
      if (gcd_oracle(j, b) == 1) out.push_back(make_disjunct(j, b));
  }
  return out;
}

EngelerWitness engeler_witness(long n, long m) {
  if (n < 1 || m < 1)
    throw DomainError("engeler_witness requires n, m >= 1 (got " + std::to_string(n) + ", " +
                      std::to_string(m) + ")");
  long g = gcd_oracle(n, m);
  EngelerWitness w;
  w.a = m / g;
  w.b = n / g;
  w.k = std::max(w.a, w.b);
  return w;
}

// ---------------------------------------------------------------------------
// Demos

namespace {

Elem std_elem(const StructurePtr& s, long k) {
  auto e = s->parse_elem(std::to_string(k));
  if (!e) throw DomainError("structure '" + s->name() + "' cannot parse element " + std::to_string(k));
  return *e;
}

DemoReport finish_report(const std::string& name, const StructurePtr& s, RunResult run, bool pass,
                         std::string detail) {
  DemoReport rep;
  rep.name = name;
  rep.pass = pass;
  rep.detail = std::move(detail);
  std::ostringstream out;
  out << "demo: " << rep.name << "\n";
  out << render_trace(run.trace, *s);
  out << "verdict: " << (pass ? "PASS" : "FAIL");
  if (!rep.detail.empty()) out << " " << rep.detail;
  out << "\n";
  rep.text = out.str();
  rep.run = std::move(run);
  return rep;
}

}  // namespace

DemoReport demo_standard(long n, long m, const EvalConfig& cfg) {
  if (n < 1 || m < 1)
    throw DomainError("demo 'standard' requires n, m >= 1 (got " + std::to_string(n) + ", " +
                      std::to_string(m) + ")");
  StructurePtr s = make_standard();
  EvalConfig run_cfg = cfg;
  run_cfg.trace_on = true;
  Valuation v;
  v.elems["n"] = std_elem(s, n);
  v.elems["m"] = std_elem(s, m);
  RunResult r = run_program(artifact("E").program(), s, v, run_cfg);
  if (!r.halted())
    return finish_report("standard", s, std::move(r), false,
                         "run did not halt within the step budget");
  Elem fn = std::get<Halted>(r.outcome).final.elems.at("n");
  long g = gcd_oracle(n, m);
  if (!s->equal(fn, std_elem(s, g)))
    return finish_report("standard", s, std::move(r), false,
                         "final n = " + s->print_elem(fn) + ", expected " + std::to_string(g));
  // The loop body performs exactly one assignment per iteration, so the trace
  // row count (initial state + one row per assignment) equals the number of
  // guard evaluations: the 1-based ordinal of the failing guard test.
  long iterations = static_cast<long>(r.trace.rows.size());
  return finish_report("standard", s, std::move(r), true,
                       "final n = " + s->print_elem(fn) + ", " + std::to_string(iterations) +
                           " loop iterations");
}

DemoReport demo_nsn_halt(const EvalConfig& cfg) {
  StructurePtr s = make_nsn();
  EvalConfig run_cfg = cfg;
  run_cfg.trace_on = true;
  Valuation v;
  v.elems["n"] = nsn_make(12, 0, 1);
  v.elems["m"] = nsn_make(15, 0, 2);
  RunResult r = run_program(artifact("E").program(), s, v, run_cfg);
  if (!r.halted())
    return finish_report("nsn-halt", s, std::move(r), false,
                         "run did not halt within the step budget");
  Elem fn = std::get<Halted>(r.outcome).final.elems.at("n");
  if (!s->equal(fn, nsn_make(3, 0, 1)))
    return finish_report("nsn-halt", s, std::move(r), false,
                         "final n = " + s->print_elem(fn) + ", not equal to NSN(3,0,1)");
  return finish_report("nsn-halt", s, std::move(r), true,
                       "final n = " + s->print_elem(fn) + ", equal to NSN(3,0,1)");
}

DemoReport demo_nsn_diverge(const EvalConfig& cfg) {
  StructurePtr s = make_nsn();
  EvalConfig run_cfg = cfg;
  run_cfg.trace_on = true;
  const ProgramPtr& prog = artifact("E").program();
  Valuation v;
  v.elems["n"] = nsn_make(12, 0, 1);
  v.elems["m"] = nsn_make(15, 1, 2);
  RunResult r = run_program(prog, s, v, run_cfg);
  if (!r.exhausted())
    return finish_report("nsn-diverge", s, std::move(r), false,
                         "expected the step budget to run out");

  for (std::size_t i = 0; i < r.trace.rows.size(); ++i) {
    const Valuation& st = r.trace.rows[i].state;
    auto it_n = st.elems.find("n");
    auto it_m = st.elems.find("m");
    if (it_n == st.elems.end() || it_m == st.elems.end())
      return finish_report("nsn-diverge", s, std::move(r), false,
                           "row " + std::to_string(i) + ": n or m missing from the snapshot");
    const NSNValue& nv = it_n->second.as<NSNValue>();
    const NSNValue& mv = it_m->second.as<NSNValue>();
    if (nv.intpart != 12 || nv.nomprt != 0 || nv.denom != 1)
      return finish_report("nsn-diverge", s, std::move(r), false,
                           "row " + std::to_string(i) + ": n = " + s->print_elem(it_n->second) +
                               ", expected NSN(12,0,1)");
    BigInt want = BigInt(15) - BigInt(12) * BigInt(static_cast<long>(i));
    if (mv.intpart != want || mv.nomprt != 1 || mv.denom != 2)
      return finish_report("nsn-diverge", s, std::move(r), false,
                           "row " + std::to_string(i) + ": m = " + s->print_elem(it_m->second) +
                               ", expected NSN(" + want.str() + ",1,2)");
  }

  DivergenceCertificatePtr cert;
  for (const auto& c : s->certificates())
    if (c->name == "nsn-frac-mismatch") cert = c;
  if (!cert)
    return finish_report("nsn-diverge", s, std::move(r), false,
                         "certificate nsn-frac-mismatch is not registered");
  auto inv = cert->match(prog);
  if (!inv)
    return finish_report("nsn-diverge", s, std::move(r), false,
                         "certificate nsn-frac-mismatch does not recognise the loop");
  EvalConfig cert_cfg = cfg;
  cert_cfg.trace_on = false;
  CertificateResult cr = check_divergence_certificate(prog, s, v, *inv, 8, cert_cfg, cert->name);
  if (!cr.certified()) {
    const auto& fail = std::get<CertificateFailed>(cr.outcome);
    return finish_report("nsn-diverge", s, std::move(r), false,
                         "certificate failed at step " + std::to_string(fail.step) + ": " +
                             fail.reason);
  }

  long steps = std::get<BudgetExhausted>(r.outcome).steps;
  long rows = static_cast<long>(r.trace.rows.size());
  return finish_report("nsn-diverge", s, std::move(r), true,
                       "budget exhausted after " + std::to_string(steps) + " steps, " +
                           std::to_string(rows) + " trace rows, certified nsn-frac-mismatch");
}

DemoReport run_demo(const std::string& name, long n, long m, const EvalConfig& cfg) {
  if (name == "standard") return demo_standard(n, m, cfg);
  if (name == "nsn-halt") return demo_nsn_halt(cfg);
  if (name == "nsn-diverge") return demo_nsn_diverge(cfg);
  throw UnknownArtifact("unknown demo '" + name + "' (expected standard, nsn-halt, or nsn-diverge)");
}

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names = {"standard", "nsn-halt", "nsn-diverge"};
  return names;
}

}  // namespace alwb
