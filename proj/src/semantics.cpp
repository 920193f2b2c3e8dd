// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// Semantics implementation: Kleene truth tables, the budgeted interpreter,
// three-valued formula evaluation, bounded validation sweeps, and divergence
// certificate checking.

#include "alwb/semantics.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace alwb {

// ---------------------------------------------------------------------------
// Truth values

Truth t_not(Truth a) {
  if (a == Truth::True) return Truth::False;
  if (a == Truth::False) return Truth::True;
  return Truth::Unknown;
}
Truth t_and(Truth a, Truth b) {
  if (a == Truth::False || b == Truth::False) return Truth::False;
  if (a == Truth::True && b == Truth::True) return Truth::True;
  return Truth::Unknown;
}
Truth t_or(Truth a, Truth b) {
  if (a == Truth::True || b == Truth::True) return Truth::True;
  if (a == Truth::False && b == Truth::False) return Truth::False;
  return Truth::Unknown;
}
Truth t_implies(Truth a, Truth b) { return t_or(t_not(a), b); }

std::string to_string(Truth t) {
  switch (t) {
    case Truth::True: return "True";
    case Truth::False: return "False";
    case Truth::Unknown: return "Unknown";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Terms and open formulas

Elem eval_term(const TermPtr& t, const StructurePtr& s, const Valuation& v) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = v.elems.find(t->name);
      if (it == v.elems.end()) throw EvalError("unbound variable '" + t->name + "'");
      return it->second;
    }
    case Term::Kind::Zero: return s->zero();
    case Term::Kind::Succ: return s->succ(eval_term(t->a, s, v));
    case Term::Kind::Pred: return s->pred(eval_term(t->a, s, v));
    case Term::Kind::Add: return s->add(eval_term(t->a, s, v), eval_term(t->b, s, v));
    case Term::Kind::Mul: return s->mul(eval_term(t->a, s, v), eval_term(t->b, s, v));
    case Term::Kind::Monus: return s->monus(eval_term(t->a, s, v), eval_term(t->b, s, v));
  }
  throw EvalError("malformed term");
}

bool eval_open(const OpenPtr& g, const StructurePtr& s, const Valuation& v) {
  switch (g->kind) {
    case OpenFormula::Kind::Eq: return s->equal(eval_term(g->t1, s, v), eval_term(g->t2, s, v));
    case OpenFormula::Kind::Less: return s->less(eval_term(g->t1, s, v), eval_term(g->t2, s, v));
    case OpenFormula::Kind::TrueConst: return true;
    case OpenFormula::Kind::FalseConst: return false;
    case OpenFormula::Kind::And: return eval_open(g->f1, s, v) && eval_open(g->f2, s, v);
    case OpenFormula::Kind::Or: return eval_open(g->f1, s, v) || eval_open(g->f2, s, v);
    case OpenFormula::Kind::Implies: return !eval_open(g->f1, s, v) || eval_open(g->f2, s, v);
    case OpenFormula::Kind::Not: return !eval_open(g->f1, s, v);
    case OpenFormula::Kind::BoolVar: {
      auto it = v.bools.find(g->name);
      if (it == v.bools.end()) throw EvalError("unbound boolean variable '" + g->name + "'");
      return it->second;
    }
  }
  throw EvalError("malformed open formula");
}

// ---------------------------------------------------------------------------
// Running programs

namespace {

Valuation restrict_to(const Valuation& v, const std::vector<std::string>& vars) {
  Valuation out;
  for (const auto& x : vars) {
    auto ie = v.elems.find(x);
    if (ie != v.elems.end()) out.elems.emplace(x, ie->second);
    auto ib = v.bools.find(x);
    if (ib != v.bools.end()) out.bools.emplace(x, ib->second);
  }
  return out;
}

}  // namespace

RunResult run_program(const ProgramPtr& k, const StructurePtr& s, const Valuation& v,
                      const EvalConfig& cfg) {
  RunResult res;
  Valuation cur = v;
  long steps = 0;

  if (cfg.trace_on) {
    auto assigned = assigned_vars(k);
    res.trace.vars.assign(assigned.begin(), assigned.end());  // std::set is sorted
    res.trace.rows.push_back(TraceRow{0, restrict_to(cur, res.trace.vars)});
  }
  auto snapshot = [&] {
    if (cfg.trace_on)
      res.trace.rows.push_back(TraceRow{steps, restrict_to(cur, res.trace.vars)});
  };

  std::vector<ProgramPtr> stack{k};
  try {
    while (!stack.empty()) {
      ProgramPtr p = stack.back();
      stack.pop_back();
      switch (p->kind) {
        case Program::Kind::Skip:
          break;
        case Program::Kind::Assign: {
          if (steps >= cfg.step_budget) {
            res.outcome = BudgetExhausted{cur, steps};
            return res;
          }
          Elem val = eval_term(p->rhs_term, s, cur);
          ++steps;
          cur.elems[p->target] = val;
          snapshot();
          break;
        }
        case Program::Kind::BoolAssign: {
          if (steps >= cfg.step_budget) {
            res.outcome = BudgetExhausted{cur, steps};
            return res;
          }
          bool val = eval_open(p->rhs_open, s, cur);
          ++steps;
          cur.bools[p->target] = val;
          snapshot();
          break;
        }
        case Program::Kind::Seq:
          stack.push_back(p->p2);
          stack.push_back(p->p1);
          break;
        case Program::Kind::If: {
          if (steps >= cfg.step_budget) {
            res.outcome = BudgetExhausted{cur, steps};
            return res;
          }
          bool g = eval_open(p->guard, s, cur);
          ++steps;
          stack.push_back(g ? p->p1 : p->p2);
          break;
        }
        case Program::Kind::While: {
          if (steps >= cfg.step_budget) {
            res.outcome = BudgetExhausted{cur, steps};
            return res;
          }
          bool g = eval_open(p->guard, s, cur);
          ++steps;
          if (g) {
            stack.push_back(p);  // retest after the body
            stack.push_back(p->p1);
          }
          break;
        }
      }
    }
  } catch (const EvalError& e) {
    res.outcome = RuntimeError{e.what(), steps};
    return res;
  } catch (const UnsupportedOperation& e) {
    res.outcome = RuntimeError{e.what(), steps};
    return res;
  } catch (const InvalidElement& e) {
    res.outcome = RuntimeError{e.what(), steps};
    return res;
  }
  res.outcome = Halted{cur, steps};
  return res;
}

std::string render_trace(const Trace& trace, const Structure& s) {
  std::ostringstream out;
  out << "step";
  for (const auto& x : trace.vars) out << " | " << x;
  out << "\n";
  for (const auto& row : trace.rows) {
    out << row.step;
    for (const auto& x : trace.vars) {
      out << " | ";
      auto ie = row.state.elems.find(x);
      if (ie != row.state.elems.end()) {
        out << s.print_elem(ie->second);
        continue;
      }
      auto ib = row.state.bools.find(x);
      if (ib != row.state.bools.end()) {
        out << (ib->second ? "true" : "false");
        continue;
      }
      out << "-";
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Divergence certificates

namespace {

// The inductive-sample obligation is a property of (structure, loop,
// certificate, bound) alone; it is memoised so sweeps that hit the same loop
// hundreds of times validate it once.
struct InductionCache {
  std::mutex mu;
  std::unordered_map<std::string, bool> done;
};
InductionCache& induction_cache() {
  static InductionCache c;
  return c;
}

DivergenceCertificate::Lookup make_lookup(const Valuation& v) {
  return [&v](const std::string& name) -> Elem {
    auto it = v.elems.find(name);
    return it == v.elems.end() ? Elem{} : it->second;
  };
}

// One exhaustive pass: for every assignment of enumerate(carrier_bound)
// elements to the loop's variables, inv && guard must step to inv, and inv
// must imply the guard.
bool induction_holds(const ProgramPtr& k, const StructurePtr& s,
                     const DivergenceCertificate::Invariant& inv, const EvalConfig& cfg,
                     std::string* why) {
  std::set<std::string> var_set = vars_of_program(k);
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  if (vars.size() > 3) {
    if (why) *why = "induction: loop has too many variables for an exhaustive pass";
    return false;
  }
  std::vector<Elem> elems = s->enumerate(cfg.carrier_bound);
  if (elems.empty()) {
    if (why) *why = "induction: empty carrier sample";
    return false;
  }
  std::vector<size_t> idx(vars.size(), 0);
  EvalConfig body_cfg = cfg;
  body_cfg.trace_on = false;
  while (true) {
    Valuation v;
    for (size_t j = 0; j < vars.size(); ++j) v.elems[vars[j]] = elems[idx[j]];
    bool inv_here = false;
    try {
      inv_here = inv(*s, make_lookup(v));
    } catch (...) {
      inv_here = false;
    }
    if (inv_here) {
      if (!eval_open(k->guard, s, v)) {
        if (why) *why = "induction: invariant does not imply the guard";
        return false;
      }
      RunResult r = run_program(k->p1, s, v, body_cfg);
      if (!r.halted()) {
        if (why) *why = "induction: loop body did not halt from a sampled state";
        return false;
      }
      if (!inv(*s, make_lookup(std::get<Halted>(r.outcome).final))) {
        if (why) *why = "induction: invariant not preserved by the body";
        return false;
      }
    }
    // odometer
    size_t j = 0;
    for (; j < idx.size(); ++j) {
      if (++idx[j] < elems.size()) break;
      idx[j] = 0;
    }
    if (j == idx.size()) break;
    if (idx.empty()) break;
  }
  return true;
}

bool induction_holds_cached(const ProgramPtr& k, const StructurePtr& s,
                            const DivergenceCertificate::Invariant& inv,
                            const std::string& cert_name, const EvalConfig& cfg,
                            std::string* why) {
  // Only named (registered) certificates are cacheable; harness-supplied
  // invariants are opaque closures and are validated on every call.
  if (cert_name == "supplied") return induction_holds(k, s, inv, cfg, why);
  std::string key =
      s->name() + "|" + cert_name + "|" + std::to_string(cfg.carrier_bound) + "|" + print(k);
  auto& cache = induction_cache();
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.done.find(key);
    if (it != cache.done.end()) {
      if (!it->second && why) *why = "induction: failed (cached)";
      return it->second;
    }
  }
  bool ok = induction_holds(k, s, inv, cfg, why);
  std::lock_guard<std::mutex> lock(cache.mu);
  cache.done[key] = ok;
  return ok;
}

}  // namespace

CertificateResult check_divergence_certificate(const ProgramPtr& k, const StructurePtr& s,
                                               const Valuation& v,
                                               const DivergenceCertificate::Invariant& inv,
                                               long n_steps, const EvalConfig& cfg,
                                               const std::string& cert_name) {
  CertificateResult res;
  if (!k || k->kind != Program::Kind::While) {
    res.outcome = CertificateFailed{0, "not a while loop"};
    return res;
  }
  bool inv0 = false;
  try {
    inv0 = inv(*s, make_lookup(v));
  } catch (...) {
    inv0 = false;
  }
  if (!inv0) {
    res.outcome = CertificateFailed{0, "invariant does not hold at the initial state"};
    return res;
  }

  // Live phase: follow n_steps real iterations from v, demanding the
  // invariant keep implying the guard and survive every body pass.
  EvalConfig body_cfg = cfg;
  body_cfg.trace_on = false;
  Valuation cur = v;
  for (long i = 1; i <= n_steps; ++i) {
    bool guard_ok = false;
    try {
      guard_ok = eval_open(k->guard, s, cur);
    } catch (const EvalError&) {
      res.outcome = CertificateFailed{i, "guard evaluation failed"};
      return res;
    }
    if (!guard_ok) {
      res.outcome = CertificateFailed{i, "guard-implication: guard false while invariant holds"};
      return res;
    }
    RunResult r = run_program(k->p1, s, cur, body_cfg);
    if (!r.halted()) {
      res.outcome = CertificateFailed{i, "loop body did not halt within the budget"};
      return res;
    }
    cur = std::get<Halted>(r.outcome).final;
    bool inv_next = false;
    try {
      inv_next = inv(*s, make_lookup(cur));
    } catch (...) {
      inv_next = false;
    }
    if (!inv_next) {
      res.outcome = CertificateFailed{i, "preservation: invariant broken after a body pass"};
      return res;
    }
  }

  std::string why;
  if (!induction_holds_cached(k, s, inv, cert_name, cfg, &why)) {
    res.outcome = CertificateFailed{n_steps, why};
    return res;
  }
  res.outcome = Certified{cert_name};
  return res;
}

namespace {

constexpr long kLiveCertificateSteps = 8;

// Structural replay: re-execute the program and, at every while-loop head,
// offer the state to the structure's registered certificates. Returns the
// state after the program, or nullopt when it could not finish (budget, or a
// certificate fired — recorded in `certified`).
class DivergenceWalker {
 public:
  DivergenceWalker(const StructurePtr& s, const EvalConfig& cfg) : s_(s), cfg_(cfg) {}

  std::optional<std::string> certified;

  std::optional<Valuation> exec(const ProgramPtr& p, Valuation cur) {
    if (certified) return std::nullopt;
    switch (p->kind) {
      case Program::Kind::Skip:
        return cur;
      case Program::Kind::Assign: {
        if (!spend()) return std::nullopt;
        cur.elems[p->target] = eval_term(p->rhs_term, s_, cur);
        return cur;
      }
      case Program::Kind::BoolAssign: {
        if (!spend()) return std::nullopt;
        cur.bools[p->target] = eval_open(p->rhs_open, s_, cur);
        return cur;
      }
      case Program::Kind::Seq: {
        auto mid = exec(p->p1, std::move(cur));
        if (!mid) return std::nullopt;
        return exec(p->p2, std::move(*mid));
      }
      case Program::Kind::If: {
        if (!spend()) return std::nullopt;
        bool g = eval_open(p->guard, s_, cur);
        return exec(g ? p->p1 : p->p2, std::move(cur));
      }
      case Program::Kind::While: {
        while (true) {
          for (const auto& cert : s_->certificates()) {
            auto inv = cert->match(p);
            if (!inv) continue;
            auto r = check_divergence_certificate(p, s_, cur, *inv, kLiveCertificateSteps,
                                                  cfg_, cert->name);
            if (r.certified()) {
              certified = cert->name;
              return std::nullopt;
            }
          }
          if (!spend()) return std::nullopt;
          if (!eval_open(p->guard, s_, cur)) return cur;
          auto next = exec(p->p1, std::move(cur));
          if (!next) return std::nullopt;
          cur = std::move(*next);
        }
      }
    }
    return std::nullopt;
  }

 private:
  bool spend() { return steps_++ < cfg_.step_budget; }

  StructurePtr s_;
  const EvalConfig& cfg_;
  long steps_ = 0;
};

}  // namespace

std::optional<std::string> certified_divergence(const ProgramPtr& k, const StructurePtr& s,
                                                const Valuation& v, const EvalConfig& cfg) {
  if (s->certificates().empty()) return std::nullopt;
  DivergenceWalker w(s, cfg);
  try {
    w.exec(k, v);
  } catch (const EvalError&) {
    return std::nullopt;
  } catch (const UnsupportedOperation&) {
    return std::nullopt;
  }
  return w.certified;
}

// ---------------------------------------------------------------------------
// Formula evaluation

namespace {

// Advancing the U[.]/I[.] iteration chain one K-run at a time: the i-th
// iterate's value is the body's value at the i-th state, since programs are
// deterministic. When a run stops early the chain is "broken": every deeper
// iterate is False if the stop is a certified divergence (the box over a
// provably non-halting program), Unknown otherwise.
struct ChainStep {
  enum class Kind { Advanced, BrokenFalse, BrokenUnknown } kind;
  Valuation next;
};

ChainStep advance_chain(const ProgramPtr& k, const StructurePtr& s, const Valuation& cur,
                        const EvalConfig& cfg) {
  EvalConfig run_cfg = cfg;
  run_cfg.trace_on = false;
  RunResult r = run_program(k, s, cur, run_cfg);
  if (r.halted()) return ChainStep{ChainStep::Kind::Advanced, std::get<Halted>(r.outcome).final};
  if (r.errored()) throw EvalError(std::get<RuntimeError>(r.outcome).reason);
  if (cfg.certificates_enabled && certified_divergence(k, s, cur, cfg))
    return ChainStep{ChainStep::Kind::BrokenFalse, {}};
  return ChainStep{ChainStep::Kind::BrokenUnknown, {}};
}

}  // namespace

Truth eval_formula(const FormulaPtr& f, const StructurePtr& s, const Valuation& v,
                   const EvalConfig& cfg) {
  switch (f->kind) {
    case Formula::Kind::Open:
      return eval_open(f->open, s, v) ? Truth::True : Truth::False;

    case Formula::Kind::Not:
      return t_not(eval_formula(f->f1, s, v, cfg));
    case Formula::Kind::And: {
      Truth a = eval_formula(f->f1, s, v, cfg);
      if (a == Truth::False) return Truth::False;
      return t_and(a, eval_formula(f->f2, s, v, cfg));
    }
    case Formula::Kind::Or: {
      Truth a = eval_formula(f->f1, s, v, cfg);
      if (a == Truth::True) return Truth::True;
      return t_or(a, eval_formula(f->f2, s, v, cfg));
    }
    case Formula::Kind::Implies: {
      Truth a = eval_formula(f->f1, s, v, cfg);
      if (a == Truth::False) return Truth::True;
      return t_implies(a, eval_formula(f->f2, s, v, cfg));
    }

    case Formula::Kind::Box: {
      EvalConfig run_cfg = cfg;
      run_cfg.trace_on = false;
      RunResult r = run_program(f->prog, s, v, run_cfg);
      if (r.halted()) return eval_formula(f->f1, s, std::get<Halted>(r.outcome).final, cfg);
      if (r.errored()) throw EvalError(std::get<RuntimeError>(r.outcome).reason);
      if (cfg.certificates_enabled && certified_divergence(f->prog, s, v, cfg))
        return Truth::False;
      return Truth::Unknown;
    }

    case Formula::Kind::IterUnion: {
      Valuation cur = v;
      for (long i = 0; i <= cfg.iter_bound; ++i) {
        if (eval_formula(f->f1, s, cur, cfg) == Truth::True) return Truth::True;
        if (i == cfg.iter_bound) break;
        ChainStep step = advance_chain(f->prog, s, cur, cfg);
        if (step.kind != ChainStep::Kind::Advanced) break;  // no witness beyond the break
        cur = std::move(step.next);
      }
      return Truth::Unknown;
    }

    case Formula::Kind::IterInter: {
      Valuation cur = v;
      for (long i = 0; i <= cfg.iter_bound; ++i) {
        if (eval_formula(f->f1, s, cur, cfg) == Truth::False) return Truth::False;
        if (i == cfg.iter_bound) break;
        ChainStep step = advance_chain(f->prog, s, cur, cfg);
        if (step.kind == ChainStep::Kind::BrokenFalse) return Truth::False;
        if (step.kind == ChainStep::Kind::BrokenUnknown) break;
        cur = std::move(step.next);
      }
      return Truth::Unknown;
    }

    case Formula::Kind::Forall: {
      bool all_true = true;
      for (const Elem& e : s->enumerate(cfg.carrier_bound)) {
        Valuation v2 = v;
        v2.elems[f->var] = e;
        Truth t = eval_formula(f->f1, s, v2, cfg);
        if (t == Truth::False) return Truth::False;
        if (t != Truth::True) all_true = false;
      }
      if (all_true && s->is_exhaustive(cfg.carrier_bound)) return Truth::True;
      return Truth::Unknown;
    }
    case Formula::Kind::Exists: {
      bool all_false = true;
      for (const Elem& e : s->enumerate(cfg.carrier_bound)) {
        Valuation v2 = v;
        v2.elems[f->var] = e;
        Truth t = eval_formula(f->f1, s, v2, cfg);
        if (t == Truth::True) return Truth::True;
        if (t != Truth::False) all_false = false;
      }
      if (all_false && s->is_exhaustive(cfg.carrier_bound)) return Truth::False;
      return Truth::Unknown;
    }
  }
  throw EvalError("malformed formula");
}

std::optional<long> least_union_witness(const ProgramPtr& k, const FormulaPtr& body,
                                        const StructurePtr& s, const Valuation& v,
                                        const EvalConfig& cfg) {
  Valuation cur = v;
  for (long i = 0; i <= cfg.iter_bound; ++i) {
    if (eval_formula(body, s, cur, cfg) == Truth::True) return i;
    if (i == cfg.iter_bound) break;
    ChainStep step = advance_chain(k, s, cur, cfg);
    if (step.kind != ChainStep::Kind::Advanced) break;
    cur = std::move(step.next);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Bounded validation

ValidationResult bounded_validate(const FormulaPtr& f, const StructurePtr& s,
                                  const EvalConfig& cfg, long var_bound) {
  ValidationResult res;
  std::set<std::string> ind_set = free_vars(f);
  std::set<std::string> bool_set = free_bool_vars(f);
  std::vector<std::string> ind(ind_set.begin(), ind_set.end());
  std::vector<std::string> bools(bool_set.begin(), bool_set.end());
  std::vector<Elem> elems = s->enumerate(var_bound);
  if (elems.empty() && !ind.empty()) {
    res.verdict = Inconclusive{};
    return res;
  }

  std::vector<size_t> idx(ind.size(), 0);
  std::vector<bool> bvals(bools.size(), false);
  bool any_unknown = false;

  while (true) {
    // inner sweep over the boolean variables
    std::fill(bvals.begin(), bvals.end(), false);
    while (true) {
      Valuation v;
      for (size_t j = 0; j < ind.size(); ++j) v.elems[ind[j]] = elems[idx[j]];
      for (size_t j = 0; j < bools.size(); ++j) v.bools[bools[j]] = bvals[j];
      Truth t = eval_formula(f, s, v, cfg);
      ++res.valuations_checked;
      if (t == Truth::False) {
        res.verdict = Refuted{v};
        return res;
      }
      if (t != Truth::True) any_unknown = true;

      size_t j = 0;
      for (; j < bvals.size(); ++j) {
        if (!bvals[j]) {
          bvals[j] = true;
          break;
        }
        bvals[j] = false;
      }
      if (j == bvals.size()) break;
    }

    size_t j = 0;
    for (; j < idx.size(); ++j) {
      if (++idx[j] < elems.size()) break;
      idx[j] = 0;
    }
    if (j == idx.size()) break;
  }

  if (any_unknown)
    res.verdict = Inconclusive{};
  else
    res.verdict = ValidUpToBound{};
  return res;
}

}  // namespace alwb
