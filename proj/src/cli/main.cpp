// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// Command-line front end: parse/run/eval/check/demo over inline strings,
// built-in artifacts (@-names), and proof-script files. Output is
// deterministic; --output json mirrors the text reports field-for-field.
//
// Exit codes: 0 success/PASS, 1 refutation/FAIL (False or Unknown values,
// Refuted or Inconclusive validation, non-halting runs, REJECTED proofs,
// failed demos), 2 usage or syntax errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "alwb/euclid.hpp"
#include "alwb/models.hpp"
#include "alwb/proof.hpp"
#include "alwb/semantics.hpp"
#include "alwb/syntax.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace alwb;

// Usage-level failure carrying the exit code.
struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail_usage(const std::string& msg) { throw CliError{2, msg}; }

struct Common {
  std::string model = "standard";
  long budget = 10000;
  long iter_bound = 64;
  long carrier_bound = 6;
  long var_bound = 4;
  bool trace = false;
  std::string output = "text";
  std::vector<std::string> sets;
};

EvalConfig to_cfg(const Common& c) {
  EvalConfig e;
  e.step_budget = c.budget;
  e.iter_bound = c.iter_bound;
  e.carrier_bound = c.carrier_bound;
  e.trace_on = c.trace;
  return e;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--model", c.model, "structure to run over")
      ->check(CLI::IsMember({"standard", "nsn"}));
  cmd->add_option("--budget", c.budget, "program step budget")->check(CLI::PositiveNumber);
  cmd->add_option("--iter-bound", c.iter_bound, "iteration depth for U[.] / I[.]")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--carrier-bound", c.carrier_bound, "enumeration bound for quantifier sweeps")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--var-bound", c.var_bound, "enumeration bound for free-variable validation")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--trace", c.trace, "record and print the run's state snapshots");
  cmd->add_option("--output", c.output, "report format")->check(CLI::IsMember({"text", "json"}));
  // One value per occurrence: a greedy vector option would swallow a
  // positional that follows it (e.g. `eval --set x=0 <formula> --budget 50`).
  cmd->add_option("--set", c.sets, "variable binding NAME=VALUE (repeatable)")
      ->allow_extra_args(false);
}

// ---------------------------------------------------------------------------
// Input resolution: '@name' is a strict registry lookup; a bare string is
// parsed, falling back to the registry when it is exactly an artifact name.

ProgramPtr resolve_program(const std::string& input) {
  if (!input.empty() && input[0] == '@') return artifact(input.substr(1)).program();
  try {
    return parse_program(input);
  } catch (const SyntaxError&) {
    for (const auto& n : artifact_names())
      if (n == input && artifact(n).is_program()) return artifact(n).program();
    throw;
  }
}

FormulaPtr resolve_formula(const std::string& input) {
  if (!input.empty() && input[0] == '@') return artifact(input.substr(1)).formula();
  try {
    return parse_formula(input);
  } catch (const SyntaxError&) {
    for (const auto& n : artifact_names())
      if (n == input && !artifact(n).is_program()) return artifact(n).formula();
    throw;
  }
}

// ---------------------------------------------------------------------------
// Valuations

Valuation parse_sets(const std::vector<std::string>& sets, const StructurePtr& s) {
  Valuation v;
  for (const std::string& kv : sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      fail_usage("--set expects NAME=VALUE, got '" + kv + "'");
    std::string name = kv.substr(0, eq);
    std::string value = kv.substr(eq + 1);
    if (!is_identifier(name)) fail_usage("--set name '" + name + "' is not an identifier");
    if (value == "true" || value == "false") {
      v.bools[name] = (value == "true");
      continue;
    }
    auto e = s->parse_elem(value);
    if (!e)
      fail_usage("cannot parse '" + value + "' as an element of structure '" + s->name() + "'");
    v.elems[name] = *e;
  }
  return v;
}

std::string render_valuation(const Valuation& v, const Structure& s) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, e] : v.elems) {
    if (!first) out << ", ";
    first = false;
    out << name << " = " << s.print_elem(e);
  }
  for (const auto& [name, b] : v.bools) {
    if (!first) out << ", ";
    first = false;
    out << name << " = " << (b ? "true" : "false");
  }
  if (first) out << "(empty)";
  return out.str();
}

json valuation_json(const Valuation& v, const Structure& s) {
  json j = json::object();
  for (const auto& [name, e] : v.elems) j[name] = s.print_elem(e);
  for (const auto& [name, b] : v.bools) j[name] = b;
  return j;
}

json trace_json(const Trace& t, const Structure& s) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back(json{{"step", r.step}, {"state", valuation_json(r.state, s)}});
  return json{{"vars", t.vars}, {"rows", rows}};
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------
// Commands

int cmd_parse(const Common& c, const std::string& sort, const std::string& input) {
  std::string printed;
  if (sort == "term")
    printed = print(parse_term(input));
  else if (sort == "open")
    printed = print(parse_open(input));
  else if (sort == "program")
    printed = print(resolve_program(input));
  else if (sort == "formula")
    printed = print(resolve_formula(input));
  else
    fail_usage("unknown sort '" + sort + "' (expected term, open, program, or formula)");
  if (c.output == "json")
    emit(json{{"command", "parse"}, {"sort", sort}, {"printed", printed}});
  else
    std::cout << printed << "\n";
  return 0;
}

int cmd_run(const Common& c, const std::string& input) {
  StructurePtr s = structure_by_name(c.model);
  ProgramPtr k = resolve_program(input);
  Valuation v = parse_sets(c.sets, s);
  RunResult r = run_program(k, s, v, to_cfg(c));
  if (c.output == "json") {
    json j{{"command", "run"}, {"model", c.model}};
    if (r.halted()) {
      const auto& h = std::get<Halted>(r.outcome);
      j["outcome"] = "Halted";
      j["steps"] = h.steps;
      j["final"] = valuation_json(h.final, *s);
    } else if (r.exhausted()) {
      const auto& b = std::get<BudgetExhausted>(r.outcome);
      j["outcome"] = "BudgetExhausted";
      j["steps"] = b.steps;
      j["last"] = valuation_json(b.last, *s);
    } else {
      const auto& e = std::get<RuntimeError>(r.outcome);
      j["outcome"] = "RuntimeError";
      j["steps"] = e.steps;
      j["reason"] = e.reason;
    }
    if (c.trace) j["trace"] = trace_json(r.trace, *s);
    emit(j);
  } else {
    if (c.trace) std::cout << render_trace(r.trace, *s);
    if (r.halted()) {
      const auto& h = std::get<Halted>(r.outcome);
      std::cout << "outcome: Halted\nsteps: " << h.steps
                << "\nfinal: " << render_valuation(h.final, *s) << "\n";
    } else if (r.exhausted()) {
      const auto& b = std::get<BudgetExhausted>(r.outcome);
      std::cout << "outcome: BudgetExhausted\nsteps: " << b.steps
                << "\nlast: " << render_valuation(b.last, *s) << "\n";
    } else {
      const auto& e = std::get<RuntimeError>(r.outcome);
      std::cout << "outcome: RuntimeError\nsteps: " << e.steps << "\nreason: " << e.reason
                << "\n";
    }
  }
  return r.halted() ? 0 : 1;
}

int cmd_eval(const Common& c, const std::string& input) {
  StructurePtr s = structure_by_name(c.model);
  FormulaPtr f = resolve_formula(input);
  Valuation v = parse_sets(c.sets, s);
  EvalConfig cfg = to_cfg(c);

  std::vector<std::string> missing;
  for (const auto& x : free_vars(f))
    if (!v.elems.count(x)) missing.push_back(x);
  for (const auto& q : free_bool_vars(f))
    if (!v.bools.count(q)) missing.push_back("?" + q);

  if (missing.empty()) {
    Truth t = eval_formula(f, s, v, cfg);
    // Witness reporting: when the formula (after peeling implications) is an
    // iteration-union that came out True, report the 1-based ordinal of the
    // first satisfied iterate — iterate 1 is the bare body.
    std::optional<long> witness;
    if (t == Truth::True) {
      FormulaPtr g = f;
      while (g->kind == Formula::Kind::Implies) g = g->f2;
      if (g->kind == Formula::Kind::IterUnion)
        if (auto w = least_union_witness(g->prog, g->f1, s, v, cfg)) witness = *w + 1;
    }
    if (c.output == "json") {
      json j{{"command", "eval"}, {"model", c.model}, {"mode", "point"},
             {"value", to_string(t)}};
      if (witness) j["witness"] = *witness;
      emit(j);
    } else {
      std::cout << "value: " << to_string(t) << "\n";
      if (witness) std::cout << "witness i = " << *witness << "\n";
    }
    return t == Truth::True ? 0 : 1;
  }

  if (!c.sets.empty()) {
    std::string names;
    for (size_t i = 0; i < missing.size(); ++i) names += (i ? ", " : "") + missing[i];
    fail_usage("formula has unset free variables: " + names + " (set all of them or none)");
  }

  ValidationResult r = bounded_validate(f, s, cfg, c.var_bound);
  std::string verdict = r.valid()     ? "ValidUpToBound"
                        : r.refuted() ? "Refuted"
                                      : "Inconclusive";
  if (c.output == "json") {
    json j{{"command", "eval"},
           {"model", c.model},
           {"mode", "validate"},
           {"verdict", verdict},
           {"valuations_checked", r.valuations_checked}};
    if (r.refuted()) j["counterexample"] = valuation_json(std::get<Refuted>(r.verdict).counterexample, *s);
    emit(j);
  } else {
    std::cout << "validation: " << verdict << "\nvaluations checked: " << r.valuations_checked
              << "\n";
    if (r.refuted())
      std::cout << "counterexample: "
                << render_valuation(std::get<Refuted>(r.verdict).counterexample, *s) << "\n";
  }
  return r.valid() ? 0 : 1;
}

int cmd_check(const Common& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_usage("cannot open proof file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  CheckReport rep = check_proof_text(buf.str(), to_cfg(c));
  if (c.output == "json") {
    json steps = json::array();
    for (const auto& sr : rep.steps) {
      json e{{"id", sr.id}, {"verdict", to_string(sr.verdict)}};
      if (sr.omega_samples >= 0) e["omega_samples"] = sr.omega_samples;
      if (sr.failed_sample >= 0) e["failed_sample"] = sr.failed_sample;
      if (!sr.detail.empty()) e["detail"] = sr.detail;
      steps.push_back(e);
    }
    json j{{"command", "check"}, {"steps", steps}, {"accepted", rep.accepted},
           {"trusted", rep.trusted}};
    if (!rep.accepted) j["rejected_at"] = rep.rejected_at;
    emit(j);
  } else {
    std::cout << rep.render();
  }
  return rep.accepted ? 0 : 1;
}

int cmd_demo(const Common& c, const std::string& name) {
  long n = 12, m = 18;
  if (name == "standard") {
    for (const std::string& kv : c.sets) {
      auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0)
        fail_usage("--set expects NAME=VALUE, got '" + kv + "'");
      std::string key = kv.substr(0, eq);
      std::string value = kv.substr(eq + 1);
      long* slot = key == "n" ? &n : key == "m" ? &m : nullptr;
      if (!slot) fail_usage("demo 'standard' accepts only --set n= and --set m=");
      try {
        size_t used = 0;
        *slot = std::stol(value, &used);
        if (used != value.size() || *slot < 1) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        fail_usage("demo 'standard' expects a positive decimal for " + key + ", got '" + value +
                   "'");
      }
    }
  } else if (!c.sets.empty()) {
    fail_usage("demo '" + name + "' does not take --set");
  }
  DemoReport rep = run_demo(name, n, m, to_cfg(c));
  if (c.output == "json") {
    StructurePtr s = name == "standard" ? make_standard() : make_nsn();
    emit(json{{"command", "demo"},
              {"name", rep.name},
              {"pass", rep.pass},
              {"detail", rep.detail},
              {"trace", trace_json(rep.run.trace, *s)}});
  } else {
    std::cout << rep.text;
  }
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alwb — workbench for while-programs and algorithmic formulas"};
  app.require_subcommand(1);

  Common c;
  std::string sort, input, path, name;

  CLI::App* p_parse =
      app.add_subcommand("parse", "parse and pretty-print a term, open formula, program, or formula");
  p_parse->add_option("sort", sort, "term | open | program | formula")->required();
  p_parse->add_option("input", input, "source text, or @name / name of a built-in artifact")
      ->required();
  add_common(p_parse, c);

  CLI::App* p_run = app.add_subcommand("run", "execute a program under a step budget");
  p_run->add_option("program", input, "program text, or @name / name of a built-in artifact")
      ->required();
  add_common(p_run, c);

  CLI::App* p_eval = app.add_subcommand(
      "eval", "evaluate a formula at a valuation, or validate it over its free variables");
  p_eval->add_option("formula", input, "formula text, or @name / name of a built-in artifact")
      ->required();
  add_common(p_eval, c);

  CLI::App* p_check = app.add_subcommand("check", "check a proof-script file");
  p_check->add_option("file", path, "proof-script path")->required();
  add_common(p_check, c);

  CLI::App* p_demo = app.add_subcommand("demo", "run a built-in demo and print its report");
  p_demo->add_option("name", name, "standard | nsn-halt | nsn-diverge")->required();
  add_common(p_demo, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }

  try {
    if (p_parse->parsed()) return cmd_parse(c, sort, input);
    if (p_run->parsed()) return cmd_run(c, input);
    if (p_eval->parsed()) return cmd_eval(c, input);
    if (p_check->parsed()) return cmd_check(c, path);
    if (p_demo->parsed()) return cmd_demo(c, name);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
