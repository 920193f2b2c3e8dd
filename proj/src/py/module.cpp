// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// Python bindings for the main operations. The interface is string-first:
// trees stay on the C++ side and cross the boundary as canonical grammar
// strings, valuations as plain dicts (int/str for carrier elements, bool for
// boolean variables), results as dicts mirroring the CLI reports.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "alwb/euclid.hpp"
#include "alwb/models.hpp"
#include "alwb/proof.hpp"
#include "alwb/semantics.hpp"
#include "alwb/syntax.hpp"

namespace py = pybind11;
using namespace alwb;

namespace {

EvalConfig make_cfg(long budget, long iter_bound, long carrier_bound, bool trace) {
  EvalConfig cfg;
  cfg.step_budget = budget;
  cfg.iter_bound = iter_bound;
  cfg.carrier_bound = carrier_bound;
  cfg.trace_on = trace;
  return cfg;
}

Valuation dict_to_valuation(const py::dict& d, const StructurePtr& s) {
  Valuation v;
  for (auto item : d) {
    std::string name = py::cast<std::string>(item.first);
    if (py::isinstance<py::bool_>(item.second)) {
      v.bools[name] = py::cast<bool>(item.second);
      continue;
    }
    std::string text = py::isinstance<py::str>(item.second)
                           ? py::cast<std::string>(item.second)
                           : std::to_string(py::cast<long long>(item.second));
    auto e = s->parse_elem(text);
    if (!e)
      throw py::value_error("cannot parse '" + text + "' as an element of structure '" +
                            s->name() + "'");
    v.elems[name] = *e;
  }
  return v;
}

py::dict valuation_to_dict(const Valuation& v, const Structure& s) {
  py::dict d;
  for (const auto& [name, e] : v.elems) d[py::str(name)] = s.print_elem(e);
  for (const auto& [name, b] : v.bools) d[py::str(name)] = b;
  return d;
}

py::list trace_to_list(const Trace& t, const Structure& s) {
  py::list rows;
  for (const auto& r : t.rows) {
    py::dict row;
    row["step"] = r.step;
    row["state"] = valuation_to_dict(r.state, s);
    rows.append(row);
  }
  return rows;
}

FormulaPtr formula_of(const std::string& text) {
  if (!text.empty() && text[0] == '@') return artifact(text.substr(1)).formula();
  return parse_formula(text);
}

ProgramPtr program_of(const std::string& text) {
  if (!text.empty() && text[0] == '@') return artifact(text.substr(1)).program();
  return parse_program(text);
}

}  // namespace

PYBIND11_MODULE(_alwb, m) {
  m.doc() = "workbench for while-programs and algorithmic formulas";

  py::register_exception<SyntaxError>(m, "SyntaxError", PyExc_ValueError);
  py::register_exception<UnknownArtifact>(m, "UnknownArtifact", PyExc_KeyError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<EvalError>(m, "EvalError", PyExc_RuntimeError);
  py::register_exception<InvalidElement>(m, "InvalidElement", PyExc_ValueError);

  m.def(
      "parse_print",
      [](const std::string& sort, const std::string& text) -> std::string {
        if (sort == "term") return print(parse_term(text));
        if (sort == "open") return print(parse_open(text));
        if (sort == "program") return print(program_of(text));
        if (sort == "formula") return print(formula_of(text));
        throw py::value_error("unknown sort '" + sort +
                              "' (expected term, open, program, or formula)");
      },
      py::arg("sort"), py::arg("text"),
      "Parse the text in the given sort and return its canonical printed form. "
      "Programs and formulas may be given as @name of a built-in artifact.");

  m.def(
      "run",
      [](const std::string& program, const py::dict& valuation, const std::string& model,
         long budget, bool trace) {
        StructurePtr s = structure_by_name(model);
        RunResult r = run_program(program_of(program), s, dict_to_valuation(valuation, s),
                                  make_cfg(budget, 64, 6, trace));
        py::dict out;
        if (r.halted()) {
          const auto& h = std::get<Halted>(r.outcome);
          out["outcome"] = "Halted";
          out["steps"] = h.steps;
          out["final"] = valuation_to_dict(h.final, *s);
        } else if (r.exhausted()) {
          const auto& b = std::get<BudgetExhausted>(r.outcome);
          out["outcome"] = "BudgetExhausted";
          out["steps"] = b.steps;
          out["last"] = valuation_to_dict(b.last, *s);
        } else {
          const auto& e = std::get<RuntimeError>(r.outcome);
          out["outcome"] = "RuntimeError";
          out["steps"] = e.steps;
          out["reason"] = e.reason;
        }
        if (trace) out["trace"] = trace_to_list(r.trace, *s);
        return out;
      },
      py::arg("program"), py::arg("valuation") = py::dict(), py::arg("model") = "standard",
      py::arg("budget") = 10000, py::arg("trace") = false,
      "Execute a program under a step budget and report the outcome.");

  m.def(
      "eval",
      [](const std::string& formula, const py::dict& valuation, const std::string& model,
         long budget, long iter_bound, long carrier_bound) {
        StructurePtr s = structure_by_name(model);
        FormulaPtr f = formula_of(formula);
        Valuation v = dict_to_valuation(valuation, s);
        EvalConfig cfg = make_cfg(budget, iter_bound, carrier_bound, false);
        Truth t = eval_formula(f, s, v, cfg);
        py::dict out;
        out["value"] = to_string(t);
        if (t == Truth::True) {
          FormulaPtr g = f;
          while (g->kind == Formula::Kind::Implies) g = g->f2;
          if (g->kind == Formula::Kind::IterUnion)
            if (auto w = least_union_witness(g->prog, g->f1, s, v, cfg))
              out["witness"] = *w + 1;
        }
        return out;
      },
      py::arg("formula"), py::arg("valuation") = py::dict(), py::arg("model") = "standard",
      py::arg("budget") = 10000, py::arg("iter_bound") = 64, py::arg("carrier_bound") = 6,
      "Evaluate a formula at a valuation; three-valued result, plus the 1-based "
      "witness ordinal when the formula peels to a True iteration-union.");

  m.def(
      "validate",
      [](const std::string& formula, const std::string& model, long var_bound, long budget,
         long iter_bound, long carrier_bound) {
        StructurePtr s = structure_by_name(model);
        ValidationResult r = bounded_validate(formula_of(formula), s,
                                              make_cfg(budget, iter_bound, carrier_bound, false),
                                              var_bound);
        py::dict out;
        out["verdict"] = r.valid()     ? "ValidUpToBound"
                         : r.refuted() ? "Refuted"
                                       : "Inconclusive";
        out["valuations_checked"] = r.valuations_checked;
        if (r.refuted())
          out["counterexample"] = valuation_to_dict(std::get<Refuted>(r.verdict).counterexample, *s);
        return out;
      },
      py::arg("formula"), py::arg("model") = "standard", py::arg("var_bound") = 4,
      py::arg("budget") = 10000, py::arg("iter_bound") = 64, py::arg("carrier_bound") = 6,
      "Sweep the formula's free variables over the structure's enumeration and "
      "report ValidUpToBound, Refuted (with counterexample), or Inconclusive.");

  m.def(
      "check_proof",
      [](const std::string& text) {
        CheckReport rep = check_proof_text(text);
        py::dict out;
        py::list steps;
        for (const auto& sr : rep.steps) {
          py::dict e;
          e["id"] = sr.id;
          e["verdict"] = to_string(sr.verdict);
          if (sr.omega_samples >= 0) e["omega_samples"] = sr.omega_samples;
          if (sr.failed_sample >= 0) e["failed_sample"] = sr.failed_sample;
          if (!sr.detail.empty()) e["detail"] = sr.detail;
          steps.append(e);
        }
        out["steps"] = steps;
        out["accepted"] = rep.accepted;
        if (!rep.accepted) out["rejected_at"] = rep.rejected_at;
        out["trusted"] = rep.trusted;
        out["render"] = rep.render();
        return out;
      },
      py::arg("text"), "Check a proof script given as text and report each step's verdict.");

  m.def(
      "artifact",
      [](const std::string& name) {
        const Artifact& a = alwb::artifact(name);
        py::dict out;
        out["name"] = a.name;
        out["kind"] = a.is_program() ? "program" : "formula";
        out["text"] = a.text;
        out["note"] = a.note;
        return out;
      },
      py::arg("name"), "Look up a built-in artifact by name.");
  m.def("artifact_names", [] { return artifact_names(); },
        "Names of the built-in artifacts.");

  m.def("gcd_oracle", &gcd_oracle, py::arg("n"), py::arg("m"),
        "Greatest common divisor by brute-force divisor scan; requires n, m >= 1.");
  m.def("max_oracle", &max_oracle, py::arg("n"), py::arg("m"));
  m.def("loop_iteration_count", &loop_iteration_count, py::arg("n"), py::arg("m"),
        "Guard evaluations of the subtractive gcd loop from (n, m).");

  m.def(
      "engeler_witness",
      [](long n, long m) {
        EngelerWitness w = engeler_witness(n, m);
        return py::make_tuple(w.a, w.b, w.k);
      },
      py::arg("n"), py::arg("m"),
      "The coprime (a, b) with a*n = b*m and the least truncation index k containing it.");
  m.def(
      "engeler_disjunction",
      [](long k) {
        py::list out;
        for (const auto& d : engeler_disjunction(k))
          out.append(py::make_tuple(d.a, d.b, print(d.rendered)));
        return out;
      },
      py::arg("k"),
      "Coprime disjuncts (a, b, rendered) with max(a, b) <= k, in canonical order.");

  m.def(
      "demo",
      [](const std::string& name, long n, long m, long budget) {
        DemoReport rep = run_demo(name, n, m, make_cfg(budget, 64, 6, false));
        py::dict out;
        out["name"] = rep.name;
        out["pass"] = rep.pass;
        out["detail"] = rep.detail;
        out["text"] = rep.text;
        return out;
      },
      py::arg("name"), py::arg("n") = 12, py::arg("m") = 18, py::arg("budget") = 10000,
      "Run a built-in demo: standard (accepts n, m), nsn-halt, or nsn-diverge.");
}
