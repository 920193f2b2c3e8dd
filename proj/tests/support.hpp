// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// Shared test utilities: the seeded random-tree generators used by the
// round-trip and property suites (seed overridable through ALWB_SEED), and a
// small exhaustively-enumerable structure for exact-quantifier tests.

#ifndef ALWB_TESTS_SUPPORT_HPP
#define ALWB_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "alwb/models.hpp"
#include "alwb/semantics.hpp"
#include "alwb/syntax.hpp"

namespace alwb::testsupport {

// ---------------------------------------------------------------------------
// Seeding

inline unsigned long long corpus_seed() {
  if (const char* s = std::getenv("ALWB_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0') return v;
  }
  return 0x5eedULL;
}

// ---------------------------------------------------------------------------
// Random syntax-tree generators. Every generated tree is grammar-valid, so
// print() then parse_*() must reproduce it exactly.

class Gen {
 public:
  explicit Gen(unsigned long long seed) : rng_(seed) {}

  long pick(long n) { return std::uniform_int_distribution<long>(0, n - 1)(rng_); }

  const std::string& ident() {
    static const std::vector<std::string> pool = {"x",  "y",  "z",   "n",   "m",
                                                  "u'", "v2", "acc", "r_0", "k'"};
    return pool[pick(static_cast<long>(pool.size()))];
  }

  const std::string& bool_ident() {
    static const std::vector<std::string> pool = {"p", "q", "flag", "done'"};
    return pool[pick(static_cast<long>(pool.size()))];
  }

  TermPtr term(int depth) {
    if (depth <= 0) return pick(2) ? Term::var(ident()) : Term::zero();
    switch (pick(7)) {
      case 0: return Term::var(ident());
      case 1: return Term::zero();
      case 2: return Term::succ(term(depth - 1));
      case 3: return Term::pred(term(depth - 1));
      case 4: return Term::add(term(depth - 1), term(depth - 1));
      case 5: return Term::mul(term(depth - 1), term(depth - 1));
      default: return Term::monus(term(depth - 1), term(depth - 1));
    }
  }

  OpenPtr open(int depth) {
    if (depth <= 0) {
      switch (pick(5)) {
        case 0: return OpenFormula::eq(term(0), term(0));
        case 1: return OpenFormula::less(term(0), term(0));
        case 2: return OpenFormula::bool_var(bool_ident());
        case 3: return OpenFormula::true_const();
        default: return OpenFormula::false_const();
      }
    }
    switch (pick(8)) {
      case 0: return OpenFormula::eq(term(depth - 1), term(depth - 1));
      case 1: return OpenFormula::less(term(depth - 1), term(depth - 1));
      case 2: return OpenFormula::o_not(open(depth - 1));
      case 3: return OpenFormula::o_and(open(depth - 1), open(depth - 1));
      case 4: return OpenFormula::o_or(open(depth - 1), open(depth - 1));
      case 5: return OpenFormula::o_implies(open(depth - 1), open(depth - 1));
      case 6: return OpenFormula::bool_var(bool_ident());
      default: return OpenFormula::true_const();
    }
  }

  ProgramPtr program(int depth) {
    if (depth <= 0) {
      switch (pick(3)) {
        case 0: return Program::assign(ident(), term(1));
        case 1: return Program::bool_assign(bool_ident(), open(1));
        default: return Program::skip();
      }
    }
    switch (pick(7)) {
      case 0: return Program::assign(ident(), term(depth));
      case 1: return Program::bool_assign(bool_ident(), open(depth));
      case 2: return Program::seq(program(depth - 1), program(depth - 1));
      case 3: return Program::if_(open(depth - 1), program(depth - 1), program(depth - 1));
      case 4: return Program::if_(open(depth - 1), program(depth - 1), nullptr);
      case 5: return Program::while_(open(depth - 1), program(depth - 1));
      default: return Program::skip();
    }
  }

  FormulaPtr formula(int depth) {
    if (depth <= 0) return Formula::wrap(open(1));
    switch (pick(10)) {
      case 0: return Formula::wrap(open(depth));
      case 1: return Formula::box(program(depth - 1), formula(depth - 1));
      case 2: return Formula::iter_union(program(depth - 1), formula(depth - 1));
      case 3: return Formula::iter_inter(program(depth - 1), formula(depth - 1));
      case 4: return Formula::forall(ident(), formula(depth - 1));
      case 5: return Formula::exists(ident(), formula(depth - 1));
      case 6: return Formula::f_not(formula(depth - 1));
      case 7: return Formula::f_and(formula(depth - 1), formula(depth - 1));
      case 8: return Formula::f_or(formula(depth - 1), formula(depth - 1));
      default: return Formula::f_implies(formula(depth - 1), formula(depth - 1));
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// A finite structure with saturating arithmetic on {0, ..., size-1}.
// enumerate() always returns the whole carrier, so quantifier sweeps are
// exact and Forall/Exists can come out True.

class FiniteNat final : public Structure {
 public:
  explicit FiniteNat(long size) : size_(size < 1 ? 1 : size) {}

  std::string name() const override { return "finite" + std::to_string(size_); }

  Elem zero() const override { return mk(0); }
  Elem succ(const Elem& a) const override { return mk(std::min(get(a) + 1, size_ - 1)); }
  Elem pred(const Elem& a) const override { return mk(std::max(get(a) - 1, 0L)); }
  Elem add(const Elem& a, const Elem& b) const override {
    return mk(std::min(get(a) + get(b), size_ - 1));
  }
  bool has_mul() const override { return true; }
  Elem mul(const Elem& a, const Elem& b) const override {
    return mk(std::min(get(a) * get(b), size_ - 1));
  }
  Elem monus(const Elem& a, const Elem& b) const override {
    return mk(std::max(get(a) - get(b), 0L));
  }
  bool equal(const Elem& a, const Elem& b) const override { return get(a) == get(b); }
  bool less(const Elem& a, const Elem& b) const override { return get(a) < get(b); }

  std::vector<Elem> enumerate(long) const override {
    std::vector<Elem> out;
    for (long i = 0; i < size_; ++i) out.push_back(mk(i));
    return out;
  }
  bool is_exhaustive(long) const override { return true; }

  std::string print_elem(const Elem& a) const override { return std::to_string(get(a)); }
  std::optional<Elem> parse_elem(const std::string& text) const override {
    try {
      size_t used = 0;
      long v = std::stol(text, &used);
      if (used != text.size() || v < 0 || v >= size_) return std::nullopt;
      return mk(v);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

 private:
  static Elem mk(long v) { return Elem::make<long>(v); }
  static long get(const Elem& e) { return e.as<long>(); }
  long size_;
};

inline StructurePtr make_finite(long size) { return std::make_shared<FiniteNat>(size); }

// ---------------------------------------------------------------------------
// Valuation helpers

inline Valuation random_valuation(Gen& g, const StructurePtr& s,
                                  const std::set<std::string>& vars,
                                  const std::set<std::string>& bools, long bound) {
  Valuation v;
  std::vector<Elem> sample = s->enumerate(bound);
  for (const auto& x : vars) v.elems[x] = sample[g.pick(static_cast<long>(sample.size()))];
  for (const auto& q : bools) v.bools[q] = g.pick(2) == 1;
  return v;
}

}  // namespace alwb::testsupport

#endif  // ALWB_TESTS_SUPPORT_HPP
