// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// Proof-script checker: axiom-schema matching, finitary and omega rule
// application, theory-axiom registries, and trusted-lemma screening.

#include "alwb/proof.hpp"

#include "alwb/models.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace alwb {

namespace {

// ---------------------------------------------------------------------------
// Pattern trees
// ---------------------------------------------------------------------------

struct PatT;
struct PatO;
struct PatP;
struct PatF;
using PTp = std::shared_ptr<const PatT>;
using POp = std::shared_ptr<const PatO>;
using PPp = std::shared_ptr<const PatP>;
using PFp = std::shared_ptr<const PatF>;

struct PatT {
  enum class K { Meta, VarOf, Zero, Succ, Pred };
  K k;
  std::string name;  // Meta: term metavar; VarOf: ind-var metavar
  PTp a;
};

struct PatO {
  enum class K { Meta, TrueC };
  K k;
  std::string name;
};

struct PatP {
  enum class K { Meta, Assign, BoolAssign, Seq, If, While, Skip };
  K k;
  std::string name;      // Meta
  std::string var_meta;  // Assign: ind-var metavar; BoolAssign: bool-var metavar
  PTp rhs_term;          // Assign
  std::string rhs_open;  // BoolAssign: open metavar bound to the right-hand side
  std::string guard;     // If / While: open metavar
  PPp p1, p2;
};

struct PatF {
  enum class K {
    Meta,       // formula metavar
    OpenMeta,   // open-formula metavar in formula position
    OpenTrue,   // the literal open formula `true`
    Not, And, Or, Implies,
    Box, IterUnion, IterInter,
    Forall, Exists,
    SubstTerm,  // base(x/tau); base is a formula or open metavar
    SubstBool,  // base(q/g2); base and g2 are open metavars
  };
  K k;
  std::string name;  // Meta / OpenMeta / Subst*: base metavar
  bool base_is_open = false;  // SubstTerm: base sort
  PFp f1, f2;
  PPp prog;
  std::string var_meta;   // Forall/Exists binder; SubstTerm x; SubstBool q
  PTp tpat;               // SubstTerm tau
  std::string open_meta;  // SubstBool g2
};

PTp ptm(const char* n) { return std::make_shared<PatT>(PatT{PatT::K::Meta, n, nullptr}); }
PTp ptvar_of(const char* v) { return std::make_shared<PatT>(PatT{PatT::K::VarOf, v, nullptr}); }

PPp ppm(const char* n) {
  auto p = std::make_shared<PatP>();
  p->k = PatP::K::Meta;
  p->name = n;
  return p;
}
PPp ppassign(const char* x, PTp t) {
  auto p = std::make_shared<PatP>();
  p->k = PatP::K::Assign;
  p->var_meta = x;
  p->rhs_term = std::move(t);
  return p;
}
PPp ppbassign(const char* q, const char* g) {
  auto p = std::make_shared<PatP>();
  p->k = PatP::K::BoolAssign;
  p->var_meta = q;
  p->rhs_open = g;
  return p;
}
PPp ppseq(PPp a, PPp b) {
  auto p = std::make_shared<PatP>();
  p->k = PatP::K::Seq;
  p->p1 = std::move(a);
  p->p2 = std::move(b);
  return p;
}
PPp ppif(const char* g, PPp a, PPp b) {
  auto p = std::make_shared<PatP>();
  p->k = PatP::K::If;
  p->guard = g;
  p->p1 = std::move(a);
  p->p2 = std::move(b);
  return p;
}
PPp ppwhile(const char* g, PPp body) {
  auto p = std::make_shared<PatP>();
  p->k = PatP::K::While;
  p->guard = g;
  p->p1 = std::move(body);
  return p;
}

PFp pf(PatF::K k) {
  auto p = std::make_shared<PatF>();
  p->k = k;
  return p;
}
PFp mfa(const char* n) {
  auto p = pf(PatF::K::Meta);
  auto q = std::const_pointer_cast<PatF>(p);
  q->name = n;
  return p;
}
PFp moa(const char* n) {
  auto p = std::const_pointer_cast<PatF>(pf(PatF::K::OpenMeta));
  p->name = n;
  return p;
}
PFp popen_true() { return pf(PatF::K::OpenTrue); }
PFp pnot(PFp a) {
  auto p = std::const_pointer_cast<PatF>(pf(PatF::K::Not));
  p->f1 = std::move(a);
  return p;
}
PFp pbin(PatF::K k, PFp a, PFp b) {
  auto p = std::const_pointer_cast<PatF>(pf(k));
  p->f1 = std::move(a);
  p->f2 = std::move(b);
  return p;
}
PFp pand(PFp a, PFp b) { return pbin(PatF::K::And, std::move(a), std::move(b)); }
PFp por(PFp a, PFp b) { return pbin(PatF::K::Or, std::move(a), std::move(b)); }
PFp pimp(PFp a, PFp b) { return pbin(PatF::K::Implies, std::move(a), std::move(b)); }
PFp piff(PFp a, PFp b) { return pand(pimp(a, b), pimp(b, a)); }
PFp pbox(PPp k, PFp f) {
  auto p = std::const_pointer_cast<PatF>(pf(PatF::K::Box));
  p->prog = std::move(k);
  p->f1 = std::move(f);
  return p;
}
PFp punion(PPp k, PFp f) {
  auto p = std::const_pointer_cast<PatF>(pf(PatF::K::IterUnion));
  p->prog = std::move(k);
  p->f1 = std::move(f);
  return p;
}
PFp pinter(PPp k, PFp f) {
  auto p = std::const_pointer_cast<PatF>(pf(PatF::K::IterInter));
  p->prog = std::move(k);
  p->f1 = std::move(f);
  return p;
}
PFp pforall(const char* x, PFp f) {
  auto p = std::const_pointer_cast<PatF>(pf(PatF::K::Forall));
  p->var_meta = x;
  p->f1 = std::move(f);
  return p;
}
PFp pexists(const char* x, PFp f) {
  auto p = std::const_pointer_cast<PatF>(pf(PatF::K::Exists));
  p->var_meta = x;
  p->f1 = std::move(f);
  return p;
}
PFp psubf(const char* base, const char* x, PTp t) {
  auto p = std::const_pointer_cast<PatF>(pf(PatF::K::SubstTerm));
  p->name = base;
  p->base_is_open = false;
  p->var_meta = x;
  p->tpat = std::move(t);
  return p;
}
PFp psubo(const char* base, const char* x, PTp t) {
  auto p = std::const_pointer_cast<PatF>(pf(PatF::K::SubstTerm));
  p->name = base;
  p->base_is_open = true;
  p->var_meta = x;
  p->tpat = std::move(t);
  return p;
}
PFp psubob(const char* base, const char* q, const char* g2) {
  auto p = std::const_pointer_cast<PatF>(pf(PatF::K::SubstBool));
  p->name = base;
  p->var_meta = q;
  p->open_meta = g2;
  return p;
}

// ---------------------------------------------------------------------------
// The unfolding view: canonical trees fold connectives into open formulas
// whenever every operand is open; matching must see those folded nodes as
// formula-level connectives again.
// ---------------------------------------------------------------------------

struct FView {
  Formula::Kind kind;
  FormulaPtr a, b;
};

FView view(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Open) {
    const auto& g = f->open;
    switch (g->kind) {
      case OpenFormula::Kind::And:
        return {Formula::Kind::And, Formula::wrap(g->f1), Formula::wrap(g->f2)};
      case OpenFormula::Kind::Or:
        return {Formula::Kind::Or, Formula::wrap(g->f1), Formula::wrap(g->f2)};
      case OpenFormula::Kind::Implies:
        return {Formula::Kind::Implies, Formula::wrap(g->f1), Formula::wrap(g->f2)};
      case OpenFormula::Kind::Not:
        return {Formula::Kind::Not, Formula::wrap(g->f1), nullptr};
      default:
        return {Formula::Kind::Open, nullptr, nullptr};
    }
  }
  switch (f->kind) {
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return {f->kind, f->f1, f->f2};
    case Formula::Kind::Not:
      return {f->kind, f->f1, nullptr};
    default:
      return {f->kind, nullptr, nullptr};
  }
}

// Splits a formula that is an implication (possibly folded) into its sides.
bool split_implies(const FormulaPtr& f, FormulaPtr& lhs, FormulaPtr& rhs) {
  FView v = view(f);
  if (v.kind != Formula::Kind::Implies) return false;
  lhs = v.a;
  rhs = v.b;
  return true;
}

// ---------------------------------------------------------------------------
// Binding helpers
// ---------------------------------------------------------------------------

template <typename Map, typename Value, typename Eq>
bool bind_or_check(Map& m, const std::string& name, const Value& v, Eq eq) {
  auto it = m.find(name);
  if (it == m.end()) {
    m.emplace(name, v);
    return true;
  }
  return eq(it->second, v);
}

bool bind_formula(Bindings& b, const std::string& n, const FormulaPtr& f) {
  return bind_or_check(b.formulas, n, f,
                       [](const FormulaPtr& a, const FormulaPtr& c) { return equal(a, c); });
}
bool bind_open(Bindings& b, const std::string& n, const OpenPtr& g) {
  return bind_or_check(b.opens, n, g,
                       [](const OpenPtr& a, const OpenPtr& c) { return equal(a, c); });
}
bool bind_program(Bindings& b, const std::string& n, const ProgramPtr& k) {
  return bind_or_check(b.programs, n, k,
                       [](const ProgramPtr& a, const ProgramPtr& c) { return equal(a, c); });
}
bool bind_term(Bindings& b, const std::string& n, const TermPtr& t) {
  return bind_or_check(b.terms, n, t,
                       [](const TermPtr& a, const TermPtr& c) { return equal(a, c); });
}
bool bind_ind_var(Bindings& b, const std::string& n, const std::string& v) {
  return bind_or_check(b.ind_vars, n, v,
                       [](const std::string& a, const std::string& c) { return a == c; });
}
bool bind_bool_var(Bindings& b, const std::string& n, const std::string& v) {
  return bind_or_check(b.bool_vars, n, v,
                       [](const std::string& a, const std::string& c) { return a == c; });
}

// ---------------------------------------------------------------------------
// Solving alpha(x/tau): locate the candidate subterm standing where the first
// free occurrence of x appears in the base, then verify by substitution.
// ---------------------------------------------------------------------------

std::optional<TermPtr> locate_t(const TermPtr& a, const TermPtr& n, const std::string& x);

std::optional<TermPtr> locate_t(const TermPtr& a, const TermPtr& n, const std::string& x) {
  if (a->kind == Term::Kind::Var && a->name == x) return n;
  if (a->kind != n->kind) return std::nullopt;
  if (a->a && n->a) {
    if (auto r = locate_t(a->a, n->a, x)) return r;
  }
  if (a->b && n->b) {
    if (auto r = locate_t(a->b, n->b, x)) return r;
  }
  return std::nullopt;
}

std::optional<TermPtr> locate_o(const OpenPtr& a, const OpenPtr& n, const std::string& x) {
  if (a->kind != n->kind) return std::nullopt;
  if (a->t1 && n->t1) {
    if (auto r = locate_t(a->t1, n->t1, x)) return r;
  }
  if (a->t2 && n->t2) {
    if (auto r = locate_t(a->t2, n->t2, x)) return r;
  }
  if (a->f1 && n->f1) {
    if (auto r = locate_o(a->f1, n->f1, x)) return r;
  }
  if (a->f2 && n->f2) {
    if (auto r = locate_o(a->f2, n->f2, x)) return r;
  }
  return std::nullopt;
}

std::optional<TermPtr> locate_p(const ProgramPtr& a, const ProgramPtr& n, const std::string& x) {
  if (a->kind != n->kind) return std::nullopt;
  if (a->rhs_term && n->rhs_term) {
    if (auto r = locate_t(a->rhs_term, n->rhs_term, x)) return r;
  }
  if (a->rhs_open && n->rhs_open) {
    if (auto r = locate_o(a->rhs_open, n->rhs_open, x)) return r;
  }
  if (a->guard && n->guard) {
    if (auto r = locate_o(a->guard, n->guard, x)) return r;
  }
  if (a->p1 && n->p1) {
    if (auto r = locate_p(a->p1, n->p1, x)) return r;
  }
  if (a->p2 && n->p2) {
    if (auto r = locate_p(a->p2, n->p2, x)) return r;
  }
  return std::nullopt;
}

std::optional<TermPtr> locate_f(const FormulaPtr& a, const FormulaPtr& n, const std::string& x) {
  if (a->kind != n->kind) return std::nullopt;
  if ((a->kind == Formula::Kind::Forall || a->kind == Formula::Kind::Exists) && a->var == x) {
    return std::nullopt;  // x is not free below this binder
  }
  if (a->open && n->open) {
    if (auto r = locate_o(a->open, n->open, x)) return r;
  }
  if (a->prog && n->prog) {
    if (auto r = locate_p(a->prog, n->prog, x)) return r;
  }
  if (a->f1 && n->f1) {
    if (auto r = locate_f(a->f1, n->f1, x)) return r;
  }
  if (a->f2 && n->f2) {
    if (auto r = locate_f(a->f2, n->f2, x)) return r;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// The matcher
// ---------------------------------------------------------------------------

bool match_t(const PTp& p, const TermPtr& t, Bindings& b);
bool match_p(const PPp& p, const ProgramPtr& k, Bindings& b);
bool match_f(const PFp& p, const FormulaPtr& f, Bindings& b);

bool match_t(const PTp& p, const TermPtr& t, Bindings& b) {
  switch (p->k) {
    case PatT::K::Meta:
      return bind_term(b, p->name, t);
    case PatT::K::VarOf: {
      auto it = b.ind_vars.find(p->name);
      if (it == b.ind_vars.end()) return false;
      return t->kind == Term::Kind::Var && t->name == it->second;
    }
    case PatT::K::Zero:
      return t->kind == Term::Kind::Zero;
    case PatT::K::Succ:
      return t->kind == Term::Kind::Succ && match_t(p->a, t->a, b);
    case PatT::K::Pred:
      return t->kind == Term::Kind::Pred && match_t(p->a, t->a, b);
  }
  return false;
}

bool match_p(const PPp& p, const ProgramPtr& k, Bindings& b) {
  switch (p->k) {
    case PatP::K::Meta:
      return bind_program(b, p->name, k);
    case PatP::K::Assign:
      return k->kind == Program::Kind::Assign && bind_ind_var(b, p->var_meta, k->target) &&
             match_t(p->rhs_term, k->rhs_term, b);
    case PatP::K::BoolAssign:
      return k->kind == Program::Kind::BoolAssign && bind_bool_var(b, p->var_meta, k->target) &&
             bind_open(b, p->rhs_open, k->rhs_open);
    case PatP::K::Seq:
      return k->kind == Program::Kind::Seq && match_p(p->p1, k->p1, b) && match_p(p->p2, k->p2, b);
    case PatP::K::If:
      return k->kind == Program::Kind::If && bind_open(b, p->guard, k->guard) &&
             match_p(p->p1, k->p1, b) && match_p(p->p2, k->p2, b);
    case PatP::K::While:
      return k->kind == Program::Kind::While && bind_open(b, p->guard, k->guard) &&
             match_p(p->p1, k->p1, b);
    case PatP::K::Skip:
      return k->kind == Program::Kind::Skip;
  }
  return false;
}

// Resolves a term pattern to a concrete term when it is ground under the
// current bindings; returns null if a metavariable in it is still unbound.
TermPtr resolve_t(const PTp& p, const Bindings& b) {
  switch (p->k) {
    case PatT::K::Meta: {
      auto it = b.terms.find(p->name);
      return it == b.terms.end() ? nullptr : it->second;
    }
    case PatT::K::VarOf: {
      auto it = b.ind_vars.find(p->name);
      return it == b.ind_vars.end() ? nullptr : Term::var(it->second);
    }
    case PatT::K::Zero:
      return Term::zero();
    case PatT::K::Succ: {
      auto a = resolve_t(p->a, b);
      return a ? Term::succ(a) : nullptr;
    }
    case PatT::K::Pred: {
      auto a = resolve_t(p->a, b);
      return a ? Term::pred(a) : nullptr;
    }
  }
  return nullptr;
}

bool match_subst_term(const PatF& p, const FormulaPtr& f, Bindings& b) {
  const std::string x_meta = p.var_meta;
  auto xit = b.ind_vars.find(x_meta);
  if (xit == b.ind_vars.end()) return false;  // binder must be bound first
  const std::string& x = xit->second;

  FormulaPtr base;
  if (p.base_is_open) {
    auto git = b.opens.find(p.name);
    if (git == b.opens.end()) return false;
    base = Formula::wrap(git->second);
  } else {
    auto fit = b.formulas.find(p.name);
    if (fit == b.formulas.end()) return false;
    base = fit->second;
  }

  TermPtr tau = resolve_t(p.tpat, b);
  if (!tau) {
    // Solve for tau: the candidate subterm standing at the first free
    // occurrence of x; when x does not occur free, default to x itself.
    if (!free_vars(base).count(x)) {
      tau = Term::var(x);
    } else {
      auto located = locate_f(base, f, x);
      if (!located) return false;
      tau = *located;
    }
    if (p.tpat->k == PatT::K::Meta) {
      if (!bind_term(b, p.tpat->name, tau)) return false;
    }
  }
  FormulaPtr expected = substitute(base, x, tau);
  return equal(expected, f);
}

bool match_subst_bool(const PatF& p, const FormulaPtr& f, Bindings& b) {
  auto git = b.opens.find(p.name);
  auto qit = b.bool_vars.find(p.var_meta);
  auto hit = b.opens.find(p.open_meta);
  if (git == b.opens.end() || qit == b.bool_vars.end() || hit == b.opens.end()) return false;
  OpenPtr expected = substitute_bool(git->second, qit->second, hit->second);
  return equal(Formula::wrap(expected), f);
}

bool match_f(const PFp& p, const FormulaPtr& f, Bindings& b) {
  switch (p->k) {
    case PatF::K::Meta:
      return bind_formula(b, p->name, f);
    case PatF::K::OpenMeta:
      return f->kind == Formula::Kind::Open && bind_open(b, p->name, f->open);
    case PatF::K::OpenTrue:
      return f->kind == Formula::Kind::Open && f->open->kind == OpenFormula::Kind::TrueConst;
    case PatF::K::Not: {
      FView v = view(f);
      return v.kind == Formula::Kind::Not && match_f(p->f1, v.a, b);
    }
    case PatF::K::And:
    case PatF::K::Or:
    case PatF::K::Implies: {
      FView v = view(f);
      Formula::Kind want = p->k == PatF::K::And   ? Formula::Kind::And
                           : p->k == PatF::K::Or ? Formula::Kind::Or
                                                 : Formula::Kind::Implies;
      return v.kind == want && match_f(p->f1, v.a, b) && match_f(p->f2, v.b, b);
    }
    case PatF::K::Box:
      return f->kind == Formula::Kind::Box && match_p(p->prog, f->prog, b) &&
             match_f(p->f1, f->f1, b);
    case PatF::K::IterUnion:
      return f->kind == Formula::Kind::IterUnion && match_p(p->prog, f->prog, b) &&
             match_f(p->f1, f->f1, b);
    case PatF::K::IterInter:
      return f->kind == Formula::Kind::IterInter && match_p(p->prog, f->prog, b) &&
             match_f(p->f1, f->f1, b);
    case PatF::K::Forall:
      return f->kind == Formula::Kind::Forall && bind_ind_var(b, p->var_meta, f->var) &&
             match_f(p->f1, f->f1, b);
    case PatF::K::Exists:
      return f->kind == Formula::Kind::Exists && bind_ind_var(b, p->var_meta, f->var) &&
             match_f(p->f1, f->f1, b);
    case PatF::K::SubstTerm:
      return match_subst_term(*p, f, b);
    case PatF::K::SubstBool:
      return match_subst_bool(*p, f, b);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Schema table
// ---------------------------------------------------------------------------

using SideCond = std::function<bool(const Bindings&)>;

struct SchemaDef {
  PFp pattern;
  std::vector<SideCond> side_conditions;
};

const std::map<std::string, SchemaDef>& schema_table() {
  static const std::map<std::string, SchemaDef> table = [] {
    std::map<std::string, SchemaDef> t;
    auto A = [] { return mfa("alpha"); };
    auto B = [] { return mfa("beta"); };
    auto D = [] { return mfa("delta"); };
    auto G = [] { return moa("gamma"); };
    auto K = [] { return ppm("K"); };
    auto M = [] { return ppm("M"); };

    t["Ax1"] = {pimp(pimp(A(), B()), pimp(pimp(B(), D()), pimp(A(), D()))), {}};
    t["Ax2"] = {pimp(A(), por(A(), B())), {}};
    t["Ax3"] = {pimp(B(), por(A(), B())), {}};
    t["Ax4"] = {pimp(pimp(A(), D()), pimp(pimp(B(), D()), pimp(por(A(), B()), D()))), {}};
    t["Ax5"] = {pimp(pand(A(), B()), A()), {}};
    t["Ax6"] = {pimp(pand(A(), B()), B()), {}};
    t["Ax7"] = {pimp(pimp(D(), A()), pimp(pimp(D(), B()), pimp(D(), pand(A(), B())))), {}};
    t["Ax8"] = {piff(pimp(A(), pimp(B(), D())), pimp(pand(A(), B()), D())), {}};
    t["Ax9"] = {pimp(pand(A(), pnot(A())), B()), {}};
    t["Ax10"] = {pimp(pimp(A(), pand(A(), pnot(A()))), pnot(A())), {}};
    t["Ax11"] = {por(A(), pnot(A())), {}};
    t["Ax12"] = {pimp(pforall("x", A()), psubf("alpha", "x", ptm("tau"))), {}};
    t["Ax13"] = {piff(pforall("x", A()), pnot(pexists("x", pnot(A())))), {}};
    t["Ax14"] = {piff(pbox(K(), pexists("x", A())),
                      pexists("y", pbox(K(), psubf("alpha", "x", ptvar_of("y"))))),
                 {[](const Bindings& b) {
                   const std::string& y = b.ind_vars.at("y");
                   return vars_of_program(b.programs.at("K")).count(y) == 0;
                 }}};
    t["Ax15"] = {piff(pbox(K(), por(A(), B())), por(pbox(K(), A()), pbox(K(), B()))), {}};
    t["Ax16"] = {piff(pbox(K(), pand(A(), B())), pand(pbox(K(), A()), pbox(K(), B()))), {}};
    t["Ax17"] = {pimp(pbox(K(), pnot(A())), pnot(pbox(K(), A()))), {}};
    t["Ax18"] = {
        pand(piff(pbox(ppassign("x", ptm("tau")), G()),
                  pand(psubo("gamma", "x", ptm("tau")),
                       pbox(ppassign("x", ptm("tau")), popen_true()))),
             piff(pbox(ppbassign("q", "gamma2"), G()), psubob("gamma", "q", "gamma2"))),
        {}};
    t["Ax19"] = {piff(pbox(ppseq(K(), M()), A()), pbox(K(), pbox(M(), A()))), {}};
    t["Ax20"] = {piff(pbox(ppif("gamma", K(), M()), A()),
                      por(pand(pnot(G()), pbox(M(), A())), pand(G(), pbox(K(), A())))),
                 {}};
    t["Ax21"] = {piff(pbox(ppwhile("gamma", K()), A()),
                      por(pand(pnot(G()), A()),
                          pand(G(), pbox(K(), pbox(ppwhile("gamma", K()),
                                                   pand(pnot(G()), A())))))),
                 {}};
    t["Ax22"] = {piff(pinter(K(), A()), pand(A(), pbox(K(), pinter(K(), A())))), {}};
    t["Ax23"] = {piff(punion(K(), A()), por(A(), pbox(K(), punion(K(), A())))), {}};
    return t;
  }();
  return table;
}

// Sorts of the metavariable names used across all schemas; `bind` values in
// scripts are parsed according to this table.
char metavar_sort(const std::string& name) {
  if (name == "alpha" || name == "beta" || name == "delta") return 'f';
  if (name == "gamma" || name == "gamma2") return 'o';
  if (name == "K" || name == "M") return 'p';
  if (name == "tau") return 't';
  if (name == "x" || name == "y") return 'v';
  if (name == "q") return 'q';
  return '?';
}

bool side_conditions_hold(const std::string& schema_id, const Bindings& b) {
  const auto& def = schema_table().at(schema_id);
  for (const auto& cond : def.side_conditions) {
    if (!cond(b)) return false;
  }
  return true;
}

std::optional<Bindings> match_pattern_only(const std::string& schema_id, const FormulaPtr& f,
                                           const Bindings* seed) {
  auto it = schema_table().find(schema_id);
  if (it == schema_table().end()) return std::nullopt;
  Bindings b = seed ? *seed : Bindings{};
  if (!match_f(it->second.pattern, f, b)) return std::nullopt;
  return b;
}

}  // namespace

bool schema_exists(const std::string& id) { return schema_table().count(id) != 0; }

std::vector<std::string> schema_ids() {
  std::vector<std::string> ids;
  ids.reserve(23);
  for (int i = 1; i <= 23; ++i) ids.push_back("Ax" + std::to_string(i));
  return ids;
}

std::optional<Bindings> match_schema(const std::string& schema_id, const FormulaPtr& conclusion,
                                     const Bindings* seed) {
  auto b = match_pattern_only(schema_id, conclusion, seed);
  if (!b) return std::nullopt;
  if (!side_conditions_hold(schema_id, *b)) return std::nullopt;
  return b;
}

std::string to_string(StepVerdict v) {
  switch (v) {
    case StepVerdict::OK: return "OK";
    case StepVerdict::SchemaMismatch: return "SchemaMismatch";
    case StepVerdict::SideConditionViolated: return "SideConditionViolated";
    case StepVerdict::PremiseMissing: return "PremiseMissing";
    case StepVerdict::TrustedLemmaRefuted: return "TrustedLemmaRefuted";
    case StepVerdict::OmegaSampleFailed: return "OmegaSampleFailed";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Finitary rules
// ---------------------------------------------------------------------------

namespace {

bool term_vars_disjoint_from_program(const TermPtr& tau, const ProgramPtr& m) {
  auto tv = free_vars(tau);
  auto pv = vars_of_program(m);
  for (const auto& v : tv) {
    if (pv.count(v)) return false;
  }
  return true;
}

// Decomposes a descent-rule conclusion [while !(x = 0) do M od](x = 0) into
// its loop variable and body.
bool split_descent_conclusion(const FormulaPtr& f, std::string& x, ProgramPtr& m) {
  if (f->kind != Formula::Kind::Box) return false;
  const auto& k = f->prog;
  if (k->kind != Program::Kind::While) return false;
  const auto& g = k->guard;
  if (g->kind != OpenFormula::Kind::Not || g->f1->kind != OpenFormula::Kind::Eq) return false;
  if (g->f1->t1->kind != Term::Kind::Var || g->f1->t2->kind != Term::Kind::Zero) return false;
  x = g->f1->t1->name;
  m = k->p1;
  const auto& body = f->f1;
  if (body->kind != Formula::Kind::Open) return false;
  const auto& post = body->open;
  if (post->kind != OpenFormula::Kind::Eq) return false;
  if (post->t1->kind != Term::Kind::Var || post->t1->name != x) return false;
  return post->t2->kind == Term::Kind::Zero;
}

}  // namespace

StepVerdict check_rule(const std::string& rule_id, const std::vector<FormulaPtr>& premises,
                       const FormulaPtr& conclusion,
                       const std::map<std::string, std::string>& extras) {
  auto extra_program_matches = [&](const char* key, const ProgramPtr& k) {
    auto it = extras.find(key);
    if (it == extras.end()) return true;
    try {
      return equal(parse_program(it->second), k);
    } catch (const SyntaxError&) {
      return false;
    }
  };

  if (rule_id == "R1") {
    if (premises.size() != 2) return StepVerdict::PremiseMissing;
    FormulaPtr lhs, rhs;
    if (!split_implies(premises[1], lhs, rhs)) return StepVerdict::SchemaMismatch;
    if (!equal(lhs, premises[0]) || !equal(rhs, conclusion)) return StepVerdict::SchemaMismatch;
    return StepVerdict::OK;
  }

  if (rule_id == "R2") {
    if (premises.size() != 1) return StepVerdict::PremiseMissing;
    FormulaPtr cl, cr;
    if (!split_implies(conclusion, cl, cr)) return StepVerdict::SchemaMismatch;
    if (cl->kind != Formula::Kind::Box || cr->kind != Formula::Kind::Box)
      return StepVerdict::SchemaMismatch;
    if (!equal(cl->prog, cr->prog)) return StepVerdict::SchemaMismatch;
    if (!extra_program_matches("K", cl->prog)) return StepVerdict::SchemaMismatch;
    FormulaPtr pl, pr;
    if (!split_implies(premises[0], pl, pr)) return StepVerdict::SchemaMismatch;
    if (!equal(pl, cl->f1) || !equal(pr, cr->f1)) return StepVerdict::SchemaMismatch;
    return StepVerdict::OK;
  }

  if (rule_id == "R2'") {
    // From alpha and [K]true, infer [K]alpha.
    if (premises.size() != 2) return StepVerdict::PremiseMissing;
    if (conclusion->kind != Formula::Kind::Box) return StepVerdict::SchemaMismatch;
    const auto& halt = premises[1];
    if (halt->kind != Formula::Kind::Box) return StepVerdict::SchemaMismatch;
    if (halt->f1->kind != Formula::Kind::Open ||
        halt->f1->open->kind != OpenFormula::Kind::TrueConst)
      return StepVerdict::SchemaMismatch;
    if (!equal(halt->prog, conclusion->prog)) return StepVerdict::SchemaMismatch;
    if (!extra_program_matches("K", conclusion->prog)) return StepVerdict::SchemaMismatch;
    if (!equal(conclusion->f1, premises[0])) return StepVerdict::SchemaMismatch;
    return StepVerdict::OK;
  }

  if (rule_id == "R6") {
    if (premises.size() != 1) return StepVerdict::PremiseMissing;
    FormulaPtr cl, cr;
    if (!split_implies(conclusion, cl, cr)) return StepVerdict::SchemaMismatch;
    if (cl->kind != Formula::Kind::Exists) return StepVerdict::SchemaMismatch;
    const std::string& x = cl->var;
    FormulaPtr pl, pr;
    if (!split_implies(premises[0], pl, pr)) return StepVerdict::SchemaMismatch;
    if (!equal(pl, cl->f1) || !equal(pr, cr)) return StepVerdict::SchemaMismatch;
    if (free_vars(cr).count(x)) return StepVerdict::SideConditionViolated;
    return StepVerdict::OK;
  }

  if (rule_id == "R7") {
    if (premises.size() != 1) return StepVerdict::PremiseMissing;
    FormulaPtr cl, cr;
    if (!split_implies(conclusion, cl, cr)) return StepVerdict::SchemaMismatch;
    if (cr->kind != Formula::Kind::Forall) return StepVerdict::SchemaMismatch;
    const std::string& x = cr->var;
    FormulaPtr pl, pr;
    if (!split_implies(premises[0], pl, pr)) return StepVerdict::SchemaMismatch;
    if (!equal(pl, cl) || !equal(pr, cr->f1)) return StepVerdict::SchemaMismatch;
    if (free_vars(cl).count(x)) return StepVerdict::SideConditionViolated;
    return StepVerdict::OK;
  }

  if (rule_id == "D1" || rule_id == "D2") {
    // Descent rules: from (x = t) -> [M](x = P(t))   (D1)
    //            or  (x = t) -> [M](x < P(t))        (D2)
    // infer [while !(x = 0) do M od](x = 0), provided the variables of t
    // do not occur in M.
    if (premises.size() != 1) return StepVerdict::PremiseMissing;
    std::string x;
    ProgramPtr m;
    if (!split_descent_conclusion(conclusion, x, m)) return StepVerdict::SchemaMismatch;
    FormulaPtr pl, pr;
    if (!split_implies(premises[0], pl, pr)) return StepVerdict::SchemaMismatch;
    if (pl->kind != Formula::Kind::Open || pl->open->kind != OpenFormula::Kind::Eq)
      return StepVerdict::SchemaMismatch;
    if (pl->open->t1->kind != Term::Kind::Var || pl->open->t1->name != x)
      return StepVerdict::SchemaMismatch;
    TermPtr tau = pl->open->t2;
    if (pr->kind != Formula::Kind::Box || !equal(pr->prog, m)) return StepVerdict::SchemaMismatch;
    if (pr->f1->kind != Formula::Kind::Open) return StepVerdict::SchemaMismatch;
    const auto& post = pr->f1->open;
    OpenFormula::Kind want =
        rule_id == "D1" ? OpenFormula::Kind::Eq : OpenFormula::Kind::Less;
    if (post->kind != want) return StepVerdict::SchemaMismatch;
    if (post->t1->kind != Term::Kind::Var || post->t1->name != x)
      return StepVerdict::SchemaMismatch;
    if (post->t2->kind != Term::Kind::Pred || !equal(post->t2->a, tau))
      return StepVerdict::SchemaMismatch;
    if (!term_vars_disjoint_from_program(tau, m)) return StepVerdict::SideConditionViolated;
    return StepVerdict::OK;
  }

  // R3/R4/R5 take infinite premise families; they are only applied through
  // omega steps with premise templates.
  return StepVerdict::SchemaMismatch;
}

// ---------------------------------------------------------------------------
// Theories
// ---------------------------------------------------------------------------

bool is_first_order(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Open:
      return true;
    case Formula::Kind::Box:
    case Formula::Kind::IterUnion:
    case Formula::Kind::IterInter:
      return false;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
    case Formula::Kind::Not:
      return is_first_order(f->f1);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return is_first_order(f->f1) && is_first_order(f->f2);
  }
  return false;
}

namespace {

FormulaPtr arithmetic_axiom(const std::string& name) {
  auto vx = Term::var("x");
  auto vy = Term::var("y");
  auto vz = Term::var("z");
  using T = Term;
  using O = OpenFormula;
  if (name == "1") return Formula::wrap(O::o_not(O::eq(T::succ(vx), T::zero())));
  if (name == "2")
    return Formula::wrap(O::o_implies(O::eq(T::succ(vx), T::succ(vy)), O::eq(vx, vy)));
  if (name == "3") return Formula::wrap(O::eq(T::add(vx, T::zero()), vx));
  if (name == "4")
    return Formula::wrap(O::eq(T::add(vx, T::succ(vy)), T::succ(T::add(vx, vy))));
  if (name == "5")
    return f_iff(Formula::wrap(O::less(vx, vy)),
                 Formula::exists("z", Formula::wrap(O::eq(vy, T::add(vx, T::succ(vz))))));
  if (name == "6") return Formula::wrap(O::eq(T::pred(T::zero()), T::zero()));
  if (name == "7") return Formula::wrap(O::eq(T::pred(T::succ(vx)), vx));
  if (name == "8") return Formula::wrap(O::eq(T::monus(vz, T::zero()), vz));
  if (name == "9")
    return Formula::wrap(O::eq(T::monus(vz, T::succ(vx)), T::pred(T::monus(vz, vx))));
  if (name == "11") return Formula::wrap(O::eq(T::mul(vx, T::zero()), T::zero()));
  if (name == "12")
    return Formula::wrap(O::eq(T::mul(vx, T::succ(vy)), T::add(T::mul(vx, vy), vx)));
  return nullptr;
}

FormulaPtr induction_instance(const FormulaPtr& phi) {
  auto vx = Term::var("x");
  FormulaPtr base = substitute(phi, "x", Term::zero());
  FormulaPtr step =
      Formula::forall("x", Formula::f_implies(phi, substitute(phi, "x", Term::succ(vx))));
  return Formula::f_implies(Formula::f_and(base, step), Formula::forall("x", phi));
}

FormulaPtr natural_theory_axiom(const std::string& name) {
  auto vx = Term::var("x");
  auto vy = Term::var("y");
  auto vz = Term::var("z");
  auto vw = Term::var("w");
  auto vt = Term::var("t");
  using T = Term;
  using O = OpenFormula;
  using P = Program;
  if (name == "I") return arithmetic_axiom("1");
  if (name == "M") return arithmetic_axiom("2");
  if (name == "S") {
    auto loop = P::seq(P::assign("y", T::zero()),
                       P::while_(O::o_not(O::eq(vy, vx)), P::assign("y", T::succ(vy))));
    return Formula::box(loop, Formula::wrap(O::eq(vx, vy)));
  }
  if (name == "A") {
    auto loop = P::seq(
        P::assign("t", T::zero()),
        P::seq(P::assign("w", vx),
               P::while_(O::o_not(O::eq(vt, vy)),
                         P::seq(P::assign("t", T::succ(vt)), P::assign("w", T::succ(vw))))));
    return f_iff(Formula::wrap(O::eq(T::add(vx, vy), vz)),
                 Formula::box(loop, Formula::wrap(O::eq(vw, vz))));
  }
  if (name == "L") {
    auto loop = P::seq(P::assign("w", T::zero()),
                       P::while_(O::o_and(O::o_not(O::eq(vw, vy)), O::o_not(O::eq(vw, vx))),
                                 P::assign("w", T::succ(vw))));
    return f_iff(Formula::wrap(O::less(vx, vy)),
                 Formula::box(loop, Formula::wrap(O::o_and(O::eq(vw, vx),
                                                           O::o_not(O::eq(vw, vy))))));
  }
  if (name == "P") {
    auto loop = P::seq(P::assign("w", T::zero()),
                       P::if_(O::o_not(O::eq(vx, T::zero())),
                              P::while_(O::o_not(O::eq(T::succ(vw), vx)),
                                        P::assign("w", T::succ(vw))),
                              P::skip()));
    return f_iff(Formula::wrap(O::eq(T::pred(vx), vz)),
                 Formula::box(loop, Formula::wrap(O::eq(vw, vz))));
  }
  if (name == "O") {
    auto loop = P::seq(
        P::assign("w", vx),
        P::seq(P::assign("t", T::zero()),
               P::while_(O::o_not(O::eq(vt, vy)),
                         P::seq(P::assign("t", T::succ(vt)), P::assign("w", T::pred(vw))))));
    return f_iff(Formula::wrap(O::eq(T::monus(vx, vy), vz)),
                 Formula::box(loop, Formula::wrap(O::eq(vw, vz))));
  }
  return nullptr;
}

}  // namespace

FormulaPtr theory_axiom(const std::string& theory, const std::string& name,
                        const FormulaPtr* phi) {
  bool arithmetic = theory == "Th0" || theory == "Th1" || theory == "Th2";
  if (!arithmetic && theory != "Th3") throw UnknownAxiom("unknown theory: " + theory);

  if (arithmetic) {
    if (name == "induction") {
      if (!phi || !*phi) throw UnknownAxiom(theory + " induction requires a phi instance");
      if (!is_first_order(*phi))
        throw NotFirstOrder("induction instances require a first-order phi");
      return induction_instance(*phi);
    }
    bool has_mul = theory != "Th1";
    if (!has_mul && (name == "11" || name == "12"))
      throw UnknownAxiom(theory + " has no axiom " + name);
    if (auto f = arithmetic_axiom(name)) return f;
    throw UnknownAxiom(theory + " has no axiom " + name);
  }

  if (auto f = natural_theory_axiom(name)) return f;
  throw UnknownAxiom("Th3 has no axiom " + name);
}

// ---------------------------------------------------------------------------
// Proof-script parsing
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Splits a justification line into tokens; a double-quoted span (which may
// begin mid-token, as in K="x := 0") joins into the current token.
std::vector<std::string> tokenize_by_line(const std::string& s, int lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool in_token = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '"') {
      size_t close = s.find('"', i + 1);
      if (close == std::string::npos)
        throw SyntaxError("unterminated quote", lineno, static_cast<int>(i + 1));
      cur += s.substr(i + 1, close - i - 1);
      in_token = true;
      i = close;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_token) {
        out.push_back(cur);
        cur.clear();
        in_token = false;
      }
    } else {
      cur += c;
      in_token = true;
    }
  }
  if (in_token) out.push_back(cur);
  return out;
}

std::pair<std::string, std::string> split_eq(const std::string& tok, int lineno) {
  size_t p = tok.find('=');
  if (p == std::string::npos)
    throw SyntaxError("expected name=value, got '" + tok + "'", lineno, 1);
  return {tok.substr(0, p), tok.substr(p + 1)};
}

long parse_long(const std::string& s, int lineno) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw SyntaxError("expected a number, got '" + s + "'", lineno, 1);
  }
}

void parse_by_line(ScriptStep& step, const std::string& rest, int lineno) {
  auto toks = tokenize_by_line(rest, lineno);
  if (toks.empty()) throw SyntaxError("empty justification", lineno, 1);
  const std::string& kind = toks[0];

  if (kind == "axiom") {
    if (toks.size() < 2) throw SyntaxError("axiom needs a schema id", lineno, 1);
    step.kind = ScriptStep::Just::Axiom;
    step.schema_id = toks[1];
    for (size_t i = 2; i < toks.size(); i += 2) {
      if (toks[i] != "bind" || i + 1 >= toks.size())
        throw SyntaxError("expected 'bind name=value'", lineno, 1);
      auto [k, v] = split_eq(toks[i + 1], lineno);
      step.binds[k] = v;
    }
    return;
  }

  if (kind == "theory") {
    if (toks.size() < 3) throw SyntaxError("theory needs a theory id and axiom name", lineno, 1);
    step.kind = ScriptStep::Just::Theory;
    step.theory = toks[1];
    step.axiom_name = toks[2];
    for (size_t i = 3; i < toks.size(); ++i) {
      auto [k, v] = split_eq(toks[i], lineno);
      if (k != "phi") throw SyntaxError("theory accepts only phi=<formula>", lineno, 1);
      step.phi_text = v;
    }
    return;
  }

  if (kind == "rule") {
    if (toks.size() < 4 || toks[2] != "from")
      throw SyntaxError("expected 'rule <id> from <steps>'", lineno, 1);
    step.kind = ScriptStep::Just::Rule;
    step.rule_id = toks[1];
    size_t i = 3;
    std::string ids;
    for (; i < toks.size() && toks[i] != "with"; ++i) ids += toks[i];
    std::stringstream ss(ids);
    std::string id;
    while (std::getline(ss, id, ',')) {
      id = trim(id);
      if (!id.empty()) step.premise_ids.push_back(id);
    }
    if (step.premise_ids.empty()) throw SyntaxError("rule cites no premises", lineno, 1);
    if (i < toks.size() && toks[i] == "with") {
      for (++i; i < toks.size(); ++i) {
        auto [k, v] = split_eq(toks[i], lineno);
        step.extras[k] = v;
      }
    }
    return;
  }

  if (kind == "omega") {
    if (toks.size() != 6 || toks[2] != "template" || toks[4] != "samples")
      throw SyntaxError("expected 'omega <rule> template <id> samples <n>'", lineno, 1);
    step.kind = ScriptStep::Just::Omega;
    step.omega_rule = toks[1];
    step.template_id = toks[3];
    step.samples = parse_long(toks[5], lineno);
    return;
  }

  if (kind == "trusted") {
    if (toks.size() != 5 || toks[2] != "validate")
      throw SyntaxError("expected 'trusted <name> validate bound=<n> budget=<n>'", lineno, 1);
    step.kind = ScriptStep::Just::Trusted;
    step.trusted_name = toks[1];
    for (size_t i = 3; i < 5; ++i) {
      auto [k, v] = split_eq(toks[i], lineno);
      if (k == "bound")
        step.validate_bound = parse_long(v, lineno);
      else if (k == "budget")
        step.validate_budget = parse_long(v, lineno);
      else
        throw SyntaxError("trusted accepts bound= and budget=", lineno, 1);
    }
    if (step.validate_bound <= 0 || step.validate_budget <= 0)
      throw SyntaxError("trusted validation needs bound>=1 and budget>=1", lineno, 1);
    return;
  }

  throw SyntaxError("unknown justification '" + kind + "'", lineno, 1);
}

struct LineCursor {
  std::vector<std::pair<std::string, int>> lines;  // trimmed text, line number
  size_t pos = 0;
  bool done() const { return pos >= lines.size(); }
  const std::pair<std::string, int>& peek() const { return lines[pos]; }
  void next() { ++pos; }
};

ScriptStep parse_step_block(LineCursor& cur) {
  auto [header, hline] = cur.peek();
  cur.next();
  // header: "step <id>:"
  std::string rest = trim(header.substr(4));
  if (rest.empty() || rest.back() != ':')
    throw SyntaxError("expected 'step <id>:'", hline, 1);
  ScriptStep step;
  step.id = trim(rest.substr(0, rest.size() - 1));
  if (step.id.empty()) throw SyntaxError("step needs an id", hline, 1);

  if (cur.done() || cur.peek().first.rfind("formula:", 0) != 0)
    throw SyntaxError("step " + step.id + " needs a formula: line",
                      cur.done() ? hline : cur.peek().second, 1);
  step.formula_text = trim(cur.peek().first.substr(8));
  cur.next();

  if (cur.done() || cur.peek().first.rfind("by:", 0) != 0)
    throw SyntaxError("step " + step.id + " needs a by: line",
                      cur.done() ? hline : cur.peek().second, 1);
  parse_by_line(step, trim(cur.peek().first.substr(3)), cur.peek().second);
  cur.next();
  return step;
}

}  // namespace

ProofScript parse_proof_script(const std::string& text) {
  LineCursor cur;
  {
    std::stringstream ss(text);
    std::string line;
    int n = 0;
    while (std::getline(ss, line)) {
      ++n;
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      cur.lines.emplace_back(t, n);
    }
  }

  ProofScript script;
  while (!cur.done()) {
    const auto& [line, lineno] = cur.peek();
    if (line.rfind("step ", 0) == 0) {
      ScriptStep step = parse_step_block(cur);
      step.formula = parse_formula(step.formula_text);
      script.steps.push_back(std::move(step));
    } else if (line.rfind("template ", 0) == 0) {
      // "template <id> index <var>:"
      std::string rest = trim(line.substr(9));
      if (rest.empty() || rest.back() != ':')
        throw SyntaxError("expected 'template <id> index <var>:'", lineno, 1);
      rest = trim(rest.substr(0, rest.size() - 1));
      auto toks = tokenize_by_line(rest, lineno);
      if (toks.size() != 3 || toks[1] != "index")
        throw SyntaxError("expected 'template <id> index <var>:'", lineno, 1);
      ScriptTemplate tpl;
      tpl.id = toks[0];
      tpl.index_var = toks[2];
      cur.next();
      while (!cur.done() && cur.peek().first != "end") {
        if (cur.peek().first.rfind("step ", 0) != 0)
          throw SyntaxError("templates contain step blocks only", cur.peek().second, 1);
        tpl.steps.push_back(parse_step_block(cur));
      }
      if (cur.done()) throw SyntaxError("template " + tpl.id + " is missing 'end'", lineno, 1);
      cur.next();  // consume "end"
      script.templates[tpl.id] = std::move(tpl);
    } else {
      throw SyntaxError("expected 'step' or 'template', got '" + line + "'", lineno, 1);
    }
  }
  return script;
}

// ---------------------------------------------------------------------------
// Omega instantiation
// ---------------------------------------------------------------------------

namespace {

// Expands iterated-modality markers: "[K]^v" (v the template index variable)
// becomes i copies of "[K]"; "[K]^3" becomes three copies. A box without a
// marker is copied through unchanged.
std::string expand_iteration_markers(const std::string& text, const std::string& ivar, long i) {
  std::string out;
  size_t p = 0;
  auto word_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  };
  while (p < text.size()) {
    if (text[p] != '[') {
      out += text[p++];
      continue;
    }
    size_t close = text.find(']', p);
    if (close == std::string::npos) {
      out += text.substr(p);
      break;
    }
    std::string box = text.substr(p, close - p + 1);
    size_t after = close + 1;
    long copies = -1;
    if (after < text.size() && text[after] == '^') {
      size_t q = after + 1;
      size_t start = q;
      while (q < text.size() && word_char(text[q])) ++q;
      std::string marker = text.substr(start, q - start);
      if (marker == ivar) {
        copies = i;
        after = q;
      } else if (!marker.empty() &&
                 std::all_of(marker.begin(), marker.end(),
                             [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        copies = std::stol(marker);
        after = q;
      }
    }
    if (copies < 0) {
      out += box;
    } else {
      for (long c = 0; c < copies; ++c) out += box;
    }
    p = after;
  }
  return out;
}

// Peels leading assignment modalities: [x := t][?q := g]... core.
std::vector<ProgramPtr> peel_assignment_boxes(FormulaPtr& f) {
  std::vector<ProgramPtr> wrappers;
  while (f->kind == Formula::Kind::Box && (f->prog->kind == Program::Kind::Assign ||
                                           f->prog->kind == Program::Kind::BoolAssign)) {
    wrappers.push_back(f->prog);
    f = f->f1;
  }
  return wrappers;
}

FormulaPtr rewrap(const std::vector<ProgramPtr>& wrappers, FormulaPtr f) {
  for (auto it = wrappers.rbegin(); it != wrappers.rend(); ++it) f = Formula::box(*it, f);
  return f;
}

// The expected i-th premise of an omega rule toward `conclusion`.
// R3: s([while g do K od] a) -> b  has premises  s(([if g then K fi]^i)(!g & a)) -> b
// R4: s(U[K] a) -> b               has premises  s([K]^i a) -> b
// R5: a -> s(I[K] b)               has premises  a -> s([K]^i b)
// where s is a (possibly empty) chain of assignment modalities.
std::optional<FormulaPtr> omega_premise(const std::string& rule, const FormulaPtr& conclusion,
                                        long i) {
  FormulaPtr lhs, rhs;
  if (!split_implies(conclusion, lhs, rhs)) return std::nullopt;
  if (rule == "R4") {
    FormulaPtr core = lhs;
    auto wrappers = peel_assignment_boxes(core);
    if (core->kind != Formula::Kind::IterUnion) return std::nullopt;
    return Formula::f_implies(rewrap(wrappers, iterate(core->prog, i, core->f1)), rhs);
  }
  if (rule == "R5") {
    FormulaPtr core = rhs;
    auto wrappers = peel_assignment_boxes(core);
    if (core->kind != Formula::Kind::IterInter) return std::nullopt;
    return Formula::f_implies(lhs, rewrap(wrappers, iterate(core->prog, i, core->f1)));
  }
  if (rule == "R3") {
    FormulaPtr core = lhs;
    auto wrappers = peel_assignment_boxes(core);
    if (core->kind != Formula::Kind::Box || core->prog->kind != Program::Kind::While)
      return std::nullopt;
    OpenPtr g = core->prog->guard;
    ProgramPtr body = core->prog->p1;
    FormulaPtr post =
        Formula::f_and(Formula::f_not(Formula::wrap(g)), core->f1);
    ProgramPtr once = Program::if_(g, body, Program::skip());
    return Formula::f_implies(rewrap(wrappers, iterate(once, i, post)), rhs);
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// Checking
// ---------------------------------------------------------------------------

StepVerdict validate_trusted(const FormulaPtr& formula, const StructurePtr& s, long var_bound,
                             long step_budget) {
  EvalConfig cfg;
  cfg.step_budget = step_budget;
  ValidationResult r = bounded_validate(formula, s, cfg, var_bound);
  return r.refuted() ? StepVerdict::TrustedLemmaRefuted : StepVerdict::OK;
}

namespace {

struct StepOutcome {
  StepVerdict verdict = StepVerdict::OK;
  std::string detail;
  long failed_sample = -1;
  std::vector<std::string> used_trusted;  // trusted-lemma names this step relies on
};

StepOutcome check_one_step(const ScriptStep& step,
                           const std::map<std::string, FormulaPtr>& stated,
                           const ProofScript& script, const StructurePtr& standard,
                           const EvalConfig& cfg, bool allow_omega);

StepOutcome check_template_instance(const ScriptTemplate& tpl, long i,
                                    const FormulaPtr& expected_premise,
                                    const ProofScript& script, const StructurePtr& standard,
                                    const EvalConfig& cfg) {
  StepOutcome out;
  std::map<std::string, FormulaPtr> local;
  FormulaPtr last;
  for (const ScriptStep& raw : tpl.steps) {
    ScriptStep step = raw;
    std::string text = expand_iteration_markers(step.formula_text, tpl.index_var, i);
    try {
      step.formula = parse_formula(text);
    } catch (const SyntaxError& e) {
      out.verdict = StepVerdict::OmegaSampleFailed;
      out.detail = "sample " + std::to_string(i) + ": step " + step.id +
                   " does not parse after expansion: " + e.what();
      return out;
    }
    StepOutcome sub = check_one_step(step, local, script, standard, cfg, false);
    if (sub.verdict != StepVerdict::OK) {
      out.verdict = StepVerdict::OmegaSampleFailed;
      out.detail = "sample " + std::to_string(i) + ": " + step.id + " " +
                   to_string(sub.verdict) + (sub.detail.empty() ? "" : " (" + sub.detail + ")");
      return out;
    }
    for (auto& name : sub.used_trusted) out.used_trusted.push_back(name);
    local[step.id] = step.formula;
    last = step.formula;
  }
  if (!last || !equal(last, expected_premise)) {
    out.verdict = StepVerdict::OmegaSampleFailed;
    out.detail = "sample " + std::to_string(i) +
                 ": template conclusion differs from the required premise " +
                 (last ? print(expected_premise) : std::string("(empty template)"));
    return out;
  }
  return out;
}

StepOutcome check_one_step(const ScriptStep& step,
                           const std::map<std::string, FormulaPtr>& stated,
                           const ProofScript& script, const StructurePtr& standard,
                           const EvalConfig& cfg, bool allow_omega) {
  StepOutcome out;
  switch (step.kind) {
    case ScriptStep::Just::Axiom: {
      if (!schema_exists(step.schema_id)) {
        out.verdict = StepVerdict::SchemaMismatch;
        out.detail = "unknown schema " + step.schema_id;
        return out;
      }
      Bindings seed;
      for (const auto& [name, value] : step.binds) {
        try {
          switch (metavar_sort(name)) {
            case 'f': seed.formulas[name] = parse_formula(value); break;
            case 'o': seed.opens[name] = parse_open(value); break;
            case 'p': seed.programs[name] = parse_program(value); break;
            case 't': seed.terms[name] = parse_term(value); break;
            case 'v':
              if (!is_identifier(value)) throw SyntaxError("not a variable", 1, 1);
              seed.ind_vars[name] = value;
              break;
            case 'q':
              if (!is_identifier(value)) throw SyntaxError("not a variable", 1, 1);
              seed.bool_vars[name] = value;
              break;
            default:
              out.verdict = StepVerdict::SchemaMismatch;
              out.detail = "unknown metavariable " + name;
              return out;
          }
        } catch (const SyntaxError& e) {
          out.verdict = StepVerdict::SchemaMismatch;
          out.detail = "bind " + name + " does not parse: " + e.what();
          return out;
        }
      }
      auto b = match_pattern_only(step.schema_id, step.formula, &seed);
      if (!b) {
        out.verdict = StepVerdict::SchemaMismatch;
        return out;
      }
      if (!side_conditions_hold(step.schema_id, *b)) {
        out.verdict = StepVerdict::SideConditionViolated;
        return out;
      }
      return out;
    }

    case ScriptStep::Just::Theory: {
      FormulaPtr axiom;
      try {
        if (!step.phi_text.empty()) {
          FormulaPtr phi = parse_formula(step.phi_text);
          axiom = theory_axiom(step.theory, step.axiom_name, &phi);
        } else {
          axiom = theory_axiom(step.theory, step.axiom_name);
        }
      } catch (const UnknownAxiom& e) {
        out.verdict = StepVerdict::SchemaMismatch;
        out.detail = std::string("UnknownAxiom: ") + e.what();
        return out;
      } catch (const NotFirstOrder& e) {
        out.verdict = StepVerdict::SchemaMismatch;
        out.detail = std::string("NotFirstOrder: ") + e.what();
        return out;
      } catch (const SyntaxError& e) {
        out.verdict = StepVerdict::SchemaMismatch;
        out.detail = std::string("phi does not parse: ") + e.what();
        return out;
      }
      if (!equal(axiom, step.formula)) {
        out.verdict = StepVerdict::SchemaMismatch;
        out.detail = "stated formula differs from the theory axiom " + print(axiom);
      }
      return out;
    }

    case ScriptStep::Just::Rule: {
      std::vector<FormulaPtr> premises;
      for (const std::string& id : step.premise_ids) {
        auto it = stated.find(id);
        if (it == stated.end()) {
          out.verdict = StepVerdict::PremiseMissing;
          out.detail = "step " + id + " is not available";
          return out;
        }
        premises.push_back(it->second);
      }
      out.verdict = check_rule(step.rule_id, premises, step.formula, step.extras);
      return out;
    }

    case ScriptStep::Just::Omega: {
      if (!allow_omega) {
        out.verdict = StepVerdict::SchemaMismatch;
        out.detail = "omega steps cannot nest inside premise templates";
        return out;
      }
      if (step.omega_rule != "R3" && step.omega_rule != "R4" && step.omega_rule != "R5") {
        out.verdict = StepVerdict::SchemaMismatch;
        out.detail = step.omega_rule + " is not an omega rule";
        return out;
      }
      if (step.samples < 1) {
        out.verdict = StepVerdict::SchemaMismatch;
        out.detail = "sample count must be at least 1";
        return out;
      }
      auto tit = script.templates.find(step.template_id);
      if (tit == script.templates.end()) {
        out.verdict = StepVerdict::SchemaMismatch;
        out.detail = "unknown template " + step.template_id;
        return out;
      }
      for (long i = 0; i < step.samples; ++i) {
        auto expected = omega_premise(step.omega_rule, step.formula, i);
        if (!expected) {
          out.verdict = StepVerdict::SchemaMismatch;
          out.detail = "conclusion does not fit " + step.omega_rule;
          return out;
        }
        StepOutcome sub =
            check_template_instance(tit->second, i, *expected, script, standard, cfg);
        if (sub.verdict != StepVerdict::OK) {
          sub.failed_sample = i;
          return sub;
        }
        for (auto& name : sub.used_trusted) out.used_trusted.push_back(name);
      }
      ValidationResult v = bounded_validate(step.formula, standard, cfg, 3);
      if (v.refuted()) {
        out.verdict = StepVerdict::OmegaSampleFailed;
        out.detail = "conclusion refuted under bounded validation";
      }
      return out;
    }

    case ScriptStep::Just::Trusted: {
      out.verdict =
          validate_trusted(step.formula, standard, step.validate_bound, step.validate_budget);
      if (out.verdict == StepVerdict::OK) out.used_trusted.push_back(step.trusted_name);
      return out;
    }
  }
  return out;
}

}  // namespace

CheckReport check_proof(const ProofScript& script, const EvalConfig& cfg) {
  CheckReport report;
  auto standard = make_standard();
  std::map<std::string, FormulaPtr> stated;
  std::vector<std::string> trusted;

  for (const ScriptStep& step : script.steps) {
    StepReport sr;
    sr.id = step.id;
    StepOutcome out = check_one_step(step, stated, script, standard, cfg, true);
    sr.verdict = out.verdict;
    sr.detail = out.detail;
    if (step.kind == ScriptStep::Just::Omega) {
      sr.omega_samples = step.samples;
      sr.failed_sample = out.failed_sample;
    }
    for (const std::string& name : out.used_trusted) {
      if (std::find(trusted.begin(), trusted.end(), name) == trusted.end())
        trusted.push_back(name);
    }
    if (sr.verdict != StepVerdict::OK && report.rejected_at.empty())
      report.rejected_at = step.id;
    stated[step.id] = step.formula;
    report.steps.push_back(std::move(sr));
  }

  report.accepted = report.rejected_at.empty();
  report.trusted = std::move(trusted);
  return report;
}

CheckReport check_proof_text(const std::string& text, const EvalConfig& cfg) {
  return check_proof(parse_proof_script(text), cfg);
}

std::string CheckReport::render() const {
  std::ostringstream os;
  for (const StepReport& sr : steps) {
    os << sr.id << ' ' << to_string(sr.verdict);
    if (sr.verdict == StepVerdict::OK && sr.omega_samples >= 0) {
      os << " schema-checked (omega, " << sr.omega_samples << " samples)";
    } else if (sr.verdict == StepVerdict::OmegaSampleFailed) {
      os << '(' << (sr.failed_sample >= 0 ? std::to_string(sr.failed_sample) : "validation")
         << ')';
    }
    os << '\n';
  }
  if (accepted) {
    os << "ACCEPTED trusting [";
    for (size_t i = 0; i < trusted.size(); ++i) {
      if (i) os << ", ";
      os << trusted[i];
    }
    os << "]\n";
  } else {
    os << "REJECTED at " << rejected_at << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Shipped demonstration instances
// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, FormulaPtr>> axiom_demo_instances() {
  using T = Term;
  using O = OpenFormula;
  using P = Program;
  using F = Formula;

  auto vx = T::var("x");
  auto vy = T::var("y");
  auto vz = T::var("z");
  auto vw = T::var("w");

  FormulaPtr oa = F::wrap(O::eq(vx, T::zero()));             // (x = 0)
  FormulaPtr ob = F::wrap(O::less(vx, vy));                  // (x < y)
  FormulaPtr oc = F::wrap(O::eq(T::zero(), T::zero()));      // (0 = 0)
  FormulaPtr od = F::wrap(O::less(vy, T::succ(vy)));         // (y < s(y))
  FormulaPtr oe = F::wrap(O::eq(vy, vx));                    // (y = x)
  ProgramPtr k1 = P::assign("z", T::zero());                 // z := 0
  ProgramPtr k2 = P::assign("z", T::succ(vz));               // z := s(z)
  FormulaPtr ma = F::box(k1, F::wrap(O::eq(vz, T::zero()))); // [z := 0](z = 0)

  std::vector<std::pair<std::string, FormulaPtr>> out;
  auto add = [&out](const char* id, FormulaPtr f) { out.emplace_back(id, std::move(f)); };

  auto I = [](FormulaPtr a, FormulaPtr b) { return F::f_implies(std::move(a), std::move(b)); };
  auto AN = [](FormulaPtr a, FormulaPtr b) { return F::f_and(std::move(a), std::move(b)); };
  auto OR = [](FormulaPtr a, FormulaPtr b) { return F::f_or(std::move(a), std::move(b)); };
  auto NO = [](FormulaPtr a) { return F::f_not(std::move(a)); };

  struct Trip { FormulaPtr a, b, d; };
  std::vector<Trip> trips = {{oa, ob, oc}, {od, oa, oe}, {ma, ob, oa}};

  for (const Trip& t : trips) {
    add("Ax1", I(I(t.a, t.b), I(I(t.b, t.d), I(t.a, t.d))));
    add("Ax2", I(t.a, OR(t.a, t.b)));
    add("Ax3", I(t.b, OR(t.a, t.b)));
    add("Ax4", I(I(t.a, t.d), I(I(t.b, t.d), I(OR(t.a, t.b), t.d))));
    add("Ax5", I(AN(t.a, t.b), t.a));
    add("Ax6", I(AN(t.a, t.b), t.b));
    add("Ax7", I(I(t.d, t.a), I(I(t.d, t.b), I(t.d, AN(t.a, t.b)))));
    add("Ax8", f_iff(I(t.a, I(t.b, t.d)), I(AN(t.a, t.b), t.d)));
    add("Ax9", I(AN(t.a, NO(t.a)), t.b));
    add("Ax10", I(I(t.a, AN(t.a, NO(t.a))), NO(t.a)));
    add("Ax11", OR(t.a, NO(t.a)));
  }

  // Ax12: forall x alpha -> alpha(x/tau)
  {
    FormulaPtr a1 = F::wrap(O::eq(vx, vx));
    add("Ax12", I(F::forall("x", a1), substitute(a1, "x", T::zero())));
    FormulaPtr a2 = F::wrap(O::less(vx, T::succ(vx)));
    add("Ax12", I(F::forall("x", a2), substitute(a2, "x", vy)));
    add("Ax12", I(F::forall("x", a1), substitute(a1, "x", T::succ(T::zero()))));
  }

  // Ax13: forall x alpha <-> !(exists x !alpha)
  for (FormulaPtr a : {F::wrap(O::eq(vx, T::zero())), F::wrap(O::less(vx, vy)),
                       F::box(P::assign("y", T::zero()), F::wrap(O::eq(vx, vy)))}) {
    add("Ax13", f_iff(F::forall("x", a), NO(F::exists("x", NO(a)))));
  }

  // Ax14: [K](exists x alpha) <-> exists y [K]alpha(x/y), y not in V(K)
  {
    auto inst = [&](ProgramPtr k, FormulaPtr a, const std::string& y) {
      return f_iff(F::box(k, F::exists("x", a)),
                   F::exists(y, F::box(k, substitute(a, "x", T::var(y)))));
    };
    add("Ax14", inst(k1, F::wrap(O::eq(vx, vx)), "w"));
    add("Ax14", inst(k2, F::wrap(O::eq(vx, vz)), "y"));
    add("Ax14", inst(P::assign("w", T::zero()), F::wrap(O::less(vx, T::succ(vx))), "v"));
  }

  // Ax15 / Ax16: [K] distributes over | and &
  for (const auto& [k, a, b] :
       std::vector<std::tuple<ProgramPtr, FormulaPtr, FormulaPtr>>{
           {k1, oa, ob},
           {k2, F::wrap(O::eq(vz, T::zero())), F::wrap(O::less(T::zero(), vz))},
           {P::seq(k1, P::assign("w", vz)), oa, oc}}) {
    add("Ax15", f_iff(F::box(k, OR(a, b)), OR(F::box(k, a), F::box(k, b))));
    add("Ax16", f_iff(F::box(k, AN(a, b)), AN(F::box(k, a), F::box(k, b))));
    add("Ax17", I(F::box(k, NO(a)), NO(F::box(k, a))));
  }

  // Ax18: assignment axioms, individual and boolean halves
  {
    auto inst = [&](const std::string& x, TermPtr tau, OpenPtr g, const std::string& q,
                    OpenPtr g2) {
      ProgramPtr asg = P::assign(x, tau);
      FormulaPtr part1 =
          f_iff(F::box(asg, F::wrap(g)),
                AN(F::wrap(substitute(g, x, tau)), F::box(asg, F::wrap(O::true_const()))));
      FormulaPtr part2 = f_iff(F::box(P::bool_assign(q, g2), F::wrap(g)),
                               F::wrap(substitute_bool(g, q, g2)));
      return AN(part1, part2);
    };
    add("Ax18", inst("x", T::zero(), O::bool_var("b"), "b", O::eq(vy, T::zero())));
    add("Ax18", inst("x", T::succ(vx), O::eq(vx, vy), "b", O::less(vy, vx)));
    add("Ax18", inst("y", T::add(vy, vx), O::o_and(O::bool_var("b"), O::eq(vy, vx)), "b",
                     O::true_const()));
  }

  // Ax19: [{K ; M}]alpha <-> [K][M]alpha
  for (const auto& [k, m, a] :
       std::vector<std::tuple<ProgramPtr, ProgramPtr, FormulaPtr>>{
           {k1, P::assign("w", vz), F::wrap(O::eq(vw, T::zero()))},
           {k2, k2, F::wrap(O::less(T::zero(), vz))},
           {P::skip(), k1, oa}}) {
    add("Ax19", f_iff(F::box(P::seq(k, m), a), F::box(k, F::box(m, a))));
  }

  // Ax20: two-branch conditional
  {
    auto inst = [&](OpenPtr g, ProgramPtr k, ProgramPtr m, FormulaPtr a) {
      return f_iff(F::box(P::if_(g, k, m), a),
                   OR(AN(NO(F::wrap(g)), F::box(m, a)), AN(F::wrap(g), F::box(k, a))));
    };
    add("Ax20", inst(O::eq(vx, T::zero()), P::assign("y", T::zero()),
                     P::assign("y", T::succ(vy)), F::wrap(O::eq(vy, T::zero()))));
    add("Ax20", inst(O::less(vx, vy), k1, k2, F::wrap(O::eq(vz, T::zero()))));
    add("Ax20", inst(O::bool_var("b"), P::skip(), k1, oa));
  }

  // Ax21: while unrolling
  {
    auto inst = [&](OpenPtr g, ProgramPtr k, FormulaPtr a) {
      FormulaPtr w = F::box(P::while_(g, k), a);
      FormulaPtr inner = F::box(P::while_(g, k), AN(NO(F::wrap(g)), a));
      return f_iff(w, OR(AN(NO(F::wrap(g)), a), AN(F::wrap(g), F::box(k, inner))));
    };
    add("Ax21", inst(O::less(vx, vy), P::assign("x", T::succ(vx)), F::wrap(O::eq(vx, vy))));
    add("Ax21", inst(O::o_not(O::eq(vx, vy)), P::assign("x", T::succ(vx)),
                     F::wrap(O::eq(vx, vy))));
    add("Ax21", inst(O::less(vx, T::succ(T::zero())), P::assign("x", T::succ(vx)),
                     F::wrap(O::less(T::zero(), T::succ(vx)))));
  }

  // Ax22 / Ax23: iteration-quantifier unrolling
  for (const auto& [k, a] : std::vector<std::pair<ProgramPtr, FormulaPtr>>{
           {P::assign("y", T::succ(vy)), F::wrap(O::eq(vy, T::succ(T::succ(T::zero()))))},
           {P::assign("y", T::succ(vy)), F::wrap(O::less(vy, T::succ(T::succ(T::zero()))))},
           {k2, F::wrap(O::eq(vz, T::zero()))}}) {
    add("Ax22", f_iff(F::iter_inter(k, a), AN(a, F::box(k, F::iter_inter(k, a)))));
    add("Ax23", f_iff(F::iter_union(k, a), OR(a, F::box(k, F::iter_union(k, a)))));
  }

  return out;
}

}  // namespace alwb
