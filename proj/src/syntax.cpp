// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// Syntax implementation: constructors, structural equality, canonical
// printer, lexer + recursive-descent parser, variable sets, substitution.

#include "alwb/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace alwb {

// ---------------------------------------------------------------------------
// Constructors

TermPtr Term::var(std::string n) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Var;
  t->name = std::move(n);
  return t;
}
TermPtr Term::zero() {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Zero;
  return t;
}
static TermPtr term1(Term::Kind k, TermPtr a) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->a = std::move(a);
  return t;
}
static TermPtr term2(Term::Kind k, TermPtr a, TermPtr b) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}
TermPtr Term::succ(TermPtr t) { return term1(Kind::Succ, std::move(t)); }
TermPtr Term::pred(TermPtr t) { return term1(Kind::Pred, std::move(t)); }
TermPtr Term::add(TermPtr l, TermPtr r) { return term2(Kind::Add, std::move(l), std::move(r)); }
TermPtr Term::mul(TermPtr l, TermPtr r) { return term2(Kind::Mul, std::move(l), std::move(r)); }
TermPtr Term::monus(TermPtr l, TermPtr r) { return term2(Kind::Monus, std::move(l), std::move(r)); }

OpenPtr OpenFormula::eq(TermPtr l, TermPtr r) {
  auto g = std::make_shared<OpenFormula>();
  g->kind = Kind::Eq;
  g->t1 = std::move(l);
  g->t2 = std::move(r);
  return g;
}
OpenPtr OpenFormula::less(TermPtr l, TermPtr r) {
  auto g = std::make_shared<OpenFormula>();
  g->kind = Kind::Less;
  g->t1 = std::move(l);
  g->t2 = std::move(r);
  return g;
}
OpenPtr OpenFormula::true_const() {
  auto g = std::make_shared<OpenFormula>();
  g->kind = Kind::TrueConst;
  return g;
}
OpenPtr OpenFormula::false_const() {
  auto g = std::make_shared<OpenFormula>();
  g->kind = Kind::FalseConst;
  return g;
}
static OpenPtr open2(OpenFormula::Kind k, OpenPtr l, OpenPtr r) {
  auto g = std::make_shared<OpenFormula>();
  g->kind = k;
  g->f1 = std::move(l);
  g->f2 = std::move(r);
  return g;
}
OpenPtr OpenFormula::o_and(OpenPtr l, OpenPtr r) { return open2(Kind::And, std::move(l), std::move(r)); }
OpenPtr OpenFormula::o_or(OpenPtr l, OpenPtr r) { return open2(Kind::Or, std::move(l), std::move(r)); }
OpenPtr OpenFormula::o_implies(OpenPtr l, OpenPtr r) { return open2(Kind::Implies, std::move(l), std::move(r)); }
OpenPtr OpenFormula::o_not(OpenPtr f) {
  auto g = std::make_shared<OpenFormula>();
  g->kind = Kind::Not;
  g->f1 = std::move(f);
  return g;
}
OpenPtr OpenFormula::bool_var(std::string n) {
  auto g = std::make_shared<OpenFormula>();
  g->kind = Kind::BoolVar;
  g->name = std::move(n);
  return g;
}

ProgramPtr Program::assign(std::string x, TermPtr t) {
  auto k = std::make_shared<Program>();
  k->kind = Kind::Assign;
  k->target = std::move(x);
  k->rhs_term = std::move(t);
  return k;
}
ProgramPtr Program::bool_assign(std::string q, OpenPtr g) {
  auto k = std::make_shared<Program>();
  k->kind = Kind::BoolAssign;
  k->target = std::move(q);
  k->rhs_open = std::move(g);
  return k;
}
ProgramPtr Program::seq(ProgramPtr a, ProgramPtr b) {
  auto k = std::make_shared<Program>();
  k->kind = Kind::Seq;
  k->p1 = std::move(a);
  k->p2 = std::move(b);
  return k;
}
ProgramPtr Program::if_(OpenPtr g, ProgramPtr then_b, ProgramPtr else_b) {
  auto k = std::make_shared<Program>();
  k->kind = Kind::If;
  k->guard = std::move(g);
  k->p1 = std::move(then_b);
  k->p2 = else_b ? std::move(else_b) : skip();
  return k;
}
ProgramPtr Program::while_(OpenPtr g, ProgramPtr body) {
  auto k = std::make_shared<Program>();
  k->kind = Kind::While;
  k->guard = std::move(g);
  k->p1 = std::move(body);
  return k;
}
ProgramPtr Program::skip() {
  auto k = std::make_shared<Program>();
  k->kind = Kind::Skip;
  return k;
}

FormulaPtr Formula::wrap(OpenPtr g) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Open;
  f->open = std::move(g);
  return f;
}
FormulaPtr Formula::box(ProgramPtr k, FormulaPtr f) {
  auto r = std::make_shared<Formula>();
  r->kind = Kind::Box;
  r->prog = std::move(k);
  r->f1 = std::move(f);
  return r;
}
FormulaPtr Formula::iter_union(ProgramPtr k, FormulaPtr f) {
  auto r = std::make_shared<Formula>();
  r->kind = Kind::IterUnion;
  r->prog = std::move(k);
  r->f1 = std::move(f);
  return r;
}
FormulaPtr Formula::iter_inter(ProgramPtr k, FormulaPtr f) {
  auto r = std::make_shared<Formula>();
  r->kind = Kind::IterInter;
  r->prog = std::move(k);
  r->f1 = std::move(f);
  return r;
}
FormulaPtr Formula::forall(std::string x, FormulaPtr f) {
  auto r = std::make_shared<Formula>();
  r->kind = Kind::Forall;
  r->var = std::move(x);
  r->f1 = std::move(f);
  return r;
}
FormulaPtr Formula::exists(std::string x, FormulaPtr f) {
  auto r = std::make_shared<Formula>();
  r->kind = Kind::Exists;
  r->var = std::move(x);
  r->f1 = std::move(f);
  return r;
}
FormulaPtr Formula::f_not(FormulaPtr f) {
  if (f->kind == Kind::Open) return wrap(OpenFormula::o_not(f->open));
  auto r = std::make_shared<Formula>();
  r->kind = Kind::Not;
  r->f1 = std::move(f);
  return r;
}
static FormulaPtr formula2(Formula::Kind k, OpenFormula::Kind ok, FormulaPtr l, FormulaPtr r) {
  if (l->kind == Formula::Kind::Open && r->kind == Formula::Kind::Open)
    return Formula::wrap(open2(ok, l->open, r->open));
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->f1 = std::move(l);
  f->f2 = std::move(r);
  return f;
}
FormulaPtr Formula::f_and(FormulaPtr l, FormulaPtr r) {
  return formula2(Kind::And, OpenFormula::Kind::And, std::move(l), std::move(r));
}
FormulaPtr Formula::f_or(FormulaPtr l, FormulaPtr r) {
  return formula2(Kind::Or, OpenFormula::Kind::Or, std::move(l), std::move(r));
}
FormulaPtr Formula::f_implies(FormulaPtr l, FormulaPtr r) {
  return formula2(Kind::Implies, OpenFormula::Kind::Implies, std::move(l), std::move(r));
}

FormulaPtr f_iff(FormulaPtr l, FormulaPtr r) {
  return Formula::f_and(Formula::f_implies(l, r), Formula::f_implies(r, l));
}

// ---------------------------------------------------------------------------
// Structural equality

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Var: return a->name == b->name;
    case Term::Kind::Zero: return true;
    case Term::Kind::Succ:
    case Term::Kind::Pred: return equal(a->a, b->a);
    case Term::Kind::Add:
    case Term::Kind::Mul:
    case Term::Kind::Monus: return equal(a->a, b->a) && equal(a->b, b->b);
  }
  return false;
}

bool equal(const OpenPtr& a, const OpenPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case OpenFormula::Kind::Eq:
    case OpenFormula::Kind::Less: return equal(a->t1, b->t1) && equal(a->t2, b->t2);
    case OpenFormula::Kind::TrueConst:
    case OpenFormula::Kind::FalseConst: return true;
    case OpenFormula::Kind::And:
    case OpenFormula::Kind::Or:
    case OpenFormula::Kind::Implies: return equal(a->f1, b->f1) && equal(a->f2, b->f2);
    case OpenFormula::Kind::Not: return equal(a->f1, b->f1);
    case OpenFormula::Kind::BoolVar: return a->name == b->name;
  }
  return false;
}

bool equal(const ProgramPtr& a, const ProgramPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Program::Kind::Assign: return a->target == b->target && equal(a->rhs_term, b->rhs_term);
    case Program::Kind::BoolAssign: return a->target == b->target && equal(a->rhs_open, b->rhs_open);
    case Program::Kind::Seq: return equal(a->p1, b->p1) && equal(a->p2, b->p2);
    case Program::Kind::If:
      return equal(a->guard, b->guard) && equal(a->p1, b->p1) && equal(a->p2, b->p2);
    case Program::Kind::While: return equal(a->guard, b->guard) && equal(a->p1, b->p1);
    case Program::Kind::Skip: return true;
  }
  return false;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::Open: return equal(a->open, b->open);
    case Formula::Kind::Box:
    case Formula::Kind::IterUnion:
    case Formula::Kind::IterInter: return equal(a->prog, b->prog) && equal(a->f1, b->f1);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return a->var == b->var && equal(a->f1, b->f1);
    case Formula::Kind::Not: return equal(a->f1, b->f1);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies: return equal(a->f1, b->f1) && equal(a->f2, b->f2);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Printing

std::string print(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var: return t->name;
    case Term::Kind::Zero: return "0";
    case Term::Kind::Succ: return "s(" + print(t->a) + ")";
    case Term::Kind::Pred: return "P(" + print(t->a) + ")";
    case Term::Kind::Add: return "(" + print(t->a) + " + " + print(t->b) + ")";
    case Term::Kind::Mul: return "(" + print(t->a) + " * " + print(t->b) + ")";
    case Term::Kind::Monus: return "(" + print(t->a) + " -. " + print(t->b) + ")";
  }
  return "";
}

std::string print(const OpenPtr& g) {
  switch (g->kind) {
    case OpenFormula::Kind::Eq: return "(" + print(g->t1) + " = " + print(g->t2) + ")";
    case OpenFormula::Kind::Less: return "(" + print(g->t1) + " < " + print(g->t2) + ")";
    case OpenFormula::Kind::TrueConst: return "true";
    case OpenFormula::Kind::FalseConst: return "false";
    case OpenFormula::Kind::And: return "(" + print(g->f1) + " & " + print(g->f2) + ")";
    case OpenFormula::Kind::Or: return "(" + print(g->f1) + " | " + print(g->f2) + ")";
    case OpenFormula::Kind::Implies: return "(" + print(g->f1) + " -> " + print(g->f2) + ")";
    case OpenFormula::Kind::Not: return "!" + print(g->f1);
    case OpenFormula::Kind::BoolVar: return "?" + g->name;
  }
  return "";
}

std::string print(const ProgramPtr& k) {
  switch (k->kind) {
    case Program::Kind::Assign: return k->target + " := " + print(k->rhs_term);
    case Program::Kind::BoolAssign: return "?" + k->target + " := " + print(k->rhs_open);
    case Program::Kind::Seq: return "{ " + print(k->p1) + " ; " + print(k->p2) + " }";
    case Program::Kind::If:
      if (k->p2->kind == Program::Kind::Skip)
        return "if " + print(k->guard) + " then " + print(k->p1) + " fi";
      return "if " + print(k->guard) + " then " + print(k->p1) + " else " + print(k->p2) + " fi";
    case Program::Kind::While: return "while " + print(k->guard) + " do " + print(k->p1) + " od";
    case Program::Kind::Skip: return "skip";
  }
  return "";
}

// Consecutive modalities abut ("[K][K] a"); a space separates the final
// modality from its formula.
static bool modal(const FormulaPtr& f) {
  return f->kind == Formula::Kind::Box || f->kind == Formula::Kind::IterUnion ||
         f->kind == Formula::Kind::IterInter;
}

std::string print(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Open: return print(f->open);
    case Formula::Kind::Box:
      return "[" + print(f->prog) + "]" + (modal(f->f1) ? "" : " ") + print(f->f1);
    case Formula::Kind::IterUnion:
      return "U[" + print(f->prog) + "]" + (modal(f->f1) ? "" : " ") + print(f->f1);
    case Formula::Kind::IterInter:
      return "I[" + print(f->prog) + "]" + (modal(f->f1) ? "" : " ") + print(f->f1);
    case Formula::Kind::Forall: return "forall " + f->var + " . " + print(f->f1);
    case Formula::Kind::Exists: return "exists " + f->var + " . " + print(f->f1);
    case Formula::Kind::Not: return "!" + print(f->f1);
    case Formula::Kind::And: return "(" + print(f->f1) + " & " + print(f->f2) + ")";
    case Formula::Kind::Or: return "(" + print(f->f1) + " | " + print(f->f2) + ")";
    case Formula::Kind::Implies: return "(" + print(f->f1) + " -> " + print(f->f2) + ")";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  End, LParen, RParen, LBrack, RBrack, LBrace, RBrace, Semi, Dot, QMark, Bang,
  Amp, Pipe, Arrow, AssignOp, EqOp, LtOp, Plus, Star, Monus, Ident,
  Zero, S, P, If, Then, Else, Fi, While, Do, Od, Skip, True, False,
  Forall, Exists, U, I
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

// Function-local so parsing works even from static initializers in other
// translation units.
const std::map<std::string, Tok>& keywords() {
  static const std::map<std::string, Tok> kKeywords = {
      {"s", Tok::S},         {"P", Tok::P},       {"if", Tok::If},
      {"then", Tok::Then},   {"else", Tok::Else}, {"fi", Tok::Fi},
      {"while", Tok::While}, {"do", Tok::Do},     {"od", Tok::Od},
      {"skip", Tok::Skip},   {"true", Tok::True}, {"false", Tok::False},
      {"forall", Tok::Forall}, {"exists", Tok::Exists},
      {"U", Tok::U},         {"I", Tok::I}};
  return kKeywords;
}

std::string tok_name(Tok k) {
  switch (k) {
    case Tok::End: return "end of input";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Semi: return "';'";
    case Tok::Dot: return "'.'";
    case Tok::QMark: return "'?'";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::AssignOp: return "':='";
    case Tok::EqOp: return "'='";
    case Tok::LtOp: return "'<'";
    case Tok::Plus: return "'+'";
    case Tok::Star: return "'*'";
    case Tok::Monus: return "'-.'";
    case Tok::Ident: return "identifier";
    case Tok::Zero: return "'0'";
    case Tok::S: return "'s'";
    case Tok::P: return "'P'";
    case Tok::If: return "'if'";
    case Tok::Then: return "'then'";
    case Tok::Else: return "'else'";
    case Tok::Fi: return "'fi'";
    case Tok::While: return "'while'";
    case Tok::Do: return "'do'";
    case Tok::Od: return "'od'";
    case Tok::Skip: return "'skip'";
    case Tok::True: return "'true'";
    case Tok::False: return "'false'";
    case Tok::Forall: return "'forall'";
    case Tok::Exists: return "'exists'";
    case Tok::U: return "'U'";
    case Tok::I: return "'I'";
  }
  return "?";
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string t, int l, int c) {
    out.push_back(Token{k, std::move(t), l, c});
  };
  while (i < text.size()) {
    char c = text[i];
    int l = line, co = col;
    auto adv = [&](size_t n) {
      for (size_t j = 0; j < n; ++j) {
        if (text[i + j] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      i += n;
    };
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      adv(1);
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, "(", l, co); adv(1); continue;
      case ')': push(Tok::RParen, ")", l, co); adv(1); continue;
      case '[': push(Tok::LBrack, "[", l, co); adv(1); continue;
      case ']': push(Tok::RBrack, "]", l, co); adv(1); continue;
      case '{': push(Tok::LBrace, "{", l, co); adv(1); continue;
      case '}': push(Tok::RBrace, "}", l, co); adv(1); continue;
      case ';': push(Tok::Semi, ";", l, co); adv(1); continue;
      case '.': push(Tok::Dot, ".", l, co); adv(1); continue;
      case '?': push(Tok::QMark, "?", l, co); adv(1); continue;
      case '!': push(Tok::Bang, "!", l, co); adv(1); continue;
      case '&': push(Tok::Amp, "&", l, co); adv(1); continue;
      case '|': push(Tok::Pipe, "|", l, co); adv(1); continue;
      case '=': push(Tok::EqOp, "=", l, co); adv(1); continue;
      case '<': push(Tok::LtOp, "<", l, co); adv(1); continue;
      case '+': push(Tok::Plus, "+", l, co); adv(1); continue;
      case '*': push(Tok::Star, "*", l, co); adv(1); continue;
      case '0': push(Tok::Zero, "0", l, co); adv(1); continue;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '.') {
          push(Tok::Monus, "-.", l, co);
          adv(2);
          continue;
        }
        if (i + 1 < text.size() && text[i + 1] == '>') {
          push(Tok::Arrow, "->", l, co);
          adv(2);
          continue;
        }
        throw SyntaxError("expected '-.' or '->'", l, co, {"'-.'", "'->'"});
      case ':':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          push(Tok::AssignOp, ":=", l, co);
          adv(2);
          continue;
        }
        throw SyntaxError("expected ':='", l, co, {"':='"});
      default: break;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      size_t j = i;
      while (j < text.size() &&
             ((text[j] >= 'a' && text[j] <= 'z') || (text[j] >= 'A' && text[j] <= 'Z') ||
              (text[j] >= '0' && text[j] <= '9') || text[j] == '_' || text[j] == '\''))
        ++j;
      std::string word = text.substr(i, j - i);
      auto it = keywords().find(word);
      push(it == keywords().end() ? Tok::Ident : it->second, word, l, co);
      adv(j - i);
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", l, co);
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------------------
// Parser: fully parenthesised binary operators, so no precedence climbing.
// The one ambiguity — '(' opening either a term comparison or a formula
// connective — is resolved by trying the term interpretation and rolling
// back; the error reported on failure is the deepest one reached.

struct ParseFail {};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  TermPtr term() {
    auto t = parse_term();
    expect(Tok::End);
    return t;
  }
  OpenPtr open() {
    auto g = parse_open();
    expect(Tok::End);
    return g;
  }
  ProgramPtr program() {
    auto k = parse_program();
    expect(Tok::End);
    return k;
  }
  FormulaPtr formula() {
    auto f = parse_formula();
    expect(Tok::End);
    return f;
  }

  SyntaxError best_error() const {
    const Token& t = toks_[best_pos_];
    std::ostringstream msg;
    msg << "syntax error at line " << t.line << ", column " << t.col << ": unexpected "
        << (t.kind == Tok::End ? "end of input" : "'" + t.text + "'");
    std::vector<std::string> exp(best_expected_.begin(), best_expected_.end());
    if (!exp.empty()) {
      msg << "; expected ";
      for (size_t i = 0; i < exp.size(); ++i) msg << (i ? " or " : "") << exp[i];
    }
    return SyntaxError(msg.str(), t.line, t.col, exp);
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  size_t best_pos_ = 0;
  std::set<std::string> best_expected_;

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  Token advance() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& what) {
    if (pos_ > best_pos_) {
      best_pos_ = pos_;
      best_expected_.clear();
    }
    if (pos_ == best_pos_) best_expected_.insert(what);
    throw ParseFail{};
  }
  Token expect(Tok k) {
    if (!at(k)) fail(tok_name(k));
    return advance();
  }

  std::string ident() {
    if (!at(Tok::Ident)) fail("identifier");
    return advance().text;
  }

  TermPtr parse_term() {
    switch (peek().kind) {
      case Tok::Ident: return Term::var(advance().text);
      case Tok::Zero: advance(); return Term::zero();
      case Tok::S: {
        advance();
        expect(Tok::LParen);
        auto t = parse_term();
        expect(Tok::RParen);
        return Term::succ(t);
      }
      case Tok::P: {
        advance();
        expect(Tok::LParen);
        auto t = parse_term();
        expect(Tok::RParen);
        return Term::pred(t);
      }
      case Tok::LParen: {
        advance();
        auto l = parse_term();
        TermPtr r;
        switch (peek().kind) {
          case Tok::Plus: advance(); r = parse_term(); expect(Tok::RParen); return Term::add(l, r);
          case Tok::Star: advance(); r = parse_term(); expect(Tok::RParen); return Term::mul(l, r);
          case Tok::Monus: advance(); r = parse_term(); expect(Tok::RParen); return Term::monus(l, r);
          default: fail("'+'");
        }
      }
      default: fail("term");
    }
  }

  // "(" term ("="|"<") term ")" — the comparison atom shared by open
  // formulas and formulas; throws ParseFail without consuming on mismatch.
  OpenPtr parse_comparison() {
    size_t save = pos_;
    try {
      expect(Tok::LParen);
      auto l = parse_term();
      OpenPtr g;
      if (at(Tok::EqOp)) {
        advance();
        auto r = parse_term();
        expect(Tok::RParen);
        return OpenFormula::eq(l, r);
      }
      if (at(Tok::LtOp)) {
        advance();
        auto r = parse_term();
        expect(Tok::RParen);
        return OpenFormula::less(l, r);
      }
      fail("'='");
    } catch (ParseFail&) {
      pos_ = save;
      throw;
    }
  }

  OpenPtr parse_open() {
    switch (peek().kind) {
      case Tok::True: advance(); return OpenFormula::true_const();
      case Tok::False: advance(); return OpenFormula::false_const();
      case Tok::Bang: advance(); return OpenFormula::o_not(parse_open());
      case Tok::QMark: {
        advance();
        return OpenFormula::bool_var(ident());
      }
      case Tok::LParen: {
        try {
          return parse_comparison();
        } catch (ParseFail&) {
        }
        advance();  // '('
        auto l = parse_open();
        OpenPtr r;
        switch (peek().kind) {
          case Tok::Amp: advance(); r = parse_open(); expect(Tok::RParen); return OpenFormula::o_and(l, r);
          case Tok::Pipe: advance(); r = parse_open(); expect(Tok::RParen); return OpenFormula::o_or(l, r);
          case Tok::Arrow: advance(); r = parse_open(); expect(Tok::RParen); return OpenFormula::o_implies(l, r);
          default: fail("'&'");
        }
      }
      default: fail("open formula");
    }
  }

  ProgramPtr parse_program() {
    switch (peek().kind) {
      case Tok::Ident: {
        std::string x = advance().text;
        expect(Tok::AssignOp);
        return Program::assign(x, parse_term());
      }
      case Tok::QMark: {
        advance();
        std::string q = ident();
        expect(Tok::AssignOp);
        return Program::bool_assign(q, parse_open());
      }
      case Tok::Skip: advance(); return Program::skip();
      case Tok::LBrace: {
        advance();
        auto a = parse_program();
        expect(Tok::Semi);
        auto b = parse_program();
        expect(Tok::RBrace);
        return Program::seq(a, b);
      }
      case Tok::If: {
        advance();
        auto g = parse_open();
        expect(Tok::Then);
        auto t = parse_program();
        ProgramPtr e = Program::skip();
        if (at(Tok::Else)) {
          advance();
          e = parse_program();
        }
        expect(Tok::Fi);
        return Program::if_(g, t, e);
      }
      case Tok::While: {
        advance();
        auto g = parse_open();
        expect(Tok::Do);
        auto b = parse_program();
        expect(Tok::Od);
        return Program::while_(g, b);
      }
      default: fail("program");
    }
  }

  FormulaPtr parse_formula() {
    switch (peek().kind) {
      case Tok::True: advance(); return Formula::wrap(OpenFormula::true_const());
      case Tok::False: advance(); return Formula::wrap(OpenFormula::false_const());
      case Tok::QMark: {
        advance();
        return Formula::wrap(OpenFormula::bool_var(ident()));
      }
      case Tok::Bang: advance(); return Formula::f_not(parse_formula());
      case Tok::LBrack: {
        advance();
        auto k = parse_program();
        expect(Tok::RBrack);
        return Formula::box(k, parse_formula());
      }
      case Tok::U: {
        advance();
        expect(Tok::LBrack);
        auto k = parse_program();
        expect(Tok::RBrack);
        return Formula::iter_union(k, parse_formula());
      }
      case Tok::I: {
        advance();
        expect(Tok::LBrack);
        auto k = parse_program();
        expect(Tok::RBrack);
        return Formula::iter_inter(k, parse_formula());
      }
      case Tok::Forall: {
        advance();
        std::string x = ident();
        expect(Tok::Dot);
        return Formula::forall(x, parse_formula());
      }
      case Tok::Exists: {
        advance();
        std::string x = ident();
        expect(Tok::Dot);
        return Formula::exists(x, parse_formula());
      }
      case Tok::LParen: {
        try {
          return Formula::wrap(parse_comparison());
        } catch (ParseFail&) {
        }
        advance();  // '('
        auto l = parse_formula();
        FormulaPtr r;
        switch (peek().kind) {
          case Tok::Amp: advance(); r = parse_formula(); expect(Tok::RParen); return Formula::f_and(l, r);
          case Tok::Pipe: advance(); r = parse_formula(); expect(Tok::RParen); return Formula::f_or(l, r);
          case Tok::Arrow: advance(); r = parse_formula(); expect(Tok::RParen); return Formula::f_implies(l, r);
          default: fail("'&'");
        }
      }
      default: fail("formula");
    }
  }
};

template <typename F>
auto run_parser(const std::string& text, F&& body) {
  Parser p(lex(text));
  try {
    return body(p);
  } catch (ParseFail&) {
    throw p.best_error();
  }
}

}  // namespace

TermPtr parse_term(const std::string& text) {
  return run_parser(text, [](Parser& p) { return p.term(); });
}
OpenPtr parse_open(const std::string& text) {
  return run_parser(text, [](Parser& p) { return p.open(); });
}
ProgramPtr parse_program(const std::string& text) {
  return run_parser(text, [](Parser& p) { return p.program(); });
}
FormulaPtr parse_formula(const std::string& text) {
  return run_parser(text, [](Parser& p) { return p.formula(); });
}

bool is_identifier(const std::string& name) {
  if (name.empty()) return false;
  char c = name[0];
  if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))) return false;
  for (char d : name)
    if (!((d >= 'a' && d <= 'z') || (d >= 'A' && d <= 'Z') || (d >= '0' && d <= '9') ||
          d == '_' || d == '\''))
      return false;
  return keywords().find(name) == keywords().end();
}

// ---------------------------------------------------------------------------
// Variable sets

static void collect(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Var: out.insert(t->name); break;
    case Term::Kind::Zero: break;
    case Term::Kind::Succ:
    case Term::Kind::Pred: collect(t->a, out); break;
    default:
      collect(t->a, out);
      collect(t->b, out);
  }
}

static void collect(const OpenPtr& g, std::set<std::string>& ind, std::set<std::string>* boolv) {
  switch (g->kind) {
    case OpenFormula::Kind::Eq:
    case OpenFormula::Kind::Less:
      collect(g->t1, ind);
      collect(g->t2, ind);
      break;
    case OpenFormula::Kind::TrueConst:
    case OpenFormula::Kind::FalseConst: break;
    case OpenFormula::Kind::And:
    case OpenFormula::Kind::Or:
    case OpenFormula::Kind::Implies:
      collect(g->f1, ind, boolv);
      collect(g->f2, ind, boolv);
      break;
    case OpenFormula::Kind::Not: collect(g->f1, ind, boolv); break;
    case OpenFormula::Kind::BoolVar:
      if (boolv) boolv->insert(g->name);
      break;
  }
}

static void collect(const ProgramPtr& k, std::set<std::string>& ind, std::set<std::string>* boolv,
                    std::set<std::string>* assigned) {
  switch (k->kind) {
    case Program::Kind::Assign:
      ind.insert(k->target);
      if (assigned) assigned->insert(k->target);
      collect(k->rhs_term, ind);
      break;
    case Program::Kind::BoolAssign:
      if (boolv) boolv->insert(k->target);
      if (assigned) assigned->insert(k->target);
      collect(k->rhs_open, ind, boolv);
      break;
    case Program::Kind::Seq:
      collect(k->p1, ind, boolv, assigned);
      collect(k->p2, ind, boolv, assigned);
      break;
    case Program::Kind::If:
      collect(k->guard, ind, boolv);
      collect(k->p1, ind, boolv, assigned);
      collect(k->p2, ind, boolv, assigned);
      break;
    case Program::Kind::While:
      collect(k->guard, ind, boolv);
      collect(k->p1, ind, boolv, assigned);
      break;
    case Program::Kind::Skip: break;
  }
}

// Free individual variables; quantifiers are the only binders.
static void collect(const FormulaPtr& f, std::set<std::string>& ind, std::set<std::string>* boolv) {
  switch (f->kind) {
    case Formula::Kind::Open: collect(f->open, ind, boolv); break;
    case Formula::Kind::Box:
    case Formula::Kind::IterUnion:
    case Formula::Kind::IterInter:
      collect(f->prog, ind, boolv, nullptr);
      collect(f->f1, ind, boolv);
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::set<std::string> sub;
      collect(f->f1, sub, boolv);
      sub.erase(f->var);
      ind.insert(sub.begin(), sub.end());
      break;
    }
    case Formula::Kind::Not: collect(f->f1, ind, boolv); break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      collect(f->f1, ind, boolv);
      collect(f->f2, ind, boolv);
      break;
  }
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  collect(t, out);
  return out;
}
std::set<std::string> free_vars(const OpenPtr& g) {
  std::set<std::string> out;
  collect(g, out, nullptr);
  return out;
}
std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> out;
  collect(f, out, nullptr);
  return out;
}
std::set<std::string> free_bool_vars(const OpenPtr& g) {
  std::set<std::string> ind, bv;
  collect(g, ind, &bv);
  return bv;
}
std::set<std::string> free_bool_vars(const FormulaPtr& f) {
  std::set<std::string> ind, bv;
  collect(f, ind, &bv);
  return bv;
}
std::set<std::string> vars_of_program(const ProgramPtr& k) {
  std::set<std::string> ind;
  collect(k, ind, nullptr, nullptr);
  return ind;
}
std::set<std::string> assigned_vars(const ProgramPtr& k) {
  std::set<std::string> ind, assigned;
  collect(k, ind, nullptr, &assigned);
  return assigned;
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string cand = base;
  do {
    cand += '\'';
  } while (avoid.count(cand));
  return cand;
}

// Does `name` occur anywhere in f as a boolean variable (read or assigned)?
bool occurs_boolean(const FormulaPtr& f, const std::string& name) {
  std::set<std::string> ind, bv;
  collect(f, ind, &bv);
  return bv.count(name) != 0;
}
bool occurs_boolean(const OpenPtr& g, const std::string& name) {
  std::set<std::string> ind, bv;
  collect(g, ind, &bv);
  return bv.count(name) != 0;
}

// Does `name` occur anywhere in f as an individual variable? (Bound
// occurrences count: this is a sort check, not a freeness check.)
bool occurs_individual(const FormulaPtr& f, const std::string& name);
bool occurs_individual_p(const ProgramPtr& k, const std::string& name) {
  std::set<std::string> ind;
  collect(k, ind, nullptr, nullptr);
  return ind.count(name) != 0;
}
bool occurs_individual(const FormulaPtr& f, const std::string& name) {
  switch (f->kind) {
    case Formula::Kind::Open: return free_vars(f->open).count(name) != 0;
    case Formula::Kind::Box:
    case Formula::Kind::IterUnion:
    case Formula::Kind::IterInter:
      return occurs_individual_p(f->prog, name) || occurs_individual(f->f1, name);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return f->var == name || occurs_individual(f->f1, name);
    case Formula::Kind::Not: return occurs_individual(f->f1, name);
    default: return occurs_individual(f->f1, name) || occurs_individual(f->f2, name);
  }
}

TermPtr subst_term(const TermPtr& s, const std::string& x, const TermPtr& t) {
  switch (s->kind) {
    case Term::Kind::Var: return s->name == x ? t : s;
    case Term::Kind::Zero: return s;
    case Term::Kind::Succ: return Term::succ(subst_term(s->a, x, t));
    case Term::Kind::Pred: return Term::pred(subst_term(s->a, x, t));
    case Term::Kind::Add: return Term::add(subst_term(s->a, x, t), subst_term(s->b, x, t));
    case Term::Kind::Mul: return Term::mul(subst_term(s->a, x, t), subst_term(s->b, x, t));
    case Term::Kind::Monus: return Term::monus(subst_term(s->a, x, t), subst_term(s->b, x, t));
  }
  return s;
}

OpenPtr subst_open(const OpenPtr& g, const std::string& x, const TermPtr& t) {
  switch (g->kind) {
    case OpenFormula::Kind::Eq:
      return OpenFormula::eq(subst_term(g->t1, x, t), subst_term(g->t2, x, t));
    case OpenFormula::Kind::Less:
      return OpenFormula::less(subst_term(g->t1, x, t), subst_term(g->t2, x, t));
    case OpenFormula::Kind::TrueConst:
    case OpenFormula::Kind::FalseConst:
    case OpenFormula::Kind::BoolVar: return g;
    case OpenFormula::Kind::And:
      return OpenFormula::o_and(subst_open(g->f1, x, t), subst_open(g->f2, x, t));
    case OpenFormula::Kind::Or:
      return OpenFormula::o_or(subst_open(g->f1, x, t), subst_open(g->f2, x, t));
    case OpenFormula::Kind::Implies:
      return OpenFormula::o_implies(subst_open(g->f1, x, t), subst_open(g->f2, x, t));
    case OpenFormula::Kind::Not: return OpenFormula::o_not(subst_open(g->f1, x, t));
  }
  return g;
}

ProgramPtr subst_prog(const ProgramPtr& k, const std::string& x, const TermPtr& t) {
  switch (k->kind) {
    case Program::Kind::Assign: {
      std::string target = k->target;
      if (target == x) {
        // An assignment target is a program variable: it can be renamed to
        // another variable but never replaced by a compound term.
        if (t->kind != Term::Kind::Var)
          throw SortError("cannot substitute a compound term for the assigned variable '" + x + "'");
        target = t->name;
      }
      return Program::assign(target, subst_term(k->rhs_term, x, t));
    }
    case Program::Kind::BoolAssign:
      return Program::bool_assign(k->target, subst_open(k->rhs_open, x, t));
    case Program::Kind::Seq:
      return Program::seq(subst_prog(k->p1, x, t), subst_prog(k->p2, x, t));
    case Program::Kind::If:
      return Program::if_(subst_open(k->guard, x, t), subst_prog(k->p1, x, t),
                          subst_prog(k->p2, x, t));
    case Program::Kind::While:
      return Program::while_(subst_open(k->guard, x, t), subst_prog(k->p1, x, t));
    case Program::Kind::Skip: return k;
  }
  return k;
}

FormulaPtr subst_formula(const FormulaPtr& f, const std::string& x, const TermPtr& t) {
  switch (f->kind) {
    case Formula::Kind::Open: return Formula::wrap(subst_open(f->open, x, t));
    case Formula::Kind::Box:
      return Formula::box(subst_prog(f->prog, x, t), subst_formula(f->f1, x, t));
    case Formula::Kind::IterUnion:
      return Formula::iter_union(subst_prog(f->prog, x, t), subst_formula(f->f1, x, t));
    case Formula::Kind::IterInter:
      return Formula::iter_inter(subst_prog(f->prog, x, t), subst_formula(f->f1, x, t));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      if (f->var == x) return f;  // bound occurrences shadow x
      std::string y = f->var;
      FormulaPtr body = f->f1;
      std::set<std::string> tv = free_vars(t);
      if (tv.count(y) && free_vars(body).count(x)) {
        // y would capture a variable of t: rename it first.
        std::set<std::string> avoid = tv;
        auto bf = free_vars(body);
        avoid.insert(bf.begin(), bf.end());
        avoid.insert(x);
        std::string y2 = fresh_name(y, avoid);
        body = subst_formula(body, y, Term::var(y2));
        y = y2;
      }
      body = subst_formula(body, x, t);
      return f->kind == Formula::Kind::Forall ? Formula::forall(y, body)
                                              : Formula::exists(y, body);
    }
    case Formula::Kind::Not: return Formula::f_not(subst_formula(f->f1, x, t));
    case Formula::Kind::And:
      return Formula::f_and(subst_formula(f->f1, x, t), subst_formula(f->f2, x, t));
    case Formula::Kind::Or:
      return Formula::f_or(subst_formula(f->f1, x, t), subst_formula(f->f2, x, t));
    case Formula::Kind::Implies:
      return Formula::f_implies(subst_formula(f->f1, x, t), subst_formula(f->f2, x, t));
  }
  return f;
}

OpenPtr subst_bool_open(const OpenPtr& g, const std::string& q, const OpenPtr& h) {
  switch (g->kind) {
    case OpenFormula::Kind::BoolVar: return g->name == q ? h : g;
    case OpenFormula::Kind::And:
      return OpenFormula::o_and(subst_bool_open(g->f1, q, h), subst_bool_open(g->f2, q, h));
    case OpenFormula::Kind::Or:
      return OpenFormula::o_or(subst_bool_open(g->f1, q, h), subst_bool_open(g->f2, q, h));
    case OpenFormula::Kind::Implies:
      return OpenFormula::o_implies(subst_bool_open(g->f1, q, h), subst_bool_open(g->f2, q, h));
    case OpenFormula::Kind::Not: return OpenFormula::o_not(subst_bool_open(g->f1, q, h));
    default: return g;
  }
}

bool bool_assigned_anywhere(const FormulaPtr& f, const std::string& q) {
  switch (f->kind) {
    case Formula::Kind::Open: return false;
    case Formula::Kind::Box:
    case Formula::Kind::IterUnion:
    case Formula::Kind::IterInter: {
      std::set<std::string> a = assigned_vars(f->prog);
      return a.count(q) != 0 || bool_assigned_anywhere(f->f1, q);
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
    case Formula::Kind::Not: return bool_assigned_anywhere(f->f1, q);
    default: return bool_assigned_anywhere(f->f1, q) || bool_assigned_anywhere(f->f2, q);
  }
}

ProgramPtr subst_bool_prog(const ProgramPtr& k, const std::string& q, const OpenPtr& h) {
  switch (k->kind) {
    case Program::Kind::Assign: return k;
    case Program::Kind::BoolAssign:
      return Program::bool_assign(k->target, subst_bool_open(k->rhs_open, q, h));
    case Program::Kind::Seq:
      return Program::seq(subst_bool_prog(k->p1, q, h), subst_bool_prog(k->p2, q, h));
    case Program::Kind::If:
      return Program::if_(subst_bool_open(k->guard, q, h), subst_bool_prog(k->p1, q, h),
                          subst_bool_prog(k->p2, q, h));
    case Program::Kind::While:
      return Program::while_(subst_bool_open(k->guard, q, h), subst_bool_prog(k->p1, q, h));
    case Program::Kind::Skip: return k;
  }
  return k;
}

FormulaPtr subst_bool_formula(const FormulaPtr& f, const std::string& q, const OpenPtr& h) {
  switch (f->kind) {
    case Formula::Kind::Open: return Formula::wrap(subst_bool_open(f->open, q, h));
    case Formula::Kind::Box:
      return Formula::box(subst_bool_prog(f->prog, q, h), subst_bool_formula(f->f1, q, h));
    case Formula::Kind::IterUnion:
      return Formula::iter_union(subst_bool_prog(f->prog, q, h), subst_bool_formula(f->f1, q, h));
    case Formula::Kind::IterInter:
      return Formula::iter_inter(subst_bool_prog(f->prog, q, h), subst_bool_formula(f->f1, q, h));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::string y = f->var;
      FormulaPtr body = f->f1;
      std::set<std::string> hv = free_vars(h);
      if (hv.count(y) && free_bool_vars(body).count(q)) {
        std::set<std::string> avoid = hv;
        auto bf = free_vars(body);
        avoid.insert(bf.begin(), bf.end());
        std::string y2 = fresh_name(y, avoid);
        body = subst_formula(body, y, Term::var(y2));
        y = y2;
      }
      body = subst_bool_formula(body, q, h);
      return f->kind == Formula::Kind::Forall ? Formula::forall(y, body)
                                              : Formula::exists(y, body);
    }
    case Formula::Kind::Not: return Formula::f_not(subst_bool_formula(f->f1, q, h));
    case Formula::Kind::And:
      return Formula::f_and(subst_bool_formula(f->f1, q, h), subst_bool_formula(f->f2, q, h));
    case Formula::Kind::Or:
      return Formula::f_or(subst_bool_formula(f->f1, q, h), subst_bool_formula(f->f2, q, h));
    case Formula::Kind::Implies:
      return Formula::f_implies(subst_bool_formula(f->f1, q, h), subst_bool_formula(f->f2, q, h));
  }
  return f;
}

}  // namespace

TermPtr substitute(const TermPtr& s, const std::string& x, const TermPtr& t) {
  return subst_term(s, x, t);
}
OpenPtr substitute(const OpenPtr& g, const std::string& x, const TermPtr& t) {
  if (occurs_boolean(g, x))
    throw SortError("'" + x + "' occurs as a boolean variable; cannot substitute a term for it");
  return subst_open(g, x, t);
}
ProgramPtr substitute(const ProgramPtr& k, const std::string& x, const TermPtr& t) {
  std::set<std::string> ind, bv;
  collect(k, ind, &bv, nullptr);
  if (bv.count(x))
    throw SortError("'" + x + "' occurs as a boolean variable; cannot substitute a term for it");
  return subst_prog(k, x, t);
}
FormulaPtr substitute(const FormulaPtr& f, const std::string& x, const TermPtr& t) {
  if (occurs_boolean(f, x))
    throw SortError("'" + x + "' occurs as a boolean variable; cannot substitute a term for it");
  return subst_formula(f, x, t);
}

OpenPtr substitute_bool(const OpenPtr& g, const std::string& q, const OpenPtr& h) {
  if (free_vars(g).count(q))
    throw SortError("'" + q + "' occurs as an individual variable; cannot substitute an open formula for it");
  return subst_bool_open(g, q, h);
}
FormulaPtr substitute_bool(const FormulaPtr& f, const std::string& q, const OpenPtr& h) {
  if (occurs_individual(f, q))
    throw SortError("'" + q + "' occurs as an individual variable; cannot substitute an open formula for it");
  if (bool_assigned_anywhere(f, q))
    throw SortError("'" + q + "' is assigned inside a program; cannot substitute for it");
  return subst_bool_formula(f, q, h);
}

// ---------------------------------------------------------------------------
// Iteration

FormulaPtr iterate(const ProgramPtr& k, long i, const FormulaPtr& f) {
  if (i < 0) throw std::invalid_argument("iterate: negative count");
  FormulaPtr out = f;
  for (long j = 0; j < i; ++j) out = Formula::box(k, out);
  return out;
}

}  // namespace alwb
