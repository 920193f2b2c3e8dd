// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// The two shipped arithmetic structures: standard naturals over big integers
// and the non-standard triple model, including its divergence certificate.

#include "alwb/models.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "alwb/syntax.hpp"

namespace alwb {

const std::vector<DivergenceCertificatePtr>& Structure::certificates() const {
  static const std::vector<DivergenceCertificatePtr> none;
  return none;
}

// ---------------------------------------------------------------------------
// Standard naturals

namespace {

class StandardNat final : public Structure {
 public:
  std::string name() const override { return "standard"; }

  Elem zero() const override { return Elem::make<BigInt>(0); }
  Elem succ(const Elem& a) const override { return Elem::make<BigInt>(a.as<BigInt>() + 1); }
  Elem pred(const Elem& a) const override {
    const BigInt& v = a.as<BigInt>();
    return Elem::make<BigInt>(v == 0 ? BigInt(0) : BigInt(v - 1));
  }
  Elem add(const Elem& a, const Elem& b) const override {
    return Elem::make<BigInt>(a.as<BigInt>() + b.as<BigInt>());
  }
  bool has_mul() const override { return true; }
  Elem mul(const Elem& a, const Elem& b) const override {
    return Elem::make<BigInt>(a.as<BigInt>() * b.as<BigInt>());
  }
  Elem monus(const Elem& a, const Elem& b) const override {
    const BigInt& x = a.as<BigInt>();
    const BigInt& y = b.as<BigInt>();
    return Elem::make<BigInt>(x < y ? BigInt(0) : BigInt(x - y));
  }
  bool equal(const Elem& a, const Elem& b) const override {
    return a.as<BigInt>() == b.as<BigInt>();
  }
  bool less(const Elem& a, const Elem& b) const override {
    return a.as<BigInt>() < b.as<BigInt>();
  }

  std::vector<Elem> enumerate(long bound) const override {
    std::vector<Elem> out;
    for (long i = 0; i <= bound; ++i) out.push_back(Elem::make<BigInt>(i));
    return out;
  }
  // The carrier is infinite; no finite sample is ever the whole of it.
  bool is_exhaustive(long) const override { return false; }

  std::string print_elem(const Elem& a) const override { return a.as<BigInt>().str(); }
  std::optional<Elem> parse_elem(const std::string& text) const override {
    if (text.empty()) return std::nullopt;
    for (char c : text)
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    return Elem::make<BigInt>(BigInt(text));
  }
};

}  // namespace

StructurePtr make_standard() { return std::make_shared<StandardNat>(); }

// ---------------------------------------------------------------------------
// Non-standard naturals

Elem nsn_make(const BigInt& intpart, const BigInt& nomprt, const BigInt& denom) {
  if (denom == 0) throw InvalidElement("NSN: zero denominator");
  if (nomprt * denom < 0) throw InvalidElement("NSN: negative fractional part");
  if (nomprt == 0 && intpart < 0)
    throw InvalidElement("NSN: negative integer part with zero fraction");
  return Elem::make<NSNValue>(NSNValue{intpart, nomprt, denom});
}

namespace {

// Normalise a fraction's sign so the denominator is positive; the value is
// unchanged and comparisons become plain cross-multiplications.
void norm_frac(BigInt& n, BigInt& d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
}

bool frac_is_zero(const NSNValue& v) { return v.nomprt == 0; }

// frac(a) < frac(b), exactly.
bool frac_less(const NSNValue& a, const NSNValue& b) {
  BigInt na = a.nomprt, da = a.denom, nb = b.nomprt, db = b.denom;
  norm_frac(na, da);
  norm_frac(nb, db);
  return na * db < nb * da;
}
bool frac_equal(const NSNValue& a, const NSNValue& b) {
  return a.nomprt * b.denom == b.nomprt * a.denom;
}

class NonStandardNat final : public Structure {
 public:
  NonStandardNat();
  std::string name() const override { return "nsn"; }

  Elem zero() const override { return nsn_make(0, 0, 1); }
  Elem succ(const Elem& a) const override {
    const NSNValue& v = a.as<NSNValue>();
    return nsn_make(v.intpart + 1, v.nomprt, v.denom);
  }
  Elem pred(const Elem& a) const override { return monus(a, succ(zero())); }
  Elem add(const Elem& a, const Elem& b) const override {
    const NSNValue& x = a.as<NSNValue>();
    const NSNValue& y = b.as<NSNValue>();
    return nsn_make(x.intpart + y.intpart, x.nomprt * y.denom + y.nomprt * x.denom,
                    x.denom * y.denom);
  }
  Elem monus(const Elem& a, const Elem& b) const override {
    if (less(a, b)) return zero();
    const NSNValue& x = a.as<NSNValue>();
    const NSNValue& y = b.as<NSNValue>();
    return nsn_make(x.intpart - y.intpart, x.nomprt * y.denom - y.nomprt * x.denom,
                    x.denom * y.denom);
  }
  bool equal(const Elem& a, const Elem& b) const override {
    const NSNValue& x = a.as<NSNValue>();
    const NSNValue& y = b.as<NSNValue>();
    return x.intpart == y.intpart && frac_equal(x, y);
  }
  // Fraction-first order: the standard block (fraction zero) sits below every
  // element with a positive fraction, and blocks are ordered by fraction.
  bool less(const Elem& a, const Elem& b) const override {
    const NSNValue& x = a.as<NSNValue>();
    const NSNValue& y = b.as<NSNValue>();
    bool zx = frac_is_zero(x), zy = frac_is_zero(y);
    if (zx && zy) return x.intpart < y.intpart;
    if (zx != zy) return zx;  // standard < non-standard
    if (!frac_equal(x, y)) return frac_less(x, y);
    return x.intpart < y.intpart;
  }

  std::vector<Elem> enumerate(long bound) const override {
    // Reduced fractions n/d with 0 <= n <= bound, 1 <= d <= bound, each value
    // once, ascending; then every valid integer part in -bound..bound.
    std::vector<std::pair<BigInt, BigInt>> fracs;
    fracs.emplace_back(0, 1);
    for (long n = 1; n <= bound; ++n)
      for (long d = 1; d <= bound; ++d) {
        BigInt bn = n, bd = d, g = boost::multiprecision::gcd(bn, bd);
        bn /= g;
        bd /= g;
        bool seen = false;
        for (auto& f : fracs)
          if (f.first == bn && f.second == bd) {
            seen = true;
            break;
          }
        if (!seen) fracs.emplace_back(bn, bd);
      }
    std::sort(fracs.begin(), fracs.end(), [](const auto& a, const auto& b) {
      return a.first * b.second < b.first * a.second;
    });
    std::vector<Elem> out;
    for (long i = -bound; i <= bound; ++i)
      for (auto& f : fracs) {
        if (f.first == 0 && i < 0) continue;
        out.push_back(nsn_make(i, f.first, f.second));
      }
    // Order the whole sample lexicographically by (intpart, fraction).
    std::sort(out.begin(), out.end(), [](const Elem& a, const Elem& b) {
      const NSNValue& x = a.as<NSNValue>();
      const NSNValue& y = b.as<NSNValue>();
      if (x.intpart != y.intpart) return x.intpart < y.intpart;
      return frac_less(x, y);
    });
    return out;
  }
  bool is_exhaustive(long) const override { return false; }

  std::string print_elem(const Elem& a) const override {
    const NSNValue& v = a.as<NSNValue>();
    return "NSN(" + v.intpart.str() + "," + v.nomprt.str() + "," + v.denom.str() + ")";
  }
  std::optional<Elem> parse_elem(const std::string& text) const override;

  const std::vector<DivergenceCertificatePtr>& certificates() const override { return certs_; }

 private:
  std::vector<DivergenceCertificatePtr> certs_;
};

std::optional<Elem> NonStandardNat::parse_elem(const std::string& text) const {
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto read_int = [&]() -> std::optional<BigInt> {
    skip_ws();
    size_t start = i;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
    size_t digits = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == digits) return std::nullopt;
    return BigInt(text.substr(start, i - start));
  };
  skip_ws();
  if (text.compare(i, 4, "NSN(") == 0) {
    i += 4;
    auto a = read_int();
    skip_ws();
    if (!a || i >= text.size() || text[i] != ',') return std::nullopt;
    ++i;
    auto b = read_int();
    skip_ws();
    if (!b || i >= text.size() || text[i] != ',') return std::nullopt;
    ++i;
    auto c = read_int();
    skip_ws();
    if (!c || i >= text.size() || text[i] != ')') return std::nullopt;
    ++i;
    skip_ws();
    if (i != text.size()) return std::nullopt;
    try {
      return nsn_make(*a, *b, *c);
    } catch (const InvalidElement&) {
      return std::nullopt;
    }
  }
  // A bare non-negative integer is accepted as shorthand for NSN(k,0,1).
  auto k = read_int();
  skip_ws();
  if (!k || i != text.size() || *k < 0) return std::nullopt;
  return nsn_make(*k, 0, 1);
}

NonStandardNat::NonStandardNat() {
  // Fraction-mismatch certificate: for a loop guarded by the disequality of
  // two variables, the states where exactly one of them has a zero fraction
  // form an invariant region (add/monus/succ/pred act on fractions
  // independently of integer parts) in which the guard can never become
  // false, since equality requires equal fractions.
  auto cert = std::make_shared<DivergenceCertificate>();
  cert->name = "nsn-frac-mismatch";
  cert->match = [](const ProgramPtr& k)
      -> std::optional<DivergenceCertificate::Invariant> {
    if (!k || k->kind != Program::Kind::While) return std::nullopt;
    const OpenPtr& g = k->guard;
    if (g->kind != OpenFormula::Kind::Not || g->f1->kind != OpenFormula::Kind::Eq)
      return std::nullopt;
    const TermPtr& l = g->f1->t1;
    const TermPtr& r = g->f1->t2;
    if (l->kind != Term::Kind::Var || r->kind != Term::Kind::Var) return std::nullopt;
    std::string u = l->name, w = r->name;
    return DivergenceCertificate::Invariant(
        [u, w](const Structure&, const DivergenceCertificate::Lookup& look) {
          Elem eu = look(u), ew = look(w);
          if (eu.empty() || ew.empty()) return false;
          bool zu = frac_is_zero(eu.as<NSNValue>());
          bool zw = frac_is_zero(ew.as<NSNValue>());
          return zu != zw;
        });
  };
  certs_.push_back(cert);
}

}  // namespace

StructurePtr make_nsn() { return std::make_shared<NonStandardNat>(); }

StructurePtr structure_by_name(const std::string& name) {
  if (name == "standard") return make_standard();
  if (name == "nsn") return make_nsn();
  throw std::invalid_argument("unknown structure '" + name + "' (expected 'standard' or 'nsn')");
}

}  // namespace alwb
