// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// Arithmetic structures the workbench can run programs over: the abstract
// Structure interface, the standard naturals, and a non-standard model whose
// elements are integer-plus-fraction triples (it satisfies the successor
// axioms yet contains unreachable elements, so searches that would terminate
// over the naturals can diverge here).

#ifndef ALWB_MODELS_HPP
#define ALWB_MODELS_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace alwb {

using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Errors

/// A structure was asked for an operation it does not provide (e.g. mul on a
/// model without multiplication).
struct UnsupportedOperation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An element failed a structure's representation invariant.
struct InvalidElement : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Type-erased carrier elements. Values are immutable; copying an Elem is a
// pointer copy. Each structure knows the concrete payload type it uses.

class Elem {
 public:
  Elem() = default;
  template <typename T>
  static Elem make(T value) {
    Elem e;
    e.p_ = std::make_shared<const T>(std::move(value));
    return e;
  }
  template <typename T>
  const T& as() const {
    if (!p_) throw InvalidElement("empty element");
    return *static_cast<const T*>(p_.get());
  }
  bool empty() const { return !p_; }

 private:
  std::shared_ptr<const void> p_;
};

// ---------------------------------------------------------------------------
// Divergence certificates (forward-declared here; the checking logic lives in
// semantics). A certificate recognises a while-loop shape and supplies an
// invariant that (a) implies the guard and (b) is preserved by the body, so a
// state satisfying it can never leave the loop.

struct Program;  // from syntax.hpp
class Structure;

struct DivergenceCertificate {
  std::string name;
  /// If the certificate recognises this loop, return the invariant predicate
  /// for it (over a valuation's variable values, supplied by name).
  using Lookup = std::function<Elem(const std::string&)>;
  using Invariant = std::function<bool(const Structure&, const Lookup&)>;
  std::function<std::optional<Invariant>(const std::shared_ptr<const Program>&)> match;
};
using DivergenceCertificatePtr = std::shared_ptr<const DivergenceCertificate>;

// ---------------------------------------------------------------------------
// Structure interface

class Structure {
 public:
  virtual ~Structure() = default;
  virtual std::string name() const = 0;

  virtual Elem zero() const = 0;
  virtual Elem succ(const Elem& a) const = 0;
  virtual Elem pred(const Elem& a) const = 0;
  virtual Elem add(const Elem& a, const Elem& b) const = 0;
  virtual bool has_mul() const { return false; }
  virtual Elem mul(const Elem&, const Elem&) const {
    throw UnsupportedOperation("structure '" + name() + "' does not provide multiplication");
  }
  /// Truncated subtraction: zero when the first argument is below the second.
  virtual Elem monus(const Elem& a, const Elem& b) const = 0;
  virtual bool equal(const Elem& a, const Elem& b) const = 0;
  virtual bool less(const Elem& a, const Elem& b) const = 0;

  /// A finite, deterministic sample of the carrier, growing with `bound`.
  virtual std::vector<Elem> enumerate(long bound) const = 0;
  /// True iff enumerate(bound) is the whole carrier, making bounded
  /// quantifier sweeps exact rather than one-sided.
  virtual bool is_exhaustive(long bound) const = 0;

  virtual std::string print_elem(const Elem& a) const = 0;
  /// Inverse of print_elem for CLI input; nullopt if the text is malformed.
  virtual std::optional<Elem> parse_elem(const std::string& text) const = 0;

  /// Divergence certificates registered for this structure.
  virtual const std::vector<DivergenceCertificatePtr>& certificates() const;
};

using StructurePtr = std::shared_ptr<const Structure>;

// ---------------------------------------------------------------------------
// Standard naturals: arbitrary-precision, total except pred-below-zero
// (pred(0) = 0, monus clamps). enumerate(b) = 0..b; never exhaustive.

StructurePtr make_standard();

// ---------------------------------------------------------------------------
// Non-standard naturals: triples (intpart, nomprt, denom).

struct NSNValue {
  BigInt intpart;
  BigInt nomprt;
  BigInt denom;
};

/// Construct a checked element of the non-standard model. Raises
/// InvalidElement exactly when the triple violates the representation guard:
/// a zero fraction with a negative integer part, a negative fraction, or a
/// zero denominator.
Elem nsn_make(const BigInt& intpart, const BigInt& nomprt, const BigInt& denom);

StructurePtr make_nsn();

/// Look up a structure by CLI name ("standard" or "nsn").
StructurePtr structure_by_name(const std::string& name);

}  // namespace alwb

#endif  // ALWB_MODELS_HPP
