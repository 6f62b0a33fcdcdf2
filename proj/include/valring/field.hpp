#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "valring/finite_field.hpp"
#include "valring/numbers.hpp"
#include "valring/valuation.hpp"

namespace valring {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

enum class FieldKind { Finite, Padic, Laurent };

struct FiniteRep {
  FiniteField::Code code = 0;
};

// Coordinates in the basis gamma^i pi^j, stored at index j*f + i. The
// precision is absolute, in units of the uniformizer; nullopt means exact.
struct PadicRep {
  std::vector<Rational> coords;
  std::optional<std::int64_t> precision;
};

// sum_k coeffs[k] t^(start+k); coeffs[0] != 0 when nonempty. For inexact
// series only exponents below `precision` are known.
struct LaurentRep {
  std::int64_t start = 0;
  std::vector<FiniteField::Code> coeffs;
  std::optional<std::int64_t> precision;
};

using ElementRep = std::variant<FiniteRep, PadicRep, LaurentRep>;

class Element {
 public:
  Element() = default;
  Element(FieldPtr field, ElementRep rep) : field_(std::move(field)), rep_(std::move(rep)) {}

  const Field& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  const ElementRep& rep() const { return rep_; }
  bool is_null() const { return field_ == nullptr; }

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(const Element& o) const;
  Element operator/(const Element& o) const;
  Element operator-() const;
  Element pow(std::int64_t n) const;
  Element inv() const;

  bool is_zero() const;
  bool is_exact() const;
  Valuation val() const;
  FqElem residue() const;
  std::string to_string() const;

  // Exact structural equality (same field, same value, same precision).
  bool identical(const Element& o) const;

 private:
  FieldPtr field_;
  ElementRep rep_;
};

// Abstract interface shared by the three structure families. Implementations
// are immutable after construction.
class Field : public std::enable_shared_from_this<Field> {
 public:
  virtual ~Field() = default;

  virtual FieldKind kind() const = 0;
  virtual std::string descriptor() const = 0;
  // 0 for the p-adic tower.
  virtual std::int64_t characteristic() const = 0;
  virtual const FiniteFieldPtr& residue_field() const = 0;
  virtual int ramification() const = 0;
  virtual bool is_valued() const = 0;
  // Working precision for series-valued results, in uniformizer units.
  virtual std::int64_t precision() const = 0;

  std::int64_t residue_char() const { return residue_field()->p(); }
  std::int64_t q() const { return residue_field()->q(); }

  virtual Element from_integer(const Integer& n) const = 0;
  virtual Element from_rational(const Rational& r) const = 0;
  Element zero() const { return from_integer(0); }
  Element one() const { return from_integer(1); }

  virtual Element add(const Element& a, const Element& b) const = 0;
  virtual Element neg(const Element& a) const = 0;
  virtual Element sub(const Element& a, const Element& b) const { return add(a, neg(b)); }
  virtual Element mul(const Element& a, const Element& b) const = 0;
  virtual Element inv(const Element& a) const = 0;
  virtual Element pow(const Element& a, std::int64_t n) const;

  virtual bool is_zero(const Element& a) const = 0;
  virtual bool is_exact(const Element& a) const = 0;
  // Absolute precision in uniformizer units; nullopt when exact.
  virtual std::optional<std::int64_t> precision_of(const Element& a) const = 0;
  // Returns a with absolute precision capped at `units`.
  virtual Element with_precision(const Element& a, std::int64_t units) const = 0;
  virtual bool identical(const Element& a, const Element& b) const = 0;

  virtual Valuation val(const Element& a) const = 0;
  virtual FqElem residue(const Element& a) const = 0;
  virtual Element lift(const FqElem& a) const = 0;
  virtual Element uniformizer() const = 0;

  virtual std::string format(const Element& a) const = 0;
  // Named constants accepted by the element literal grammar.
  virtual std::optional<Element> symbol(std::string_view name) const = 0;
  Element parse(std::string_view literal) const;

  bool same_as(const Field& other) const { return this == &other || descriptor() == other.descriptor(); }

 protected:
  Element element(ElementRep rep) const { return Element(shared_from_this(), std::move(rep)); }
  void check_owner(const Element& a) const;
};

FieldPtr make_field(std::string_view descriptor);

// The finite field F_q viewed through the Field interface (trivial valuation).
FieldPtr make_finite_field(FiniteFieldPtr k);

}  // namespace valring
