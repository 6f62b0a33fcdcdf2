#pragma once

#include <memory>

#include "valring/field.hpp"

namespace valring {

// F_q((t)). Laurent polynomials are exact; inverses and Hensel roots are
// series known modulo t^precision.
class LaurentField : public Field {
 public:
  static std::shared_ptr<const LaurentField> make(FiniteFieldPtr residue, std::int64_t precision = 64);

  FieldKind kind() const override { return FieldKind::Laurent; }
  std::string descriptor() const override;
  std::int64_t characteristic() const override { return residue_->p(); }
  const FiniteFieldPtr& residue_field() const override { return residue_; }
  int ramification() const override { return 1; }
  bool is_valued() const override { return true; }
  std::int64_t precision() const override { return precision_; }

  Element from_integer(const Integer& n) const override;
  Element from_rational(const Rational& r) const override;
  Element add(const Element& a, const Element& b) const override;
  Element neg(const Element& a) const override;
  Element mul(const Element& a, const Element& b) const override;
  Element inv(const Element& a) const override;

  bool is_zero(const Element& a) const override;
  bool is_exact(const Element& a) const override;
  std::optional<std::int64_t> precision_of(const Element& a) const override;
  Element with_precision(const Element& a, std::int64_t units) const override;
  bool identical(const Element& a, const Element& b) const override;

  Valuation val(const Element& a) const override;
  FqElem residue(const Element& a) const override;
  Element lift(const FqElem& a) const override;
  Element uniformizer() const override;

  std::string format(const Element& a) const override;
  std::optional<Element> symbol(std::string_view name) const override;

  const LaurentRep& rep(const Element& a) const;
  Element from_rep(LaurentRep rep) const;
  Element monomial(FiniteField::Code c, std::int64_t exponent) const;
  FiniteField::Code coefficient(const Element& a, std::int64_t exponent) const;

 private:
  LaurentField(FiniteFieldPtr residue, std::int64_t precision) : residue_(std::move(residue)), precision_(precision) {}

  FiniteFieldPtr residue_;
  std::int64_t precision_;
};

std::shared_ptr<const LaurentField> as_laurent(const FieldPtr& field);

}  // namespace valring
