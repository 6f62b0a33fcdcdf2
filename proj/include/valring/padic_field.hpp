#pragma once

#include <memory>
#include <vector>

#include "valring/field.hpp"

namespace valring {

// An element of the unramified subfield L = Q(gamma), as coordinates in the
// basis 1, gamma, ..., gamma^(f-1).
using LVector = std::vector<Rational>;

struct PadicParams {
  std::int64_t p = 2;
  int f = 1;
  int e = 1;
  // Monic integer polynomial of degree f, low-to-high; G mod p must be
  // irreducible.
  std::vector<Integer> G;
  // Non-leading Eisenstein coefficients H*_0(gamma) .. H*_{e-1}(gamma).
  std::vector<LVector> eisenstein;
  std::int64_t precision = 64;
};

// Q_p or a tower Q_p(gamma, pi) with gamma a root of G (unramified of degree
// f) and pi a root of an Eisenstein polynomial over Q_p(gamma) (degree e).
// Elements are exact vectors over Q in the integral basis gamma^i pi^j, so
// the dense number field Q(gamma, pi) carries all arithmetic.
class PadicField : public Field {
 public:
  static std::shared_ptr<const PadicField> make(PadicParams params);

  FieldKind kind() const override { return FieldKind::Padic; }
  std::string descriptor() const override;
  std::int64_t characteristic() const override { return 0; }
  const FiniteFieldPtr& residue_field() const override { return residue_; }
  int ramification() const override { return params_.e; }
  bool is_valued() const override { return true; }
  std::int64_t precision() const override { return params_.precision; }

  Element from_integer(const Integer& n) const override;
  Element from_rational(const Rational& r) const override;
  Element add(const Element& a, const Element& b) const override;
  Element neg(const Element& a) const override;
  Element sub(const Element& a, const Element& b) const override;
  Element mul(const Element& a, const Element& b) const override;
  Element inv(const Element& a) const override;

  bool is_zero(const Element& a) const override;
  bool is_exact(const Element& a) const override;
  std::optional<std::int64_t> precision_of(const Element& a) const override;
  Element with_precision(const Element& a, std::int64_t units) const override;
  bool identical(const Element& a, const Element& b) const override;

  // ord_p(det of multiplication-by-a) / n.
  Valuation val(const Element& a) const override;
  FqElem residue(const Element& a) const override;
  Element lift(const FqElem& a) const override;
  Element uniformizer() const override;

  std::string format(const Element& a) const override;
  std::optional<Element> symbol(std::string_view name) const override;

  std::int64_t p() const { return params_.p; }
  int f() const { return params_.f; }
  int e() const { return params_.e; }
  int degree() const { return params_.f * params_.e; }
  const PadicParams& params() const { return params_; }
  bool is_qp() const { return params_.f == 1 && params_.e == 1; }

  // Valuation read off the integral basis: min over nonzero coordinates of
  // ord_p(c_ij) + j/e. Agrees with val() on every element.
  Valuation basis_val(const Element& a) const;
  Valuation determinant_val(const Element& a) const;
  bool is_integral(const Element& a) const;

  Element from_coords(std::vector<Rational> coords, std::optional<std::int64_t> precision = std::nullopt) const;
  const std::vector<Rational>& coords(const Element& a) const;
  Element gamma() const;
  Element pi_power(std::int64_t j) const;
  // Drops everything of valuation >= units/e (coordinate-wise).
  Element truncate(const Element& a, std::int64_t units) const;

  // Multiplication-by-a matrix over Q, row-major n x n.
  std::vector<std::vector<Rational>> multiplication_matrix(const Element& a) const;

  // Arithmetic in the unramified subfield.
  LVector l_mul(const LVector& a, const LVector& b) const;
  Element from_l(const LVector& a) const;
  // Parses a coefficient of the Eisenstein polynomial given as an
  // expression in g.
  static LVector parse_l_element(std::string_view text, const std::vector<Integer>& G, std::int64_t p);

 private:
  explicit PadicField(PadicParams params);
  std::int64_t units_val_lower(const Element& a) const;
  Element normalize(PadicRep rep) const;

  PadicParams params_;
  FiniteFieldPtr residue_;
};

std::shared_ptr<const PadicField> as_padic(const FieldPtr& field);

}  // namespace valring
