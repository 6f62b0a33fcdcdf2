#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace valring {

class FiniteField;
using FiniteFieldPtr = std::shared_ptr<const FiniteField>;

// Dense polynomials over F_p, coefficients low-to-high, entries in [0, p).
namespace fp_poly {
using Poly = std::vector<std::int64_t>;

void trim(Poly& a);
Poly mul_mod(const Poly& a, const Poly& b, const Poly& m, std::int64_t p);
Poly rem(Poly a, const Poly& m, std::int64_t p);
Poly gcd(Poly a, Poly b, std::int64_t p);
bool is_irreducible(const Poly& monic, std::int64_t p);
// Lexicographically smallest monic irreducible of degree f, comparing the
// coefficient list low-to-high.
Poly smallest_irreducible(std::int64_t p, int f);
}  // namespace fp_poly

// F_q = F_p[z]/(modulus). Elements are encoded as codes sum c_i p^i with
// c_i the coefficient of z^i; code order is the canonical enumeration order.
class FiniteField {
 public:
  using Code = std::uint32_t;

  static FiniteFieldPtr make(std::int64_t p, int f, std::optional<fp_poly::Poly> modulus = std::nullopt);

  std::int64_t p() const { return p_; }
  int f() const { return f_; }
  std::int64_t q() const { return q_; }
  const fp_poly::Poly& modulus() const { return modulus_; }
  // Descriptor text, e.g. "Fq:2^3:mod=1,0,1,1".
  std::string descriptor() const;

  Code zero() const { return 0; }
  Code one() const { return 1; }
  Code from_int(std::int64_t n) const;
  // Class of z, the adjoined root of the modulus.
  Code generator() const { return generator_; }
  Code primitive_element() const { return primitive_; }

  Code add(Code a, Code b) const;
  Code sub(Code a, Code b) const;
  Code neg(Code a) const;
  Code mul(Code a, Code b) const;
  Code inv(Code a) const;
  Code pow(Code a, std::int64_t n) const;
  Code frobenius(Code a) const { return pow(a, p_); }
  // The unique p-th root (F_q is perfect).
  Code pth_root(Code a) const;
  // Absolute trace to F_p.
  std::int64_t trace(Code a) const;

  std::vector<std::int64_t> coeffs(Code a) const;
  Code from_coeffs(const std::vector<std::int64_t>& c) const;

  std::string format(Code a) const;

  bool same_as(const FiniteField& other) const;

 private:
  FiniteField(std::int64_t p, int f, fp_poly::Poly modulus);
  Code mul_slow(Code a, Code b) const;

  std::int64_t p_;
  int f_;
  std::int64_t q_;
  fp_poly::Poly modulus_;
  Code generator_ = 0;
  Code primitive_ = 1;
  std::vector<Code> exp_;
  std::vector<std::int32_t> log_;
};

// A residue-field element bound to its field.
struct FqElem {
  FiniteFieldPtr field;
  FiniteField::Code code = 0;

  bool is_zero() const { return code == 0; }
  FqElem operator+(const FqElem& o) const { return {field, field->add(code, o.code)}; }
  FqElem operator-(const FqElem& o) const { return {field, field->sub(code, o.code)}; }
  FqElem operator*(const FqElem& o) const { return {field, field->mul(code, o.code)}; }
  FqElem operator-() const { return {field, field->neg(code)}; }
  bool operator==(const FqElem& o) const { return code == o.code; }
  std::string to_string() const { return field->format(code); }
};

}  // namespace valring
