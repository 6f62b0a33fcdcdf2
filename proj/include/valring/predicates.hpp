#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "valring/field.hpp"

namespace valring {

struct PredicateVerdict {
  bool value = false;
  std::optional<Element> witness;
  std::string reason;

  explicit operator bool() const { return value; }
};

// Residue-field helpers.
bool fq_is_nth_power(const FiniteField& k, FiniteField::Code c, std::int64_t n);
std::optional<FiniteField::Code> fq_nth_root(const FiniteField& k, FiniteField::Code c, std::int64_t n);
// Some y with y^2 + y = c, if any.
std::optional<FiniteField::Code> fq_artin_schreier_root(const FiniteField& k, FiniteField::Code c);
bool fq_has_noncubes(const FiniteField& k);

// x a nonzero n-th power. With want_witness, a root y (possibly a series
// known to working precision) is attached.
PredicateVerdict is_nth_power(const Element& x, std::int64_t n, bool want_witness = true);
// x = y^2 + y for some y.
PredicateVerdict is_artin_schreier(const Element& x, bool want_witness = true);

PredicateVerdict in_T_p(const Element& x, int p);
PredicateVerdict in_T(const Element& x);
PredicateVerdict in_T_plus(const Element& x);

enum class BaseSet { T, Tplus };
std::string_view base_set_name(BaseSet b);
bool in_base(const Element& x, BaseSet base);
// T needs non-cubes in a residue field of characteristic 2.
bool base_applicable(const Field& K, BaseSet base);

// y^n computed modulo pi^units; exact for fields without a precision cap.
Element power_mod(const Element& y, std::int64_t n, std::int64_t units);

struct SEllWitness {
  Element a;
  // y^ell - 1 + a
  Element shifted;
};

// For a unit y: a in the base set with y^ell - 1 + a in the base set too.
SEllWitness s_ell_witness(const Element& y, std::int64_t ell, BaseSet base);

// General membership in S_ell(base) is not decided; always throws Undecided
// unless y is a unit, where a witness settles it.
bool s_ell_member(const Element& y, std::int64_t ell, BaseSet base);

}  // namespace valring
