#pragma once

// Brute-force reference implementations. Nothing here calls the library's
// decision procedures; they only use field arithmetic and enumeration.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "valring/field.hpp"
#include "valring/finite_field.hpp"

namespace oracle {

using valring::FiniteField;
using Code = FiniteField::Code;
using Poly = std::vector<std::int64_t>;

inline Poly poly_mod(Poly a, const Poly& m, std::int64_t p) {
  while (a.size() >= m.size()) {
    std::int64_t lead = a.back() % p;
    std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = ((a[shift + i] - lead * m[i]) % p + p) % p;
    a.pop_back();
  }
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

// All monic polynomials of the given degree, coefficients c0..c_{d-1}
// enumerated with c0 varying slowest (lexicographic, low-to-high).
inline std::vector<Poly> monic_polys(std::int64_t p, int d) {
  std::int64_t count = 1;
  for (int i = 0; i < d; ++i) count *= p;
  std::vector<Poly> out;
  for (std::int64_t n = 0; n < count; ++n) {
    Poly c(d + 1, 0);
    std::int64_t r = n;
    for (int i = d - 1; i >= 0; --i) {
      c[i] = r % p;
      r /= p;
    }
    c[d] = 1;
    out.push_back(c);
  }
  return out;
}

inline bool irreducible_by_trial(const Poly& m, std::int64_t p) {
  int d = static_cast<int>(m.size()) - 1;
  for (int k = 1; 2 * k <= d; ++k) {
    for (const auto& g : monic_polys(p, k)) {
      if (poly_mod(m, g, p).empty()) return false;
    }
  }
  return true;
}

inline Poly smallest_irreducible(std::int64_t p, int d) {
  for (const auto& m : monic_polys(p, d)) {
    if (irreducible_by_trial(m, p)) return m;
  }
  return {};
}

inline std::vector<Code> elements(const FiniteField& k) {
  std::vector<Code> out;
  for (std::int64_t c = 0; c < k.q(); ++c) out.push_back(static_cast<Code>(c));
  return out;
}

// x^n by repeated multiplication.
inline Code power(const FiniteField& k, Code x, int n) {
  Code acc = k.one();
  for (int i = 0; i < n; ++i) acc = k.mul(acc, x);
  return acc;
}

inline std::set<Code> nonzero_nth_powers(const FiniteField& k, int n) {
  std::set<Code> out;
  for (Code x : elements(k)) {
    if (x != 0) out.insert(power(k, x, n));
  }
  return out;
}

inline std::set<Code> artin_schreier_image(const FiniteField& k) {
  std::set<Code> out;
  for (Code y : elements(k)) out.insert(k.add(k.mul(y, y), y));
  return out;
}

// T_p(k): p^p + x a nonzero p-th power and x not.
inline std::set<Code> T_p(const FiniteField& k, int p) {
  auto P = nonzero_nth_powers(k, p);
  Code pp = k.from_int(p == 2 ? 4 : 27);
  std::set<Code> out;
  for (Code x : elements(k)) {
    if (P.count(k.add(pp, x)) && !P.count(x)) out.insert(x);
  }
  return out;
}

inline std::set<Code> T(const FiniteField& k) {
  auto a = T_p(k, 2);
  auto b = T_p(k, 3);
  a.insert(b.begin(), b.end());
  return a;
}

inline std::set<Code> T_plus(const FiniteField& k) {
  auto AS = artin_schreier_image(k);
  std::set<Code> out;
  for (Code x : elements(k)) {
    if (x != 0 && !AS.count(x) && !AS.count(k.inv(x))) out.insert(x);
  }
  return out;
}

// Residue by enumeration: the unique c with val(x - lift(c)) > 0.
inline valring::FqElem residue_by_enumeration(const valring::Element& x) {
  const auto& K = x.field();
  const auto& k = K.residue_field();
  for (Code c : elements(*k)) {
    valring::FqElem r{k, c};
    valring::Element d = x - K.lift(r);
    if (d.is_zero() || d.val() > valring::Valuation(0)) return r;
  }
  return valring::FqElem{};
}

}  // namespace oracle
