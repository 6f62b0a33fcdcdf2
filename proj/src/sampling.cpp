#include "valring/sampling.hpp"

#include "valring/laurent_field.hpp"
#include "valring/padic_field.hpp"

namespace valring {

std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

namespace {

Rational p_free_fraction(Rng& rng, std::int64_t p) {
  auto draw = [&](std::int64_t lo) {
    std::int64_t v;
    do v = uniform_int(rng, lo, 30);
    while (v % p == 0);
    return v;
  };
  std::int64_t num = draw(1) * (uniform_int(rng, 0, 1) ? 1 : -1);
  std::int64_t den = uniform_int(rng, 0, 2) == 0 ? draw(1) : 1;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

Element random_unit(const Field& K, Rng& rng) {
  const auto& k = K.residue_field();
  FqElem res{k, static_cast<FiniteField::Code>(uniform_int(rng, 1, k->q() - 1))};
  Element u = K.lift(res);
  if (K.kind() == FieldKind::Finite) return u;
  if (K.kind() == FieldKind::Padic) {
    const auto& P = static_cast<const PadicField&>(K);
    if (uniform_int(rng, 0, 3) == 0) {
      // A p-free rational scaled to a unit.
      u = u * K.from_rational(p_free_fraction(rng, P.p()));
    }
    int extra = static_cast<int>(uniform_int(rng, 0, 3));
    for (int i = 0; i < extra; ++i) {
      std::int64_t j = uniform_int(rng, 1, 3 * P.e());
      std::vector<Rational> c(P.degree(), 0);
      c[uniform_int(rng, 0, P.f() - 1)] = p_free_fraction(rng, P.p());
      u = u + P.from_coords(c) * P.pi_power(j);
    }
    return u;
  }
  const auto& L = static_cast<const LaurentField&>(K);
  int extra = static_cast<int>(uniform_int(rng, 0, 4));
  for (int i = 0; i < extra; ++i) {
    auto c = static_cast<FiniteField::Code>(uniform_int(rng, 1, k->q() - 1));
    u = u + L.monomial(c, uniform_int(rng, 1, 8));
  }
  return u;
}

Element random_element(const Field& K, Rng& rng, std::int64_t min_units, std::int64_t max_units, bool allow_zero) {
  if (allow_zero && uniform_int(rng, 0, 49) == 0) return K.zero();
  Element u = random_unit(K, rng);
  if (!K.is_valued()) return u;
  return u * K.pow(K.uniformizer(), uniform_int(rng, min_units, max_units));
}

}  // namespace valring
