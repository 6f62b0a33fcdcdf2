#include "valring/predicates.hpp"

#include "valring/error.hpp"
#include "valring/hensel.hpp"
#include "valring/laurent_field.hpp"
#include "valring/padic_field.hpp"

namespace valring {

namespace {

using Code = FiniteField::Code;

PredicateVerdict yes(std::string reason, std::optional<Element> w = std::nullopt) {
  return PredicateVerdict{true, std::move(w), std::move(reason)};
}
PredicateVerdict no(std::string reason) { return PredicateVerdict{false, std::nullopt, std::move(reason)}; }

std::int64_t val_units(const Element& x) { return x.val().in_units(x.field().ramification()); }

// y^n - u as a polynomial in y.
ElemPoly binomial(const Element& u, std::int64_t n) {
  const Field& K = u.field();
  ElemPoly f(static_cast<std::size_t>(n) + 1, K.zero());
  f[0] = -u;
  f[n] = K.one();
  return f;
}

Element cap_precision(const Element& root, std::optional<std::int64_t> limit) {
  if (!limit) return root;
  return root.field().with_precision(root, *limit);
}

// u a unit; searches a with a^n = u mod pi^m over representatives mod
// pi^(s+1), s = e ord_p(n).
std::optional<Element> padic_unit_root(const PadicField& K, const Element& u, std::int64_t n, bool want_witness) {
  const auto& k = *K.residue_field();
  const std::int64_t s = static_cast<std::int64_t>(K.e()) * ord_p(Integer(n), static_cast<unsigned long>(K.p()));
  const std::int64_t m = 2 * s + 1;
  if (auto pu = K.precision_of(u); pu && *pu < m) throw Error(ErrorCode::NotExact, "unit part known to too few digits");
  const Code r = u.residue().code;
  std::optional<Element> found;
  if (s == 0) {
    auto root = fq_nth_root(k, r, n);
    if (!root) return std::nullopt;
    found = K.lift(FqElem{K.residue_field(), *root});
  } else {
    const Element target = approximate(u, m);
    std::vector<Code> firsts;
    for (std::int64_t c = 1; c < k.q(); ++c) {
      if (k.pow(static_cast<Code>(c), n) == r) firsts.push_back(static_cast<Code>(c));
    }
    if (firsts.empty()) return std::nullopt;
    std::vector<Element> pis;
    for (std::int64_t j = 0; j <= s; ++j) pis.push_back(K.pi_power(j));
    std::vector<std::int64_t> digits(static_cast<std::size_t>(s) + 1, 0);
    for (Code c0 : firsts) {
      std::fill(digits.begin(), digits.end(), 0);
      while (true) {
        Element a = K.lift(FqElem{K.residue_field(), c0});
        for (std::int64_t j = 1; j <= s; ++j) {
          if (digits[j]) a = a + K.lift(FqElem{K.residue_field(), static_cast<Code>(digits[j])}) * pis[j];
        }
        Element d = power_mod(a, n, m) - target;
        if (d.is_zero() || approximate(d, m).is_zero()) {
          found = a;
          break;
        }
        std::int64_t j = 1;
        while (j <= s && ++digits[j] == k.q()) digits[j++] = 0;
        if (j > s) break;
      }
      if (found) break;
    }
    if (!found) return std::nullopt;
  }
  if (!want_witness) return found;
  Element root = hensel_root({binomial(drop_precision(u), n), *found});
  if (auto pu = K.precision_of(u)) return cap_precision(root, *pu - s);
  return root;
}

// Tame case over F_q((t)): u a unit, p does not divide n.
std::optional<Element> laurent_unit_root(const LaurentField& K, const Element& u, std::int64_t n, bool want_witness) {
  auto root = fq_nth_root(*K.residue_field(), u.residue().code, n);
  if (!root) return std::nullopt;
  Element a = K.lift(FqElem{K.residue_field(), *root});
  if (!want_witness || n == 1) return n == 1 ? u : a;
  Element r = hensel_root({binomial(drop_precision(u), n), a});
  return cap_precision(r, K.precision_of(u));
}

}  // namespace

bool fq_is_nth_power(const FiniteField& k, Code c, std::int64_t n) {
  if (c == 0) return false;
  std::int64_t g = gcd64(n, k.q() - 1);
  return k.pow(c, (k.q() - 1) / g) == 1;
}

std::optional<Code> fq_nth_root(const FiniteField& k, Code c, std::int64_t n) {
  if (!fq_is_nth_power(k, c, n)) return std::nullopt;
  for (std::int64_t y = 1; y < k.q(); ++y) {
    if (k.pow(static_cast<Code>(y), n) == c) return static_cast<Code>(y);
  }
  return std::nullopt;
}

std::optional<Code> fq_artin_schreier_root(const FiniteField& k, Code c) {
  for (std::int64_t y = 0; y < k.q(); ++y) {
    Code yy = static_cast<Code>(y);
    if (k.add(k.mul(yy, yy), yy) == c) return yy;
  }
  return std::nullopt;
}

bool fq_has_noncubes(const FiniteField& k) { return gcd64(k.q() - 1, 3) != 1; }

Element power_mod(const Element& y, std::int64_t n, std::int64_t units) {
  const Field& K = y.field();
  if (K.kind() != FieldKind::Padic) return K.pow(y, n);
  Element base = y, acc = K.one();
  bool negative = n < 0;
  if (negative) {
    base = K.inv(base);
    n = -n;
  }
  auto cut = [&](const Element& x) { return K.with_precision(approximate(x, units), units); };
  base = cut(base);
  while (n > 0) {
    if (n & 1) acc = cut(acc * base);
    n >>= 1;
    if (n) base = cut(base * base);
  }
  return acc;
}

PredicateVerdict is_nth_power(const Element& x, std::int64_t n, bool want_witness) {
  if (n < 2) throw Error(ErrorCode::BadParameter, "n must be at least 2");
  if (n > 64) throw Error(ErrorCode::Unsupported, "n > 64");
  const Field& K = x.field();
  if (x.is_zero()) {
    if (!x.is_exact()) throw Error(ErrorCode::NotExact, "element indistinguishable from 0");
    return no("zero");
  }
  if (K.kind() == FieldKind::Finite) {
    const auto& k = *K.residue_field();
    Code c = x.residue().code;
    if (!fq_is_nth_power(k, c, n)) return no("residue");
    if (!want_witness) return yes("residue");
    return yes("residue", K.lift(FqElem{K.residue_field(), *fq_nth_root(k, c, n)}));
  }

  const std::int64_t v = val_units(x);
  if (v % n != 0) return no("valuation");
  const Element pi_v = K.pow(K.uniformizer(), v / n);

  if (K.kind() == FieldKind::Padic) {
    const auto& P = static_cast<const PadicField&>(K);
    Element u = x * K.pow(K.uniformizer(), -v);
    auto root = padic_unit_root(P, u, n, want_witness);
    if (!root) return no("unit");
    if (!want_witness) return yes("unit");
    return yes("unit", *root * pi_v);
  }

  const auto& L = static_cast<const LaurentField&>(K);
  const std::int64_t p = K.characteristic();
  std::int64_t pj = 1, tame = n;
  while (tame % p == 0) {
    tame /= p;
    pj *= p;
  }
  Element x1 = x;
  if (pj > 1) {
    if (!x.is_exact()) throw Error(ErrorCode::NotExact, "p-th powers depend on every coefficient");
    const LaurentRep& r = L.rep(x);
    LaurentRep root;
    root.start = r.start / pj;
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
      if (r.coeffs[i] == 0) continue;
      std::int64_t ex = r.start + static_cast<std::int64_t>(i);
      if (ex % pj != 0) return no("p-part");
      Code c = r.coeffs[i];
      for (std::int64_t s = 1; s < pj; s *= p) c = K.residue_field()->pth_root(c);
      std::size_t idx = static_cast<std::size_t>(ex / pj - root.start);
      if (root.coeffs.size() <= idx) root.coeffs.resize(idx + 1, 0);
      root.coeffs[idx] = c;
    }
    x1 = L.from_rep(std::move(root));
    if (tame == 1) return want_witness ? yes("p-part", x1) : yes("p-part");
  }
  const std::int64_t v1 = val_units(x1);
  if (v1 % tame != 0) return no("valuation");
  Element u = x1 * L.monomial(1, -v1);
  if (auto pu = K.precision_of(u); pu && *pu < 1) throw Error(ErrorCode::NotExact, "unit part unknown");
  auto root = laurent_unit_root(L, u, tame, want_witness);
  if (!root) return no("unit");
  if (!want_witness) return yes("unit");
  return yes("unit", *root * L.monomial(1, v1 / tame));
}

PredicateVerdict is_artin_schreier(const Element& x, bool want_witness) {
  const Field& K = x.field();
  const auto& k = *K.residue_field();
  if (K.characteristic() != 2) {
    Element w2 = K.one() + K.from_integer(4) * x;
    if (w2.is_zero() && w2.is_exact()) return yes("1+4x=0", K.from_rational(Rational(-1, 2)));
    auto sq = is_nth_power(w2, 2, want_witness);
    if (!sq) return no("1+4x");
    if (!want_witness) return yes("1+4x");
    return yes("1+4x", (*sq.witness - K.one()) * K.from_rational(Rational(1, 2)));
  }
  if (K.kind() == FieldKind::Finite) {
    if (k.trace(x.residue().code) != 0) return no("trace");
    if (!want_witness) return yes("trace");
    return yes("trace", K.lift(FqElem{K.residue_field(), *fq_artin_schreier_root(k, x.residue().code)}));
  }
  const auto& L = static_cast<const LaurentField&>(K);
  Element rest = x, acc = K.zero();
  while (!rest.is_zero()) {
    const std::int64_t v = val_units(rest);
    if (v >= 0) break;
    if (v % 2 != 0) return no("odd-pole");
    Code d = k.pth_root(L.coefficient(rest, v));
    Element term = L.monomial(d, v / 2);
    rest = rest - term * term - term;
    acc = acc + term;
  }
  if (rest.is_zero() && rest.is_exact()) return want_witness ? yes("reduced", acc) : yes("reduced");
  if (auto pr = K.precision_of(rest); pr && *pr < 1) throw Error(ErrorCode::NotExact, "residue unknown");
  Code r = L.coefficient(rest, 0);
  if (k.trace(r) != 0) return no("trace");
  if (!want_witness) return yes("trace");
  Element y0 = K.lift(FqElem{K.residue_field(), *fq_artin_schreier_root(k, r)});
  ElemPoly f{-drop_precision(rest), K.one(), K.one()};
  Element y = hensel_root({f, y0});
  return yes("trace", cap_precision(acc + y, K.precision_of(rest)));
}

PredicateVerdict in_T_p(const Element& x, int p) {
  if (p != 2 && p != 3) throw Error(ErrorCode::BadParameter, "T_p needs p in {2, 3}");
  const Field& K = x.field();
  Element pp = K.from_integer(p == 2 ? 4 : 27);
  if (!is_nth_power(pp + x, p, false)) return no(p == 2 ? "T2:shift" : "T3:shift");
  if (is_nth_power(x, p, false)) return no(p == 2 ? "T2:power" : "T3:power");
  return yes(p == 2 ? "T2" : "T3");
}

PredicateVerdict in_T(const Element& x) {
  auto t2 = in_T_p(x, 2);
  if (t2) return t2;
  auto t3 = in_T_p(x, 3);
  if (t3) return t3;
  return no("T");
}

PredicateVerdict in_T_plus(const Element& x) {
  if (x.is_zero()) {
    if (!x.is_exact()) throw Error(ErrorCode::NotExact, "element indistinguishable from 0");
    return no("zero");
  }
  if (is_artin_schreier(x, false)) return no("AS(x)");
  if (is_artin_schreier(x.inv(), false)) return no("AS(1/x)");
  return yes("T+");
}

std::string_view base_set_name(BaseSet b) { return b == BaseSet::T ? "T" : "Tplus"; }

bool in_base(const Element& x, BaseSet base) { return base == BaseSet::T ? in_T(x).value : in_T_plus(x).value; }

bool base_applicable(const Field& K, BaseSet base) {
  if (base == BaseSet::Tplus) return true;
  const auto& k = *K.residue_field();
  return k.p() != 2 || fq_has_noncubes(k);
}

SEllWitness s_ell_witness(const Element& y, std::int64_t ell, BaseSet base) {
  const Field& K = y.field();
  if (!K.is_valued()) throw Error(ErrorCode::BadParameter, "S_ell witnesses need a valued field");
  if (ell < 1) throw Error(ErrorCode::BadParameter, "ell must be positive");
  if (y.is_zero() || y.val() != Valuation(0)) throw Error(ErrorCode::NotUnit, y.to_string() + " is not a unit");
  if (!base_applicable(K, base)) {
    throw Error(ErrorCode::BaseSetInapplicable, "residue field of characteristic 2 without non-cubes");
  }
  const Element gap = power_mod(y, ell, K.precision()) - K.one();
  auto accept = [&](const Element& a) -> std::optional<SEllWitness> {
    Element shifted = gap + a;
    if (in_base(a, base) && in_base(shifted, base)) return SEllWitness{a, shifted};
    return std::nullopt;
  };
  if (base == BaseSet::T) {
    if (auto w = accept(K.uniformizer())) return *w;
  } else {
    const auto& k = K.residue_field();
    for (std::int64_t c = 1; c < k->q(); ++c) {
      Element a = K.lift(FqElem{k, static_cast<Code>(c)});
      if (auto w = accept(a)) return *w;
    }
  }
  throw Error(ErrorCode::BaseSetInapplicable, "no witness a in " + std::string(base_set_name(base)));
}

bool s_ell_member(const Element& y, std::int64_t ell, BaseSet base) {
  if (!y.is_zero() && y.val() == Valuation(0)) {
    s_ell_witness(y, ell, base);
    return true;
  }
  throw Error(ErrorCode::Undecided, "membership in S_ell is only decided for units");
}

}  // namespace valring
