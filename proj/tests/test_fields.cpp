#include "doctest.h"
#include "oracles.hpp"
#include "valring/error.hpp"
#include "valring/field.hpp"
#include "valring/hensel.hpp"
#include "valring/laurent_field.hpp"
#include "valring/padic_field.hpp"
#include "valring/sampling.hpp"

using namespace valring;

namespace {
ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Undecided;
}
}  // namespace

TEST_CASE("smallest irreducible modulus matches trial division") {
  for (std::int64_t p : {2, 3, 5, 7}) {
    for (int f = 1; f <= (p == 2 ? 6 : 3); ++f) {
      CHECK(fp_poly::smallest_irreducible(p, f) == oracle::smallest_irreducible(p, f));
    }
  }
  auto k = FiniteField::make(2, 3);
  CHECK(k->modulus() == fp_poly::Poly{1, 0, 1, 1});
  CHECK(FiniteField::make(3, 2)->modulus() == fp_poly::Poly{1, 0, 1});
}

TEST_CASE("make_field descriptors") {
  auto q5 = make_field("Qp:5:prec=64");
  CHECK(q5->kind() == FieldKind::Padic);
  CHECK(q5->precision() == 64);
  auto f8 = make_field("Fq:2^3");
  CHECK(f8->q() == 8);
  auto r2 = make_field("Ext:Qp:2:unram=1:eis=[−2,0,1]");
  CHECK(r2->ramification() == 2);
  CHECK(make_field("Ext:Qp:2:unram=1:eis=[-2,0,1]")->same_as(*r2));
  CHECK(make_field("Laurent:2^2:prec=32")->precision() == 32);
  CHECK(code_of([] { make_field("Qx:5"); }) == ErrorCode::MalformedDescriptor);
  CHECK(code_of([] { make_field("Qp:6"); }) == ErrorCode::MalformedDescriptor);
  CHECK(code_of([] { make_field("Fq:2^2:mod=1,0,1"); }) == ErrorCode::NotIrreducible);
  CHECK(code_of([] { make_field("Ext:Qp:2:unram=1:eis=[-4,0,1]"); }) == ErrorCode::NotEisenstein);
  CHECK(code_of([] { make_field("Ext:Qp:3:unram=2:G=[2,0,1]:eis=[-3,1]"); }) == ErrorCode::NotIrreducible);
  CHECK(make_field("Ext:Qp:3:unram=2:G=[1,0,1]:eis=[-3,1]")->q() == 9);
}

TEST_CASE("val examples") {
  auto q5 = make_field("Qp:5");
  CHECK(q5->parse("5").val() == Valuation(1));
  auto r2 = make_field("Ext:Qp:2:unram=1:eis=[-2,0,1]");
  CHECK(r2->parse("u").val() == Valuation(1, 2));
  auto l2 = make_field("Laurent:2^1");
  CHECK(l2->parse("t^-3 + 1").val() == Valuation(-3));
  CHECK(q5->zero().val().is_infinite());
  CHECK(code_of([&] { q5->parse("O(5^3)").val(); }) == ErrorCode::InsufficientPrecision);
}

TEST_CASE("residue and lift examples") {
  auto q5 = make_field("Qp:5");
  CHECK(q5->parse("7").residue().code == 2);
  auto l4 = make_field("Laurent:2^2");
  CHECK(l4->parse("1 + t").residue().code == 1);
  auto r2 = make_field("Ext:Qp:2:unram=1:eis=[-2,0,1]");
  CHECK(r2->parse("(1+u)^2").residue().code == 1);
  CHECK(r2->parse("(1+u)^2").identical(r2->parse("3 + 2*u")));
  CHECK(code_of([&] { q5->parse("1/5").residue(); }) == ErrorCode::NotIntegral);
  FqElem two{q5->residue_field(), 2};
  CHECK(q5->lift(two).identical(q5->parse("2")));
  FqElem zero{q5->residue_field(), 0};
  CHECK(q5->lift(zero).is_zero());
  FqElem z{l4->residue_field(), l4->residue_field()->generator()};
  CHECK(l4->lift(z).identical(l4->parse("z")));
  CHECK(code_of([&] { q5->lift(z); }) == ErrorCode::FieldMismatch);
}

TEST_CASE("arithmetic examples") {
  auto f5 = make_field("Fq:5^1");
  CHECK((f5->parse("2") * f5->parse("2")).identical(f5->parse("4")));
  auto q5 = make_field("Qp:5");
  CHECK((q5->parse("1/5") * q5->parse("5")).identical(q5->one()));
  auto l2 = make_field("Laurent:2^1");
  CHECK((l2->parse("t^-1") * l2->parse("t^2")).identical(l2->parse("t")));
  CHECK(code_of([&] { q5->zero().inv(); }) == ErrorCode::DivisionByZero);
  CHECK(code_of([&] { (void)(q5->one() + l2->one()); }) == ErrorCode::FieldMismatch);
  auto l = as_laurent(l2);
  Element x = l2->parse("1 + t + t^3");
  Element y = x * x.inv();
  CHECK(y.to_string() == "1 + O(t^64)");
}

TEST_CASE("uniformizers") {
  CHECK(make_field("Qp:5")->uniformizer().identical(make_field("Qp:5")->parse("5")));
  CHECK(make_field("Laurent:2^2")->uniformizer().to_string() == "t");
  auto r2 = make_field("Ext:Qp:2:unram=1:eis=[-2,0,1]");
  Element u = r2->uniformizer();
  CHECK((u * u).identical(r2->parse("2")));
  auto ramified = make_field("Ext:Qp:5:unram=1:eis=[5,0,0,1]");
  CHECK(ramified->uniformizer().val() == Valuation(1, 3));
  auto q9 = make_field("Ext:Qp:3:unram=2:eis=[-3,1]");
  CHECK(as_padic(q9)->gamma().val() == Valuation(0));
  CHECK(q9->uniformizer().val() == Valuation(1));
}

TEST_CASE("element literal formatting round-trips") {
  for (const char* d : {"Qp:7", "Ext:Qp:2:unram=1:eis=[-2,0,1]", "Ext:Qp:3:unram=2:eis=[-3,1]", "Laurent:3^2", "Fq:3^2"}) {
    auto K = make_field(d);
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
      Element x = random_element(*K, rng, -6, 6);
      CHECK(K->parse(x.to_string()).identical(x));
    }
  }
}

TEST_CASE("valuation and residue properties") {
  const char* families[] = {"Qp:2", "Qp:5", "Ext:Qp:2:unram=1:eis=[-2,0,1]", "Ext:Qp:3:unram=2:eis=[-3,1]",
                            "Ext:Qp:5:unram=1:eis=[5,0,0,1]", "Laurent:2^1", "Laurent:2^2", "Laurent:3^1"};
  for (const char* d : families) {
    auto K = make_field(d);
    auto P = as_padic(K);
    Rng rng(2024);
    const int e = K->ramification();
    for (int i = 0; i < 1000; ++i) {
      Element x = random_element(*K, rng, -4 * e, 4 * e, false);
      Element y = random_element(*K, rng, -4 * e, 4 * e, false);
      CHECK((x * y).val() == x.val() + y.val());
      Element s = x + y;
      if (!s.is_zero()) {
        CHECK(s.val() >= std::min(x.val(), y.val()));
        if (x.val() != y.val()) CHECK(s.val() == std::min(x.val(), y.val()));
      }
      if (P) CHECK(P->basis_val(x) == P->determinant_val(x));
      if (x.val() >= Valuation(0) && y.val() >= Valuation(0)) {
        CHECK((x + y).residue() == x.residue() + y.residue());
        CHECK((x * y).residue() == x.residue() * y.residue());
        CHECK(x.residue() == oracle::residue_by_enumeration(x));
      }
    }
    const auto& k = K->residue_field();
    if (k->q() <= 64) {
      for (auto c : oracle::elements(*k)) CHECK(K->lift(FqElem{k, c}).residue().code == c);
    }
  }
}

TEST_CASE("embedding of Q_p into a tower preserves valuation") {
  auto K = as_padic(make_field("Ext:Qp:2:unram=1:eis=[-2,0,1]"));
  for (int n : {1, 2, 3, 4, 6, 12, 40}) {
    Rational r(n, 3);
    CHECK(K->from_rational(r).val() == Valuation(ord_p(r, 2)));
  }
}

TEST_CASE("hensel_root examples") {
  auto q5 = make_field("Qp:5");
  Element r = hensel_root({{q5->parse("-9"), q5->zero(), q5->one()}, q5->parse("3")});
  CHECK(r.identical(q5->parse("3")));

  auto q7 = make_field("Qp:7");
  r = hensel_root({{q7->parse("-2"), q7->zero(), q7->one()}, q7->parse("3")});
  // Oracle: solve (3 + 7k)^2 = 2 mod 49 by enumeration.
  int k49 = -1;
  for (int k = 0; k < 7; ++k) {
    if (((3 + 7 * k) * (3 + 7 * k) - 2) % 49 == 0) k49 = 3 + 7 * k;
  }
  CHECK(k49 == 10);
  Element diff = r - q7->from_integer(k49);
  CHECK(diff.val() >= Valuation(2));
  Element exact = drop_precision(r);
  CHECK((exact * exact - q7->parse("2")).val() >= Valuation(64));
  CHECK(*q7->precision_of(r) >= 64);

  auto l2 = make_field("Laurent:2^1");
  r = hensel_root({{l2->parse("t"), l2->one(), l2->one()}, l2->zero()});
  // Coefficient recursion: r = sum r_k t^k with r_1 = 1, r_k = r_k + sum r_i r_{k-i}.
  std::vector<int> coeff(9, 0);
  for (int n = 1; n <= 8; ++n) {
    int sq = 0;
    for (int i = 1; i < n; ++i) sq ^= coeff[i] & coeff[n - i];
    coeff[n] = (n == 1 ? 1 : 0) ^ sq;
  }
  auto L = as_laurent(l2);
  for (int n = 1; n <= 8; ++n) CHECK(static_cast<int>(L->coefficient(r, n)) == coeff[n]);

  CHECK(code_of([&] { hensel_root({{q5->parse("-2"), q5->zero(), q5->one()}, q5->parse("1")}); }) ==
        ErrorCode::CriterionFails);
}
