#include "doctest.h"
#include "oracles.hpp"
#include "valring/error.hpp"
#include "valring/hensel.hpp"
#include "valring/laurent_field.hpp"
#include "valring/padic_field.hpp"
#include "valring/predicates.hpp"
#include "valring/sampling.hpp"

using namespace valring;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Undecided;
}

// x in Q_p is an n-th power iff n | v and the unit part has an n-th root
// modulo p^N for N well past the Hensel threshold; found by trying every
// residue class mod p^N.
bool qp_power_oracle(const Rational& x, std::int64_t p, std::int64_t n) {
  if (x == 0) return false;
  long v = ord_p(x, static_cast<unsigned long>(p));
  if (v % n != 0) return false;
  Rational u = x;
  Integer pv = ipow(Integer(p), static_cast<unsigned long>(std::abs(v)));
  u = v >= 0 ? Rational(u / pv) : Rational(u * pv);
  long N = 2 * ord_p(Integer(n), static_cast<unsigned long>(p)) + 3;
  Integer mod = ipow(Integer(p), static_cast<unsigned long>(N));
  Integer target = reduce_mod(u, mod);
  for (Integer y = 1; y < mod; ++y) {
    if (y % p == 0) continue;
    Integer yn;
    mpz_powm_ui(yn.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(n), mod.get_mpz_t());
    if (yn == target) return true;
  }
  return false;
}

// y^2 + y = x mod t^8 with y = sum_{i=-4}^{8} c_i t^i over F_2.
bool f2t_artin_schreier_oracle(const Element& x) {
  auto L = as_laurent(x.field_ptr());
  for (int mask = 0; mask < (1 << 13); ++mask) {
    Element y = L->zero();
    for (int i = 0; i < 13; ++i) {
      if (mask >> i & 1) y = y + L->monomial(1, i - 4);
    }
    Element d = y * y + y - x;
    if (d.is_zero() || d.val() >= Valuation(8)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("is_nth_power examples") {
  auto q7 = make_field("Qp:7");
  auto v = is_nth_power(q7->parse("2"), 2);
  REQUIRE(v.value);
  CHECK((*v.witness - q7->parse("10")).val() >= Valuation(2));
  CHECK(!is_nth_power(q7->parse("7"), 2).value);
  auto q2 = make_field("Qp:2");
  CHECK(is_nth_power(q2->parse("17"), 2).value);
  CHECK(!is_nth_power(q2->parse("5"), 2).value);
  CHECK(!is_nth_power(q2->parse("2"), 2).value);
  auto l2 = make_field("Laurent:2^1");
  v = is_nth_power(l2->parse("t^2"), 2);
  REQUIRE(v.value);
  CHECK(v.witness->identical(l2->parse("t")));
  CHECK(!is_nth_power(q7->zero(), 2).value);
  CHECK(code_of([&] { is_nth_power(q7->one(), 65); }) == ErrorCode::Unsupported);
  CHECK(code_of([&] { is_nth_power(l2->parse("1 + t + O(t^5)"), 2); }) == ErrorCode::NotExact);
}

TEST_CASE("is_nth_power agrees with residue-class enumeration over Q_p") {
  for (std::int64_t p : {2, 3, 5, 7}) {
    auto K = make_field("Qp:" + std::to_string(p));
    Rng rng(p);
    for (int i = 0; i < 150; ++i) {
      Element x = random_element(*K, rng, -4, 4, false);
      Rational r = as_padic(K)->coords(x)[0];
      for (std::int64_t n : {2, 3, 4, 6}) {
        auto verdict = is_nth_power(x, n);
        CHECK_MESSAGE(verdict.value == qp_power_oracle(r, p, n), x.to_string(), " n=", n);
        if (verdict.value) {
          Element w = drop_precision(*verdict.witness);
          Element d = K->pow(w, n) - x;
          CHECK((d.is_zero() || d.val() >= x.val() + Valuation(40)));
        }
      }
    }
  }
}

TEST_CASE("is_nth_power witnesses in towers and Laurent fields") {
  for (const char* d : {"Ext:Qp:2:unram=1:eis=[-2,0,1]", "Ext:Qp:3:unram=2:eis=[-3,1]", "Laurent:3^2", "Laurent:2^2",
                        "Laurent:5^1"}) {
    auto K = make_field(d);
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
      Element y = random_element(*K, rng, -3, 3, false);
      for (std::int64_t n : {2, 3, 4}) {
        Element x = K->pow(y, n);
        auto verdict = is_nth_power(x, n);
        REQUIRE_MESSAGE(verdict.value, d, " ", x.to_string());
        Element w = drop_precision(*verdict.witness);
        Element diff = K->pow(w, n) - x;
        CHECK((diff.is_zero() || diff.val() >= x.val() + Valuation(20)));
        // times a uniformizer: valuation no longer divisible by n
        CHECK(!is_nth_power(x * K->uniformizer(), n).value);
      }
    }
  }
}

TEST_CASE("is_nth_power over F_q matches exhaustive enumeration") {
  for (std::int64_t q : {2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49}) {
    auto [p, f] = prime_power_decomposition(q);
    auto K = make_field("Fq:" + std::to_string(p) + "^" + std::to_string(f));
    const auto& k = *K->residue_field();
    for (int n = 2; n <= 12; ++n) {
      auto powers = oracle::nonzero_nth_powers(k, n);
      for (auto c : oracle::elements(k)) {
        Element x = K->lift(FqElem{K->residue_field(), c});
        auto verdict = is_nth_power(x, n);
        CHECK(verdict.value == (powers.count(c) > 0));
        if (verdict.value) CHECK(K->pow(*verdict.witness, n).identical(x));
      }
    }
  }
}

TEST_CASE("is_artin_schreier examples") {
  auto l2 = make_field("Laurent:2^1");
  auto v = is_artin_schreier(l2->parse("t"));
  REQUIRE(v.value);
  Element y = drop_precision(*v.witness);
  CHECK((y * y + y - l2->parse("t")).val() >= Valuation(64));
  CHECK(as_laurent(l2)->coefficient(y, 1) == 1);
  CHECK(!is_artin_schreier(l2->parse("1")).value);
  CHECK(!is_artin_schreier(l2->parse("t^-1")).value);
  CHECK(!f2t_artin_schreier_oracle(l2->parse("t^-1")));
  CHECK(!is_artin_schreier(make_field("Qp:5")->parse("1")).value);
  // 1 + 4x = 0 gives x = y^2 + y with y = -1/2.
  auto q5 = make_field("Qp:5");
  v = is_artin_schreier(q5->parse("-1/4"));
  REQUIRE(v.value);
  CHECK((*v.witness * *v.witness + *v.witness).identical(q5->parse("-1/4")));
}

TEST_CASE("Artin-Schreier over F_2((t)) matches coefficient search") {
  auto l2 = make_field("Laurent:2^1");
  Rng rng(3);
  for (int i = 0; i < 60; ++i) {
    Element x = random_element(*l2, rng, -4, 4, false);
    // Keep the oracle's window meaningful: only exponents below 8.
    x = approximate(x, 8);
    if (x.is_zero()) continue;
    CHECK_MESSAGE(is_artin_schreier(x).value == f2t_artin_schreier_oracle(x), x.to_string());
  }
}

TEST_CASE("Artin-Schreier outside characteristic 2 is the square test on 1+4x") {
  for (const char* d : {"Qp:2", "Qp:3", "Qp:5", "Qp:7", "Ext:Qp:2:unram=1:eis=[-2,0,1]", "Laurent:3^1", "Laurent:5^1"}) {
    auto K = make_field(d);
    Rng rng(17);
    for (int i = 0; i < 300; ++i) {
      Element x = random_element(*K, rng, -6, 6);
      Element w2 = K->one() + K->from_integer(4) * x;
      if (w2.is_zero()) continue;
      auto v = is_artin_schreier(x);
      CHECK(v.value == is_nth_power(w2, 2, false).value);
      if (v.value) {
        Element y = drop_precision(*v.witness);
        Element diff = y * y + y - x;
        CHECK((diff.is_zero() || diff.val() >= Valuation(20)));
      }
    }
  }
}

TEST_CASE("T_p, T and T+ examples") {
  auto q5 = make_field("Qp:5");
  CHECK(in_T_p(q5->parse("5"), 2).value);
  CHECK(!in_T_p(q5->parse("1"), 2).value);
  CHECK(!in_T_p(make_field("Qp:2")->parse("1/2"), 2).value);
  auto v = in_T(q5->parse("5"));
  CHECK(v.value);
  CHECK(v.reason == "T2");
  CHECK(!in_T(q5->parse("1/5")).value);
  auto l2 = make_field("Laurent:2^1");
  auto lt = in_T(l2->parse("t"));
  CHECK(lt.value);
  CHECK(lt.reason == "T3");
  CHECK(!in_T_p(l2->parse("t"), 2).value);
  CHECK(!in_T_plus(q5->zero()).value);
  CHECK(in_T_plus(l2->parse("1 + t")).value);
  CHECK(!in_T_plus(l2->parse("t")).value);
  CHECK(in_T_plus(make_field("Qp:3")->parse("1")).value);
}

TEST_CASE("field-level predicates over F_q match residue enumeration") {
  for (std::int64_t q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27}) {
    auto [p, f] = prime_power_decomposition(q);
    auto K = make_field("Fq:" + std::to_string(p) + "^" + std::to_string(f));
    const auto& k = *K->residue_field();
    auto t2 = oracle::T_p(k, 2), t3 = oracle::T_p(k, 3), tp = oracle::T_plus(k), as = oracle::artin_schreier_image(k);
    for (auto c : oracle::elements(k)) {
      Element x = K->lift(FqElem{K->residue_field(), c});
      CHECK(in_T_p(x, 2).value == (t2.count(c) > 0));
      CHECK(in_T_p(x, 3).value == (t3.count(c) > 0));
      CHECK(in_T_plus(x).value == (tp.count(c) > 0));
      CHECK(is_artin_schreier(x).value == (as.count(c) > 0));
    }
  }
  auto f5 = make_field("Fq:5^1");
  std::set<FiniteField::Code> expected{0, 2};
  CHECK(oracle::T_p(*f5->residue_field(), 2) == expected);
}

TEST_CASE("T(K) and T+(K) lie in the valuation ring") {
  for (const char* d : {"Qp:2", "Qp:3", "Qp:5", "Ext:Qp:2:unram=1:eis=[-2,0,1]", "Laurent:2^1", "Laurent:3^1", "Laurent:2^2"}) {
    auto K = make_field(d);
    Rng rng(99);
    const int e = K->ramification();
    for (int i = 0; i < 200; ++i) {
      Element x = random_element(*K, rng, -6 * e, 6 * e);
      if (in_T(x).value) CHECK(x.val() >= Valuation(0));
      if (in_T_plus(x).value) CHECK(x.val() == Valuation(0));
    }
  }
}

TEST_CASE("residue lifts of T(k) and T+(k) stay in T(K) and T+(K)") {
  for (const char* d : {"Qp:3", "Qp:5", "Qp:7", "Laurent:2^2", "Laurent:3^2", "Laurent:5^1", "Laurent:2^3"}) {
    auto K = make_field(d);
    const auto& k = *K->residue_field();
    Element pi = K->uniformizer();
    for (auto c : oracle::elements(k)) {
      Element a = K->lift(FqElem{K->residue_field(), c});
      for (Element x : {a, a + pi, a + pi * pi * K->from_integer(2)}) {
        if (c != 0 && k.p() != 2 && oracle::T_p(k, 2).count(c)) CHECK(in_T_p(x, 2).value);
        if (c != 0 && k.p() != 3 && oracle::T_p(k, 3).count(c)) CHECK(in_T_p(x, 3).value);
        if (oracle::T_plus(k).count(c)) CHECK(in_T_plus(x).value);
      }
    }
  }
}

TEST_CASE("s_ell_witness") {
  auto q5 = make_field("Qp:5");
  auto w = s_ell_witness(q5->parse("2"), 20, BaseSet::T);
  CHECK(w.a.identical(q5->parse("5")));
  CHECK((power_mod(q5->parse("2"), 20, 64) - q5->one()).val() == Valuation(2));
  CHECK(in_T_p(w.shifted, 2).value);
  w = s_ell_witness(q5->one(), 7, BaseSet::T);
  CHECK(w.a.identical(q5->parse("5")));

  auto l2 = make_field("Laurent:2^1");
  w = s_ell_witness(l2->parse("1 + t"), 2, BaseSet::Tplus);
  CHECK(w.a.val() == Valuation(0));
  CHECK(in_T_plus(w.a).value);
  CHECK(in_T_plus(w.shifted).value);
  CHECK((l2->parse("(1+t)^2 - 1")).val() >= Valuation(2));

  CHECK(code_of([&] { s_ell_witness(q5->parse("5"), 20, BaseSet::T); }) == ErrorCode::NotUnit);
  CHECK(code_of([&] { s_ell_witness(l2->parse("1 + t"), 2, BaseSet::T); }) == ErrorCode::BaseSetInapplicable);
  CHECK(code_of([&] { s_ell_member(q5->parse("5"), 20, BaseSet::T); }) == ErrorCode::Undecided);
}

TEST_CASE("y^ell - 1 has valuation at least 2 for units") {
  for (const char* d : {"Qp:5", "Ext:Qp:2:unram=1:eis=[-2,0,1]", "Laurent:2^2"}) {
    auto K = make_field(d);
    const std::int64_t q = K->q();
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
      Element y = random_unit(*K, rng);
      Element g = power_mod(y, q * (q - 1), K->precision()) - K->one();
      CHECK((g.is_zero() || g.val().in_units(K->ramification()) >= 2));
      auto w = s_ell_witness(y, q * (q - 1), BaseSet::Tplus);
      CHECK(in_T_plus(w.shifted).value);
    }
  }
}
