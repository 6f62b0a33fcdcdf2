#include <map>

#include "doctest.h"
#include "oracles.hpp"
#include "valring/decompose.hpp"
#include "valring/error.hpp"
#include "valring/sampling.hpp"

using namespace valring;
using Code = FiniteField::Code;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Undecided;
}

std::vector<Code> as_vec(const std::set<Code>& s) { return {s.begin(), s.end()}; }

// First (a, b, c, d) in lexicographic order by four nested loops.
std::optional<std::array<Code, 4>> brute_decompose(const FiniteField& k, Code theta, const std::vector<Code>& S) {
  for (Code a : S)
    for (Code b : S)
      for (Code c : S)
        for (Code d : S)
          if (k.add(k.add(a, b), k.mul(c, d)) == theta) return std::array<Code, 4>{a, b, c, d};
  return std::nullopt;
}

std::int64_t brute_curve(const std::string& curve, const FiniteField& k, Code a) {
  std::int64_t n = 0;
  const bool even = k.p() == 2;
  for (Code w : oracle::elements(k))
    for (Code v : oracle::elements(k))
      for (Code x : oracle::elements(k)) {
        bool on;
        if (curve == "dimC") {
          on = even ? (oracle::power(k, w, 3) == k.add(1, x) && k.mul(a, oracle::power(k, v, 3)) == x)
                    : (k.mul(w, w) == k.add(k.from_int(4), x) && k.mul(a, k.mul(v, v)) == x);
        } else {
          if (x == 0) continue;
          Code xi = k.inv(x);
          on = even ? (k.add(k.mul(w, w), w) == k.sub(a, x) && k.add(k.mul(v, v), v) == k.sub(a, xi))
                    : (k.add(1, k.mul(k.from_int(4), x)) == k.mul(a, k.mul(w, w)) &&
                       k.add(1, k.mul(k.from_int(4), xi)) == k.mul(a, k.mul(v, v)));
        }
        n += on;
      }
  return n;
}

}  // namespace

TEST_CASE("definable sets over finite fields") {
  auto F5 = FiniteField::make(5, 1);
  CHECK(definable_set_residue("T2", F5) == std::vector<Code>{0, 2});
  auto F2 = FiniteField::make(2, 1);
  CHECK(definable_set_residue("Tplus", F2) == std::vector<Code>{1});
  auto F3 = FiniteField::make(3, 1);
  // 4 + x = 1 + x a nonzero square, x a non-square: x = 0 (1 square) and x = 2 (0 not a nonzero square) -> {0}.
  CHECK(definable_set_residue("T2", F3) == std::vector<Code>{0});
  CHECK(code_of([] { definable_set_residue("T", FiniteField::make(4099, 1)); }) == ErrorCode::TooLarge);
  CHECK(code_of([&] { definable_set_residue("Q", F5); }) == ErrorCode::BadParameter);

  for (auto q : prime_powers(2, 64)) {
    auto pf = *prime_power(q);
    auto k = FiniteField::make(pf.first, pf.second);
    CHECK(definable_set_residue("T2", k) == as_vec(oracle::T_p(*k, 2)));
    CHECK(definable_set_residue("T3", k) == as_vec(oracle::T_p(*k, 3)));
    CHECK(definable_set_residue("T", k) == as_vec(oracle::T(*k)));
    CHECK(definable_set_residue("Tplus", k) == as_vec(oracle::T_plus(*k)));
    CHECK(definable_set_residue("P3", k) == as_vec(oracle::nonzero_nth_powers(*k, 3)));
  }
}

TEST_CASE("cd_decompose examples") {
  auto F5 = FiniteField::make(5, 1);
  std::vector<Code> S{0, 2};
  auto d = cd_decompose(FqElem{F5, 3}, S);
  CHECK(std::array<Code, 4>{d.a.code, d.b.code, d.c.code, d.d.code} == std::array<Code, 4>{2, 2, 2, 2});
  d = cd_decompose(FqElem{F5, 1}, S);
  CHECK(std::array<Code, 4>{d.a.code, d.b.code, d.c.code, d.d.code} == std::array<Code, 4>{0, 2, 2, 2});
  d = cd_decompose(FqElem{F5, 0}, S);
  CHECK(std::array<Code, 4>{d.a.code, d.b.code, d.c.code, d.d.code} == std::array<Code, 4>{0, 0, 0, 0});
  auto F2 = FiniteField::make(2, 1);
  CHECK(code_of([&] { cd_decompose(FqElem{F2, 0}, {1}); }) == ErrorCode::NoDecomposition);
}

TEST_CASE("cd_decompose matches brute force and re-verifies (q <= 49)") {
  for (auto q : prime_powers(2, 49)) {
    auto pf = *prime_power(q);
    auto k = FiniteField::make(pf.first, pf.second);
    for (const char* set : {"T", "Tplus"}) {
      auto S = definable_set_residue(set, k);
      std::vector<Code> fails;
      for (Code theta : oracle::elements(*k)) {
        auto expected = brute_decompose(*k, theta, S);
        if (!expected) {
          fails.push_back(theta);
          CHECK(code_of([&] { cd_decompose(FqElem{k, theta}, S); }) == ErrorCode::NoDecomposition);
          continue;
        }
        auto d = cd_decompose(FqElem{k, theta}, S);
        CHECK(verify_decomposition(d, S));
        CHECK(std::array<Code, 4>{d.a.code, d.b.code, d.c.code, d.d.code} == *expected);
      }
      CHECK(uncovered(*k, S) == fails);
    }
  }
}

TEST_CASE("scan_N") {
  auto r5 = scan_one("T", 5);
  CHECK(r5.covered);
  CHECK(r5.size == 2);
  CHECK(scan_record_json(r5).rfind(R"({"q":5,"set":"T","size":2,"covered":true,"failures":[],"ms":)", 0) == 0);
  auto r2 = scan_one("Tplus", 2);
  CHECK_FALSE(r2.covered);
  CHECK(r2.failures == std::vector<Code>{0});
  CHECK_FALSE(scan_one("T", 2).applicable);
  CHECK(scan_one("T", 4).applicable);
  CHECK_FALSE(scan_one("T", 8).applicable);

  auto s = scan_N("T", 2, 101, 4);
  REQUIRE(s.N);
  for (const auto& r : s.records) {
    if (r.applicable && r.q >= *s.N) CHECK(r.covered);
  }
  auto single = scan_N("T", 2, 101, 1);
  CHECK(single.N == s.N);
  CHECK(single.records.size() == s.records.size());
  CHECK(code_of([] { scan_N("T", 2, 5000); }) == ErrorCode::TooLarge);
  CHECK(prime_powers(2, 10) == std::vector<std::int64_t>{2, 3, 4, 5, 7, 8, 9});
}

TEST_CASE("lift_decomposition") {
  auto Q5 = make_field("Qp:5");
  auto d = lift_decomposition(Q5->from_integer(3), BaseSet::T);
  CHECK(d.b.identical(Q5->from_integer(2)));
  CHECK(d.c.identical(Q5->from_integer(2)));
  CHECK(d.d.identical(Q5->from_integer(2)));
  CHECK(d.a.identical(Q5->from_integer(-3)));
  CHECK(verify_lifted(d));
  CHECK(code_of([&] { lift_decomposition(Q5->parse("1/5"), BaseSet::T); }) == ErrorCode::NotIntegral);

  auto z = lift_decomposition(Q5->zero(), BaseSet::T);
  CHECK(verify_lifted(z));
  CHECK(z.a.identical(-(z.b + z.c * z.d)));

  CHECK(code_of([] { lift_decomposition(make_field("Qp:2")->from_integer(2), BaseSet::Tplus); }) == ErrorCode::ResidueNotCovered);

  Rng rng(11);
  for (const char* desc : {"Qp:7", "Qp:11", "Qp:13", "Laurent:5^1", "Laurent:3^2", "Ext:Qp:3:unram=2:eis=[-3,1]"}) {
    auto K = make_field(desc);
    for (BaseSet base : {BaseSet::T, BaseSet::Tplus}) {
      auto S = definable_set_residue(base == BaseSet::T ? "T" : "Tplus", K->residue_field());
      if (!uncovered(*K->residue_field(), S).empty()) continue;
      for (int i = 0; i < 60; ++i) {
        Element theta = random_element(*K, rng, 0, 4);
        auto L = lift_decomposition(theta, base);
        CHECK(verify_lifted(L));
        CHECK(L.a.residue() == L.residue.a);
        CHECK(in_base(L.b, base));
      }
    }
  }
}

TEST_CASE("power surjectivity") {
  CHECK_FALSE(power_surjective(4, 3));
  CHECK(power_surjective(2, 3));
  CHECK(power_surjective(8, 3));
  for (auto q : prime_powers(2, 128)) {
    auto pf = *prime_power(q);
    auto k = FiniteField::make(pf.first, pf.second);
    for (int m = 1; m <= 12; ++m) {
      bool oracle_surj = m == 1 || static_cast<std::int64_t>(oracle::nonzero_nth_powers(*k, m).size()) == q - 1;
      CHECK(power_surjective(q, m) == oracle_surj);
    }
  }
  auto cubes = all_cubes_char2_scan(12);
  std::vector<int> fs;
  for (const auto& r : cubes) {
    fs.push_back(r.f);
    CHECK(r.enumerated);
  }
  CHECK(fs == std::vector<int>{1, 3, 5, 7, 9, 11});
}

TEST_CASE("curve points") {
  auto F5 = FiniteField::make(5, 1);
  CHECK(curve_points("dimC", F5, 2) == brute_curve("dimC", *F5, 2));
  CHECK(curve_points("dimC", F5, 2) >= 1);
  CHECK(code_of([&] { curve_points("dimC", F5, 4); }) == ErrorCode::BadParameter);
  auto F2 = FiniteField::make(2, 1);
  CHECK(curve_points("dim2C", F2, 1) == brute_curve("dim2C", *F2, 1));
  CHECK(code_of([&] { curve_points("dim2C", F2, 0); }) == ErrorCode::BadParameter);
  for (auto q : prime_powers(2, 32)) {
    auto pf = *prime_power(q);
    auto k = FiniteField::make(pf.first, pf.second);
    for (const char* c : {"dimC", "dim2C"}) {
      auto a = curve_parameter(c, *k);
      if (!a) continue;
      CHECK(curve_points(c, k, *a) == brute_curve(c, *k, *a));
    }
  }
  for (auto q : prime_powers(25, 101)) {
    auto pf = *prime_power(q);
    auto k = FiniteField::make(pf.first, pf.second);
    for (const char* c : {"dimC", "dim2C"}) {
      auto a = curve_parameter(c, *k);
      if (!a) continue;
      CHECK(curve_points(c, k, *a) * 2 >= q);
    }
  }
}
