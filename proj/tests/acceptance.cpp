// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>

#include "oracles.hpp"
#include "valring/decompose.hpp"
#include "valring/error.hpp"
#include "valring/predicates.hpp"
#include "valring/selftest.hpp"
#include "valring/valdef.hpp"

using namespace valring;
using Code = FiniteField::Code;

namespace {

constexpr std::uint64_t kSeed = 20240501;

struct Outcome {
  bool ok = true;
  std::int64_t checks = 0;
  std::string note;
  void check(bool c, const std::string& what) {
    ++checks;
    if (!c && ok) note = what;
    ok = ok && c;
  }
  void absorb(const SuiteResult& r) {
    checks += r.checks;
    if (!r.ok() && ok) note = r.messages.empty() ? r.name + " failed" : r.messages.front();
    ok = ok && r.ok();
  }
};

FiniteFieldPtr residue(std::int64_t q) {
  auto [p, f] = *prime_power(q);
  return FiniteField::make(p, f);
}

std::vector<Code> sorted(const std::set<Code>& s) { return {s.begin(), s.end()}; }

void c1(Outcome& o, double& secs) {
  auto t0 = std::chrono::steady_clock::now();
  o.absorb(run_suite("main2", SuiteScale::full(), kSeed));
  secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.check(secs < 120, "runtime over 120 s");
}

void c2(Outcome& o) {
  o.absorb(run_suite("main", SuiteScale::full(), kSeed));
  // Rejection must match the cube rule computed by enumeration.
  for (const auto& desc : membership_fields()) {
    auto K = make_field(desc);
    const auto& k = *K->residue_field();
    bool all_cubes = static_cast<std::int64_t>(oracle::nonzero_nth_powers(k, 3).size()) == k.q() - 1;
    bool rejected = false;
    try {
      decide_OK(K->one(), Method::Main);
    } catch (const Error& e) {
      rejected = e.code() == ErrorCode::MethodInapplicable;
    }
    o.check(rejected == (k.p() == 2 && all_cubes), desc + ": applicability");
  }
}

void c3(Outcome& o) {
  o.absorb(run_suite("lemma-val", SuiteScale::full(), kSeed));
  for (auto q : prime_powers(2, 49)) {
    auto k = residue(q);
    auto [p, f] = *prime_power(q);
    auto K = make_field("Laurent:" + std::to_string(p) + "^" + std::to_string(f));
    auto lifts_into = [&](const std::set<Code>& S, const std::function<bool(const Element&)>& pred, const char* tag) {
      for (Code a : S) {
        if (a == 0) continue;
        Element x = K->lift(FqElem{k, a});
        o.check(pred(x) && pred(x + K->uniformizer()), "q=" + std::to_string(q) + " " + tag);
      }
    };
    if (k->p() != 2) lifts_into(oracle::T_p(*k, 2), [](const Element& x) { return in_T_p(x, 2).value; }, "T2");
    if (k->p() != 3) lifts_into(oracle::T_p(*k, 3), [](const Element& x) { return in_T_p(x, 3).value; }, "T3");
    lifts_into(oracle::T_plus(*k), [](const Element& x) { return in_T_plus(x).value; }, "T+");
  }
}

void c5(Outcome& o, double& secs) {
  auto t0 = std::chrono::steady_clock::now();
  o.absorb(run_suite("cd-scan", SuiteScale::full(), kSeed));
  secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.check(secs < 60, "scan over 60 s");
  auto F5 = FiniteField::make(5, 1);
  auto T2 = sorted(oracle::T_p(*F5, 2));
  o.check(T2 == std::vector<Code>{0, 2}, "oracle T2(F5)");
  auto T = sorted(oracle::T(*F5));
  for (Code theta = 0; theta < 5; ++theta) {
    bool found = false;
    for (Code a : T)
      for (Code b : T)
        for (Code c : T)
          for (Code d : T) found = found || F5->add(F5->add(a, b), F5->mul(c, d)) == theta;
    o.check(found, "F5/T brute coverage");
  }
  auto r5 = scan_one("T", 5);
  o.check(r5.size == T.size() && r5.covered, "scan_one(T, 5)");
}

void c6(Outcome& o) {
  o.absorb(run_suite("appendix", SuiteScale::full(), kSeed));
  for (auto q : prime_powers(2, 512)) {
    auto k = residue(q);
    for (int m = 1; m <= 60; ++m) {
      bool surj = m == 1 || static_cast<std::int64_t>(oracle::nonzero_nth_powers(*k, m).size()) == q - 1;
      o.check(surj == (std::gcd(q - 1, static_cast<std::int64_t>(m)) == 1), "oracle q=" + std::to_string(q));
    }
  }
}

void c10(Outcome& o) {
  o.absorb(run_suite("hensel", SuiteScale::full(), kSeed));
  for (auto q : prime_powers(2, 512)) {
    auto k = residue(q);
    for (int n = 1; n <= 12; ++n) {
      auto P = oracle::nonzero_nth_powers(*k, n);
      bool ok = true;
      for (Code x : oracle::elements(*k)) ok = ok && fq_is_nth_power(*k, x, n) == (P.count(x) > 0);
      o.check(ok, "oracle F_" + std::to_string(q) + " n=" + std::to_string(n));
    }
  }
}

}  // namespace

int main() {
  struct Row {
    int id;
    const char* title;
    std::function<void(Outcome&)> run;
  };
  double t1 = 0, t5 = 0;
  std::vector<Row> rows{
      {1, "definition correctness (main2)", [&](Outcome& o) { c1(o, t1); }},
      {2, "main on the applicable subset", c2},
      {3, "T and T+ inside O, lifting", c3},
      {4, "val(y^ell - 1) >= 2 for units", [](Outcome& o) { o.absorb(run_suite("unit-powers", SuiteScale::full(), kSeed)); }},
      {5, "Cauchy-Davenport scan", [&](Outcome& o) { c5(o, t5); }},
      {6, "power maps and all-cubes scan", c6},
      {7, "extension formulas", [](Outcome& o) { o.absorb(run_suite("e-def", SuiteScale::full(), kSeed)); }},
      {8, "PAS2 -> P2(1+4t) substitution", [](Outcome& o) { o.absorb(run_suite("main-prime", SuiteScale::full(), kSeed)); }},
      {9, "evaluator coherence", [](Outcome& o) { o.absorb(run_suite("evaluator", SuiteScale::full(), kSeed)); }},
      {10, "Hensel engine and n-th powers", c10},
  };
  int failures = 0;
  for (const auto& row : rows) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      row.run(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.ok;
    std::printf("criterion %2d %-34s %s  checks=%lld  %.1fs%s%s\n", row.id, row.title, o.ok ? "PASS" : "FAIL",
                static_cast<long long>(o.checks), secs, o.note.empty() ? "" : "  ", o.note.c_str());
    std::fflush(stdout);
  }
  std::printf("main2 runtime %.1fs (limit 120s), scan runtime %.1fs (limit 60s)\n", t1, t5);
  return failures;
}
