#include "doctest.h"
#include "valring/error.hpp"
#include "valring/sampling.hpp"
#include "valring/valdef.hpp"

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

}  // namespace

TEST_CASE("ell constants") {
  CHECK(choose_ell(5).ell == 20);
  CHECK(choose_ell(2).ell == 2);
  CHECK(choose_ell_uniform(4).ell == 6);
  CHECK(choose_ell_uniform(6).ell == 60);
  CHECK(code_of([] { choose_ell(6); }) == ErrorCode::BadParameter);
}

TEST_CASE("decide_OK examples") {
  auto Q5 = make_field("Qp:5");
  auto c = decide_OK(Q5->parse("1/5"), Method::Main);
  CHECK_FALSE(c.inside);
  CHECK(c.val == Valuation(-1));
  CHECK(verify_certificate(c));

  DecideOptions sumset;
  sumset.branch = BranchChoice::SumsetOnly;
  c = decide_OK(Q5->from_integer(2), Method::Main, sumset);
  CHECK(c.inside);
  CHECK(c.branch == Branch::SumsetSell);
  CHECK(c.shift == 1);
  CHECK(c.unit.identical(Q5->one()));
  CHECK(c.ell == 20);
  CHECK(verify_certificate(c));

  c = decide_OK(Q5->from_integer(5), Method::Main, sumset);
  CHECK(c.shift == 1);
  CHECK(c.unit.identical(Q5->from_integer(4)));
  CHECK(verify_certificate(c));

  auto L2 = make_field("Laurent:2^1");
  c = decide_OK(L2->parse("t"), Method::Main2, sumset);
  CHECK(c.inside);
  CHECK(verify_certificate(c));
  c = decide_OK(L2->parse("t^-1"), Method::Main2);
  CHECK_FALSE(c.inside);

  CHECK(code_of([] { decide_OK(make_field("Qp:2")->one(), Method::Main); }) == ErrorCode::MethodInapplicable);
  CHECK(decide_OK(make_field("Qp:2")->one(), Method::Main2).inside);

  DecideOptions cd;
  cd.branch = BranchChoice::DecompositionOnly;
  c = decide_OK(Q5->from_integer(3), Method::Main, cd);
  CHECK(c.branch == Branch::CauchyDavenport);
  CHECK(verify_certificate(c));
  CHECK(code_of([] {
          DecideOptions o;
          o.branch = BranchChoice::DecompositionOnly;
          decide_OK(make_field("Qp:2")->from_integer(2), Method::Main2, o);
        }) == ErrorCode::ResidueNotCovered);

  DecideOptions forced;
  forced.N = 2;
  c = decide_OK(make_field("Qp:2")->from_integer(2), Method::Main2, forced);
  CHECK(c.branch == Branch::SumsetSell);
  CHECK(verify_certificate(c));
}

TEST_CASE("decide_OK soundness against the valuation oracle") {
  Rng rng(5);
  for (const char* desc : {"Qp:2", "Qp:3", "Qp:5", "Qp:7", "Laurent:2^1", "Laurent:3^1", "Laurent:2^2",
                           "Ext:Qp:2:unram=1:eis=[-2,0,1]", "Ext:Qp:3:unram=2:eis=[-3,1]"}) {
    auto K = make_field(desc);
    for (Method m : {Method::Main, Method::Main2}) {
      if (!base_applicable(*K, method_base(m))) continue;
      for (BranchChoice b : {BranchChoice::SumsetOnly, BranchChoice::Auto}) {
        DecideOptions o;
        o.branch = b;
        o.N = 2;
        for (int i = 0; i < 25; ++i) {
          Element x = random_element(*K, rng, -3, 4);
          auto c = decide_OK(x, m, o);
          CHECK(c.inside == (x.is_zero() || x.inv().val() <= Valuation(0)));
          CHECK(c.inside == oracle_OK(x));
          CHECK(verify_certificate(c));
          auto back = certificate_from_json(certificate_json(c, true), K);
          CHECK(verify_certificate(back));
          CHECK(back.inside == c.inside);
        }
      }
    }
  }
}

TEST_CASE("certificates") {
  auto Q5 = make_field("Qp:5");
  DecideOptions o;
  o.branch = BranchChoice::SumsetOnly;
  auto c = decide_OK(Q5->from_integer(2), Method::Main, o);
  CHECK(certificate_json(c).rfind(R"({"verdict":"inside","branch":"sumset_sell","shift":1,"unit":"1","a":)", 0) == 0);
  CHECK(certificate_json(decide_OK(Q5->parse("1/5"), Method::Main)) == R"({"verdict":"outside","val":-1})");
  auto bad = c;
  bad.a = bad.a + Q5->one();
  CHECK_FALSE(verify_certificate(bad));
  bad = c;
  bad.shift = 0;
  CHECK_FALSE(verify_certificate(bad));
  CHECK(code_of([&] { certificate_from_json("{", Q5); }) == ErrorCode::BadParameter);
  CHECK(code_of([&] { certificate_from_json("{}", Q5); }) == ErrorCode::BadParameter);
}

TEST_CASE("membership formulas evaluate through the registry") {
  auto Q2 = make_field("Qp:2");
  auto phi = main2_formula(2);
  CHECK(free_vars(*phi) == std::set<std::string>{"x"});
  auto r = eval(phi, {{"x", Q2->parse("1/2")}}, *Q2, {}, &default_registry());
  CHECK(r.verdict == Verdict::False);
  r = eval(phi, {{"x", Q2->from_integer(3)}}, *Q2, {}, &default_registry());
  CHECK(r.verdict == Verdict::True);
  // Printing and re-parsing keeps the shape recognisable.
  auto reparsed = parse_formula(print(*phi));
  r = eval(reparsed, {{"x", Q2->from_integer(6)}}, *Q2, {}, &default_registry());
  CHECK(r.verdict == Verdict::True);
  // Without the registry nothing is certified.
  r = eval(phi, {{"x", Q2->parse("1/2")}}, *Q2, {}, nullptr);
  CHECK(r.verdict != Verdict::True);

  auto Q5 = make_field("Qp:5");
  for (auto x : {"0", "1", "2", "7/3", "1/5", "25/2"}) {
    Element e = Q5->parse(x);
    auto res = eval(main_formula(20), {{"x", e}}, *Q5, {}, &default_registry());
    CHECK(res.verdict == (oracle_OK(e) ? Verdict::True : Verdict::False));
  }

  auto prime = main_prime_formula(12);
  CHECK(print(*prime).find("PAS2") == std::string::npos);
  auto Q3 = make_field("Qp:3");
  for (auto x : {"1", "3", "1/3", "5/9"}) {
    Element e = Q3->parse(x);
    auto res = eval(prime, {{"x", e}}, *Q3, {}, &default_registry());
    CHECK(res.verdict == (oracle_OK(e) ? Verdict::True : Verdict::False));
  }
  auto res = eval(prime, {{"x", Q2->one()}}, *Q2, {}, &default_registry());
  CHECK(res.verdict != Verdict::False);
}

TEST_CASE("extension plans") {
  struct Case {
    std::int64_t p;
    int f;
    std::vector<Rational> eis;
  };
  std::vector<Case> cases{{2, 1, {Rational(-2), Rational(0), Rational(1)}},
                          {3, 2, {Rational(-3), Rational(1)}},
                          {5, 1, {Rational(-5), Rational(0), Rational(0), Rational(1)}},
                          {5, 1, {Rational(-5), Rational(1)}}};
  for (const auto& cs : cases) {
    CAPTURE(cs.p);
    CAPTURE(cs.f);
    auto plan = make_plan(cs.p, cs.f, cs.eis);
    CHECK(plan.e == static_cast<int>(cs.eis.size()) - 1);
    auto K = plan_field(plan);
    auto again = parse_plan(plan_json(plan));
    CHECK(plan_json(again) == plan_json(plan));
    auto forms = build_extension_formula(plan);
    CHECK(free_vars(*forms.existential) == std::set<std::string>{"x"});
    CHECK(free_vars(*forms.universal) == std::set<std::string>{"x"});
    auto report = verify_extension_formula(plan, K, 12, 3);
    for (const auto& f : report.failures) MESSAGE(f);
    CHECK(report.ok());
    Element inv_pi = K->uniformizer().inv();
    CHECK(eval(forms.existential, {{"x", inv_pi}}, *K, {}, &default_registry()).verdict == Verdict::False);
    CHECK(eval(forms.universal, {{"x", inv_pi}}, *K, {}, &default_registry()).verdict == Verdict::False);
    auto re = parse_formula(print(*forms.universal));
    CHECK(eval(re, {{"x", K->one()}}, *K, {}, &default_registry()).verdict == Verdict::True);
  }
  CHECK(code_of([] { make_plan(2, 1, {Rational(-4), Rational(1)}); }) == ErrorCode::InvalidPlan);
  CHECK(code_of([] { make_plan(3, 1, {Rational(1), Rational(1)}); }) == ErrorCode::InvalidPlan);
  CHECK(code_of([] { parse_plan(R"({"p":3,"f":2,"G":[0,0,1],"eis":[-3,1]})"); }) == ErrorCode::InvalidPlan);
  CHECK(code_of([] { parse_plan("[1"); }) == ErrorCode::InvalidPlan);
  CHECK(code_of([] { parse_plan(R"({"p":4,"eis":[-2,1]})"); }) == ErrorCode::InvalidPlan);
}
