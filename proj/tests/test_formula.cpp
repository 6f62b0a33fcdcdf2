#include "doctest.h"
#include "oracles.hpp"
#include "valring/error.hpp"
#include "valring/formula.hpp"
#include "valring/hensel.hpp"
#include "valring/predicates.hpp"

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

FiniteField::Code code(const Element& e) { return std::get<FiniteRep>(e.rep()).code; }

// Random quantifier-free formulas in x and y, small constants.
TermPtr qf_term(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 7);
  switch (pick(rng)) {
    case 0:
      return fm::var("x");
    case 1:
      return fm::var("y");
    case 2:
      return fm::lit(static_cast<long>(rng() % 7) - 2);
    case 3:
      return fm::add(qf_term(rng, depth - 1), qf_term(rng, depth - 1));
    case 4:
      return fm::sub(qf_term(rng, depth - 1), qf_term(rng, depth - 1));
    case 5:
      return fm::mul(qf_term(rng, depth - 1), qf_term(rng, depth - 1));
    case 6:
      return fm::neg(qf_term(rng, depth - 1));
    default:
      return fm::pow(qf_term(rng, depth - 1), rng() % 5);
  }
}

FormulaPtr qf_formula(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 5);
  switch (pick(rng)) {
    case 0:
      return fm::eq(qf_term(rng, 2), qf_term(rng, 2));
    case 1:
      return fm::pn(2 + static_cast<int>(rng() % 3), qf_term(rng, 2));
    case 2:
      return fm::pas2(qf_term(rng, 2));
    case 3:
      return fm::lnot(qf_formula(rng, depth - 1));
    case 4:
      return fm::conj({qf_formula(rng, depth - 1), qf_formula(rng, depth - 1)});
    default:
      return fm::disj({qf_formula(rng, depth - 1), qf_formula(rng, depth - 1)});
  }
}

// Independent semantics over F_q: terms by code arithmetic, predicates by
// brute-force image sets.
struct FqSemantics {
  const FiniteField& k;
  std::map<int, std::set<FiniteField::Code>> powers;
  std::set<FiniteField::Code> as_image;

  explicit FqSemantics(const FiniteField& kk) : k(kk), as_image(oracle::artin_schreier_image(kk)) {
    for (int n = 2; n <= 4; ++n) powers[n] = oracle::nonzero_nth_powers(k, n);
  }

  FiniteField::Code term(const Term& t, FiniteField::Code x, FiniteField::Code y) const {
    switch (t.kind) {
      case Term::Kind::Var:
        return t.name == "x" ? x : y;
      case Term::Kind::Int: {
        long v = t.value.get_si() % k.p();
        return k.from_int(v < 0 ? v + k.p() : v);
      }
      case Term::Kind::Add:
        return k.add(term(*t.a, x, y), term(*t.b, x, y));
      case Term::Kind::Sub:
        return k.sub(term(*t.a, x, y), term(*t.b, x, y));
      case Term::Kind::Mul:
        return k.mul(term(*t.a, x, y), term(*t.b, x, y));
      case Term::Kind::Neg:
        return k.neg(term(*t.a, x, y));
      case Term::Kind::Pow:
        return oracle::power(k, term(*t.a, x, y), static_cast<int>(t.exponent));
    }
    return 0;
  }

  bool formula(const Formula& f, FiniteField::Code x, FiniteField::Code y) const {
    switch (f.kind) {
      case Formula::Kind::Eq:
        return term(*f.lhs, x, y) == term(*f.rhs, x, y);
      case Formula::Kind::Pn:
        return powers.at(f.n).count(term(*f.lhs, x, y)) > 0;
      case Formula::Kind::PAS2:
        return as_image.count(term(*f.lhs, x, y)) > 0;
      case Formula::Kind::Not:
        return !formula(*f.body(), x, y);
      case Formula::Kind::And:
        for (const auto& c : f.children) {
          if (!formula(*c, x, y)) return false;
        }
        return true;
      case Formula::Kind::Or:
        for (const auto& c : f.children) {
          if (formula(*c, x, y)) return true;
        }
        return false;
      default:
        return false;
    }
  }
};

}  // namespace

TEST_CASE("parse and print examples") {
  auto t2 = parse_formula("P2(4 + x) & !P2(x)");
  auto built = fm::conj({fm::pn(2, fm::add(fm::lit(4), fm::var("x"))), fm::lnot(fm::pn(2, fm::var("x")))});
  CHECK(equal(*t2, *built));
  CHECK(print(*built) == "P2(4 + x) & !P2(x)");

  auto as = parse_formula("E y (x = y^2 + y)");
  CHECK(as->kind == Formula::Kind::Exists);
  CHECK(as->var == "y");
  CHECK(equal(*as, *fm::exists("y", fm::eq(fm::var("x"), fm::add(fm::pow(fm::var("y"), 2), fm::var("y"))))));
  CHECK(free_vars(*as) == std::set<std::string>{"x"});

  auto taut = parse_formula("x = x");
  CHECK(taut->kind == Formula::Kind::Eq);

  CHECK(print(*fm::eq(fm::var("x"), fm::lit(-3))) == "x = -3");
  CHECK(equal(*parse_formula("x = -3"), *fm::eq(fm::var("x"), fm::lit(-3))));

  auto nested = fm::exists("a", fm::forall("b", fm::eq(fm::var("a"), fm::var("b"))));
  CHECK(print(*nested) == "E a (A b (a = b))");
  CHECK(equal(*parse_formula(print(*nested)), *nested));

  CHECK(equal(*parse_formula("E y E z (x = y*z)"), *parse_formula("E y (E z (x = y * z))")));
  CHECK(equal(*parse_formula("(x + 1) = 2 | x = 0"), *parse_formula("x + 1 = 2 | (x = 0)")));
  CHECK(equal(*parse_formula("x − 1 = 0"), *parse_formula("x - 1 = 0")));
}

TEST_CASE("parse errors") {
  CHECK(code_of([] { parse_formula("x = "); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_formula("P1(x)"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_formula("x = y &"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_formula("E (x = 1)"); }) == ErrorCode::SyntaxError);
  try {
    parse_formula("x = 1 & & y = 2");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 8);
  }
  auto f = parse_formula("E y (x = y)");
  CHECK(code_of([&] { require_closed(*f, {}); }) == ErrorCode::ScopeError);
  require_closed(*f, {"x"});
}

TEST_CASE("parse(print(phi)) = phi on random formulas") {
  std::mt19937_64 rng(20261016);
  for (int i = 0; i < 10000; ++i) {
    auto phi = random_formula(rng, 1 + i % 6);
    std::string text = print(*phi);
    FormulaPtr back;
    try {
      back = parse_formula(text);
    } catch (const Error& e) {
      FAIL(text << " -> " << e.what());
    }
    if (!equal(*back, *phi)) FAIL(text << " reprints as " << print(*back));
    CHECK(print(*back) == text);
  }
}

TEST_CASE("helpers") {
  auto f = parse_formula("E s (x = s^6 + 1 & PAS2(s)) | P3(x^2)");
  CHECK(pow_exponents(*f) == std::set<std::uint64_t>{2, 6});
  CHECK(print(*substitute_pas2(parse_formula("PAS2(t) & !PAS2(x*t)"))) == "P2(1 + 4*t) & !P2(1 + 4*(x*t))");
  CHECK_FALSE(is_quantifier_free(*f));
  CHECK(is_quantifier_free(*parse_formula("P2(x) | !x = 1")));
}

TEST_CASE("eval_qf examples") {
  auto Q5 = make_field("Qp:5");
  Env env{{"x", Q5->from_integer(2)}};
  CHECK(eval_qf(*fm::eq(fm::mul(fm::var("x"), fm::var("x")), fm::lit(4)), env, *Q5));
  env["x"] = Q5->from_integer(5);
  CHECK_FALSE(eval_qf(*parse_formula("P2(x)"), env, *Q5));
  CHECK(eval_qf(*parse_formula("P2(4 + x) & !P2(x)"), env, *Q5));
  CHECK(eval_qf(*parse_formula("P2(4 + x) & !P2(x)"), env, *Q5) == in_T_p(env["x"], 2).value);
  CHECK(code_of([&] { eval_qf(*parse_formula("x = y"), env, *Q5); }) == ErrorCode::MissingBinding);
  Env inexact{{"x", Q5->with_precision(Q5->one(), 4)}};
  CHECK(code_of([&] { eval_qf(*parse_formula("x = 1"), inexact, *Q5); }) == ErrorCode::NotExact);
}

TEST_CASE("eval_qf over F_q agrees with exhaustive semantics") {
  std::mt19937_64 rng(77);
  for (auto [p, f] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {2, 3}, {5, 1}, {7, 1}, {3, 2}, {11, 1}, {13, 1}, {2, 4}}) {
    auto k = FiniteField::make(p, f);
    auto K = make_finite_field(k);
    FqSemantics sem(*k);
    for (int trial = 0; trial < 60; ++trial) {
      auto phi = qf_formula(rng, 3);
      for (auto x : oracle::elements(*k)) {
        for (auto y : oracle::elements(*k)) {
          Env env{{"x", K->lift(FqElem{k, x})}, {"y", K->lift(FqElem{k, y})}};
          bool got = eval_qf(*phi, env, *K);
          REQUIRE_MESSAGE(got == sem.formula(*phi, x, y), print(*phi) << " at " << x << "," << y << " in F" << k->q());
        }
      }
      // The existential closure over a finite field is decided by exhaustive enumeration.
      auto closed = fm::exists("y", phi);
      for (auto x : oracle::elements(*k)) {
        bool expected = false;
        for (auto y : oracle::elements(*k)) expected = expected || sem.formula(*phi, x, y);
        auto r = eval(closed, Env{{"x", K->lift(FqElem{k, x})}}, *K);
        REQUIRE(r.verdict == (expected ? Verdict::True : Verdict::False));
        if (expected) CHECK(sem.formula(*phi, x, code(r.witnesses.at("y"))));
      }
    }
  }
}

TEST_CASE("eval examples") {
  auto Q5 = make_field("Qp:5");
  auto r = eval(parse_formula("E w (1 + 5*x^2 = w^2)"), Env{{"x", Q5->one()}}, *Q5);
  CHECK(r.verdict == Verdict::True);
  REQUIRE(r.witnesses.count("w"));
  Element w = r.witnesses.at("w");
  CHECK(Q5->precision_of(w).value_or(1000) >= 20);
  CHECK((drop_precision(w) * drop_precision(w) - Q5->from_integer(6)).val().in_units(1) >= 20);
  CHECK(std::find(r.strategy_log.begin(), r.strategy_log.end(), "hensel-root") != r.strategy_log.end());

  CHECK(eval(parse_formula("A y (y = y)"), {}, *Q5).verdict == Verdict::True);
  CHECK(eval(parse_formula("A y (y*(y + 1) = y^2 + y)"), {}, *Q5).verdict == Verdict::True);
  CHECK(eval(parse_formula("A y (P2(1 + y^2) | !P2(1 + y^2))"), {}, *Q5).verdict == Verdict::Unknown);
  CHECK(eval(parse_formula("A y (P2(y))"), {}, *Q5).verdict == Verdict::False);

  // Linear elimination is exact and can certify both ways.
  auto lin = parse_formula("E y (x*y = 1 & P2(y))");
  CHECK(eval(lin, Env{{"x", Q5->from_integer(4)}}, *Q5).verdict == Verdict::True);
  CHECK(eval(lin, Env{{"x", Q5->from_integer(2)}}, *Q5).verdict == Verdict::False);
  CHECK(eval(lin, Env{{"x", Q5->zero()}}, *Q5).verdict == Verdict::False);

  // Unsolvable without a registered decider.
  auto none = eval(parse_formula("E y (x = y^2)"), Env{{"x", Q5->from_integer(2)}}, *Q5);
  CHECK(none.verdict == Verdict::Unknown);
  CHECK(none.witnesses.empty());

  CHECK(code_of([&] { eval(parse_formula("x = y"), Env{{"x", Q5->one()}}, *Q5); }) == ErrorCode::MissingBinding);

  auto T2 = make_field("Laurent:2^1:prec=40");
  auto as = eval(parse_formula("E y (x = y^2 + y)"), Env{{"x", T2->parse("t")}}, *T2);
  CHECK(as.verdict == Verdict::True);
}

TEST_CASE("eval is monotone in depth") {
  auto Q3 = make_field("Qp:3");
  std::mt19937_64 rng(5);
  const char* texts[] = {"E w (x + 3 = w^2)", "E w (x = w^3)", "E w E v (x = w^2 + v^2 & P3(v))", "E w (w*x = 1)"};
  for (const char* text : texts) {
    auto phi = parse_formula(text);
    for (int i = -4; i <= 12; ++i) {
      Env env{{"x", Q3->from_integer(i)}};
      Verdict prev = Verdict::Unknown;
      for (int d = 1; d <= 3; ++d) {
        StrategyConfig cfg;
        cfg.depth = d;
        Verdict v = eval(phi, env, *Q3, cfg).verdict;
        if (prev != Verdict::Unknown) CHECK(v == prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("match_shape up to commutativity and renaming") {
  auto tmpl = parse_formula("(E a (x = a^2 & P2(a + 1))) | x = 0");
  CHECK(match_shape(*tmpl, *parse_formula("u = 0 | E b (P2(b + 1) & u = b^2)")));
  CHECK_FALSE(match_shape(*tmpl, *parse_formula("u = 0 | E b (P2(b + 1) & u = b^3)")));
  CHECK_FALSE(match_shape(*tmpl, *parse_formula("E b (u = 0 | (P2(b + 1) & u = b^2))")));
  CHECK_FALSE(match_shape(*tmpl, *parse_formula("u = 0 | E b (P2(u + 1) & u = b^2)")));
  CHECK_FALSE(match_shape(*tmpl, *parse_formula("v = 0 | E b (P2(b + 1) & u = b^2)")));
  auto m = match_shape(*tmpl, *parse_formula("u = 0 | E b (P2(b + 1) & u = b^2)"));
  REQUIRE(m);
  CHECK(m->free_names.at("x") == "u");
  CHECK(m->nodes.at(tmpl.get())->kind == Formula::Kind::Or);
}
