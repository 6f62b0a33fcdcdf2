#include "valring/selftest.hpp"

#include <chrono>
#include <functional>
#include <map>

#include "json.hpp"

#include "valring/decompose.hpp"
#include "valring/error.hpp"
#include "valring/hensel.hpp"
#include "valring/sampling.hpp"
#include "valring/valdef.hpp"

namespace valring {

namespace {

using Code = FiniteField::Code;

struct Ctx {
  SuiteResult& r;
  void check(bool ok, const std::string& what) {
    ++r.checks;
    if (ok) return;
    ++r.failures;
    if (r.messages.size() < 20) r.messages.push_back(what);
  }
};

std::int64_t width(const Field& K) { return 6 * K.ramification(); }

void suite_membership(Ctx& c, const SuiteScale& s, std::uint64_t seed, Method method) {
  for (const auto& desc : membership_fields()) {
    auto K = make_field(desc);
    Rng rng(seed);
    if (!base_applicable(*K, method_base(method))) {
      bool rejected = false;
      try {
        decide_OK(K->one(), method);
      } catch (const Error& e) {
        rejected = e.code() == ErrorCode::MethodInapplicable;
      }
      // gcd(q - 1, 3) = 1 in characteristic 2 means every element is a cube.
      c.check(rejected && K->residue_char() == 2 && std::gcd(K->q() - 1, std::int64_t{3}) == 1,
              desc + ": expected MethodInapplicable");
      continue;
    }
    c.check(method == Method::Main2 || std::gcd(K->q() - 1, std::int64_t{3}) != 1 || K->residue_char() != 2,
            desc + ": applicable despite gcd rule");
    for (int i = 0; i < s.membership_samples; ++i) {
      Element x = random_element(*K, rng, -width(*K), width(*K));
      try {
        auto cert = decide_OK(x, method);
        c.check(cert.inside == oracle_OK(x) && verify_certificate(cert), desc + ": " + K->format(x));
      } catch (const Error& e) {
        c.check(false, desc + ": " + K->format(x) + ": " + e.what());
      }
    }
  }
}

void suite_lemma_val(Ctx& c, const SuiteScale& s, std::uint64_t seed) {
  for (const auto& desc : membership_fields()) {
    auto K = make_field(desc);
    Rng rng(seed);
    const auto& k = K->residue_field();
    auto Tk = definable_set_residue("T", k);
    for (int i = 0; i < s.lemma_samples; ++i) {
      // Half the samples near the residue set so that the predicates fire.
      Element x = random_element(*K, rng, -width(*K), width(*K));
      if (i % 2 && !Tk.empty()) {
        Code a = Tk[uniform_int(rng, 0, static_cast<std::int64_t>(Tk.size()) - 1)];
        x = K->lift(FqElem{k, a}) + random_element(*K, rng, 1, width(*K));
      }
      if (in_T(x)) c.check(x.is_zero() || x.val() >= Valuation(0), desc + ": T outside O at " + K->format(x));
      if (in_T_plus(x)) c.check(!x.is_zero() && x.val() == Valuation(0), desc + ": T+ not a unit at " + K->format(x));
      ++c.r.checks;
    }
  }
  // Lifting, exhaustive over residue fields.
  for (auto q : prime_powers(2, s.lift_qmax)) {
    auto [p, f] = *prime_power(q);
    std::vector<std::string> descs{"Laurent:" + std::to_string(p) + "^" + std::to_string(f)};
    descs.push_back(f == 1 ? "Qp:" + std::to_string(p)
                           : "Ext:Qp:" + std::to_string(p) + ":unram=" + std::to_string(f) + ":eis=[-" +
                                 std::to_string(p) + ",1]");
    for (const auto& desc : descs) {
      auto K = make_field(desc);
      const auto& k = K->residue_field();
      Rng rng(seed + q);
      auto check_set = [&](const std::string& set, const std::function<bool(const Element&)>& pred) {
        for (Code a : definable_set_residue(set, k)) {
          if (a == 0) continue;
          Element x = K->lift(FqElem{k, a});
          c.check(pred(x), desc + ": lift of " + std::to_string(a) + " not in " + set);
          Element y = x + random_element(*K, rng, 1, 3, false);
          c.check(pred(y), desc + ": " + K->format(y) + " not in " + set);
        }
      };
      if (p != 2) check_set("T2", [](const Element& x) { return in_T_p(x, 2).value; });
      if (p != 3) check_set("T3", [](const Element& x) { return in_T_p(x, 3).value; });
      check_set("Tplus", [](const Element& x) { return in_T_plus(x).value; });
    }
  }
}

void suite_unit_powers(Ctx& c, const SuiteScale& s, std::uint64_t seed) {
  for (const auto& desc : membership_fields()) {
    auto K = make_field(desc);
    Rng rng(seed);
    const std::int64_t ell = choose_ell(K->q()).ell;
    for (int i = 0; i < s.unit_samples; ++i) {
      Element y = random_unit(*K, rng);
      Element d = power_mod(y, ell, K->precision()) - K->one();
      bool ok = d.is_zero() || d.val().in_units(K->ramification()) >= 2;
      c.check(ok, desc + ": val(y^ell - 1) < 2 at " + K->format(y));
    }
  }
}

void suite_cd_scan(Ctx& c, const SuiteScale& s, std::uint64_t) {
  for (const char* set : {"T", "Tplus"}) {
    auto sum = scan_N(set, 2, s.scan_qmax, s.threads);
    c.check(sum.N.has_value(), std::string(set) + ": no N");
    if (!sum.N) continue;
    for (const auto& rec : sum.records) {
      if (rec.applicable && rec.q >= *sum.N) c.check(rec.covered, std::string(set) + ": q=" + std::to_string(rec.q));
    }
  }
  auto F5 = FiniteField::make(5, 1);
  c.check(definable_set_residue("T2", F5) == std::vector<Code>{0, 2}, "T2(F5) != {0,2}");
  auto r5 = scan_one("T", 5);
  c.check(r5.covered && r5.failures.empty(), "F5/T not fully covered");
}

void suite_appendix(Ctx& c, const SuiteScale& s, std::uint64_t) {
  for (auto q : prime_powers(2, s.power_qmax)) {
    for (std::int64_t m = 1; m <= s.power_mmax; ++m) {
      auto pc = power_surjective_check(q, m);
      c.check(pc.by_enumeration == pc.by_gcd, "q=" + std::to_string(q) + " m=" + std::to_string(m));
    }
  }
  std::vector<int> fs, odd;
  for (const auto& rec : all_cubes_char2_scan(s.cubes_fmax)) fs.push_back(rec.f);
  for (int f = 1; f <= s.cubes_fmax; f += 2) odd.push_back(f);
  c.check(fs == odd, "all-cubes scan is not the odd f");
}

std::vector<ExtensionPlan> edef_plans() {
  return {make_plan(2, 1, {Rational(-2), Rational(0), Rational(1)}), make_plan(3, 2, {Rational(-3), Rational(1)}),
          make_plan(5, 1, {Rational(-5), Rational(0), Rational(0), Rational(1)})};
}

void suite_edef(Ctx& c, const SuiteScale& s, std::uint64_t seed) {
  for (const auto& plan : edef_plans()) {
    auto K = plan_field(plan);
    auto rep = verify_extension_formula(plan, K, s.edef_samples, seed);
    const std::string tag = "plan(" + std::to_string(plan.p) + "," + std::to_string(plan.f) + "," +
                            std::to_string(plan.e) + ")";
    c.r.checks += rep.samples * 2 + rep.uniformizers;
    if (!rep.ok()) {
      ++c.r.failures;
      c.r.messages.push_back(tag + ": " + extension_report_json(rep));
    }
    auto forms = build_extension_formula(plan);
    for (const auto& f : {forms.existential, forms.universal}) {
      c.check(equal(*parse_formula(print(*f)), *f), tag + ": formula does not round-trip");
    }
  }
}

void suite_main_prime(Ctx& c, const SuiteScale& s, std::uint64_t seed) {
  for (const auto& desc : membership_fields()) {
    auto K = make_field(desc);
    if (K->residue_char() == 2) continue;
    Rng rng(seed);
    const std::int64_t ell = choose_ell(K->q()).ell;
    auto phi = main2_formula(ell), psi = main_prime_formula(ell);
    for (int i = 0; i < s.prime_samples; ++i) {
      Element x = random_element(*K, rng, -width(*K), width(*K));
      Element w = K->one() + K->from_integer(4) * x;
      // At x = -1/4 the substitution drops the root y = -1/2.
      if (!w.is_zero()) {
        c.check(is_artin_schreier(x, false).value == is_nth_power(w, 2, false).value,
                desc + ": PAS2 != P2(1+4x) at " + K->format(x));
      }
      Env env{{"x", x}};
      auto a = eval(phi, env, *K, {}, &default_registry()).verdict;
      auto b = eval(psi, env, *K, {}, &default_registry()).verdict;
      c.check(a == b && a != Verdict::Unknown, desc + ": main2/main' verdicts differ at " + K->format(x));
    }
  }
}

void suite_evaluator(Ctx& c, const SuiteScale& s, std::uint64_t seed) {
  for (const auto& desc : membership_fields()) {
    auto K = make_field(desc);
    Rng rng(seed);
    const std::int64_t ell = choose_ell(K->q()).ell;
    std::vector<std::pair<Method, FormulaPtr>> forms{{Method::Main2, main2_formula(ell)}};
    if (base_applicable(*K, BaseSet::T)) forms.emplace_back(Method::Main, main_formula(ell));
    for (int i = 0; i < s.evaluator_samples; ++i) {
      Element x = random_element(*K, rng, -width(*K), width(*K));
      for (const auto& [m, phi] : forms) {
        DecideOptions o;
        o.ell = ell;
        bool inside = decide_OK(x, m, o).inside;
        auto v = eval(phi, {{"x", x}}, *K, {}, &default_registry()).verdict;
        c.check(v == (inside ? Verdict::True : Verdict::False),
                desc + ": " + std::string(method_name(m)) + " evaluator disagrees at " + K->format(x));
      }
    }
  }
  std::mt19937_64 rng(seed);
  for (int i = 0; i < s.roundtrip_samples; ++i) {
    auto f = random_formula(rng, 4);
    auto text = print(*f);
    bool ok = false;
    try {
      ok = equal(*parse_formula(text), *f);
    } catch (const Error&) {
    }
    c.check(ok, "round-trip: " + text);
  }
}

void suite_hensel(Ctx& c, const SuiteScale& s, std::uint64_t seed) {
  const std::vector<std::string> fields{"Qp:2", "Qp:3", "Qp:5", "Qp:7", "Laurent:2^1", "Laurent:3^1", "Laurent:5^2",
                                        "Ext:Qp:2:unram=1:eis=[-2,0,1]", "Ext:Qp:3:unram=2:eis=[-3,1]"};
  Rng rng(seed);
  for (int i = 0; i < s.hensel_samples; ++i) {
    auto K = make_field(fields[static_cast<std::size_t>(i) % fields.size()]);
    const int e = K->ramification();
    // f(x) = x^n + c1 x - (a^n + c1 a + pi^k b) with val f(a) > 2 val f'(a).
    const std::int64_t n = uniform_int(rng, 2, 5);
    Element a = random_unit(*K, rng);
    Element c1 = uniform_int(rng, 0, 1) ? random_element(*K, rng, 0, 2) : K->zero();
    ElemPoly f(n + 1, K->zero());
    f[n] = K->one();
    f[1] = c1;
    Element fp = K->from_integer(n) * a.pow(n - 1) + c1;
    if (fp.is_zero()) continue;
    const std::int64_t vfp = fp.val().in_units(e);
    const std::int64_t k = 2 * vfp + 1 + uniform_int(rng, 0, 3);
    f[0] = -(a.pow(n) + c1 * a + K->pow(K->uniformizer(), k) * random_unit(*K, rng));
    Element r;
    try {
      r = hensel_root({f, a});
    } catch (const Error& ex) {
      c.check(false, K->descriptor() + ": hensel_root threw " + ex.what());
      continue;
    }
    Element fr = poly_eval(f, drop_precision(r));
    const std::int64_t prec = K->precision_of(r).value_or(K->precision());
    c.check(fr.is_zero() || fr.val().in_units(e) >= std::min(prec, K->precision()),
            K->descriptor() + ": val f(r) below precision");
    Element dist = drop_precision(r) - a;
    c.check(dist.is_zero() || dist.val().in_units(e) >= k - vfp, K->descriptor() + ": root too far from approx");
  }
  for (auto q : prime_powers(2, s.nth_qmax)) {
    auto [p, f] = *prime_power(q);
    auto k = FiniteField::make(p, f);
    for (std::int64_t n = 1; n <= s.nth_nmax; ++n) {
      std::vector<bool> is_power(q, false);
      for (std::int64_t y = 1; y < q; ++y) {
        Code acc = k->one();
        for (std::int64_t j = 0; j < n; ++j) acc = k->mul(acc, static_cast<Code>(y));
        is_power[acc] = true;
      }
      bool ok = true;
      for (std::int64_t x = 0; x < q; ++x) ok = ok && fq_is_nth_power(*k, static_cast<Code>(x), n) == is_power[x];
      c.check(ok, "F_" + std::to_string(q) + " n=" + std::to_string(n));
    }
  }
}

const std::map<std::string, std::function<void(Ctx&, const SuiteScale&, std::uint64_t)>>& suites() {
  static const std::map<std::string, std::function<void(Ctx&, const SuiteScale&, std::uint64_t)>> m{
      {"main2", [](Ctx& c, const SuiteScale& s, std::uint64_t seed) { suite_membership(c, s, seed, Method::Main2); }},
      {"main", [](Ctx& c, const SuiteScale& s, std::uint64_t seed) { suite_membership(c, s, seed, Method::Main); }},
      {"lemma-val", suite_lemma_val},
      {"unit-powers", suite_unit_powers},
      {"cd-scan", suite_cd_scan},
      {"appendix", suite_appendix},
      {"e-def", suite_edef},
      {"main-prime", suite_main_prime},
      {"evaluator", suite_evaluator},
      {"hensel", suite_hensel},
  };
  return m;
}

}  // namespace

SuiteScale SuiteScale::reduced() {
  SuiteScale s;
  s.membership_samples = 40;
  s.lemma_samples = 60;
  s.lift_qmax = 25;
  s.unit_samples = 30;
  s.scan_qmax = 64;
  s.power_qmax = 512;
  s.power_mmax = 24;
  s.cubes_fmax = 10;
  s.edef_samples = 20;
  s.prime_samples = 30;
  s.evaluator_samples = 30;
  s.roundtrip_samples = 1000;
  s.hensel_samples = 100;
  s.nth_qmax = 64;
  s.nth_nmax = 12;
  return s;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"main2",     "main",     "lemma-val",  "unit-powers",  "cd-scan",
                                              "appendix",  "e-def",    "main-prime", "evaluator", "hensel"};
  return names;
}

const std::vector<std::string>& membership_fields() {
  static const std::vector<std::string> f{"Qp:2",        "Qp:3",        "Qp:5",
                                          "Qp:7",        "Qp:11",       "Qp:13",
                                          "Ext:Qp:2:unram=1:eis=[-2,0,1]", "Ext:Qp:3:unram=2:eis=[-3,1]",
                                          "Laurent:2^1", "Laurent:3^1", "Laurent:2^2",
                                          "Laurent:5^1", "Laurent:2^3", "Laurent:3^2"};
  return f;
}

SuiteResult run_suite(const std::string& name, const SuiteScale& scale, std::uint64_t seed) {
  auto it = suites().find(name);
  if (it == suites().end()) throw Error(ErrorCode::BadParameter, "unknown suite '" + name + "'");
  SuiteResult r;
  r.name = name;
  Ctx c{r};
  auto t0 = std::chrono::steady_clock::now();
  try {
    it->second(c, scale, seed);
  } catch (const std::exception& e) {
    ++r.failures;
    r.messages.push_back(std::string("aborted: ") + e.what());
  }
  r.ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string suite_result_json(const SuiteResult& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.name;
  j["checks"] = r.checks;
  j["failures"] = r.failures;
  j["ok"] = r.ok();
  j["messages"] = r.messages;
  j["ms"] = r.ms;
  return j.dump();
}

}  // namespace valring
