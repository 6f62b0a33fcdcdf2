#include "valring/valdef.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "valring/error.hpp"
#include "valring/hensel.hpp"
#include "valring/padic_field.hpp"
#include "valring/sampling.hpp"

#ifndef VALRING_DATA_DIR
#define VALRING_DATA_DIR "data"
#endif

namespace valring {

using json = nlohmann::ordered_json;

// --- constants ----------------------------------------------------------------------

EllConstant choose_ell(std::int64_t q) {
  if (!prime_power(q)) throw Error(ErrorCode::BadParameter, std::to_string(q) + " is not a prime power");
  return EllConstant{q, q * (q - 1), false};
}

EllConstant choose_ell_uniform(std::int64_t N, std::int64_t q) {
  std::int64_t ell = 1;
  for (auto r : prime_powers(2, N - 1)) {
    ell = lcm64(ell, r * (r - 1));
    if (ell > (std::int64_t{1} << 40)) throw Error(ErrorCode::TooLarge, "uniform ell overflows");
  }
  return EllConstant{q, ell, true};
}

std::string cache_dir() {
  if (const char* env = std::getenv("VALRING_CACHE"); env && *env) return env;
  return VALRING_DATA_DIR;
}

std::string fixture_path() { return (std::filesystem::path(cache_dir()) / "n_scan.json").string(); }

NFixture load_fixture() {
  NFixture fx;
  std::ifstream in(fixture_path());
  if (!in) return fx;
  try {
    auto j = json::parse(in);
    fx.version = j.value("version", 0);
    fx.qmax = j.value("qmax", 0);
    if (j.contains("T") && j["T"].contains("N") && !j["T"]["N"].is_null()) fx.N_T = j["T"]["N"].get<std::int64_t>();
    if (j.contains("Tplus") && j["Tplus"].contains("N") && !j["Tplus"]["N"].is_null()) {
      fx.N_Tplus = j["Tplus"]["N"].get<std::int64_t>();
    }
  } catch (const json::exception&) {
    return NFixture{};
  }
  return fx;
}

void save_fixture(const NFixture& fx) {
  std::filesystem::create_directories(cache_dir());
  json j;
  j["version"] = fx.version;
  j["qmax"] = fx.qmax;
  j["T"]["N"] = fx.N_T ? json(*fx.N_T) : json(nullptr);
  j["Tplus"]["N"] = fx.N_Tplus ? json(*fx.N_Tplus) : json(nullptr);
  std::ofstream(fixture_path()) << j.dump(2) << "\n";
}

std::optional<std::int64_t> recorded_N(BaseSet base) {
  auto fx = load_fixture();
  return base == BaseSet::T ? fx.N_T : fx.N_Tplus;
}

// --- membership ---------------------------------------------------------------------

std::string_view method_name(Method m) { return m == Method::Main ? "main" : "main2"; }

Method parse_method(std::string_view s) {
  if (s == "main") return Method::Main;
  if (s == "main2") return Method::Main2;
  throw Error(ErrorCode::BadParameter, "unknown method '" + std::string(s) + "'");
}

BaseSet method_base(Method m) { return m == Method::Main ? BaseSet::T : BaseSet::Tplus; }

std::string_view branch_name(Branch b) {
  switch (b) {
    case Branch::SumsetSell:
      return "sumset_sell";
    case Branch::CauchyDavenport:
      return "cauchy_davenport";
    case Branch::NegativeValuation:
      return "negative_valuation";
  }
  return "";
}

bool oracle_OK(const Element& x) { return x.is_zero() || x.val() >= Valuation(0); }

MembershipCertificate decide_OK(const Element& x, Method method, const DecideOptions& options) {
  const Field& K = x.field();
  if (!K.is_valued()) throw Error(ErrorCode::BadParameter, "membership needs a valued field");
  if (!x.is_exact()) throw Error(ErrorCode::NotExact, "decide_OK needs an exact element");
  const BaseSet base = method_base(method);
  if (!base_applicable(K, base)) {
    throw Error(ErrorCode::MethodInapplicable, "residue field " + K.residue_field()->descriptor() +
                                                   " has characteristic 2 and no non-cubes");
  }
  MembershipCertificate c;
  c.method = method;
  c.x = x;
  if (!x.is_zero() && x.val() < Valuation(0)) {
    c.branch = Branch::NegativeValuation;
    c.val = x.val();
    return c;
  }
  c.inside = true;
  const std::int64_t q = K.q();
  std::optional<std::int64_t> N = options.N ? options.N : recorded_N(base);
  bool try_cd = options.branch == BranchChoice::DecompositionOnly ||
                (options.branch == BranchChoice::Auto && N && q >= *N);
  if (try_cd) {
    try {
      c.branch = Branch::CauchyDavenport;
      c.decomposition = lift_decomposition(x, base);
      return c;
    } catch (const Error& e) {
      if (options.branch == BranchChoice::DecompositionOnly || e.code() != ErrorCode::ResidueNotCovered) throw;
      c.decomposition.reset();
    }
  }
  c.branch = Branch::SumsetSell;
  if (options.ell) {
    c.ell = *options.ell;
  } else if (options.ell_mode == EllMode::Uniform) {
    if (!N) throw Error(ErrorCode::MissingScanFixture, "uniform ell needs a recorded N (run scan n-scan)");
    c.ell = choose_ell_uniform(*N, q).ell;
  } else {
    c.ell = choose_ell(q).ell;
  }
  Element xm1 = x - K.one();
  if (!xm1.is_zero() && xm1.val() == Valuation(0)) {
    c.shift = 1;
    c.unit = xm1;
  } else {
    c.shift = 0;
    c.unit = x;
  }
  auto w = s_ell_witness(c.unit, c.ell, base);
  c.a = w.a;
  c.shifted = w.shifted;
  return c;
}

bool verify_certificate(const MembershipCertificate& c) {
  const Element& x = c.x;
  const Field& K = x.field();
  try {
    if (!c.inside) return !x.is_zero() && x.val() < Valuation(0) && x.val() == c.val;
    const BaseSet base = method_base(c.method);
    if (c.branch == Branch::CauchyDavenport) {
      if (!c.decomposition || c.decomposition->base != base) return false;
      const auto& d = *c.decomposition;
      if (!(d.a + d.b + d.c * d.d - x).is_zero()) return false;
      for (const Element* e : {&d.a, &d.b, &d.c, &d.d}) {
        if (!in_base(*e, base)) return false;
      }
      return true;
    }
    if (c.branch != Branch::SumsetSell || (c.shift != 0 && c.shift != 1) || c.ell < 1) return false;
    if (!(K.from_integer(c.shift) + c.unit - x).is_zero()) return false;
    if (!in_base(c.a, base)) return false;
    Element t = power_mod(c.unit, c.ell, K.precision()) - K.one() + c.a;
    return in_base(t, base);
  } catch (const Error&) {
    return false;
  }
}

namespace {

json valuation_json(const Valuation& v) {
  if (v.is_integral()) return v.num();
  return std::to_string(v.num()) + "/" + std::to_string(v.den());
}

Valuation valuation_from_json(const json& j) {
  if (j.is_number_integer()) return Valuation(j.get<std::int64_t>());
  auto s = j.get<std::string>();
  auto slash = s.find('/');
  return Valuation(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

}  // namespace

std::string certificate_json(const MembershipCertificate& c, bool full) {
  const Field& K = c.x.field();
  json j;
  j["verdict"] = c.inside ? "inside" : "outside";
  if (full) {
    j["field"] = K.descriptor();
    j["x"] = K.format(c.x);
    j["method"] = method_name(c.method);
    j["base"] = base_set_name(method_base(c.method));
  }
  if (!c.inside) {
    if (full) j["branch"] = branch_name(c.branch);
    j["val"] = valuation_json(c.val);
    return j.dump();
  }
  j["branch"] = branch_name(c.branch);
  if (c.branch == Branch::SumsetSell) {
    j["shift"] = c.shift;
    j["unit"] = K.format(c.unit);
    j["a"] = K.format(c.a);
    j["ell"] = c.ell;
  } else {
    const auto& d = *c.decomposition;
    j["a"] = K.format(d.a);
    j["b"] = K.format(d.b);
    j["c"] = K.format(d.c);
    j["d"] = K.format(d.d);
    if (full) {
      j["residue"] = {d.residue.a.to_string(), d.residue.b.to_string(), d.residue.c.to_string(),
                      d.residue.d.to_string()};
    }
  }
  return j.dump();
}

MembershipCertificate certificate_from_json(const std::string& text, const FieldPtr& K) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadParameter, std::string("certificate is not JSON: ") + e.what());
  }
  try {
    MembershipCertificate c;
    c.x = K->parse(j.at("x").get<std::string>());
    c.method = parse_method(j.at("method").get<std::string>());
    c.inside = j.at("verdict") == "inside";
    if (!c.inside) {
      c.branch = Branch::NegativeValuation;
      c.val = valuation_from_json(j.at("val"));
      return c;
    }
    const std::string branch = j.at("branch").get<std::string>();
    auto el = [&](const char* key) { return K->parse(j.at(key).get<std::string>()); };
    if (branch == "sumset_sell") {
      c.branch = Branch::SumsetSell;
      c.shift = j.at("shift").get<int>();
      c.unit = el("unit");
      c.a = el("a");
      c.ell = j.at("ell").get<std::int64_t>();
    } else if (branch == "cauchy_davenport") {
      c.branch = Branch::CauchyDavenport;
      LiftedDecomposition d;
      d.a = el("a");
      d.b = el("b");
      d.c = el("c");
      d.d = el("d");
      d.target = c.x;
      d.base = method_base(c.method);
      c.decomposition = d;
    } else {
      throw Error(ErrorCode::BadParameter, "unknown branch '" + branch + "'");
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadParameter, std::string("malformed certificate: ") + e.what());
  }
}

// --- formulas -----------------------------------------------------------------------

namespace {

FormulaPtr T_of(const TermPtr& t) {
  using namespace fm;
  return disj({conj({pn(2, add(lit(4), t)), lnot(pn(2, t))}), conj({pn(3, add(lit(27), t)), lnot(pn(3, t))})});
}

FormulaPtr Tplus_of(const TermPtr& t) {
  using namespace fm;
  return conj({lnot(eq(t, lit(0))), lnot(pas2(t)), exists("i", conj({eq(mul(t, var("i")), lit(1)), lnot(pas2(var("i")))}))});
}

FormulaPtr cok_formula(std::int64_t ell, FormulaPtr (*member)(const TermPtr&)) {
  using namespace fm;
  auto x = var("x"), s = var("s"), a = var("a"), b = var("b"), c = var("c"), d = var("d");
  auto sumset = exists(std::vector<std::string>{"s", "a"},
                       conj({disj({eq(x, s), eq(x, add(lit(1), s))}), member(a),
                             member(add(sub(pow(s, static_cast<std::uint64_t>(ell)), lit(1)), a))}));
  auto cd = exists(std::vector<std::string>{"a", "b", "c", "d"},
                   conj({eq(x, add(add(a, b), mul(c, d))), member(a), member(b), member(c), member(d)}));
  return disj({sumset, cd});
}

}  // namespace

FormulaPtr T_formula(const std::string& v) { return T_of(fm::var(v)); }
FormulaPtr Tplus_formula(const std::string& v) { return Tplus_of(fm::var(v)); }
FormulaPtr main_formula(std::int64_t ell) { return cok_formula(ell, T_of); }
FormulaPtr main2_formula(std::int64_t ell) { return cok_formula(ell, Tplus_of); }
FormulaPtr main_prime_formula(std::int64_t ell) { return substitute_pas2(main2_formula(ell)); }

// --- extension plans ----------------------------------------------------------------

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidPlan, msg); }

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    for (std::size_t i = 0; i + 2 < s.size() + 1; ++i) {
      if (s.compare(i, 3, "−") == 0) s.replace(i, 3, "-");
    }
    try {
      Rational r(s);
      r.canonicalize();
      return r;
    } catch (const std::exception&) {
      invalid("bad rational '" + s + "'");
    }
  }
  invalid("plan coefficients must be integers or rational strings");
}

std::vector<Integer> default_G(std::int64_t p, int f) {
  if (f == 1) return {Integer(-1), Integer(1)};
  std::vector<Integer> G;
  for (auto c : fp_poly::smallest_irreducible(p, f)) G.emplace_back(c);
  return G;
}

// H*_j as text in g.
std::string l_text(const std::vector<Rational>& h) {
  std::string out;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h[k] == 0) continue;
    if (!out.empty()) out += " + ";
    out += h[k].get_str();
    if (k > 0) out += "*g^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

Element eval_z_poly(const std::vector<Rational>& h, const Element& z) {
  const Field& K = z.field();
  Element acc = K.zero();
  for (std::size_t k = h.size(); k-- > 0;) acc = acc * z + K.from_rational(h[k]);
  return acc;
}

ElemPoly G_poly(const ExtensionPlan& plan, const Field& K) {
  ElemPoly g;
  for (const auto& c : plan.G) g.push_back(K.from_integer(c));
  return g;
}

ElemPoly H_poly(const ExtensionPlan& plan, const Element& eta) {
  ElemPoly h;
  for (const auto& hj : plan.Hstar) h.push_back(eval_z_poly(hj, eta));
  h.push_back(eta.field().one());
  return h;
}

bool known_root(const std::vector<Element>& roots, const Element& r) {
  const Field& K = r.field();
  for (const auto& s : roots) {
    Element d = drop_precision(s) - drop_precision(r);
    if (d.is_zero()) return true;
    std::int64_t lim = std::min(K.precision_of(s).value_or(K.precision()), K.precision_of(r).value_or(K.precision()));
    if (d.val().in_units(K.ramification()) >= lim) return true;
  }
  return false;
}

}  // namespace

ExtensionPlan make_plan(std::int64_t p, int f, const std::vector<Rational>& eis) {
  ExtensionPlan plan;
  plan.p = p;
  plan.f = f;
  plan.G = default_G(p, f);
  if (eis.size() < 2 || eis.back() != 1) invalid("Eisenstein polynomial must be monic of degree >= 1");
  plan.e = static_cast<int>(eis.size()) - 1;
  for (int j = 0; j < plan.e; ++j) plan.Hstar.push_back({eis[j]});
  plan.which_power = p == 2 ? 3 : 2;
  validate_plan(plan);
  return plan;
}

ExtensionPlan parse_plan(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    invalid(std::string("plan is not JSON: ") + e.what());
  }
  try {
    ExtensionPlan plan;
    plan.p = j.at("p").get<std::int64_t>();
    plan.f = j.value("f", 1);
    if (plan.f < 1 || plan.f > 8) invalid("f must be in 1..8");
    if (j.contains("G")) {
      plan.G.clear();
      for (const auto& c : j["G"]) plan.G.emplace_back(c.get<long>());
    } else {
      plan.G = default_G(plan.p, plan.f);
    }
    if (j.contains("eis")) {
      std::vector<Rational> eis;
      for (const auto& c : j["eis"]) eis.push_back(rational_from_json(c));
      if (eis.size() < 2 || eis.back() != 1) invalid("Eisenstein polynomial must be monic of degree >= 1");
      plan.e = static_cast<int>(eis.size()) - 1;
      for (int i = 0; i < plan.e; ++i) plan.Hstar.push_back({eis[i]});
    } else if (j.contains("Hstar")) {
      for (const auto& h : j["Hstar"]) {
        std::vector<Rational> coeffs;
        for (const auto& c : h) coeffs.push_back(rational_from_json(c));
        plan.Hstar.push_back(coeffs);
      }
      plan.e = static_cast<int>(plan.Hstar.size());
    } else {
      invalid("plan needs \"eis\" or \"Hstar\"");
    }
    if (j.contains("e") && j["e"].get<int>() != plan.e) invalid("e does not match the Eisenstein degree");
    plan.which_power = plan.p == 2 ? 3 : 2;
    validate_plan(plan);
    return plan;
  } catch (const json::exception& e) {
    invalid(std::string("malformed plan: ") + e.what());
  }
}

std::string plan_json(const ExtensionPlan& plan) {
  json j;
  j["p"] = plan.p;
  j["f"] = plan.f;
  j["e"] = plan.e;
  json G = json::array();
  for (const auto& c : plan.G) G.push_back(c.get_si());
  j["G"] = G;
  json H = json::array();
  for (const auto& h : plan.Hstar) {
    json row = json::array();
    for (const auto& c : h) row.push_back(c.get_str());
    H.push_back(row);
  }
  j["Hstar"] = H;
  return j.dump();
}

namespace {

std::string plan_descriptor(const ExtensionPlan& plan) {
  std::string d = "Ext:Qp:" + std::to_string(plan.p) + ":unram=" + std::to_string(plan.f) + ":G=[";
  for (std::size_t i = 0; i < plan.G.size(); ++i) d += (i ? "," : "") + plan.G[i].get_str();
  d += "]:eis=[";
  for (const auto& h : plan.Hstar) d += l_text(h) + ",";
  d += "1]";
  return d;
}

}  // namespace

void validate_plan(const ExtensionPlan& plan) {
  if (plan.p < 2 || !prime_power(plan.p) || prime_power(plan.p)->second != 1) invalid("p must be prime");
  if (plan.f < 1 || static_cast<int>(plan.G.size()) != plan.f + 1 || plan.G.back() != 1) {
    invalid("G must be monic of degree f");
  }
  fp_poly::Poly g0;
  for (const auto& c : plan.G) {
    Integer r = c % plan.p;
    if (r < 0) r += plan.p;
    g0.push_back(r.get_si());
  }
  if (!fp_poly::is_irreducible(g0, plan.p)) invalid("G is not irreducible mod p");
  if (plan.e < 1 || static_cast<int>(plan.Hstar.size()) != plan.e) invalid("need e >= 1 coefficients H*_j");
  if (plan.which_power != (plan.p == 2 ? 3 : 2)) invalid("power must avoid the residue characteristic");
  // The unramified field L and every root of G in it.
  std::string ldesc = "Ext:Qp:" + std::to_string(plan.p) + ":unram=" + std::to_string(plan.f) + ":G=[";
  for (std::size_t i = 0; i < plan.G.size(); ++i) ldesc += (i ? "," : "") + plan.G[i].get_str();
  ldesc += "]:eis=[" + std::to_string(-plan.p) + ",1]";
  FieldPtr L;
  try {
    L = make_field(ldesc);
  } catch (const Error& e) {
    invalid(e.what());
  }
  ExtensionPlan unram = plan;
  auto roots = roots_of_G(unram, *L);
  if (static_cast<int>(roots.size()) != plan.f) invalid("could not find every root of G");
  for (const auto& eta : roots) {
    for (int j = 0; j < plan.e; ++j) {
      Element c = drop_precision(eval_z_poly(plan.Hstar[j], eta));
      Valuation v = c.is_zero() ? Valuation::infinity() : c.val();
      if (v < Valuation(1)) invalid("H*_" + std::to_string(j) + " is not in the maximal ideal at a root of G");
      if (j == 0 && !(v == Valuation(1))) invalid("H*_0 does not have valuation 1 at a root of G");
    }
  }
}

FieldPtr plan_field(const ExtensionPlan& plan) {
  try {
    return make_field(plan_descriptor(plan));
  } catch (const Error& e) {
    invalid(e.what());
  }
}

std::vector<Element> roots_of_G(const ExtensionPlan& plan, const Field& K) {
  const auto& k = K.residue_field();
  ElemPoly G = G_poly(plan, K);
  std::vector<Element> exact, approx;
  for (std::int64_t c = 0; c < k->q(); ++c) {
    Element a = K.lift(FqElem{k, static_cast<FiniteField::Code>(c)});
    if (poly_eval(G, a).is_zero()) {
      exact.push_back(a);
      continue;
    }
    try {
      Element r = hensel_root({G, a});
      if (!known_root(approx, r)) approx.push_back(r);
    } catch (const Error&) {
    }
  }
  exact.insert(exact.end(), approx.begin(), approx.end());
  return exact;
}

std::vector<Element> uniformizer_set(const ExtensionPlan& plan, const Field& K) {
  std::vector<Element> out;
  const auto& k = K.residue_field();
  const Element pi = K.uniformizer();
  for (const auto& eta : roots_of_G(plan, K)) {
    ElemPoly H = H_poly(plan, eta);
    if (!eta.is_exact()) {
      for (auto& c : H) c = drop_precision(c);
    }
    std::vector<Element> units;
    for (std::int64_t c = 1; c < k->q(); ++c) units.push_back(K.lift(FqElem{k, static_cast<FiniteField::Code>(c)}));
    // Digits up to pi^2 relative to the leading one.
    for (int depth = 0; depth <= 2; ++depth) {
      std::vector<Element> next;
      for (const auto& u : units) {
        Element t = u * pi;
        try {
          Element r;
          if (poly_eval(H, t).is_zero()) r = t;
          else r = hensel_root({H, t});
          if (!known_root(out, r)) out.push_back(r);
        } catch (const Error&) {
        }
        if (depth < 2) {
          for (std::int64_t c = 0; c < k->q(); ++c) {
            next.push_back(u + K.lift(FqElem{k, static_cast<FiniteField::Code>(c)}) * K.pow(pi, depth + 1));
          }
        }
      }
      units = std::move(next);
      if (!out.empty() && depth >= 1) break;
    }
  }
  return out;
}

namespace {

TermPtr int_poly_term(const std::vector<std::pair<Integer, TermPtr>>& monomials) {
  using namespace fm;
  TermPtr acc;
  for (const auto& [c, m] : monomials) {
    if (c == 0) continue;
    TermPtr t = !m ? lit(c) : c == 1 ? m : mul(lit(c), m);
    acc = acc ? add(acc, t) : t;
  }
  return acc ? acc : lit(0);
}

TermPtr power_of(const std::string& v, std::uint64_t k) {
  if (k == 0) return nullptr;
  return k == 1 ? fm::var(v) : fm::pow(fm::var(v), k);
}

TermPtr product(const TermPtr& a, const TermPtr& b) {
  if (!a) return b;
  if (!b) return a;
  return fm::mul(a, b);
}

TermPtr G_term(const ExtensionPlan& plan, const std::string& z) {
  std::vector<std::pair<Integer, TermPtr>> ms;
  for (std::size_t i = 0; i < plan.G.size(); ++i) ms.emplace_back(plan.G[i], power_of(z, i));
  return int_poly_term(ms);
}

// Denominator-cleared D*y^e + sum_j sum_k D h_jk z^k y^j.
TermPtr H_term(const ExtensionPlan& plan, const std::string& z, const std::string& y) {
  Integer D = 1;
  for (const auto& h : plan.Hstar) {
    for (const auto& c : h) D = lcm(D, Integer(c.get_den()));
  }
  std::vector<std::pair<Integer, TermPtr>> ms;
  for (int j = 0; j < plan.e; ++j) {
    for (std::size_t k = 0; k < plan.Hstar[j].size(); ++k) {
      Rational c = plan.Hstar[j][k] * D;
      ms.emplace_back(Integer(c.get_num()), product(power_of(z, k), power_of(y, j)));
    }
  }
  ms.emplace_back(D, power_of(y, plan.e));
  return int_poly_term(ms);
}

FormulaPtr power_eq(const ExtensionPlan& plan, const std::string& y, const std::string& x, const std::string& w) {
  using namespace fm;
  auto n = static_cast<std::uint64_t>(plan.which_power);
  return eq(add(lit(1), mul(var(y), pow(var(x), n))), pow(var(w), n));
}

}  // namespace

ExtensionFormulas build_extension_formula(const ExtensionPlan& plan) {
  using namespace fm;
  validate_plan(plan);
  auto existential = exists(std::vector<std::string>{"z", "y", "w"},
                            conj({eq(G_term(plan, "z"), lit(0)), eq(H_term(plan, "z", "y"), lit(0)),
                                  power_eq(plan, "y", "x", "w")}));
  auto universal = forall(std::vector<std::string>{"z", "y", "o", "z2", "y2", "w2"},
                          lnot(conj({eq(G_term(plan, "z"), lit(0)), eq(H_term(plan, "z", "y"), lit(0)),
                                     eq(G_term(plan, "z2"), lit(0)), eq(H_term(plan, "z2", "y2"), lit(0)),
                                     power_eq(plan, "y2", "o", "w2"),
                                     eq(mul(mul(var("x"), var("y")), var("o")), lit(1))})));
  return {existential, universal};
}

ExtensionReport verify_extension_formula(const ExtensionPlan& plan, const FieldPtr& K, int samples,
                                         std::uint64_t seed) {
  ExtensionReport r;
  auto forms = build_extension_formula(plan);
  Rng rng(seed);
  const int e = K->ramification();
  for (int i = 0; i < samples; ++i) {
    Element x = random_element(*K, rng, -4 * e, 4 * e);
    ++r.samples;
    bool truth = oracle_OK(x);
    Env env{{"x", x}};
    auto ex = eval(forms.existential, env, *K, {}, &default_registry());
    auto un = eval(forms.universal, env, *K, {}, &default_registry());
    if (ex.verdict == Verdict::Unknown) ++r.existential_unknown;
    else if ((ex.verdict == Verdict::True) == truth) ++r.existential_agree;
    if (un.verdict == Verdict::Unknown) ++r.universal_unknown;
    else if ((un.verdict == Verdict::True) == truth) ++r.universal_agree;
    if (ex.verdict != (truth ? Verdict::True : Verdict::False) || un.verdict != (truth ? Verdict::True : Verdict::False)) {
      r.failures.push_back(K->format(x) + ": existential " + std::string(verdict_name(ex.verdict)) + ", universal " +
                           std::string(verdict_name(un.verdict)));
    }
  }
  const Valuation target(1, e);
  for (const auto& t : uniformizer_set(plan, *K)) {
    ++r.uniformizers;
    if (t.val() == target) ++r.uniformizers_ok;
  }
  return r;
}

std::string extension_report_json(const ExtensionReport& r) {
  json j;
  j["samples"] = r.samples;
  j["existential_agree"] = r.existential_agree;
  j["universal_agree"] = r.universal_agree;
  j["existential_unknown"] = r.existential_unknown;
  j["universal_unknown"] = r.universal_unknown;
  j["uniformizers"] = r.uniformizers;
  j["uniformizers_ok"] = r.uniformizers_ok;
  j["failures"] = r.failures;
  j["ok"] = r.ok();
  return j.dump();
}

// --- registry -----------------------------------------------------------------------

namespace {

const Formula* chain_with(const Formula& f, const std::string& var) {
  for (const auto& c : f.children) {
    if (c->kind == Formula::Kind::Exists && c->var == var) return c.get();
  }
  return nullptr;
}

ShapeDecision decide_cok(const FormulaPtr& tmpl, const Element& x, Method method, bool prime) {
  ShapeDecision d;
  const Field& K = x.field();
  if (!K.is_valued() || !x.is_exact()) return d;
  if (prime && K.residue_char() == 2) return d;
  auto exps = pow_exponents(*tmpl);
  if (exps.size() != 1) return d;
  DecideOptions opts;
  opts.ell = static_cast<std::int64_t>(*exps.begin());
  MembershipCertificate c;
  try {
    c = decide_OK(x, method, opts);
  } catch (const Error&) {
    return d;
  }
  d.strategy = std::string(method_name(method)) + (prime ? "'" : "") + ":" + std::string(branch_name(c.branch));
  if (!c.inside) {
    d.verdict = Verdict::False;
    return d;
  }
  d.verdict = Verdict::True;
  if (c.branch == Branch::SumsetSell) {
    d.certify = chain_with(*tmpl, "s");
    d.witnesses = {{"s", c.unit}, {"a", c.a}};
  } else {
    const auto& dec = *c.decomposition;
    d.certify = chain_with(*tmpl, "a");
    d.witnesses = {{"a", dec.a}, {"b", dec.b}, {"c", dec.c}, {"d", dec.d}};
  }
  return d;
}

std::vector<FormulaPtr> cok_templates(const Formula& input, FormulaPtr (*make)(std::int64_t)) {
  std::vector<FormulaPtr> out;
  if (input.kind != Formula::Kind::Or || input.children.size() != 2) return out;
  for (auto ell : pow_exponents(input)) {
    if (ell >= 1 && ell <= (std::uint64_t{1} << 40)) out.push_back(flatten(make(static_cast<std::int64_t>(ell))));
  }
  return out;
}

// Reads a plan back off an e-def shaped formula.
std::optional<ExtensionPlan> extract_plan(const Formula& input, const Field& K) {
  if (K.kind() != FieldKind::Padic) return std::nullopt;
  const Formula* f = &input;
  std::vector<std::string> bound;
  while (f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall) {
    bound.push_back(f->var);
    f = f->body().get();
  }
  if (f->kind == Formula::Kind::Not) f = f->body().get();
  if (f->kind != Formula::Kind::And) return std::nullopt;
  auto is_bound = [&](const std::string& v) { return std::find(bound.begin(), bound.end(), v) != bound.end(); };
  std::optional<IntPoly> G, H;
  std::string zv, yv;
  std::optional<std::uint64_t> power;
  for (const auto& c : f->children) {
    if (c->kind != Formula::Kind::Eq) return std::nullopt;
    auto vars = free_vars(*c);
    if (vars.size() == 1 && is_bound(*vars.begin()) && !G) {
      G = equation_poly(*c);
      zv = *vars.begin();
    }
  }
  if (!G) return std::nullopt;
  for (const auto& c : f->children) {
    auto vars = free_vars(*c);
    bool pow_rhs = c->rhs && c->rhs->kind == Term::Kind::Pow;
    if (!H && !pow_rhs && c->kind == Formula::Kind::Eq && vars.size() <= 2 && (vars.size() == 1 || vars.count(zv))) {
      std::string other;
      for (const auto& v : vars) {
        if (v != zv && is_bound(v)) other = v;
      }
      auto poly = other.empty() ? std::nullopt : equation_poly(*c);
      // A second copy of G in another variable is not H.
      if (poly && vars.size() == 1) {
        IntPoly renamed;
        for (const auto& [m, coef] : *poly) {
          Monomial r;
          for (const auto& [v, k] : m) r[zv] = k;
          renamed[r] = coef;
        }
        if (renamed == *G) poly.reset();
      }
      if (poly) {
        yv = other;
        H = poly;
      }
    }
    if (c->rhs && c->rhs->kind == Term::Kind::Pow) power = c->rhs->exponent;
  }
  if (!H || !power) return std::nullopt;
  ExtensionPlan plan;
  plan.p = K.residue_char();
  std::map<std::uint64_t, Integer> g;
  for (const auto& [m, c] : *G) g[m.empty() ? 0 : m.begin()->second] = c;
  plan.f = static_cast<int>(g.rbegin()->first);
  if (plan.f < 1) return std::nullopt;
  Integer lead = g.rbegin()->second;
  if (lead != 1 && lead != -1) return std::nullopt;
  plan.G.assign(plan.f + 1, 0);
  for (const auto& [k, c] : g) plan.G[k] = c * lead;
  std::map<std::uint64_t, std::map<std::uint64_t, Integer>> h;
  for (const auto& [m, c] : *H) {
    std::uint64_t j = m.count(yv) ? m.at(yv) : 0, k = m.count(zv) ? m.at(zv) : 0;
    h[j][k] = c;
  }
  plan.e = static_cast<int>(h.rbegin()->first);
  if (plan.e < 1) return std::nullopt;
  const auto& top = h.rbegin()->second;
  if (top.size() != 1 || top.begin()->first != 0) return std::nullopt;
  Integer D = top.begin()->second;
  plan.Hstar.assign(plan.e, {});
  for (int j = 0; j < plan.e; ++j) {
    std::uint64_t deg = h.count(j) && !h[j].empty() ? h[j].rbegin()->first : 0;
    plan.Hstar[j].assign(deg + 1, Rational(0));
    if (!h.count(j)) continue;
    for (const auto& [k, c] : h[j]) {
      Rational r(c, D);
      r.canonicalize();
      plan.Hstar[j][k] = r;
    }
  }
  plan.which_power = static_cast<int>(*power);
  try {
    validate_plan(plan);
  } catch (const Error&) {
    return std::nullopt;
  }
  return plan;
}

std::vector<FormulaPtr> edef_templates(const Formula& input, const Field& K) {
  auto plan = extract_plan(input, K);
  if (!plan) return {};
  auto forms = build_extension_formula(*plan);
  return {flatten(forms.existential), flatten(forms.universal)};
}

// An exact root of G and of H*_eta when the field provides them.
std::optional<std::pair<Element, Element>> exact_uniformizer(const ExtensionPlan& plan, const Field& K) {
  for (const auto& eta : roots_of_G(plan, K)) {
    if (!eta.is_exact()) continue;
    ElemPoly H = H_poly(plan, eta);
    Element pi = K.uniformizer();
    if (poly_eval(H, pi).is_zero()) return std::make_pair(eta, pi);
    for (const auto& t : uniformizer_set(plan, K)) {
      if (t.is_exact()) return std::make_pair(eta, t);
    }
  }
  return std::nullopt;
}

ShapeDecision decide_edef(const FormulaPtr& tmpl, const Element& x) {
  ShapeDecision d;
  const Field& K = x.field();
  auto plan = extract_plan(*tmpl, K);
  if (!plan || !x.is_exact()) return d;
  const bool inside = oracle_OK(x);
  const bool universal = tmpl->kind == Formula::Kind::Forall;
  d.strategy = universal ? "e-def:universal" : "e-def:existential";
  d.verdict = inside ? Verdict::True : Verdict::False;
  if (universal == inside) return d;
  // Existential truth or universal falsity: name the roots, leave the
  // Hensel step to the evaluator.
  auto zy = exact_uniformizer(*plan, K);
  if (!zy) return ShapeDecision{};
  d.certify = tmpl.get();
  d.witnesses = {{"z", zy->first}, {"y", zy->second}};
  if (universal) {
    d.witnesses["o"] = (x * zy->second).inv();
    d.witnesses["z2"] = zy->first;
    d.witnesses["y2"] = zy->second;
  }
  return d;
}

Registry build_default_registry() {
  Registry r;
  r.add({"main", [](const Formula& in, const Field&) { return cok_templates(in, main_formula); },
         [](const FormulaPtr& t, const Element& x) { return decide_cok(t, x, Method::Main, false); }});
  r.add({"main2", [](const Formula& in, const Field&) { return cok_templates(in, main2_formula); },
         [](const FormulaPtr& t, const Element& x) { return decide_cok(t, x, Method::Main2, false); }});
  r.add({"main'", [](const Formula& in, const Field&) { return cok_templates(in, main_prime_formula); },
         [](const FormulaPtr& t, const Element& x) { return decide_cok(t, x, Method::Main2, true); }});
  r.add({"e-def", edef_templates, decide_edef});
  return r;
}

}  // namespace

const Registry& default_registry() {
  static const Registry registry = build_default_registry();
  return registry;
}

}  // namespace valring
