#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "valring/decompose.hpp"
#include "valring/error.hpp"
#include "valring/selftest.hpp"
#include "valring/valdef.hpp"

using namespace valring;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kInside = 0, kOutside = 1, kDomain = 2, kUnknown = 3, kUsage = 64, kInput = 65 };

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::SyntaxError:
    case ErrorCode::BadParameter:
    case ErrorCode::MalformedDescriptor:
    case ErrorCode::TooLarge:
    case ErrorCode::ScopeError:
    case ErrorCode::MissingBinding:
      return kUsage;
    case ErrorCode::InsufficientPrecision:
    case ErrorCode::InvalidPlan:
      return kInput;
    default:
      return kDomain;
  }
}

struct RunConfig {
  std::string field;
  std::string method = "main2";
  std::string ell_mode = "per-field";
  std::string branch = "auto";
  std::optional<std::int64_t> precision;
  std::uint64_t seed = 1;
  std::string output = "json";
  std::string cache;
};

FieldPtr open_field(const RunConfig& cfg) {
  std::string d = cfg.field;
  if (cfg.precision) d += ":prec=" + std::to_string(*cfg.precision);
  return make_field(d);
}

void emit(const RunConfig& cfg, const json& j) {
  if (cfg.output == "json") {
    std::cout << j.dump() << "\n";
    return;
  }
  for (const auto& [k, v] : j.items()) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

DecideOptions decide_options(const RunConfig& cfg) {
  DecideOptions o;
  if (cfg.branch == "sumset") o.branch = BranchChoice::SumsetOnly;
  else if (cfg.branch == "cd") o.branch = BranchChoice::DecompositionOnly;
  if (cfg.ell_mode == "uniform") o.ell_mode = EllMode::Uniform;
  return o;
}

int cmd_decide(const RunConfig& cfg, const std::string& literal, bool full, const std::string& verify) {
  auto K = open_field(cfg);
  Element x = K->parse(literal);
  Method m = parse_method(cfg.method);
  if (!verify.empty()) {
    json j;
    try {
      j = json::parse(verify);
    } catch (const json::exception&) {
      throw Error(ErrorCode::BadParameter, "--verify expects a certificate object");
    }
    if (!j.contains("x")) j["x"] = K->format(x);
    if (!j.contains("method")) j["method"] = cfg.method;
    auto c = certificate_from_json(j.dump(), K);
    bool ok = c.x.identical(x) && c.method == m && verify_certificate(c);
    emit(cfg, json{{"valid", ok}, {"verdict", c.inside ? "inside" : "outside"}});
    if (!ok) return kDomain;
    return c.inside ? kInside : kOutside;
  }
  auto c = decide_OK(x, m, decide_options(cfg));
  if (!verify_certificate(c)) throw Error(ErrorCode::Undecided, "certificate failed re-verification");
  emit(cfg, json::parse(certificate_json(c, full)));
  return c.inside ? kInside : kOutside;
}

int cmd_nscan(const std::string& set, std::int64_t qmin, std::int64_t qmax, int threads) {
  std::vector<std::string> sets = set == "both" ? std::vector<std::string>{"T", "Tplus"} : std::vector<std::string>{set};
  auto fx = load_fixture();
  for (const auto& s : sets) {
    if (s != "T" && s != "Tplus") throw Error(ErrorCode::BadParameter, "--set must be T, Tplus or both");
    auto sum = scan_N(s, qmin, qmax, threads);
    for (const auto& r : sum.records) std::cout << scan_record_json(r) << "\n";
    json tail{{"summary", true}, {"set", s}, {"qmin", qmin}, {"qmax", qmax}};
    tail["N"] = sum.N ? json(*sum.N) : json(nullptr);
    tail["regressions"] = sum.regressions;
    std::cout << tail.dump() << "\n";
    if (qmin <= 2) {
      (s == "T" ? fx.N_T : fx.N_Tplus) = sum.N;
      fx.qmax = std::max(fx.qmax, qmax);
    }
  }
  if (qmin <= 2) {
    fx.version = 1;
    save_fixture(fx);
  }
  return 0;
}

int cmd_power_scan(std::int64_t qmax, std::int64_t mmax, int fmax) {
  if (qmax > 1 << 16) throw Error(ErrorCode::TooLarge, "power-scan is limited to q <= 65536");
  std::int64_t pairs = 0, mismatches = 0;
  for (auto q : prime_powers(2, qmax)) {
    json rec{{"q", q}};
    std::vector<std::int64_t> surj, bad;
    for (std::int64_t m = 1; m <= mmax; ++m) {
      auto pc = power_surjective_check(q, m);
      ++pairs;
      if (pc.by_gcd) surj.push_back(m);
      if (pc.by_gcd != pc.by_enumeration) {
        bad.push_back(m);
        ++mismatches;
      }
    }
    rec["surjective_m"] = surj;
    rec["mismatches"] = bad;
    std::cout << rec.dump() << "\n";
  }
  std::vector<int> fs;
  for (const auto& r : all_cubes_char2_scan(fmax)) fs.push_back(r.f);
  std::cout << json{{"summary", true}, {"pairs", pairs}, {"mismatches", mismatches}, {"all_cubes_f", fs}}.dump() << "\n";
  return mismatches == 0 ? 0 : kDomain;
}

int cmd_curve_scan(const std::string& curve, std::int64_t qmin, std::int64_t qmax) {
  if (curve != "dimC" && curve != "dim2C") throw Error(ErrorCode::BadParameter, "--curve must be dimC or dim2C");
  if (qmax > kMaxScanQ) throw Error(ErrorCode::TooLarge, "curve-scan is limited to q <= " + std::to_string(kMaxScanQ));
  std::int64_t below = 0;
  for (auto q : prime_powers(qmin, qmax)) {
    auto [p, f] = *prime_power(q);
    auto k = FiniteField::make(p, f);
    json rec{{"q", q}, {"curve", curve}};
    auto a = curve_parameter(curve, *k);
    if (!a) {
      rec["a"] = nullptr;
      std::cout << rec.dump() << "\n";
      continue;
    }
    auto n = curve_points(curve, k, *a);
    rec["a"] = k->format(*a);
    rec["points"] = n;
    rec["half_q"] = 2 * n >= q;
    if (q >= 25 && 2 * n < q) ++below;
    std::cout << rec.dump() << "\n";
  }
  std::cout << json{{"summary", true}, {"curve", curve}, {"below_half_q_from_25", below}}.dump() << "\n";
  return below == 0 ? 0 : kDomain;
}

int cmd_build_ext(const RunConfig& cfg, const std::string& path, int samples) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadParameter, "cannot read plan file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto plan = parse_plan(ss.str());
  auto K = plan_field(plan);
  auto forms = build_extension_formula(plan);
  auto rep = verify_extension_formula(plan, K, samples, cfg.seed);
  json j;
  j["plan"] = json::parse(plan_json(plan));
  j["field"] = K->descriptor();
  j["existential"] = print(*forms.existential);
  j["universal"] = print(*forms.universal);
  j["report"] = json::parse(extension_report_json(rep));
  emit(cfg, j);
  return rep.ok() ? 0 : kDomain;
}

int cmd_eval(const RunConfig& cfg, const std::string& text, const std::vector<std::string>& binds,
             const StrategyConfig& strategy, bool registry) {
  auto K = open_field(cfg);
  auto phi = parse_formula(text);
  Env env;
  for (const auto& b : binds) {
    auto eq = b.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::BadParameter, "--bind expects name=value");
    env[b.substr(0, eq)] = K->parse(b.substr(eq + 1));
  }
  auto r = eval(phi, env, *K, strategy, registry ? &default_registry() : nullptr);
  json j;
  j["verdict"] = std::string(verdict_name(r.verdict));
  json w = json::object();
  for (const auto& [name, value] : r.witnesses) w[name] = K->format(value);
  j["witnesses"] = w;
  j["strategy"] = r.strategy_log;
  emit(cfg, j);
  return r.verdict == Verdict::True ? 0 : r.verdict == Verdict::False ? 1 : kUnknown;
}

int cmd_selftest(const RunConfig& cfg, const std::vector<std::string>& only, bool full) {
  auto scale = full ? SuiteScale::full() : SuiteScale::reduced();
  bool ok = true;
  std::int64_t checks = 0;
  for (const auto& name : only.empty() ? suite_names() : only) {
    auto r = run_suite(name, scale, cfg.seed);
    ok = ok && r.ok();
    checks += r.checks;
    std::cout << suite_result_json(r) << "\n";
  }
  std::cout << json{{"summary", true}, {"checks", checks}, {"ok", ok}}.dump() << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform definitions of valuation rings: decide, witness, scan, build-ext, eval, selftest"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--cache", cfg.cache, "Cache directory (overrides VALRING_CACHE)");
  app.add_option("--output", cfg.output, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", cfg.seed, "Sample seed");

  auto field_opts = [&](CLI::App* sub) {
    sub->add_option("--field", cfg.field, "Field descriptor")->required();
    sub->add_option("--precision", cfg.precision, "Working precision in uniformizer units");
  };

  std::string literal, verify;
  auto decide_opts = [&](CLI::App* sub) {
    field_opts(sub);
    sub->add_option("--method", cfg.method)->check(CLI::IsMember({"main", "main2"}));
    sub->add_option("--ell-mode", cfg.ell_mode)->check(CLI::IsMember({"per-field", "uniform"}));
    sub->add_option("--branch", cfg.branch)->check(CLI::IsMember({"auto", "sumset", "cd"}));
    sub->add_option("--verify", verify, "Re-check a certificate for x instead of deciding");
    sub->add_option("x", literal, "Element literal")->required();
  };
  auto* decide = app.add_subcommand("decide", "Decide membership in the valuation ring");
  decide_opts(decide);
  auto* witness = app.add_subcommand("witness", "decide with the full certificate");
  decide_opts(witness);

  auto* scan = app.add_subcommand("scan", "Finite-field scans (JSONL)");
  scan->require_subcommand(1);
  std::string set = "both", curve = "dimC";
  std::int64_t qmin = 2, qmax = 101, mmax = 60;
  int threads = 4, fmax = 12;
  auto* nscan = scan->add_subcommand("n-scan", "Cauchy-Davenport coverage and the constant N");
  nscan->add_option("--set", set)->check(CLI::IsMember({"T", "Tplus", "both"}));
  nscan->add_option("--qmin", qmin);
  nscan->add_option("--qmax", qmax);
  nscan->add_option("--threads", threads)->check(CLI::Range(1, 256));
  auto* pscan = scan->add_subcommand("power-scan", "Surjectivity of x -> x^m: gcd rule vs enumeration");
  pscan->add_option("--qmax", qmax);
  pscan->add_option("--mmax", mmax);
  pscan->add_option("--fmax", fmax, "Largest f for the all-cubes scan in characteristic 2");
  auto* cscan = scan->add_subcommand("curve-scan", "Point counts on the witness curves");
  cscan->add_option("--curve", curve)->check(CLI::IsMember({"dimC", "dim2C"}));
  cscan->add_option("--qmin", qmin);
  cscan->add_option("--qmax", qmax);

  auto* build = app.add_subcommand("build-ext", "Build and verify the formulas for a finite extension");
  std::string plan_path;
  int samples = 200;
  build->add_option("plan", plan_path, "Plan JSON file")->required();
  build->add_option("--samples", samples);
  build->add_option("--seed", cfg.seed, "Sample seed");

  auto* ev = app.add_subcommand("eval", "Evaluate a formula");
  field_opts(ev);
  std::string formula;
  std::vector<std::string> binds;
  StrategyConfig strategy;
  bool no_registry = false;
  ev->add_option("formula", formula)->required();
  ev->add_option("--bind", binds, "name=value");
  ev->add_option("--depth", strategy.depth);
  ev->add_option("--vmax", strategy.vmax);
  ev->add_option("--budget", strategy.budget);
  ev->add_flag("--no-registry", no_registry, "Disable the registered deciders");

  auto* st = app.add_subcommand("selftest", "Run the invariant suites");
  std::vector<std::string> suites;
  bool full = false;
  st->add_option("--suite", suites)->check(CLI::IsMember(suite_names()));
  st->add_flag("--full", full, "Acceptance-scale sample counts");
  st->add_option("--seed", cfg.seed, "Sample seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }
  if (!cfg.cache.empty()) setenv("VALRING_CACHE", cfg.cache.c_str(), 1);

  try {
    if (*decide) return cmd_decide(cfg, literal, false, verify);
    if (*witness) return cmd_decide(cfg, literal, true, verify);
    if (*nscan) return cmd_nscan(set, qmin, qmax, threads);
    if (*pscan) return cmd_power_scan(qmax, mmax, fmax);
    if (*cscan) return cmd_curve_scan(curve, qmin, qmax);
    if (*build) return cmd_build_ext(cfg, plan_path, samples);
    if (*ev) return cmd_eval(cfg, formula, binds, strategy, !no_registry);
    if (*st) return cmd_selftest(cfg, suites, full);
  } catch (const Error& e) {
    std::cout << json{{"error", std::string(error_code_name(e.code()))}, {"message", e.what()}}.dump() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cout << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return kDomain;
  }
  return kUsage;
}
