#include <algorithm>

#include "valring/error.hpp"
#include "valring/formula.hpp"
#include "valring/hensel.hpp"
#include "valring/padic_field.hpp"
#include "valring/predicates.hpp"

namespace valring {

namespace {

// --- integer polynomials in named variables -----------------------------------

constexpr std::size_t kMaxPolyTerms = 4096;

void add_into(IntPoly& acc, const Monomial& m, const Integer& c) {
  auto [it, fresh] = acc.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) acc.erase(it);
  } else if (c == 0) {
    acc.erase(it);
  }
}

std::optional<IntPoly> poly_mul(const IntPoly& a, const IntPoly& b) {
  if (a.size() * b.size() > kMaxPolyTerms * 4) return std::nullopt;
  IntPoly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Monomial m = ma;
      for (const auto& [v, e] : mb) m[v] += e;
      add_into(out, m, ca * cb);
    }
  }
  if (out.size() > kMaxPolyTerms) return std::nullopt;
  return out;
}

std::optional<IntPoly> to_poly(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
      return IntPoly{{Monomial{{t.name, 1}}, Integer(1)}};
    case Term::Kind::Int: {
      IntPoly p;
      if (t.value != 0) p[Monomial{}] = t.value;
      return p;
    }
    case Term::Kind::Neg: {
      auto p = to_poly(*t.a);
      if (!p) return std::nullopt;
      for (auto& [m, c] : *p) c = -c;
      return p;
    }
    case Term::Kind::Add:
    case Term::Kind::Sub: {
      auto a = to_poly(*t.a), b = to_poly(*t.b);
      if (!a || !b) return std::nullopt;
      for (const auto& [m, c] : *b) add_into(*a, m, t.kind == Term::Kind::Add ? c : Integer(-c));
      if (a->size() > kMaxPolyTerms) return std::nullopt;
      return a;
    }
    case Term::Kind::Mul: {
      auto a = to_poly(*t.a), b = to_poly(*t.b);
      if (!a || !b) return std::nullopt;
      return poly_mul(*a, *b);
    }
    case Term::Kind::Pow: {
      auto base = to_poly(*t.a);
      if (!base) return std::nullopt;
      if (base->size() == 1) {
        Monomial m = base->begin()->first;
        const Integer c = base->begin()->second;
        for (auto& [v, e] : m) e *= t.exponent;
        IntPoly out;
        Integer cn;
        if (t.exponent > 4096 && abs(c) != 1) return std::nullopt;
        mpz_pow_ui(cn.get_mpz_t(), c.get_mpz_t(), t.exponent);
        out[m] = cn;
        return out;
      }
      if (t.exponent > 64) return std::nullopt;
      IntPoly acc{{Monomial{}, Integer(1)}};
      for (std::uint64_t i = 0; i < t.exponent; ++i) {
        auto next = poly_mul(acc, *base);
        if (!next) return std::nullopt;
        acc = std::move(*next);
      }
      return acc;
    }
  }
  return std::nullopt;
}

std::optional<IntPoly> eq_poly(const Formula& f) { return equation_poly(f); }

Element eval_monomial(const Monomial& m, const std::string& skip, const Env& env, const Field& K) {
  Element acc = K.one();
  for (const auto& [v, e] : m) {
    if (v == skip) continue;
    acc = acc * K.pow(env.at(v), static_cast<std::int64_t>(e));
  }
  return acc;
}

// Coefficients in z of p with every other variable taken from env.
std::optional<ElemPoly> univariate(const IntPoly& p, const std::string& z, const Env& env, const Field& K) {
  std::uint64_t deg = 0;
  for (const auto& [m, c] : p) {
    for (const auto& [v, e] : m) {
      if (v != z && !env.count(v)) return std::nullopt;
    }
    auto it = m.find(z);
    if (it != m.end()) deg = std::max(deg, it->second);
  }
  if (deg > 256) return std::nullopt;
  ElemPoly out(deg + 1, K.zero());
  for (const auto& [m, c] : p) {
    auto it = m.find(z);
    std::uint64_t e = it == m.end() ? 0 : it->second;
    out[e] = out[e] + K.from_integer(c) * eval_monomial(m, z, env, K);
  }
  return out;
}

bool mentions(const IntPoly& p, const std::string& v) {
  return std::any_of(p.begin(), p.end(), [&](const auto& mc) { return mc.first.count(v) > 0; });
}

// --- shape matching ---------------------------------------------------------------

class Matcher {
 public:
  bool formula(const Formula& t, const Formula& i) {
    if (t.kind != i.kind) return false;
    switch (t.kind) {
      case Formula::Kind::Eq:
        if (term(*t.lhs, *i.lhs) && term(*t.rhs, *i.rhs)) break;
        return false;
      case Formula::Kind::Pn:
        if (t.n == i.n && term(*t.lhs, *i.lhs)) break;
        return false;
      case Formula::Kind::PAS2:
        if (term(*t.lhs, *i.lhs)) break;
        return false;
      case Formula::Kind::Not:
        if (formula(*t.body(), *i.body())) break;
        return false;
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        bound_.emplace_back(t.var, i.var);
        bool ok = formula(*t.body(), *i.body());
        bound_.pop_back();
        if (ok) break;
        return false;
      }
      case Formula::Kind::And:
      case Formula::Kind::Or:
        if (t.children.size() != i.children.size()) return false;
        if (permuted(t, i, 0, std::vector<bool>(i.children.size(), false))) break;
        return false;
    }
    match.nodes[&t] = &i;
    return true;
  }

  ShapeMatch match;

 private:
  bool permuted(const Formula& t, const Formula& i, std::size_t k, std::vector<bool> used) {
    if (k == t.children.size()) return true;
    for (std::size_t j = 0; j < i.children.size(); ++j) {
      if (used[j]) continue;
      Matcher trial = *this;
      if (!trial.formula(*t.children[k], *i.children[j])) continue;
      used[j] = true;
      Matcher saved = *this;
      *this = trial;
      if (permuted(t, i, k + 1, used)) return true;
      *this = saved;
      used[j] = false;
    }
    return false;
  }

  // Index of the innermost binder for a name on one side, or -1.
  int binder(const std::string& name, bool tmpl) const {
    for (int k = static_cast<int>(bound_.size()) - 1; k >= 0; --k) {
      if ((tmpl ? bound_[k].first : bound_[k].second) == name) return k;
    }
    return -1;
  }

  bool term(const Term& t, const Term& i) {
    if (t.kind != i.kind) return false;
    switch (t.kind) {
      case Term::Kind::Var: {
        int bt = binder(t.name, true), bi = binder(i.name, false);
        if (bt != bi) return false;
        if (bt >= 0) return true;
        auto it = match.free_names.find(t.name);
        if (it != match.free_names.end()) return it->second == i.name;
        for (const auto& [k, v] : match.free_names) {
          if (v == i.name) return false;
        }
        match.free_names[t.name] = i.name;
        return true;
      }
      case Term::Kind::Int:
        return t.value == i.value;
      case Term::Kind::Neg:
        return term(*t.a, *i.a);
      case Term::Kind::Pow:
        return t.exponent == i.exponent && term(*t.a, *i.a);
      default:
        return term(*t.a, *i.a) && term(*t.b, *i.b);
    }
  }

  std::vector<std::pair<std::string, std::string>> bound_;
};

// --- evaluator ----------------------------------------------------------------------

struct Outcome {
  Verdict verdict = Verdict::Unknown;
  Env witnesses;
};

Verdict kleene_not(Verdict v) {
  if (v == Verdict::True) return Verdict::False;
  if (v == Verdict::False) return Verdict::True;
  return Verdict::Unknown;
}

class BudgetExhausted {};

class Evaluator {
 public:
  Evaluator(const Field& K, const StrategyConfig& config, const Registry* registry, int depth)
      : K_(K), config_(config), registry_(registry), depth_(depth) {}

  std::vector<std::string> log;

  Outcome node(const FormulaPtr& f, const Env& env) {
    if (registry_ && config_.use_registry) {
      if (auto r = try_registry(f, env)) return *r;
    }
    switch (f->kind) {
      case Formula::Kind::Eq:
      case Formula::Kind::Pn:
      case Formula::Kind::PAS2:
        return Outcome{atom(*f, env), {}};
      case Formula::Kind::Not:
        return Outcome{kleene_not(node(f->body(), env).verdict), {}};
      case Formula::Kind::And: {
        Outcome out{Verdict::True, {}};
        for (const auto& c : f->children) {
          Outcome o = node(c, env);
          if (o.verdict == Verdict::False) return Outcome{Verdict::False, {}};
          if (o.verdict == Verdict::Unknown) out.verdict = Verdict::Unknown;
          out.witnesses.insert(o.witnesses.begin(), o.witnesses.end());
        }
        if (out.verdict == Verdict::Unknown) out.witnesses.clear();
        return out;
      }
      case Formula::Kind::Or: {
        bool unknown = false;
        for (const auto& c : f->children) {
          Outcome o = node(c, env);
          if (o.verdict == Verdict::True) return o;
          if (o.verdict == Verdict::Unknown) unknown = true;
        }
        return Outcome{unknown ? Verdict::Unknown : Verdict::False, {}};
      }
      case Formula::Kind::Exists:
        return exists(f, env);
      case Formula::Kind::Forall:
        return forall(f, env);
    }
    return {};
  }

 private:
  void note(const std::string& s) {
    if (std::find(log.begin(), log.end(), s) == log.end()) log.push_back(s);
  }

  void spend() {
    if (++spent_ > config_.budget) throw BudgetExhausted{};
  }

  Verdict atom(const Formula& f, const Env& env) {
    try {
      if (f.kind == Formula::Kind::Eq) {
        Element d = eval_term(*f.lhs, env, K_) - eval_term(*f.rhs, env, K_);
        if (d.is_zero()) return d.is_exact() ? Verdict::True : Verdict::Unknown;
        if (!d.is_exact()) {
          // Known to be nonzero only if a digit below the precision survives.
          d.val();
        }
        return Verdict::False;
      }
      Element x = eval_term(*f.lhs, env, K_);
      bool v = f.kind == Formula::Kind::Pn ? is_nth_power(x, f.n, false).value : is_artin_schreier(x, false).value;
      return v ? Verdict::True : Verdict::False;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MissingBinding) throw;
      return Verdict::Unknown;
    }
  }

  // --- registry -------------------------------------------------------------------

  std::optional<Outcome> try_registry(const FormulaPtr& f, const Env& env) {
    if (f->kind != Formula::Kind::Exists && f->kind != Formula::Kind::Forall && f->kind != Formula::Kind::Or &&
        f->kind != Formula::Kind::And) {
      return std::nullopt;
    }
    auto fv = free_vars(*f);
    if (fv.size() != 1 || !env.count(*fv.begin())) return std::nullopt;
    const FormulaPtr flat = flatten(f);
    for (const auto& shape : registry_->shapes()) {
      for (const auto& tmpl : shape.templates(*flat, K_)) {
        Matcher m;
        if (!m.formula(*tmpl, *flat)) continue;
        const Element& x = env.at(*fv.begin());
        ShapeDecision d;
        try {
          d = shape.decide(tmpl, x);
        } catch (const Error&) {
          continue;
        }
        if (d.verdict == Verdict::Unknown) continue;
        note("registered:" + shape.name);
        if (!d.strategy.empty()) note(d.strategy);
        if (!d.certify) return Outcome{d.verdict, {}};
        auto input = m.match.nodes.find(d.certify);
        if (input == m.match.nodes.end()) continue;
        // Pair the binder chains of template and input.
        const Formula* t = d.certify;
        const Formula* i = input->second;
        Env inner = env;
        Env named;
        while (t->kind == Formula::Kind::Exists || t->kind == Formula::Kind::Forall) {
          auto w = d.witnesses.find(t->var);
          if (w == d.witnesses.end()) break;
          inner[i->var] = w->second;
          named[i->var] = w->second;
          t = t->body().get();
          i = i->body().get();
        }
        Evaluator check(K_, config_, nullptr, depth_);
        Outcome o;
        try {
          o = check.node(std::make_shared<const Formula>(*i), inner);
        } catch (const BudgetExhausted&) {
          continue;
        }
        for (const auto& s : check.log) note(s);
        if (o.verdict != d.verdict) continue;
        named.insert(o.witnesses.begin(), o.witnesses.end());
        if (d.verdict == Verdict::False) named.clear();
        return Outcome{d.verdict, std::move(named)};
      }
    }
    return std::nullopt;
  }

  // --- quantifiers -----------------------------------------------------------------

  Outcome exists(const FormulaPtr& f, const Env& env) {
    std::vector<std::string> vars;
    const Formula* body = f.get();
    FormulaPtr body_ptr = f;
    while (body->kind == Formula::Kind::Exists) {
      vars.push_back(body->var);
      body_ptr = body->body();
      body = body_ptr.get();
    }
    // Shadowed duplicates: only the innermost binder matters.
    std::vector<std::string> unique;
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      if (std::find(unique.begin(), unique.end(), *it) == unique.end()) unique.insert(unique.begin(), *it);
    }
    auto fv = free_vars(*body_ptr);
    std::vector<std::string> live;
    for (const auto& v : unique) {
      if (fv.count(v)) live.push_back(v);
    }
    Env inner = env;
    for (const auto& v : unique) inner.erase(v);
    std::vector<FormulaPtr> conjuncts;
    FormulaPtr flat = flatten(body_ptr);
    if (flat->kind == Formula::Kind::And) conjuncts = flat->children;
    else conjuncts = {flat};
    Outcome o = solve(live, conjuncts, inner, {});
    if (o.verdict == Verdict::True) {
      for (const auto& v : unique) {
        if (!o.witnesses.count(v)) o.witnesses[v] = K_.zero();
      }
    }
    return o;
  }

  Outcome forall(const FormulaPtr& f, const Env& env) {
    const Formula& body = *f->body();
    if (!free_vars(body).count(f->var)) {
      Env inner = env;
      inner.erase(f->var);
      return Outcome{node(f->body(), inner).verdict, {}};
    }
    std::vector<std::string> vars;
    FormulaPtr inner = f;
    while (inner->kind == Formula::Kind::Forall) {
      vars.push_back(inner->var);
      inner = inner->body();
    }
    if (inner->kind == Formula::Kind::Eq) {
      if (auto p = eq_poly(*inner); p && p->empty()) {
        note("polynomial-identity");
        return Outcome{Verdict::True, {}};
      }
    }
    // A counterexample to the body certifies falsity.
    FormulaPtr negated = inner->kind == Formula::Kind::Not ? inner->body() : fm::lnot(inner);
    Outcome o = exists(fm::exists(vars, negated), env);
    if (o.verdict == Verdict::Unknown) return Outcome{Verdict::Unknown, {}};
    note("negation-duality");
    return Outcome{o.verdict == Verdict::True ? Verdict::False : Verdict::True, {}};
  }

  // Kleene conjunction of conjuncts that mention no unbound variable;
  // `done` marks conjuncts already certified by construction.
  Verdict closed_part(const std::vector<FormulaPtr>& cs, const std::vector<std::string>& unbound, const Env& env,
                      const std::set<const Formula*>& done, Env& witnesses) {
    Verdict out = Verdict::True;
    for (const auto& c : cs) {
      if (done.count(c.get())) continue;
      auto fv = free_vars(*c);
      bool open = std::any_of(unbound.begin(), unbound.end(), [&](const std::string& v) { return fv.count(v) > 0; });
      if (open) continue;
      Outcome o = node(c, env);
      if (o.verdict == Verdict::False) return Verdict::False;
      if (o.verdict == Verdict::Unknown) out = Verdict::Unknown;
      witnesses.insert(o.witnesses.begin(), o.witnesses.end());
    }
    return out;
  }

  Outcome solve(std::vector<std::string> unbound, const std::vector<FormulaPtr>& cs, Env env,
                std::set<const Formula*> done) {
    Env found;
    Verdict closed = closed_part(cs, unbound, env, done, found);
    if (closed == Verdict::False) return Outcome{Verdict::False, {}};
    if (unbound.empty()) {
      if (closed == Verdict::True) return Outcome{Verdict::True, std::move(found)};
      return Outcome{Verdict::Unknown, {}};
    }
    auto bind = [&](const std::string& z, const Element& value, std::set<const Formula*> d) {
      Env e = env;
      e[z] = value;
      std::vector<std::string> rest;
      for (const auto& v : unbound) {
        if (v != z) rest.push_back(v);
      }
      Outcome o = solve(rest, cs, e, std::move(d));
      if (o.verdict == Verdict::True) o.witnesses[z] = value;
      return o;
    };

    // Linear elimination.
    for (const auto& c : cs) {
      if (c->kind != Formula::Kind::Eq || done.count(c.get())) continue;
      auto p = eq_poly(*c);
      if (!p) continue;
      for (const auto& z : unbound) {
        if (!mentions(*p, z)) continue;
        auto u = univariate(*p, z, env, K_);
        if (!u || u->size() != 2) continue;
        try {
          note("linear-elimination");
          if ((*u)[1].is_zero()) {
            if (!(*u)[1].is_exact()) continue;
            if ((*u)[0].is_zero()) continue;
            // a z + b = 0 with a = 0 != b has no solution.
            if (!(*u)[0].is_exact()) (*u)[0].val();
            return Outcome{Verdict::False, {}};
          }
          Element value = -(*u)[0] * (*u)[1].inv();
          auto d = done;
          // Exact coefficients determine the unique root even when its
          // expansion is truncated.
          if (value.is_exact() || ((*u)[0].is_exact() && (*u)[1].is_exact())) d.insert(c.get());
          return bind(z, value, d);
        } catch (const Error&) {
          continue;
        }
      }
    }

    // Disjunctions distribute over the existential block.
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (cs[k]->kind != Formula::Kind::Or || done.count(cs[k].get())) continue;
      auto fv = free_vars(*cs[k]);
      if (std::none_of(unbound.begin(), unbound.end(), [&](const std::string& v) { return fv.count(v) > 0; })) continue;
      bool unknown = false;
      for (const auto& alt : cs[k]->children) {
        std::vector<FormulaPtr> next = cs;
        FormulaPtr flat = flatten(alt);
        next.erase(next.begin() + static_cast<std::ptrdiff_t>(k));
        if (flat->kind == Formula::Kind::And) next.insert(next.end(), flat->children.begin(), flat->children.end());
        else next.push_back(flat);
        Outcome o = solve(unbound, next, env, done);
        if (o.verdict == Verdict::True) return o;
        if (o.verdict == Verdict::Unknown) unknown = true;
      }
      return Outcome{unknown ? Verdict::Unknown : Verdict::False, {}};
    }

    // Roots of a polynomial equation in one unbound variable.
    for (const auto& c : cs) {
      if (c->kind != Formula::Kind::Eq || done.count(c.get())) continue;
      auto p = eq_poly(*c);
      if (!p) continue;
      for (const auto& z : unbound) {
        if (!mentions(*p, z)) continue;
        auto u = univariate(*p, z, env, K_);
        if (!u || u->size() < 3) continue;
        note("hensel-root");
        bool unknown = true;
        for (const auto& [root, exact] : roots(*u)) {
          auto d = done;
          d.insert(c.get());
          Outcome o = bind(z, root, d);
          if (o.verdict == Verdict::True) return o;
          (void)exact;
        }
        if (K_.kind() == FieldKind::Finite) unknown = false;
        return Outcome{unknown ? Verdict::Unknown : Verdict::False, {}};
      }
    }

    // Residue-class enumeration of the first unbound variable.
    note("residue-enumeration");
    const std::string z = unbound.front();
    bool unknown = false;
    for (const auto& cand : candidates()) {
      spend();
      Outcome o = bind(z, cand, done);
      if (o.verdict == Verdict::True) return o;
      if (o.verdict == Verdict::Unknown) unknown = true;
    }
    // Over a finite field the enumeration is exhaustive.
    if (K_.kind() == FieldKind::Finite && !unknown) return Outcome{Verdict::False, {}};
    return Outcome{Verdict::Unknown, {}};
  }

  // Candidates in search order: 0, then valuations 0, 1, -1, ..., with
  // residue digits in the canonical order of k.
  std::vector<Element> candidates() {
    std::vector<Element> out{K_.zero()};
    const auto& k = K_.residue_field();
    if (K_.kind() == FieldKind::Finite) {
      for (std::int64_t c = 1; c < k->q(); ++c) out.push_back(K_.lift(FqElem{k, static_cast<FiniteField::Code>(c)}));
      return out;
    }
    const Element pi = K_.uniformizer();
    std::vector<std::int64_t> vals{0};
    for (int v = 1; v <= config_.vmax; ++v) {
      vals.push_back(v);
      vals.push_back(-v);
    }
    for (std::int64_t v : vals) {
      const Element scale = K_.pow(pi, v);
      std::vector<Element> units;
      for (std::int64_t c = 1; c < k->q(); ++c) units.push_back(K_.lift(FqElem{k, static_cast<FiniteField::Code>(c)}));
      for (int d = 1; d < depth_; ++d) {
        std::vector<Element> next;
        const Element pd = K_.pow(pi, d);
        for (const auto& u : units) {
          for (std::int64_t c = 0; c < k->q(); ++c) {
            next.push_back(u + K_.lift(FqElem{k, static_cast<FiniteField::Code>(c)}) * pd);
          }
        }
        units = std::move(next);
      }
      for (const auto& u : units) out.push_back(u * scale);
    }
    return out;
  }

  // Exact roots and Hensel roots reachable from the candidates.
  std::vector<std::pair<Element, bool>> roots(const ElemPoly& f) {
    std::vector<std::pair<Element, bool>> out;
    auto known = [&](const Element& r) {
      for (const auto& [s, ex] : out) {
        Element d = drop_precision(s) - drop_precision(r);
        if (d.is_zero()) return true;
        if (K_.is_valued()) {
          auto ps = K_.precision_of(s), pr = K_.precision_of(r);
          std::int64_t lim = std::min(ps.value_or(K_.precision()), pr.value_or(K_.precision()));
          if (d.val().in_units(K_.ramification()) >= lim) return true;
        }
      }
      return false;
    };
    for (const auto& a : candidates()) {
      spend();
      try {
        Element fa = poly_eval(f, a);
        if (fa.is_zero()) {
          if (!known(a)) out.emplace_back(a, true);
          continue;
        }
        if (!K_.is_valued()) continue;
        Element r = hensel_root({f, a});
        if (!known(r)) out.emplace_back(r, r.is_exact());
      } catch (const Error&) {
      }
    }
    return out;
  }

  const Field& K_;
  const StrategyConfig& config_;
  const Registry* registry_;
  int depth_;
  std::size_t spent_ = 0;
};

}  // namespace

std::optional<IntPoly> equation_poly(const Formula& f) {
  if (f.kind != Formula::Kind::Eq) return std::nullopt;
  auto a = to_poly(*f.lhs), b = to_poly(*f.rhs);
  if (!a || !b) return std::nullopt;
  for (const auto& [m, c] : *b) add_into(*a, m, -c);
  return a;
}

Element eval_term(const Term& t, const Env& env, const Field& K) {
  switch (t.kind) {
    case Term::Kind::Var: {
      auto it = env.find(t.name);
      if (it == env.end()) throw Error(ErrorCode::MissingBinding, "no value for '" + t.name + "'");
      return it->second;
    }
    case Term::Kind::Int:
      return K.from_integer(t.value);
    case Term::Kind::Add:
      return eval_term(*t.a, env, K) + eval_term(*t.b, env, K);
    case Term::Kind::Sub:
      return eval_term(*t.a, env, K) - eval_term(*t.b, env, K);
    case Term::Kind::Mul:
      return eval_term(*t.a, env, K) * eval_term(*t.b, env, K);
    case Term::Kind::Neg:
      return -eval_term(*t.a, env, K);
    case Term::Kind::Pow:
      return K.pow(eval_term(*t.a, env, K), static_cast<std::int64_t>(t.exponent));
  }
  throw Error(ErrorCode::BadParameter, "bad term");
}

bool eval_qf(const Formula& f, const Env& env, const Field& K) {
  switch (f.kind) {
    case Formula::Kind::Eq: {
      Element d = eval_term(*f.lhs, env, K) - eval_term(*f.rhs, env, K);
      if (d.is_zero() && !d.is_exact()) throw Error(ErrorCode::NotExact, "equation undecided at working precision");
      return d.is_zero();
    }
    case Formula::Kind::Pn:
      return is_nth_power(eval_term(*f.lhs, env, K), f.n, false).value;
    case Formula::Kind::PAS2:
      return is_artin_schreier(eval_term(*f.lhs, env, K), false).value;
    case Formula::Kind::Not:
      return !eval_qf(*f.body(), env, K);
    case Formula::Kind::And:
      return std::all_of(f.children.begin(), f.children.end(), [&](const FormulaPtr& c) { return eval_qf(*c, env, K); });
    case Formula::Kind::Or:
      return std::any_of(f.children.begin(), f.children.end(), [&](const FormulaPtr& c) { return eval_qf(*c, env, K); });
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      throw Error(ErrorCode::BadParameter, "eval_qf needs a quantifier-free formula");
  }
  return false;
}

std::optional<ShapeMatch> match_shape(const Formula& tmpl, const Formula& input) {
  Matcher m;
  if (!m.formula(tmpl, input)) return std::nullopt;
  return m.match;
}

EvalResult eval(const FormulaPtr& phi, const Env& env, const Field& K, const StrategyConfig& config,
                const Registry* registry) {
  for (const auto& v : free_vars(*phi)) {
    if (!env.count(v)) throw Error(ErrorCode::MissingBinding, "no value for free variable '" + v + "'");
  }
  EvalResult result;
  // Iterative deepening keeps verdicts stable as the depth grows.
  for (int d = 1; d <= std::max(1, config.depth); ++d) {
    Evaluator ev(K, config, registry, d);
    Outcome o;
    try {
      o = ev.node(phi, env);
    } catch (const BudgetExhausted&) {
      o = Outcome{};
      ev.log.push_back("budget-exhausted");
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MissingBinding) throw;
      o = Outcome{};
    }
    for (const auto& s : ev.log) {
      if (std::find(result.strategy_log.begin(), result.strategy_log.end(), s) == result.strategy_log.end()) {
        result.strategy_log.push_back(s);
      }
    }
    if (o.verdict != Verdict::Unknown) {
      result.verdict = o.verdict;
      if (o.verdict == Verdict::True) result.witnesses = std::move(o.witnesses);
      return result;
    }
  }
  return result;
}

}  // namespace valring
