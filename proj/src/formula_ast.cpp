#include <algorithm>

#include "valring/error.hpp"
#include "valring/formula.hpp"

namespace valring {

namespace fm {

namespace {
TermPtr node(Term t) { return std::make_shared<const Term>(std::move(t)); }
FormulaPtr node(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

TermPtr binary(Term::Kind k, TermPtr a, TermPtr b) {
  Term t;
  t.kind = k;
  t.a = std::move(a);
  t.b = std::move(b);
  return node(std::move(t));
}

FormulaPtr nary(Formula::Kind k, std::vector<FormulaPtr> parts) {
  if (parts.size() == 1) return parts.front();
  Formula f;
  f.kind = k;
  for (auto& p : parts) {
    if (p->kind == k) {
      f.children.insert(f.children.end(), p->children.begin(), p->children.end());
    } else {
      f.children.push_back(std::move(p));
    }
  }
  return node(std::move(f));
}

FormulaPtr quant(Formula::Kind k, std::string v, FormulaPtr body) {
  Formula f;
  f.kind = k;
  f.var = std::move(v);
  f.children = {std::move(body)};
  return node(std::move(f));
}
}  // namespace

TermPtr var(std::string name) {
  Term t;
  t.kind = Term::Kind::Var;
  t.name = std::move(name);
  return node(std::move(t));
}
TermPtr lit(const Integer& v) {
  Term t;
  t.kind = Term::Kind::Int;
  t.value = v;
  return node(std::move(t));
}
TermPtr add(TermPtr a, TermPtr b) { return binary(Term::Kind::Add, std::move(a), std::move(b)); }
TermPtr sub(TermPtr a, TermPtr b) { return binary(Term::Kind::Sub, std::move(a), std::move(b)); }
TermPtr mul(TermPtr a, TermPtr b) { return binary(Term::Kind::Mul, std::move(a), std::move(b)); }
TermPtr neg(TermPtr a) {
  Term t;
  t.kind = Term::Kind::Neg;
  t.a = std::move(a);
  return node(std::move(t));
}
TermPtr pow(TermPtr a, std::uint64_t n) {
  Term t;
  t.kind = Term::Kind::Pow;
  t.a = std::move(a);
  t.exponent = n;
  return node(std::move(t));
}

FormulaPtr eq(TermPtr a, TermPtr b) {
  Formula f;
  f.kind = Formula::Kind::Eq;
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return node(std::move(f));
}
FormulaPtr pn(int n, TermPtr t) {
  if (n < 2) throw Error(ErrorCode::BadParameter, "P_n needs n >= 2");
  Formula f;
  f.kind = Formula::Kind::Pn;
  f.n = n;
  f.lhs = std::move(t);
  return node(std::move(f));
}
FormulaPtr pas2(TermPtr t) {
  Formula f;
  f.kind = Formula::Kind::PAS2;
  f.lhs = std::move(t);
  return node(std::move(f));
}
FormulaPtr lnot(FormulaPtr g) {
  Formula f;
  f.kind = Formula::Kind::Not;
  f.children = {std::move(g)};
  return node(std::move(f));
}
FormulaPtr conj(std::vector<FormulaPtr> parts) { return nary(Formula::Kind::And, std::move(parts)); }
FormulaPtr disj(std::vector<FormulaPtr> parts) { return nary(Formula::Kind::Or, std::move(parts)); }
FormulaPtr exists(std::string v, FormulaPtr body) { return quant(Formula::Kind::Exists, std::move(v), std::move(body)); }
FormulaPtr forall(std::string v, FormulaPtr body) { return quant(Formula::Kind::Forall, std::move(v), std::move(body)); }
FormulaPtr exists(const std::vector<std::string>& vs, FormulaPtr body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = exists(*it, std::move(body));
  return body;
}
FormulaPtr forall(const std::vector<std::string>& vs, FormulaPtr body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = forall(*it, std::move(body));
  return body;
}

}  // namespace fm

bool equal(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Term::Kind::Var:
      return a.name == b.name;
    case Term::Kind::Int:
      return a.value == b.value;
    case Term::Kind::Neg:
      return equal(*a.a, *b.a);
    case Term::Kind::Pow:
      return a.exponent == b.exponent && equal(*a.a, *b.a);
    default:
      return equal(*a.a, *b.a) && equal(*a.b, *b.b);
  }
}

bool equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Formula::Kind::Eq:
      return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    case Formula::Kind::Pn:
      return a.n == b.n && equal(*a.lhs, *b.lhs);
    case Formula::Kind::PAS2:
      return equal(*a.lhs, *b.lhs);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      if (a.var != b.var) return false;
      [[fallthrough]];
    default:
      if (a.children.size() != b.children.size()) return false;
      for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!equal(*a.children[i], *b.children[i])) return false;
      }
      return true;
  }
}

// --- printing ------------------------------------------------------------------

namespace {

// Term precedence: 1 sum, 2 product, 3 unary, 4 power, 5 atom.
int term_level(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Add:
    case Term::Kind::Sub:
      return 1;
    case Term::Kind::Mul:
      return 2;
    case Term::Kind::Neg:
      return 3;
    case Term::Kind::Pow:
      return 4;
    case Term::Kind::Int:
      return t.value < 0 ? 3 : 5;
    case Term::Kind::Var:
      return 5;
  }
  return 5;
}

std::string print_at(const Term& t, int need) {
  std::string s;
  switch (t.kind) {
    case Term::Kind::Var:
      s = t.name;
      break;
    case Term::Kind::Int:
      s = t.value.get_str();
      break;
    case Term::Kind::Add:
      s = print_at(*t.a, 1) + " + " + print_at(*t.b, 2);
      break;
    case Term::Kind::Sub:
      s = print_at(*t.a, 1) + " - " + print_at(*t.b, 2);
      break;
    case Term::Kind::Mul:
      s = print_at(*t.a, 2) + "*" + print_at(*t.b, 3);
      break;
    case Term::Kind::Neg:
      // "-3" would read back as a literal.
      if (t.a->kind == Term::Kind::Int && t.a->value >= 0) s = "-(" + t.a->value.get_str() + ")";
      else s = "-" + print_at(*t.a, 3);
      break;
    case Term::Kind::Pow:
      s = print_at(*t.a, 5) + "^" + std::to_string(t.exponent);
      break;
  }
  return term_level(t) < need ? "(" + s + ")" : s;
}

// Formula precedence: 0 quantifier, 1 disjunction, 2 conjunction, 3 literal.
int formula_level(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      return 0;
    case Formula::Kind::Or:
      return 1;
    case Formula::Kind::And:
      return 2;
    default:
      return 3;
  }
}

std::string print_at(const Formula& f, int need) {
  std::string s;
  switch (f.kind) {
    case Formula::Kind::Eq:
      s = print_at(*f.lhs, 1) + " = " + print_at(*f.rhs, 1);
      break;
    case Formula::Kind::Pn:
      s = "P" + std::to_string(f.n) + "(" + print_at(*f.lhs, 1) + ")";
      break;
    case Formula::Kind::PAS2:
      s = "PAS2(" + print_at(*f.lhs, 1) + ")";
      break;
    case Formula::Kind::Not:
      s = "!" + print_at(*f.body(), 3);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      const bool is_and = f.kind == Formula::Kind::And;
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) s += is_and ? " & " : " | ";
        // A nested node of the same kind keeps its parentheses so the
        // n-ary structure survives a round trip.
        s += print_at(*f.children[i], is_and ? 3 : 2);
      }
      break;
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      s = std::string(f.kind == Formula::Kind::Exists ? "E " : "A ") + f.var + " (" + print_at(*f.body(), 0) + ")";
      break;
  }
  return formula_level(f) < need ? "(" + s + ")" : s;
}

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.name);
  if (t.a) collect_vars(*t.a, out);
  if (t.b) collect_vars(*t.b, out);
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  auto term = [&](const TermPtr& t) {
    if (!t) return;
    std::set<std::string> vs;
    collect_vars(*t, vs);
    for (const auto& v : vs) {
      if (!bound.count(v)) out.insert(v);
    }
  };
  term(f.lhs);
  term(f.rhs);
  if (f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall) {
    bool was = bound.count(f.var) > 0;
    bound.insert(f.var);
    collect_free(*f.body(), bound, out);
    if (!was) bound.erase(f.var);
    return;
  }
  for (const auto& c : f.children) collect_free(*c, bound, out);
}

void collect_exponents(const Term& t, std::set<std::uint64_t>& out) {
  if (t.kind == Term::Kind::Pow) out.insert(t.exponent);
  if (t.a) collect_exponents(*t.a, out);
  if (t.b) collect_exponents(*t.b, out);
}

}  // namespace

std::string print(const Term& t) { return print_at(t, 0); }
std::string print(const Formula& f) { return print_at(f, 0); }

std::set<std::string> term_vars(const Term& t) {
  std::set<std::string> out;
  collect_vars(t, out);
  return out;
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

bool is_quantifier_free(const Formula& f) {
  if (f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall) return false;
  return std::all_of(f.children.begin(), f.children.end(), [](const FormulaPtr& c) { return is_quantifier_free(*c); });
}

void require_closed(const Formula& f, const std::set<std::string>& declared) {
  for (const auto& v : free_vars(f)) {
    if (!declared.count(v)) throw Error(ErrorCode::ScopeError, "unbound variable '" + v + "'");
  }
}

std::set<std::uint64_t> pow_exponents(const Formula& f) {
  std::set<std::uint64_t> out;
  if (f.lhs) collect_exponents(*f.lhs, out);
  if (f.rhs) collect_exponents(*f.rhs, out);
  for (const auto& c : f.children) {
    auto sub = pow_exponents(*c);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

FormulaPtr substitute_pas2(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::PAS2) {
    return fm::pn(2, fm::add(fm::lit(1), fm::mul(fm::lit(4), f->lhs)));
  }
  if (f->children.empty()) return f;
  Formula copy = *f;
  for (auto& c : copy.children) c = substitute_pas2(c);
  return std::make_shared<const Formula>(std::move(copy));
}

FormulaPtr flatten(const FormulaPtr& f) {
  if (f->children.empty()) return f;
  Formula copy = *f;
  copy.children.clear();
  for (const auto& c : f->children) {
    FormulaPtr g = flatten(c);
    if ((f->kind == Formula::Kind::And || f->kind == Formula::Kind::Or) && g->kind == f->kind) {
      copy.children.insert(copy.children.end(), g->children.begin(), g->children.end());
    } else {
      copy.children.push_back(std::move(g));
    }
  }
  return std::make_shared<const Formula>(std::move(copy));
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::True:
      return "true";
    case Verdict::False:
      return "false";
    case Verdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

// --- random ASTs -----------------------------------------------------------------

namespace {

std::int64_t pick(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

const char* kVarNames[] = {"x", "y", "z", "w", "a1", "b"};

TermPtr random_term(std::mt19937_64& rng, int depth) {
  if (depth <= 0 || pick(rng, 0, 3) == 0) {
    if (pick(rng, 0, 1)) return fm::var(kVarNames[pick(rng, 0, 5)]);
    Integer v = pick(rng, -20, 40);
    if (pick(rng, 0, 9) == 0) v *= Integer("123456789012345678901234567890");
    return fm::lit(v);
  }
  switch (pick(rng, 0, 4)) {
    case 0:
      return fm::add(random_term(rng, depth - 1), random_term(rng, depth - 1));
    case 1:
      return fm::sub(random_term(rng, depth - 1), random_term(rng, depth - 1));
    case 2:
      return fm::mul(random_term(rng, depth - 1), random_term(rng, depth - 1));
    case 3:
      return fm::neg(random_term(rng, depth - 1));
    default:
      return fm::pow(random_term(rng, depth - 1), static_cast<std::uint64_t>(pick(rng, 0, 12)));
  }
}

FormulaPtr random_nary(std::mt19937_64& rng, Formula::Kind kind, int depth) {
  Formula f;
  f.kind = kind;
  int n = static_cast<int>(pick(rng, 2, 3));
  for (int i = 0; i < n; ++i) f.children.push_back(random_formula(rng, depth - 1));
  return std::make_shared<const Formula>(std::move(f));
}

}  // namespace

FormulaPtr random_formula(std::mt19937_64& rng, int depth) {
  if (depth <= 1 || pick(rng, 0, 4) == 0) {
    switch (pick(rng, 0, 2)) {
      case 0:
        return fm::eq(random_term(rng, 2), random_term(rng, 2));
      case 1:
        return fm::pn(static_cast<int>(pick(rng, 2, 12)), random_term(rng, 2));
      default:
        return fm::pas2(random_term(rng, 2));
    }
  }
  switch (pick(rng, 0, 4)) {
    case 0:
      return fm::lnot(random_formula(rng, depth - 1));
    case 1:
      return random_nary(rng, Formula::Kind::And, depth);
    case 2:
      return random_nary(rng, Formula::Kind::Or, depth);
    case 3:
      return fm::exists(kVarNames[pick(rng, 0, 5)], random_formula(rng, depth - 1));
    default:
      return fm::forall(kVarNames[pick(rng, 0, 5)], random_formula(rng, depth - 1));
  }
}

}  // namespace valring
