#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "valring/field.hpp"
#include "valring/numbers.hpp"

namespace valring {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Term;
struct Formula;
using TermPtr = std::shared_ptr<const Term>;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Term {
  enum class Kind { Var, Int, Add, Sub, Mul, Neg, Pow };
  Kind kind = Kind::Int;
  std::string name;
  Integer value;
  TermPtr a, b;
  std::uint64_t exponent = 0;
  Span span;
};

struct Formula {
  enum class Kind { Eq, Pn, PAS2, Not, And, Or, Exists, Forall };
  Kind kind = Kind::Eq;
  TermPtr lhs, rhs;
  int n = 0;
  std::vector<FormulaPtr> children;
  std::string var;
  Span span;

  const FormulaPtr& body() const { return children.front(); }
};

namespace fm {
TermPtr var(std::string name);
TermPtr lit(const Integer& v);
TermPtr add(TermPtr a, TermPtr b);
TermPtr sub(TermPtr a, TermPtr b);
TermPtr mul(TermPtr a, TermPtr b);
TermPtr neg(TermPtr a);
TermPtr pow(TermPtr a, std::uint64_t n);

FormulaPtr eq(TermPtr a, TermPtr b);
FormulaPtr pn(int n, TermPtr t);
FormulaPtr pas2(TermPtr t);
FormulaPtr lnot(FormulaPtr f);
// n-ary; nested conjunctions (disjunctions) are flattened, a single child is
// returned as is.
FormulaPtr conj(std::vector<FormulaPtr> parts);
FormulaPtr disj(std::vector<FormulaPtr> parts);
FormulaPtr exists(std::string v, FormulaPtr body);
FormulaPtr forall(std::string v, FormulaPtr body);
FormulaPtr exists(const std::vector<std::string>& vs, FormulaPtr body);
FormulaPtr forall(const std::vector<std::string>& vs, FormulaPtr body);
}  // namespace fm

// Structural equality; spans are ignored.
bool equal(const Term& a, const Term& b);
bool equal(const Formula& a, const Formula& b);

std::string print(const Term& t);
std::string print(const Formula& f);

FormulaPtr parse_formula(std::string_view text);
TermPtr parse_term(std::string_view text);

std::set<std::string> free_vars(const Formula& f);
std::set<std::string> term_vars(const Term& t);
bool is_quantifier_free(const Formula& f);
// Throws ScopeError when a variable outside `declared` occurs free.
void require_closed(const Formula& f, const std::set<std::string>& declared);

// Every Pow exponent occurring in f.
std::set<std::uint64_t> pow_exponents(const Formula& f);

// Replaces every PAS2(t) by P2(1 + 4*t).
FormulaPtr substitute_pas2(const FormulaPtr& f);

// Flattens nested conjunctions and disjunctions.
FormulaPtr flatten(const FormulaPtr& f);

using Monomial = std::map<std::string, std::uint64_t>;
using IntPoly = std::map<Monomial, Integer>;
// lhs - rhs of an equation, expanded; nullopt when too large.
std::optional<IntPoly> equation_poly(const Formula& eq);

using Env = std::map<std::string, Element>;

Element eval_term(const Term& t, const Env& env, const Field& K);
// Exact truth value of a quantifier-free formula.
bool eval_qf(const Formula& f, const Env& env, const Field& K);

enum class Verdict { True, False, Unknown };
std::string_view verdict_name(Verdict v);

struct EvalResult {
  Verdict verdict = Verdict::Unknown;
  std::map<std::string, Element> witnesses;
  std::vector<std::string> strategy_log;
};

struct StrategyConfig {
  // Residue digits per enumerated candidate.
  int depth = 2;
  // Candidate valuations 0, 1, -1, ..., +-vmax (in uniformizer units).
  int vmax = 3;
  // Candidate evaluations per search pass.
  std::size_t budget = 20000;
  bool use_registry = true;
};

// A formula shape with a dedicated decision procedure, in one free variable.
struct ShapeDecision {
  Verdict verdict = Verdict::Unknown;
  // A binder chain inside the template whose body, evaluated with
  // `witnesses` bound, must give `verdict`; null when the verdict rests on
  // the decider alone.
  const Formula* certify = nullptr;
  std::map<std::string, Element> witnesses;
  std::string strategy;
};

struct RegisteredShape {
  std::string name;
  // Candidate templates for an input, e.g. one per exponent in it. Each
  // template has exactly one free variable.
  std::function<std::vector<FormulaPtr>(const Formula& input, const Field& K)> templates;
  std::function<ShapeDecision(const FormulaPtr& tmpl, const Element& x)> decide;
};

class Registry {
 public:
  void add(RegisteredShape shape) { shapes_.push_back(std::move(shape)); }
  const std::vector<RegisteredShape>& shapes() const { return shapes_; }

 private:
  std::vector<RegisteredShape> shapes_;
};

// Structural match of a template against an input, up to commutativity of
// & and | and renaming of bound variables. On success `nodes` maps template
// nodes to input nodes and `names` template variables (free and bound) to
// input names.
struct ShapeMatch {
  std::map<const Formula*, const Formula*> nodes;
  std::map<std::string, std::string> free_names;
};
std::optional<ShapeMatch> match_shape(const Formula& tmpl, const Formula& input);

EvalResult eval(const FormulaPtr& phi, const Env& env, const Field& K, const StrategyConfig& config = {},
                const Registry* registry = nullptr);

// Random ASTs for round-trip testing.
FormulaPtr random_formula(std::mt19937_64& rng, int depth);

}  // namespace valring
