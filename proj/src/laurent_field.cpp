#include "valring/laurent_field.hpp"

#include <algorithm>
#include <limits>

#include "valring/error.hpp"

namespace valring {

namespace {
constexpr std::int64_t kNoBound = std::numeric_limits<std::int32_t>::max();

std::optional<std::int64_t> min_prec(std::optional<std::int64_t> a, std::optional<std::int64_t> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

LaurentRep normalized(LaurentRep r) {
  if (r.precision) {
    std::int64_t keep = std::max<std::int64_t>(0, *r.precision - r.start);
    if (static_cast<std::int64_t>(r.coeffs.size()) > keep) r.coeffs.resize(keep);
  }
  std::size_t lead = 0;
  while (lead < r.coeffs.size() && r.coeffs[lead] == 0) ++lead;
  if (lead > 0) {
    r.coeffs.erase(r.coeffs.begin(), r.coeffs.begin() + static_cast<std::ptrdiff_t>(lead));
    r.start += static_cast<std::int64_t>(lead);
  }
  while (!r.coeffs.empty() && r.coeffs.back() == 0) r.coeffs.pop_back();
  if (r.coeffs.empty()) r.start = 0;
  return r;
}

// Lower bound for the valuation of a representation.
std::int64_t low_val(const LaurentRep& r) {
  if (!r.coeffs.empty()) return r.start;
  return r.precision ? *r.precision : kNoBound;
}
}  // namespace

std::shared_ptr<const LaurentField> as_laurent(const FieldPtr& field) {
  return std::dynamic_pointer_cast<const LaurentField>(field);
}

std::shared_ptr<const LaurentField> LaurentField::make(FiniteFieldPtr residue, std::int64_t precision) {
  if (precision < 1) throw Error(ErrorCode::MalformedDescriptor, "precision must be positive");
  return std::shared_ptr<const LaurentField>(new LaurentField(std::move(residue), precision));
}

std::string LaurentField::descriptor() const {
  std::string out = "Laurent:" + std::to_string(residue_->p()) + "^" + std::to_string(residue_->f());
  if (residue_->f() > 1 && residue_->modulus() != fp_poly::smallest_irreducible(residue_->p(), residue_->f())) {
    out += ":mod=";
    const auto& m = residue_->modulus();
    for (std::size_t i = 0; i < m.size(); ++i) out += (i ? "," : "") + std::to_string(m[i]);
  }
  return out + ":prec=" + std::to_string(precision_);
}

const LaurentRep& LaurentField::rep(const Element& a) const {
  check_owner(a);
  return std::get<LaurentRep>(a.rep());
}

Element LaurentField::from_rep(LaurentRep r) const { return element(normalized(std::move(r))); }

Element LaurentField::monomial(FiniteField::Code c, std::int64_t exponent) const {
  return from_rep(LaurentRep{exponent, {c}, std::nullopt});
}

FiniteField::Code LaurentField::coefficient(const Element& a, std::int64_t exponent) const {
  const auto& r = rep(a);
  if (r.precision && exponent >= *r.precision) {
    throw Error(ErrorCode::InsufficientPrecision, "coefficient beyond known precision");
  }
  std::int64_t k = exponent - r.start;
  if (k < 0 || k >= static_cast<std::int64_t>(r.coeffs.size())) return 0;
  return r.coeffs[k];
}

Element LaurentField::from_integer(const Integer& n) const {
  Integer r = n % residue_->p();
  return monomial(residue_->from_int(r.get_si()), 0);
}

Element LaurentField::from_rational(const Rational& r) const {
  auto num = residue_->from_int(Integer(Integer(r.get_num()) % residue_->p()).get_si());
  auto den = residue_->from_int(Integer(Integer(r.get_den()) % residue_->p()).get_si());
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "denominator vanishes in characteristic " + std::to_string(residue_->p()));
  return monomial(residue_->mul(num, residue_->inv(den)), 0);
}

Element LaurentField::add(const Element& a, const Element& b) const {
  const auto& A = rep(a);
  const auto& B = rep(b);
  LaurentRep out;
  out.precision = min_prec(A.precision, B.precision);
  if (A.coeffs.empty() && B.coeffs.empty()) return from_rep(std::move(out));
  std::int64_t lo = std::min(A.coeffs.empty() ? B.start : A.start, B.coeffs.empty() ? A.start : B.start);
  std::int64_t hi = std::max(A.start + static_cast<std::int64_t>(A.coeffs.size()),
                             B.start + static_cast<std::int64_t>(B.coeffs.size()));
  if (out.precision) hi = std::min(hi, *out.precision);
  out.start = lo;
  for (std::int64_t k = lo; k < hi; ++k) {
    FiniteField::Code ca = 0, cb = 0;
    if (k >= A.start && k - A.start < static_cast<std::int64_t>(A.coeffs.size())) ca = A.coeffs[k - A.start];
    if (k >= B.start && k - B.start < static_cast<std::int64_t>(B.coeffs.size())) cb = B.coeffs[k - B.start];
    out.coeffs.push_back(residue_->add(ca, cb));
  }
  return from_rep(std::move(out));
}

Element LaurentField::neg(const Element& a) const {
  LaurentRep out = rep(a);
  for (auto& c : out.coeffs) c = residue_->neg(c);
  return element(std::move(out));
}

Element LaurentField::mul(const Element& a, const Element& b) const {
  const auto& A = rep(a);
  const auto& B = rep(b);
  LaurentRep out;
  if (A.precision) out.precision = *A.precision + low_val(B);
  if (B.precision) out.precision = min_prec(out.precision, *B.precision + low_val(A));
  if ((A.coeffs.empty() && !A.precision) || (B.coeffs.empty() && !B.precision)) return from_rep(LaurentRep{});
  if (A.coeffs.empty() || B.coeffs.empty()) return from_rep(std::move(out));
  out.start = A.start + B.start;
  std::size_t len = A.coeffs.size() + B.coeffs.size() - 1;
  if (out.precision) {
    len = static_cast<std::size_t>(std::clamp<std::int64_t>(*out.precision - out.start, 0, static_cast<std::int64_t>(len)));
  }
  out.coeffs.assign(len, 0);
  for (std::size_t i = 0; i < A.coeffs.size() && i < len; ++i) {
    if (A.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < B.coeffs.size() && i + j < len; ++j) {
      out.coeffs[i + j] = residue_->add(out.coeffs[i + j], residue_->mul(A.coeffs[i], B.coeffs[j]));
    }
  }
  return from_rep(std::move(out));
}

Element LaurentField::inv(const Element& a) const {
  const auto& A = rep(a);
  if (A.coeffs.empty()) {
    if (A.precision) throw Error(ErrorCode::InsufficientPrecision, "inverse of an element indistinguishable from 0");
    throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  }
  const std::int64_t v = A.start;
  if (!A.precision && A.coeffs.size() == 1) return monomial(residue_->inv(A.coeffs[0]), -v);
  std::int64_t relative = precision_;
  if (A.precision) relative = std::min(relative, *A.precision - v);
  std::vector<FiniteField::Code> b(static_cast<std::size_t>(std::max<std::int64_t>(relative, 0)), 0);
  const auto b0 = residue_->inv(A.coeffs[0]);
  for (std::int64_t k = 0; k < relative; ++k) {
    if (k == 0) {
      b[0] = b0;
      continue;
    }
    FiniteField::Code acc = 0;
    for (std::int64_t i = 1; i <= k && i < static_cast<std::int64_t>(A.coeffs.size()); ++i) {
      acc = residue_->add(acc, residue_->mul(A.coeffs[i], b[k - i]));
    }
    b[k] = residue_->neg(residue_->mul(b0, acc));
  }
  return from_rep(LaurentRep{-v, std::move(b), -v + relative});
}

bool LaurentField::is_zero(const Element& a) const { return rep(a).coeffs.empty(); }
bool LaurentField::is_exact(const Element& a) const { return !rep(a).precision.has_value(); }
std::optional<std::int64_t> LaurentField::precision_of(const Element& a) const { return rep(a).precision; }

Element LaurentField::with_precision(const Element& a, std::int64_t units) const {
  LaurentRep r = rep(a);
  r.precision = min_prec(r.precision, units);
  return from_rep(std::move(r));
}

bool LaurentField::identical(const Element& a, const Element& b) const {
  const auto& A = rep(a);
  const auto& B = rep(b);
  return A.start == B.start && A.coeffs == B.coeffs && A.precision == B.precision;
}

Valuation LaurentField::val(const Element& a) const {
  const auto& A = rep(a);
  if (A.coeffs.empty()) {
    if (A.precision) throw Error(ErrorCode::InsufficientPrecision, "element indistinguishable from 0");
    return Valuation::infinity();
  }
  return Valuation(A.start);
}

FqElem LaurentField::residue(const Element& a) const {
  const auto& A = rep(a);
  if (!A.coeffs.empty() && A.start < 0) throw Error(ErrorCode::NotIntegral, "residue of an element of negative valuation");
  return FqElem{residue_, coefficient(a, 0)};
}

Element LaurentField::lift(const FqElem& a) const {
  if (!a.field || !a.field->same_as(*residue_)) throw Error(ErrorCode::FieldMismatch, "lift from a foreign residue field");
  return monomial(a.code, 0);
}

Element LaurentField::uniformizer() const { return monomial(1, 1); }

std::string LaurentField::format(const Element& a) const {
  const auto& A = rep(a);
  std::string out;
  for (std::size_t k = 0; k < A.coeffs.size(); ++k) {
    if (A.coeffs[k] == 0) continue;
    std::int64_t ex = A.start + static_cast<std::int64_t>(k);
    std::string c = residue_->format(A.coeffs[k]);
    if (c.find(' ') != std::string::npos) c = "(" + c + ")";
    std::string term;
    if (ex == 0) {
      term = c;
    } else {
      std::string mono = ex == 1 ? "t" : "t^" + std::to_string(ex);
      term = c == "1" ? mono : c + "*" + mono;
    }
    out += (out.empty() ? "" : " + ") + term;
  }
  if (A.precision) {
    std::string big_o = "O(t^" + std::to_string(*A.precision) + ")";
    return out.empty() ? big_o : out + " + " + big_o;
  }
  return out.empty() ? "0" : out;
}

std::optional<Element> LaurentField::symbol(std::string_view name) const {
  if (name == "t") return uniformizer();
  if (name == "z") return monomial(residue_->generator(), 0);
  return std::nullopt;
}

}  // namespace valring
