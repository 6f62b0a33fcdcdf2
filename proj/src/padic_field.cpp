#include "valring/padic_field.hpp"

#include <algorithm>
#include <limits>

#include "linalg.hpp"
#include "valring/error.hpp"

namespace valring {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

std::optional<std::int64_t> min_prec(std::optional<std::int64_t> a, std::optional<std::int64_t> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

bool is_zero_vec(const LVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& c) { return c == 0; });
}

}  // namespace

std::shared_ptr<const PadicField> as_padic(const FieldPtr& field) {
  return std::dynamic_pointer_cast<const PadicField>(field);
}

std::shared_ptr<const PadicField> PadicField::make(PadicParams params) {
  if (!is_prime(params.p)) throw Error(ErrorCode::MalformedDescriptor, std::to_string(params.p) + " is not prime");
  if (params.f < 1 || params.e < 1) throw Error(ErrorCode::MalformedDescriptor, "degrees must be positive");
  if (params.f * params.e > 8) throw Error(ErrorCode::Unsupported, "tower degree above 8");
  if (params.precision < 1) throw Error(ErrorCode::MalformedDescriptor, "precision must be positive");
  if (static_cast<int>(params.G.size()) != params.f + 1 || params.G.back() != 1) {
    throw Error(ErrorCode::MalformedDescriptor, "G must be monic of degree " + std::to_string(params.f));
  }
  if (static_cast<int>(params.eisenstein.size()) != params.e) {
    throw Error(ErrorCode::MalformedDescriptor, "Eisenstein polynomial must have degree " + std::to_string(params.e));
  }
  for (auto& h : params.eisenstein) {
    h.resize(params.f, 0);
    for (auto& c : h) c.canonicalize();
  }
  // Eisenstein over Z_p[gamma]: gamma^i is an integral basis of the
  // unramified ring, so ord_L is the minimum coordinate order.
  for (int j = 0; j < params.e; ++j) {
    const auto& h = params.eisenstein[j];
    if (is_zero_vec(h)) {
      if (j == 0) throw Error(ErrorCode::NotEisenstein, "constant coefficient is zero");
      continue;
    }
    long v = std::numeric_limits<long>::max();
    for (const auto& c : h) {
      if (c != 0) v = std::min(v, ord_p(c, static_cast<unsigned long>(params.p)));
    }
    if (v < 1) throw Error(ErrorCode::NotEisenstein, "coefficient " + std::to_string(j) + " is not in the maximal ideal");
    if (j == 0 && v != 1) throw Error(ErrorCode::NotEisenstein, "constant coefficient does not have valuation one");
  }
  return std::shared_ptr<const PadicField>(new PadicField(std::move(params)));
}

PadicField::PadicField(PadicParams params) : params_(std::move(params)) {
  fp_poly::Poly g0;
  for (const auto& c : params_.G) {
    Integer r = c % params_.p;
    if (r < 0) r += params_.p;
    g0.push_back(r.get_si());
  }
  try {
    residue_ = FiniteField::make(params_.p, params_.f, g0);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::NotIrreducible) throw Error(ErrorCode::NotIrreducible, "G is not irreducible mod p");
    throw;
  }
}

std::string PadicField::descriptor() const {
  const auto& P = params_;
  bool plain_qp = is_qp() && P.G[0] == 0 && P.eisenstein[0][0] == -P.p;
  if (plain_qp) return "Qp:" + std::to_string(P.p) + ":prec=" + std::to_string(P.precision);
  std::string out = "Ext:Qp:" + std::to_string(P.p) + ":unram=" + std::to_string(P.f) + ":G=";
  for (std::size_t i = 0; i < P.G.size(); ++i) out += (i ? "," : "") + P.G[i].get_str();
  out += ":eis=[";
  for (int j = 0; j < P.e; ++j) {
    out += format(from_l(P.eisenstein[j])) + ",";
  }
  out += "1]:prec=" + std::to_string(P.precision);
  return out;
}

Element PadicField::normalize(PadicRep rep) const {
  for (auto& c : rep.coords) c.canonicalize();
  if (rep.precision) {
    const int f = params_.f, e = params_.e;
    for (int j = 0; j < e; ++j) {
      std::int64_t digits = ceil_div(*rep.precision - j, e);
      for (int i = 0; i < f; ++i) {
        auto& c = rep.coords[j * f + i];
        if (c != 0) c = truncate_padic(c, static_cast<unsigned long>(params_.p), digits);
      }
    }
  }
  return element(std::move(rep));
}

Element PadicField::from_coords(std::vector<Rational> coords, std::optional<std::int64_t> precision) const {
  if (static_cast<int>(coords.size()) != degree()) throw Error(ErrorCode::BadParameter, "coordinate count mismatch");
  return normalize(PadicRep{std::move(coords), precision});
}

const std::vector<Rational>& PadicField::coords(const Element& a) const {
  check_owner(a);
  return std::get<PadicRep>(a.rep()).coords;
}

Element PadicField::from_integer(const Integer& n) const { return from_rational(Rational(n)); }

Element PadicField::from_rational(const Rational& r) const {
  std::vector<Rational> c(degree(), 0);
  c[0] = r;
  c[0].canonicalize();
  return element(PadicRep{std::move(c), std::nullopt});
}

Element PadicField::from_l(const LVector& a) const {
  std::vector<Rational> c(degree(), 0);
  for (int i = 0; i < params_.f && i < static_cast<int>(a.size()); ++i) c[i] = a[i];
  return element(PadicRep{std::move(c), std::nullopt});
}

LVector PadicField::l_mul(const LVector& a, const LVector& b) const {
  const int f = params_.f;
  std::vector<Rational> prod(2 * f - 1, 0);
  for (int i = 0; i < f; ++i) {
    if (a[i] == 0) continue;
    for (int k = 0; k < f; ++k) {
      if (b[k] != 0) prod[i + k] += a[i] * b[k];
    }
  }
  for (int k = 2 * f - 2; k >= f; --k) {
    if (prod[k] == 0) continue;
    Rational c = prod[k];
    for (int i = 0; i < f; ++i) prod[k - f + i] -= c * params_.G[i];
    prod[k] = 0;
  }
  prod.resize(f);
  return prod;
}

Element PadicField::add(const Element& a, const Element& b) const {
  check_owner(a);
  check_owner(b);
  const auto& A = std::get<PadicRep>(a.rep());
  const auto& B = std::get<PadicRep>(b.rep());
  PadicRep out{A.coords, min_prec(A.precision, B.precision)};
  for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += B.coords[i];
  return normalize(std::move(out));
}

Element PadicField::neg(const Element& a) const {
  check_owner(a);
  PadicRep out = std::get<PadicRep>(a.rep());
  for (auto& c : out.coords) c = -c;
  return element(std::move(out));
}

Element PadicField::sub(const Element& a, const Element& b) const {
  check_owner(a);
  check_owner(b);
  const auto& A = std::get<PadicRep>(a.rep());
  const auto& B = std::get<PadicRep>(b.rep());
  PadicRep out{A.coords, min_prec(A.precision, B.precision)};
  for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] -= B.coords[i];
  return normalize(std::move(out));
}

std::int64_t PadicField::units_val_lower(const Element& a) const {
  const auto& A = std::get<PadicRep>(a.rep());
  bool zero = std::all_of(A.coords.begin(), A.coords.end(), [](const Rational& c) { return c == 0; });
  if (zero) return A.precision ? *A.precision : std::numeric_limits<std::int32_t>::max();
  return basis_val(a).in_units(params_.e);
}

Element PadicField::mul(const Element& a, const Element& b) const {
  check_owner(a);
  check_owner(b);
  const auto& A = std::get<PadicRep>(a.rep());
  const auto& B = std::get<PadicRep>(b.rep());
  const int f = params_.f, e = params_.e;
  auto exact_zero = [](const PadicRep& R) {
    return !R.precision && std::all_of(R.coords.begin(), R.coords.end(), [](const Rational& c) { return c == 0; });
  };
  if (exact_zero(A) || exact_zero(B)) return zero();
  std::optional<std::int64_t> prec;
  if (A.precision || B.precision) {
    std::optional<std::int64_t> pa, pb;
    if (A.precision) pa = *A.precision + units_val_lower(b);
    if (B.precision) pb = *B.precision + units_val_lower(a);
    prec = min_prec(pa, pb);
  }
  if (degree() == 1) {
    return normalize(PadicRep{{A.coords[0] * B.coords[0]}, prec});
  }
  auto row = [f](const std::vector<Rational>& c, int j) { return LVector(c.begin() + j * f, c.begin() + (j + 1) * f); };
  std::vector<LVector> prod(2 * e - 1, LVector(f, 0));
  for (int j1 = 0; j1 < e; ++j1) {
    LVector x = row(A.coords, j1);
    if (is_zero_vec(x)) continue;
    for (int j2 = 0; j2 < e; ++j2) {
      LVector y = row(B.coords, j2);
      if (is_zero_vec(y)) continue;
      LVector xy = l_mul(x, y);
      for (int i = 0; i < f; ++i) prod[j1 + j2][i] += xy[i];
    }
  }
  // pi^e = -(H_{e-1} pi^{e-1} + ... + H_0).
  for (int k = 2 * e - 2; k >= e; --k) {
    if (is_zero_vec(prod[k])) continue;
    LVector c = prod[k];
    for (int j = 0; j < e; ++j) {
      LVector t = l_mul(c, params_.eisenstein[j]);
      for (int i = 0; i < f; ++i) prod[k - e + j][i] -= t[i];
    }
    prod[k] = LVector(f, 0);
  }
  std::vector<Rational> out(degree());
  for (int j = 0; j < e; ++j) {
    for (int i = 0; i < f; ++i) out[j * f + i] = prod[j][i];
  }
  return normalize(PadicRep{std::move(out), prec});
}

std::vector<std::vector<Rational>> PadicField::multiplication_matrix(const Element& a) const {
  const int n = degree();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, 0));
  const Element exact_a = element(PadicRep{std::get<PadicRep>(a.rep()).coords, std::nullopt});
  for (int c = 0; c < n; ++c) {
    std::vector<Rational> basis(n, 0);
    basis[c] = 1;
    Element col = mul(exact_a, element(PadicRep{std::move(basis), std::nullopt}));
    const auto& cc = std::get<PadicRep>(col.rep()).coords;
    for (int r = 0; r < n; ++r) m[r][c] = cc[r];
  }
  return m;
}

Element PadicField::inv(const Element& a) const {
  check_owner(a);
  if (is_zero(a)) {
    if (!is_exact(a)) throw Error(ErrorCode::InsufficientPrecision, "inverse of an element indistinguishable from 0");
    throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  }
  const auto& A = std::get<PadicRep>(a.rep());
  std::optional<std::int64_t> prec;
  if (A.precision) prec = *A.precision - 2 * units_val_lower(a);
  if (degree() == 1) return normalize(PadicRep{{1 / A.coords[0]}, prec});
  std::vector<Rational> rhs(degree(), 0);
  rhs[0] = 1;
  auto sol = linalg::solve(multiplication_matrix(a), rhs);
  if (!sol) throw Error(ErrorCode::DivisionByZero, "singular multiplication matrix");
  return normalize(PadicRep{std::move(*sol), prec});
}

bool PadicField::is_zero(const Element& a) const {
  check_owner(a);
  const auto& c = std::get<PadicRep>(a.rep()).coords;
  return std::all_of(c.begin(), c.end(), [](const Rational& x) { return x == 0; });
}

bool PadicField::is_exact(const Element& a) const {
  check_owner(a);
  return !std::get<PadicRep>(a.rep()).precision.has_value();
}

std::optional<std::int64_t> PadicField::precision_of(const Element& a) const {
  check_owner(a);
  return std::get<PadicRep>(a.rep()).precision;
}

Element PadicField::with_precision(const Element& a, std::int64_t units) const {
  check_owner(a);
  PadicRep rep = std::get<PadicRep>(a.rep());
  rep.precision = min_prec(rep.precision, units);
  return normalize(std::move(rep));
}

bool PadicField::identical(const Element& a, const Element& b) const {
  const auto& A = std::get<PadicRep>(a.rep());
  const auto& B = std::get<PadicRep>(b.rep());
  return A.coords == B.coords && A.precision == B.precision;
}

Valuation PadicField::basis_val(const Element& a) const {
  check_owner(a);
  const auto& c = std::get<PadicRep>(a.rep()).coords;
  const int f = params_.f, e = params_.e;
  std::optional<std::int64_t> best;
  for (int j = 0; j < e; ++j) {
    for (int i = 0; i < f; ++i) {
      const auto& x = c[j * f + i];
      if (x == 0) continue;
      std::int64_t units = ord_p(x, static_cast<unsigned long>(params_.p)) * e + j;
      if (!best || units < *best) best = units;
    }
  }
  if (!best) return Valuation::infinity();
  return Valuation(*best, e);
}

Valuation PadicField::determinant_val(const Element& a) const {
  check_owner(a);
  if (is_zero(a)) return Valuation::infinity();
  Rational det = degree() == 1 ? std::get<PadicRep>(a.rep()).coords[0] : linalg::determinant(multiplication_matrix(a));
  return Valuation(ord_p(det, static_cast<unsigned long>(params_.p)), degree());
}

Valuation PadicField::val(const Element& a) const {
  check_owner(a);
  const auto& A = std::get<PadicRep>(a.rep());
  if (is_zero(a)) {
    if (A.precision) throw Error(ErrorCode::InsufficientPrecision, "element indistinguishable from 0");
    return Valuation::infinity();
  }
  Valuation v = determinant_val(a);
  if (A.precision && v.in_units(params_.e) >= *A.precision) {
    throw Error(ErrorCode::InsufficientPrecision, "valuation beyond known precision");
  }
  return v;
}

bool PadicField::is_integral(const Element& a) const {
  const auto& c = coords(a);
  return std::all_of(c.begin(), c.end(), [this](const Rational& x) {
    return x == 0 || !mpz_divisible_ui_p(x.get_den_mpz_t(), static_cast<unsigned long>(params_.p));
  });
}

FqElem PadicField::residue(const Element& a) const {
  check_owner(a);
  const auto& A = std::get<PadicRep>(a.rep());
  if (A.precision && *A.precision < 1) throw Error(ErrorCode::InsufficientPrecision, "residue beyond known precision");
  if (!is_integral(a)) throw Error(ErrorCode::NotIntegral, "residue of an element of negative valuation");
  std::vector<std::int64_t> digits(params_.f);
  const Integer p = params_.p;
  for (int i = 0; i < params_.f; ++i) digits[i] = reduce_mod(A.coords[i], p).get_si();
  return FqElem{residue_, residue_->from_coeffs(digits)};
}

Element PadicField::lift(const FqElem& a) const {
  if (!a.field || !a.field->same_as(*residue_)) throw Error(ErrorCode::FieldMismatch, "lift from a foreign residue field");
  auto digits = residue_->coeffs(a.code);
  std::vector<Rational> c(degree(), 0);
  for (int i = 0; i < params_.f; ++i) c[i] = digits[i];
  return element(PadicRep{std::move(c), std::nullopt});
}

Element PadicField::uniformizer() const {
  if (params_.e == 1) {
    LVector h = params_.eisenstein[0];
    for (auto& c : h) c = -c;
    return from_l(h);
  }
  std::vector<Rational> c(degree(), 0);
  c[params_.f] = 1;
  return element(PadicRep{std::move(c), std::nullopt});
}

Element PadicField::gamma() const {
  if (params_.f == 1) return from_integer(-params_.G[0]);
  std::vector<Rational> c(degree(), 0);
  c[1] = 1;
  return element(PadicRep{std::move(c), std::nullopt});
}

Element PadicField::pi_power(std::int64_t j) const { return pow(uniformizer(), j); }

Element PadicField::truncate(const Element& a, std::int64_t units) const {
  check_owner(a);
  PadicRep rep = std::get<PadicRep>(a.rep());
  const int f = params_.f, e = params_.e;
  for (int j = 0; j < e; ++j) {
    std::int64_t digits = ceil_div(units - j, e);
    for (int i = 0; i < f; ++i) {
      auto& c = rep.coords[j * f + i];
      if (c != 0) c = truncate_padic(c, static_cast<unsigned long>(params_.p), digits);
    }
  }
  return element(std::move(rep));
}

std::string PadicField::format(const Element& a) const {
  check_owner(a);
  const auto& A = std::get<PadicRep>(a.rep());
  const int f = params_.f, e = params_.e;
  std::string out;
  for (int j = 0; j < e; ++j) {
    for (int i = 0; i < f; ++i) {
      const Rational& c = A.coords[j * f + i];
      if (c == 0) continue;
      std::string mono;
      if (i > 0) mono += i == 1 ? "g" : "g^" + std::to_string(i);
      if (j > 0) mono += std::string(mono.empty() ? "" : "*") + (j == 1 ? "u" : "u^" + std::to_string(j));
      Rational mag = abs(c);
      std::string term;
      if (mono.empty()) term = mag.get_str();
      else if (mag == 1) term = mono;
      else term = mag.get_str() + "*" + mono;
      if (out.empty()) out = (c < 0 ? "-" : "") + term;
      else out += (c < 0 ? " - " : " + ") + term;
    }
  }
  if (A.precision) {
    std::string big_o = e == 1 ? "O(" + std::to_string(params_.p) + "^" + std::to_string(*A.precision) + ")"
                               : "O(u^" + std::to_string(*A.precision) + ")";
    return out.empty() ? big_o : out + " + " + big_o;
  }
  return out.empty() ? "0" : out;
}

std::optional<Element> PadicField::symbol(std::string_view name) const {
  if (name == "g") return gamma();
  if (name == "u") return uniformizer();
  return std::nullopt;
}

LVector PadicField::parse_l_element(std::string_view text, const std::vector<Integer>& G, std::int64_t p) {
  PadicParams params;
  params.p = p;
  params.f = static_cast<int>(G.size()) - 1;
  params.e = 1;
  params.G = G;
  LVector h(params.f, 0);
  h[0] = -p;
  params.eisenstein = {h};
  auto field = make(std::move(params));
  Element x = field->parse(text);
  const auto& c = field->coords(x);
  return LVector(c.begin(), c.begin() + field->f());
}

}  // namespace valring
