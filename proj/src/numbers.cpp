#include "valring/numbers.hpp"

#include <algorithm>
#include <numeric>

#include "valring/error.hpp"
#include "valring/valuation.hpp"

namespace valring {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedDescriptor: return "MalformedDescriptor";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NotEisenstein: return "NotEisenstein";
    case ErrorCode::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorCode::NotIntegral: return "NotIntegral";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::CriterionFails: return "CriterionFails";
    case ErrorCode::NotExact: return "NotExact";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::BaseSetInapplicable: return "BaseSetInapplicable";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NoDecomposition: return "NoDecomposition";
    case ErrorCode::ResidueNotCovered: return "ResidueNotCovered";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::MissingScanFixture: return "MissingScanFixture";
    case ErrorCode::MethodInapplicable: return "MethodInapplicable";
    case ErrorCode::InvalidPlan: return "InvalidPlan";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ScopeError: return "ScopeError";
    case ErrorCode::MissingBinding: return "MissingBinding";
    case ErrorCode::Undecided: return "Undecided";
  }
  return "Unknown";
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::pair<int, int> prime_power_decomposition(std::int64_t q) {
  if (q < 2) return {0, 0};
  std::int64_t p = 2;
  while (q % p != 0) ++p;
  int f = 0;
  while (q % p == 0) {
    q /= p;
    ++f;
  }
  if (q != 1) return {0, 0};
  return {static_cast<int>(p), f};
}

std::vector<std::int64_t> prime_powers_in_range(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t q = std::max<std::int64_t>(lo, 2); q <= hi; ++q) {
    if (prime_power_decomposition(q).first != 0) out.push_back(q);
  }
  return out;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

long ord_p(const Integer& n, unsigned long p) {
  if (n == 0) throw Error(ErrorCode::BadParameter, "ord_p of zero");
  Integer m = abs(n);
  long k = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    ++k;
  }
  return k;
}

long ord_p(const Rational& r, unsigned long p) {
  return ord_p(Integer(r.get_num()), p) - ord_p(Integer(r.get_den()), p);
}

Integer ipow(const Integer& base, unsigned long exp) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

Integer reduce_mod(const Rational& r, const Integer& modulus) {
  Integer den = r.get_den();
  Integer inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t()) == 0) {
    if (modulus == 1) return 0;
    throw Error(ErrorCode::NotIntegral, "denominator not invertible modulo " + modulus.get_str());
  }
  Integer out = (Integer(r.get_num()) * inv) % modulus;
  if (out < 0) out += modulus;
  return out;
}

Rational truncate_padic(const Rational& r, unsigned long p, long digits) {
  if (r == 0) return r;
  long k = ord_p(r, p);
  if (k >= digits) return 0;
  Integer pk = ipow(Integer(p), static_cast<unsigned long>(std::abs(k)));
  Rational unit = k >= 0 ? Rational(r / pk) : Rational(r * pk);
  Integer reduced = reduce_mod(unit, ipow(Integer(p), static_cast<unsigned long>(digits - k)));
  Rational out = k >= 0 ? Rational(reduced * pk) : Rational(reduced, pk);
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational parse_rational(const std::string& text) {
  Rational out;
  if (out.set_str(text, 10) != 0 || out.get_den() == 0) {
    throw Error(ErrorCode::MalformedDescriptor, "not a rational: '" + text + "'");
  }
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------

Valuation::Valuation(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ == 0) throw Error(ErrorCode::BadParameter, "zero denominator in valuation");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Valuation Valuation::infinity() {
  Valuation v;
  v.infinite_ = true;
  return v;
}

std::int64_t Valuation::in_units(int e) const {
  if (infinite_) throw Error(ErrorCode::BadParameter, "infinite valuation has no unit count");
  if (e % den_ != 0) throw Error(ErrorCode::BadParameter, "valuation " + to_string() + " not in (1/e)Z");
  return num_ * (e / den_);
}

Valuation Valuation::operator+(const Valuation& o) const {
  if (infinite_ || o.infinite_) return infinity();
  return Valuation(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Valuation Valuation::operator-(const Valuation& o) const {
  if (o.infinite_) throw Error(ErrorCode::BadParameter, "subtracting infinite valuation");
  if (infinite_) return infinity();
  return Valuation(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Valuation Valuation::operator*(std::int64_t k) const {
  if (infinite_) return k == 0 ? Valuation(0) : infinity();
  return Valuation(num_ * k, den_);
}

bool Valuation::operator==(const Valuation& o) const {
  if (infinite_ || o.infinite_) return infinite_ == o.infinite_;
  return num_ == o.num_ && den_ == o.den_;
}

std::strong_ordering Valuation::operator<=>(const Valuation& o) const {
  if (infinite_ && o.infinite_) return std::strong_ordering::equal;
  if (infinite_) return std::strong_ordering::greater;
  if (o.infinite_) return std::strong_ordering::less;
  return num_ * o.den_ <=> o.num_ * den_;
}

std::string Valuation::to_string() const {
  if (infinite_) return "inf";
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace valring
