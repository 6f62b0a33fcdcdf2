#include "valring/finite_field.hpp"

#include <algorithm>
#include <tuple>

#include "valring/error.hpp"
#include "valring/numbers.hpp"

namespace valring {

namespace fp_poly {

namespace {
std::int64_t modp(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = modp(a, p);
  while (nr != 0) {
    std::int64_t qt = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - qt * nt);
    std::tie(r, nr) = std::make_pair(nr, r - qt * nr);
  }
  if (r != 1) throw Error(ErrorCode::DivisionByZero, "non-invertible residue");
  return modp(t, p);
}
}  // namespace

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly rem(Poly a, const Poly& m, std::int64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::int64_t lead_inv = inv_mod(m.back(), p);
  while (a.size() > dm) {
    std::int64_t c = modp(a.back() * lead_inv, p);
    std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = modp(a[shift + i] - c * m[i], p);
    trim(a);
  }
  return a;
}

Poly mul_mod(const Poly& a, const Poly& b, const Poly& m, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = modp(out[i + j] + a[i] * b[j], p);
  }
  return rem(std::move(out), m, p);
}

Poly gcd(Poly a, Poly b, std::int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    std::int64_t inv = inv_mod(a.back(), p);
    for (auto& c : a) c = modp(c * inv, p);
  }
  return a;
}

bool is_irreducible(const Poly& monic, std::int64_t p) {
  const int f = static_cast<int>(monic.size()) - 1;
  if (f < 1 || monic.back() != 1) return false;
  if (f == 1) return true;
  // Ben-Or: no factor of degree i <= f/2 iff gcd(x^(p^i) - x, g) = 1.
  Poly x = rem({0, 1}, monic, p);
  Poly h = x;
  for (int i = 1; i <= f / 2; ++i) {
    Poly acc{1};
    Poly base = h;
    for (std::int64_t e = p; e > 0; e >>= 1) {
      if (e & 1) acc = mul_mod(acc, base, monic, p);
      base = mul_mod(base, base, monic, p);
    }
    h = acc;
    Poly diff = h;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = modp(diff[1] - 1, p);
    trim(diff);
    if (diff.empty()) return false;
    Poly g = gcd(diff, monic, p);
    if (g.size() > 1) return false;
  }
  return true;
}

Poly smallest_irreducible(std::int64_t p, int f) {
  // Enumerate (c0, c1, ..., c_{f-1}) in lexicographic order with c0 most
  // significant.
  std::vector<std::int64_t> digits(f, 0);
  while (true) {
    Poly cand(digits.begin(), digits.end());
    cand.push_back(1);
    if (is_irreducible(cand, p)) return cand;
    int i = f - 1;
    while (i >= 0 && digits[i] == p - 1) {
      digits[i] = 0;
      --i;
    }
    if (i < 0) break;
    ++digits[i];
  }
  throw Error(ErrorCode::NotIrreducible, "no irreducible polynomial found");
}

}  // namespace fp_poly

namespace {
constexpr std::int64_t kMaxTableField = 1 << 16;

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}
}  // namespace

FiniteFieldPtr FiniteField::make(std::int64_t p, int f, std::optional<fp_poly::Poly> modulus) {
  if (!is_prime(p)) throw Error(ErrorCode::MalformedDescriptor, std::to_string(p) + " is not prime");
  if (f < 1) throw Error(ErrorCode::MalformedDescriptor, "degree must be positive");
  std::int64_t q = 1;
  for (int i = 0; i < f; ++i) {
    q *= p;
    if (q > (std::int64_t{1} << 31)) throw Error(ErrorCode::TooLarge, "field too large");
  }
  if (f > 1 && q > kMaxTableField) throw Error(ErrorCode::TooLarge, "extension field larger than 2^16");
  fp_poly::Poly mod;
  if (modulus) {
    mod = *modulus;
    for (auto& c : mod) c = ((c % p) + p) % p;
    if (static_cast<int>(mod.size()) != f + 1 || mod.back() != 1) {
      throw Error(ErrorCode::MalformedDescriptor, "modulus must be monic of degree " + std::to_string(f));
    }
    if (!fp_poly::is_irreducible(mod, p)) throw Error(ErrorCode::NotIrreducible, "modulus is reducible mod p");
  } else {
    mod = fp_poly::smallest_irreducible(p, f);
  }
  return std::shared_ptr<const FiniteField>(new FiniteField(p, f, std::move(mod)));
}

FiniteField::FiniteField(std::int64_t p, int f, fp_poly::Poly modulus)
    : p_(p), f_(f), q_(1), modulus_(std::move(modulus)) {
  for (int i = 0; i < f_; ++i) q_ *= p_;
  if (f_ == 1) {
    generator_ = static_cast<Code>((p_ - modulus_[0]) % p_);
  } else {
    generator_ = static_cast<Code>(p_);
  }
  // Primitive element: smallest code whose order is q-1.
  const auto factors = prime_factors(q_ - 1);
  for (Code g = 1; g < static_cast<Code>(q_); ++g) {
    bool ok = true;
    for (auto r : factors) {
      Code acc = 1, base = g;
      for (std::int64_t e = (q_ - 1) / r; e > 0; e >>= 1) {
        if (e & 1) acc = mul_slow(acc, base);
        base = mul_slow(base, base);
      }
      if (acc == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      primitive_ = g;
      break;
    }
  }
  if (f_ > 1) {
    exp_.resize(q_ - 1);
    log_.assign(q_, -1);
    Code cur = 1;
    for (std::int64_t i = 0; i < q_ - 1; ++i) {
      exp_[i] = cur;
      log_[cur] = static_cast<std::int32_t>(i);
      cur = mul_slow(cur, primitive_);
    }
  }
}

std::string FiniteField::descriptor() const {
  std::string out = "Fq:" + std::to_string(p_) + "^" + std::to_string(f_) + ":mod=";
  for (std::size_t i = 0; i < modulus_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(modulus_[i]);
  }
  return out;
}

FiniteField::Code FiniteField::from_int(std::int64_t n) const {
  n %= p_;
  if (n < 0) n += p_;
  return static_cast<Code>(n);
}

std::vector<std::int64_t> FiniteField::coeffs(Code a) const {
  std::vector<std::int64_t> out(f_, 0);
  for (int i = 0; i < f_; ++i) {
    out[i] = a % p_;
    a /= static_cast<Code>(p_);
  }
  return out;
}

FiniteField::Code FiniteField::from_coeffs(const std::vector<std::int64_t>& c) const {
  std::vector<std::int64_t> r(c.begin(), c.end());
  for (auto& x : r) x = ((x % p_) + p_) % p_;
  if (static_cast<int>(r.size()) > f_) {
    r = fp_poly::rem(r, modulus_, p_);
  }
  Code out = 0;
  for (int i = static_cast<int>(std::min<std::size_t>(r.size(), f_)) - 1; i >= 0; --i) {
    out = out * static_cast<Code>(p_) + static_cast<Code>(r[i]);
  }
  return out;
}

FiniteField::Code FiniteField::add(Code a, Code b) const {
  if (f_ == 1) return static_cast<Code>((a + static_cast<std::int64_t>(b)) % p_);
  if (p_ == 2) return a ^ b;
  Code out = 0, scale = 1;
  for (int i = 0; i < f_; ++i) {
    out += scale * static_cast<Code>(((a % p_) + (b % p_)) % p_);
    a /= static_cast<Code>(p_);
    b /= static_cast<Code>(p_);
    scale *= static_cast<Code>(p_);
  }
  return out;
}

FiniteField::Code FiniteField::neg(Code a) const {
  if (f_ == 1) return a == 0 ? 0 : static_cast<Code>(p_ - a);
  if (p_ == 2) return a;
  Code out = 0, scale = 1;
  for (int i = 0; i < f_; ++i) {
    Code d = a % p_;
    out += scale * (d == 0 ? 0 : static_cast<Code>(p_) - d);
    a /= static_cast<Code>(p_);
    scale *= static_cast<Code>(p_);
  }
  return out;
}

FiniteField::Code FiniteField::sub(Code a, Code b) const { return add(a, neg(b)); }

FiniteField::Code FiniteField::mul_slow(Code a, Code b) const {
  if (f_ == 1) return static_cast<Code>((static_cast<std::int64_t>(a) * b) % p_);
  auto r = fp_poly::mul_mod(coeffs(a), coeffs(b), modulus_, p_);
  return from_coeffs(r);
}

FiniteField::Code FiniteField::mul(Code a, Code b) const {
  if (f_ == 1) return static_cast<Code>((static_cast<std::int64_t>(a) * b) % p_);
  if (a == 0 || b == 0) return 0;
  std::int64_t s = static_cast<std::int64_t>(log_[a]) + log_[b];
  if (s >= q_ - 1) s -= q_ - 1;
  return exp_[s];
}

FiniteField::Code FiniteField::inv(Code a) const {
  if (a == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero in " + descriptor());
  if (f_ == 1) {
    // Extended Euclid on (a, p).
    std::int64_t t = 0, nt = 1, r = p_, nr = a;
    while (nr != 0) {
      std::int64_t qt = r / nr;
      std::tie(t, nt) = std::make_pair(nt, t - qt * nt);
      std::tie(r, nr) = std::make_pair(nr, r - qt * nr);
    }
    return static_cast<Code>(t < 0 ? t + p_ : t);
  }
  std::int64_t l = log_[a];
  return exp_[l == 0 ? 0 : (q_ - 1 - l)];
}

FiniteField::Code FiniteField::pow(Code a, std::int64_t n) const {
  if (n < 0) {
    a = inv(a);
    n = -n;
  }
  Code acc = 1, base = a;
  for (; n > 0; n >>= 1) {
    if (n & 1) acc = mul(acc, base);
    base = mul(base, base);
  }
  return acc;
}

FiniteField::Code FiniteField::pth_root(Code a) const { return pow(a, q_ / p_); }

std::int64_t FiniteField::trace(Code a) const {
  Code acc = 0, cur = a;
  for (int i = 0; i < f_; ++i) {
    acc = add(acc, cur);
    cur = frobenius(cur);
  }
  // The trace lies in the prime field, whose codes are 0..p-1.
  return static_cast<std::int64_t>(acc);
}

std::string FiniteField::format(Code a) const {
  if (f_ == 1) return std::to_string(a);
  auto c = coeffs(a);
  std::string out;
  for (int i = f_ - 1; i >= 0; --i) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (i == 0) {
      out += std::to_string(c[i]);
      continue;
    }
    if (c[i] != 1) out += std::to_string(c[i]) + "*";
    out += "z";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

bool FiniteField::same_as(const FiniteField& other) const {
  return this == &other || (p_ == other.p_ && f_ == other.f_ && modulus_ == other.modulus_);
}

}  // namespace valring
