#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace valring {

using Integer = mpz_class;
using Rational = mpq_class;

bool is_prime(std::int64_t n);

// Returns (p, f) when q = p^f with p prime, otherwise (0, 0).
std::pair<int, int> prime_power_decomposition(std::int64_t q);

std::vector<std::int64_t> prime_powers_in_range(std::int64_t lo, std::int64_t hi);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

// p-adic order of a nonzero integer.
long ord_p(const Integer& n, unsigned long p);

// p-adic order of a nonzero rational.
long ord_p(const Rational& r, unsigned long p);

Integer ipow(const Integer& base, unsigned long exp);

// Reduces a p-integral rational into [0, modulus); modulus is a power of p.
Integer reduce_mod(const Rational& r, const Integer& modulus);

// Truncates r so that ord_p(r - result) >= digits; non-integral powers of p
// are kept exactly.
Rational truncate_padic(const Rational& r, unsigned long p, long digits);

std::string to_string(const Rational& r);

Rational parse_rational(const std::string& text);

}  // namespace valring
