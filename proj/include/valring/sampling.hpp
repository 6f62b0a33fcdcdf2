#pragma once

#include <cstdint>
#include <random>

#include "valring/field.hpp"

namespace valring {

using Rng = std::mt19937_64;

std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi);

// A random exact unit: a random nonzero residue lifted, plus a few exact
// higher-order terms with small p-free numerators and denominators.
Element random_unit(const Field& K, Rng& rng);

// pi^k times a random unit, k uniform in [min_units, max_units]; exactly 0
// with small probability when allow_zero.
Element random_element(const Field& K, Rng& rng, std::int64_t min_units, std::int64_t max_units, bool allow_zero = true);

}  // namespace valring
