#pragma once

#include <optional>
#include <vector>

#include "valring/numbers.hpp"

namespace valring::linalg {

using Matrix = std::vector<std::vector<Rational>>;

Rational determinant(Matrix m);

// Solves m * x = b; nullopt when m is singular.
std::optional<std::vector<Rational>> solve(Matrix m, std::vector<Rational> b);

}  // namespace valring::linalg
