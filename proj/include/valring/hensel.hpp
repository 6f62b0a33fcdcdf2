#pragma once

#include <vector>

#include "valring/field.hpp"

namespace valring {

// Univariate polynomial over a field, coefficients low-to-high.
using ElemPoly = std::vector<Element>;

Element poly_eval(const ElemPoly& f, const Element& x);
ElemPoly poly_derivative(const ElemPoly& f);

struct HenselProblem {
  ElemPoly poly;
  Element approx;
};

// The exact element agreeing with x below valuation units/e; the known
// digits of an inexact element become an exact value.
Element approximate(const Element& x, std::int64_t units);
Element drop_precision(const Element& x);

// Newton iteration from approx. Requires val(f(a)) > 2 val(f'(a)). The
// result is exact when it is an exact root, otherwise it carries precision
// val(f(r)) - val(f'(r)) >= the field's working precision.
Element hensel_root(const HenselProblem& prob);

}  // namespace valring
