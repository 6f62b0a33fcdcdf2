#include "valring/hensel.hpp"

#include "valring/error.hpp"
#include "valring/laurent_field.hpp"
#include "valring/padic_field.hpp"

namespace valring {

Element poly_eval(const ElemPoly& f, const Element& x) {
  if (f.empty()) return x.field().zero();
  Element acc = f.back();
  for (std::size_t i = f.size() - 1; i-- > 0;) acc = acc * x + f[i];
  return acc;
}

ElemPoly poly_derivative(const ElemPoly& f) {
  ElemPoly out;
  for (std::size_t i = 1; i < f.size(); ++i) out.push_back(f[i] * f[i].field().from_integer(static_cast<long>(i)));
  return out;
}

Element drop_precision(const Element& x) {
  const Field& K = x.field();
  switch (K.kind()) {
    case FieldKind::Padic: {
      auto P = as_padic(x.field_ptr());
      return P->from_coords(P->coords(x));
    }
    case FieldKind::Laurent: {
      auto L = as_laurent(x.field_ptr());
      LaurentRep r = L->rep(x);
      r.precision.reset();
      return L->from_rep(std::move(r));
    }
    case FieldKind::Finite:
      return x;
  }
  return x;
}

Element approximate(const Element& x, std::int64_t units) {
  const Field& K = x.field();
  switch (K.kind()) {
    case FieldKind::Padic: {
      auto P = as_padic(x.field_ptr());
      return P->from_coords(P->coords(P->truncate(x, units)));
    }
    case FieldKind::Laurent: {
      auto L = as_laurent(x.field_ptr());
      LaurentRep r = L->rep(x);
      r.precision = units;
      r = L->rep(L->from_rep(std::move(r)));
      r.precision.reset();
      return L->from_rep(std::move(r));
    }
    case FieldKind::Finite:
      return x;
  }
  return x;
}

Element hensel_root(const HenselProblem& prob) {
  if (prob.poly.empty()) throw Error(ErrorCode::BadParameter, "empty polynomial");
  const Field& K = prob.approx.field();
  ElemPoly f;
  for (const auto& c : prob.poly) f.push_back(drop_precision(c));
  const ElemPoly df = poly_derivative(f);
  Element r = drop_precision(prob.approx);
  Element fr = poly_eval(f, r);
  if (fr.is_zero()) return r;
  Element dfr = poly_eval(df, r);
  if (dfr.is_zero()) throw Error(ErrorCode::CriterionFails, "f'(a) = 0");
  const Valuation vd = dfr.val();
  if (!K.is_valued() || !(fr.val() > vd * 2)) {
    throw Error(ErrorCode::CriterionFails, "val(f(a)) = " + fr.val().to_string() + ", 2 val(f'(a)) = " + (vd * 2).to_string());
  }
  const int e = K.ramification();
  const std::int64_t target = K.precision();
  const std::int64_t vd_units = vd.in_units(e);
  for (int iter = 0; iter < 64; ++iter) {
    const std::int64_t vf = fr.val().in_units(e);
    if (vf - vd_units >= target && vf >= target) return K.with_precision(r, vf - vd_units);
    Element step = fr * dfr.inv();
    std::int64_t keep = target + vd_units + 1;
    if (auto sp = K.precision_of(step)) keep = std::min(keep, *sp);
    r = approximate(r - step, std::max<std::int64_t>(keep, vf - vd_units + 1));
    fr = poly_eval(f, r);
    if (fr.is_zero()) return r;
    dfr = poly_eval(df, r);
  }
  throw Error(ErrorCode::InsufficientPrecision, "Newton iteration did not reach working precision");
}

}  // namespace valring
