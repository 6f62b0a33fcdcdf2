#include "valring/decompose.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <stdexcept>

#include "json.hpp"

#include "valring/error.hpp"

namespace valring {

using Code = FiniteField::Code;

namespace {

std::vector<char> indicator(const FiniteField& k, const std::vector<Code>& S) {
  std::vector<char> in(static_cast<std::size_t>(k.q()), 0);
  for (Code c : S) in[c] = 1;
  return in;
}

std::vector<char> as_image(const FiniteField& k) {
  std::vector<char> in(static_cast<std::size_t>(k.q()), 0);
  for (Code y = 0; y < k.q(); ++y) in[k.add(k.mul(y, y), y)] = 1;
  return in;
}

// Number of y with y^n = c, for every c.
std::vector<std::int64_t> root_counts(const FiniteField& k, int n) {
  std::vector<std::int64_t> cnt(static_cast<std::size_t>(k.q()), 0);
  for (Code y = 0; y < k.q(); ++y) ++cnt[k.pow(y, n)];
  return cnt;
}

std::vector<std::int64_t> as_counts(const FiniteField& k) {
  std::vector<std::int64_t> cnt(static_cast<std::size_t>(k.q()), 0);
  for (Code y = 0; y < k.q(); ++y) ++cnt[k.add(k.mul(y, y), y)];
  return cnt;
}

Code int_code(const FiniteField& k, std::int64_t n) {
  n %= k.p();
  return k.from_int(n < 0 ? n + k.p() : n);
}

}  // namespace

std::vector<Code> definable_set_residue(const std::string& set, const FiniteFieldPtr& kp) {
  const FiniteField& k = *kp;
  if (k.q() > kMaxScanQ) throw Error(ErrorCode::TooLarge, "q = " + std::to_string(k.q()) + " exceeds 4096");
  std::vector<Code> out;
  auto T_p = [&](Code x, int p) {
    Code shift = int_code(k, p == 2 ? 4 : 27);
    return fq_is_nth_power(k, k.add(shift, x), p) && !fq_is_nth_power(k, x, p);
  };
  if (set == "T2" || set == "T3" || set == "T") {
    for (Code x = 0; x < k.q(); ++x) {
      bool in = set == "T2" ? T_p(x, 2) : set == "T3" ? T_p(x, 3) : (T_p(x, 2) || T_p(x, 3));
      if (in) out.push_back(x);
    }
    return out;
  }
  if (set == "Tplus") {
    auto image = as_image(k);
    for (Code x = 1; x < k.q(); ++x) {
      if (!image[x] && !image[k.inv(x)]) out.push_back(x);
    }
    return out;
  }
  if (set.size() >= 2 && set[0] == 'P' && std::all_of(set.begin() + 1, set.end(), ::isdigit)) {
    int m = std::stoi(set.substr(1));
    if (m < 2 || m > 64) throw Error(ErrorCode::BadParameter, "P_m needs 2 <= m <= 64");
    for (Code x = 1; x < k.q(); ++x) {
      if (fq_is_nth_power(k, x, m)) out.push_back(x);
    }
    return out;
  }
  throw Error(ErrorCode::BadParameter, "unknown set '" + set + "'");
}

std::vector<ResidueDecomposition> cd_decompositions(const FqElem& theta, const std::vector<Code>& S,
                                                    std::size_t limit) {
  const FiniteField& k = *theta.field;
  std::vector<Code> sorted = S;
  std::sort(sorted.begin(), sorted.end());
  auto in = indicator(k, sorted);
  std::vector<ResidueDecomposition> out;
  auto el = [&](Code c) { return FqElem{theta.field, c}; };
  for (Code a : sorted) {
    for (Code b : sorted) {
      Code rest = k.sub(k.sub(theta.code, a), b);
      for (Code c : sorted) {
        if (c == 0) {
          if (rest != 0) continue;
          for (Code d : sorted) {
            out.push_back({el(a), el(b), el(c), el(d), theta});
            if (out.size() >= limit) return out;
          }
          continue;
        }
        Code d = k.mul(rest, k.inv(c));
        if (!in[d]) continue;
        out.push_back({el(a), el(b), el(c), el(d), theta});
        if (out.size() >= limit) return out;
      }
    }
  }
  return out;
}

ResidueDecomposition cd_decompose(const FqElem& theta, const std::vector<Code>& S) {
  auto all = cd_decompositions(theta, S, 1);
  if (all.empty()) throw Error(ErrorCode::NoDecomposition, theta.to_string() + " is not a + b + cd over the set");
  return all.front();
}

bool verify_decomposition(const ResidueDecomposition& d, const std::vector<Code>& S) {
  auto member = [&](const FqElem& e) { return std::find(S.begin(), S.end(), e.code) != S.end(); };
  return member(d.a) && member(d.b) && member(d.c) && member(d.d) && d.a + d.b + d.c * d.d == d.target;
}

std::vector<Code> uncovered(const FiniteField& k, const std::vector<Code>& S) {
  const auto q = static_cast<std::size_t>(k.q());
  std::vector<char> prod(q, 0), sum(q, 0), all(q, 0);
  for (Code c : S) {
    for (Code d : S) prod[k.mul(c, d)] = 1;
  }
  for (Code b : S) {
    for (Code x = 0; x < q; ++x) {
      if (prod[x]) sum[k.add(b, x)] = 1;
    }
  }
  for (Code a : S) {
    for (Code x = 0; x < q; ++x) {
      if (sum[x]) all[k.add(a, x)] = 1;
    }
  }
  std::vector<Code> out;
  for (Code x = 0; x < q; ++x) {
    if (!all[x]) out.push_back(x);
  }
  return out;
}

std::optional<std::pair<std::int64_t, int>> prime_power(std::int64_t q) {
  if (q < 2) return std::nullopt;
  std::int64_t p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;
  int f = 0;
  std::int64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++f;
  }
  if (r != 1) return std::nullopt;
  return std::make_pair(p, f);
}

std::vector<std::int64_t> prime_powers(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t q = std::max<std::int64_t>(lo, 2); q <= hi; ++q) {
    if (prime_power(q)) out.push_back(q);
  }
  return out;
}

ScanRecord scan_one(const std::string& set, std::int64_t q) {
  auto start = std::chrono::steady_clock::now();
  auto pf = prime_power(q);
  if (!pf) throw Error(ErrorCode::BadParameter, std::to_string(q) + " is not a prime power");
  auto k = FiniteField::make(pf->first, pf->second);
  ScanRecord r;
  r.q = q;
  r.set = set;
  auto S = definable_set_residue(set, k);
  r.size = S.size();
  if (set == "T" && !fq_has_noncubes(*k) && k->p() == 2) r.applicable = false;
  r.failures = uncovered(*k, S);
  r.covered = r.failures.empty();
  r.ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ScanSummary scan_N(const std::string& set, std::int64_t qmin, std::int64_t qmax, int threads) {
  if (qmax > kMaxScanQ) throw Error(ErrorCode::TooLarge, "qmax exceeds 4096");
  ScanSummary out;
  auto qs = prime_powers(qmin, qmax);
  out.records.resize(qs.size());
  threads = std::max(1, threads);
  std::vector<std::future<void>> jobs;
  for (int t = 0; t < threads; ++t) {
    jobs.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t i = static_cast<std::size_t>(t); i < qs.size(); i += static_cast<std::size_t>(threads)) {
        out.records[i] = scan_one(set, qs[i]);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  std::optional<std::int64_t> last_fail;
  bool seen_cover = false;
  for (const auto& r : out.records) {
    if (!r.applicable) continue;
    if (r.covered) {
      seen_cover = true;
    } else {
      last_fail = r.q;
      if (seen_cover) out.regressions.push_back(r.q);
    }
  }
  for (const auto& r : out.records) {
    if (r.applicable && r.covered && (!last_fail || r.q > *last_fail)) {
      out.N = r.q;
      break;
    }
  }
  return out;
}

std::string scan_record_json(const ScanRecord& r) {
  nlohmann::ordered_json j;
  j["q"] = r.q;
  j["set"] = r.set;
  j["size"] = r.size;
  j["covered"] = r.covered;
  auto pf = prime_power(r.q);
  auto k = FiniteField::make(pf->first, pf->second);
  nlohmann::ordered_json fails = nlohmann::ordered_json::array();
  for (Code c : r.failures) fails.push_back(k->format(c));
  j["failures"] = fails;
  if (!r.applicable) j["applicable"] = false;
  j["ms"] = r.ms;
  return j.dump();
}

LiftedDecomposition lift_decomposition(const Element& theta, BaseSet base) {
  const Field& K = theta.field();
  if (!theta.is_zero() && theta.val() < Valuation(0)) throw Error(ErrorCode::NotIntegral, "theta has negative valuation");
  const auto& k = K.residue_field();
  auto S = definable_set_residue(base == BaseSet::T ? "T" : "Tplus", k);
  if (S.empty()) throw Error(ErrorCode::ResidueNotCovered, "base set is empty over the residue field");
  FqElem r = theta.residue();
  for (const auto& d : cd_decompositions(r, S, 256)) {
    LiftedDecomposition out;
    out.residue = d;
    out.base = base;
    out.target = theta;
    out.b = K.lift(d.b);
    out.c = K.lift(d.c);
    out.d = K.lift(d.d);
    out.a = theta - (out.b + out.c * out.d);
    try {
      if (verify_lifted(out)) return out;
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::ResidueNotCovered, "no residue decomposition of " + r.to_string() + " lifts");
}

bool verify_lifted(const LiftedDecomposition& d) {
  if (!(d.a + d.b + d.c * d.d - d.target).is_zero()) return false;
  for (const Element* e : {&d.a, &d.b, &d.c, &d.d}) {
    if (!in_base(*e, d.base)) return false;
  }
  return true;
}

PowerCheck power_surjective_check(std::int64_t q, std::int64_t m) {
  auto pf = prime_power(q);
  if (!pf || q > kMaxScanQ) throw Error(ErrorCode::BadParameter, "q must be a prime power <= 4096");
  if (m < 1 || m > 64) throw Error(ErrorCode::BadParameter, "m must be in 1..64");
  auto k = FiniteField::make(pf->first, pf->second);
  std::vector<char> hit(static_cast<std::size_t>(q), 0);
  std::int64_t image = 0;
  for (Code x = 1; x < q; ++x) {
    Code y = k->pow(x, m);
    if (!hit[y]) {
      hit[y] = 1;
      ++image;
    }
  }
  return PowerCheck{image == q - 1, gcd64(q - 1, m) == 1};
}

bool power_surjective(std::int64_t q, std::int64_t m) {
  auto c = power_surjective_check(q, m);
  if (c.by_enumeration != c.by_gcd) {
    throw std::logic_error("power map enumeration disagrees with gcd rule at q=" + std::to_string(q) +
                           ", m=" + std::to_string(m));
  }
  return c.by_gcd;
}

std::vector<CubesRecord> all_cubes_char2_scan(int fmax) {
  if (fmax < 1 || fmax > 20) throw Error(ErrorCode::BadParameter, "fmax must be in 1..20");
  std::vector<CubesRecord> out;
  for (int f = 1; f <= fmax; ++f) {
    std::int64_t q = std::int64_t{1} << f;
    CubesRecord r{f, gcd64(q - 1, 3) == 1, false};
    if (q <= kMaxScanQ) {
      r.enumerated = true;
      bool enumerated = power_surjective_check(q, 3).by_enumeration;
      if (enumerated != r.all_cubes) throw std::logic_error("cube enumeration disagrees with gcd rule");
    }
    if (r.all_cubes) out.push_back(r);
  }
  return out;
}

std::optional<Code> curve_parameter(const std::string& curve, const FiniteField& k) {
  for (Code a = 1; a < k.q(); ++a) {
    bool ok;
    if (curve == "dimC") ok = !fq_is_nth_power(k, a, k.p() == 2 ? 3 : 2);
    else if (curve == "dim2C") ok = k.p() == 2 ? !fq_artin_schreier_root(k, a) : !fq_is_nth_power(k, a, 2);
    else throw Error(ErrorCode::BadParameter, "unknown curve '" + curve + "'");
    if (ok) return a;
  }
  return std::nullopt;
}

std::int64_t curve_points(const std::string& curve, const FiniteFieldPtr& kp, Code a) {
  const FiniteField& k = *kp;
  if (k.q() > kMaxScanQ) throw Error(ErrorCode::TooLarge, "q exceeds 4096");
  const bool even = k.p() == 2;
  std::int64_t count = 0;
  if (curve == "dimC") {
    const int n = even ? 3 : 2;
    if (a == 0 || fq_is_nth_power(k, a, n)) throw Error(ErrorCode::BadParameter, "a must be a non-power");
    auto roots = root_counts(k, n);
    const Code shift = int_code(k, even ? 1 : 4);
    const Code ainv = k.inv(a);
    for (Code x = 0; x < k.q(); ++x) count += roots[k.add(shift, x)] * roots[k.mul(x, ainv)];
    return count;
  }
  if (curve == "dim2C") {
    if (even) {
      if (fq_artin_schreier_root(k, a)) throw Error(ErrorCode::BadParameter, "a must lie outside y^2 + y");
      auto as = as_counts(k);
      for (Code x = 1; x < k.q(); ++x) count += as[k.sub(a, x)] * as[k.sub(a, k.inv(x))];
      return count;
    }
    if (a == 0 || fq_is_nth_power(k, a, 2)) throw Error(ErrorCode::BadParameter, "a must be a non-square");
    auto roots = root_counts(k, 2);
    const Code four = int_code(k, 4), ainv = k.inv(a);
    for (Code x = 1; x < k.q(); ++x) {
      Code lhs_w = k.mul(k.add(1, k.mul(four, x)), ainv);
      Code lhs_v = k.mul(k.add(1, k.mul(four, k.inv(x))), ainv);
      count += roots[lhs_w] * roots[lhs_v];
    }
    return count;
  }
  throw Error(ErrorCode::BadParameter, "unknown curve '" + curve + "'");
}

}  // namespace valring
