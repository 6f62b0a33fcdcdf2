#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "valring/field.hpp"
#include "valring/predicates.hpp"

namespace valring {

constexpr std::int64_t kMaxScanQ = 4096;

// "T2", "T3", "T", "Tplus", or "P<m>" (nonzero m-th powers), evaluated over k
// by exhaustive enumeration. Sorted by code.
std::vector<FiniteField::Code> definable_set_residue(const std::string& set, const FiniteFieldPtr& k);

struct ResidueDecomposition {
  FqElem a, b, c, d, target;
};

struct LiftedDecomposition {
  Element a, b, c, d, target;
  ResidueDecomposition residue;
  BaseSet base = BaseSet::T;
};

// First (a, b, c, d) in lexicographic code order with a + b + c*d = theta.
// Throws NoDecomposition.
ResidueDecomposition cd_decompose(const FqElem& theta, const std::vector<FiniteField::Code>& S);
// Every decomposition, in the same order, up to `limit`.
std::vector<ResidueDecomposition> cd_decompositions(const FqElem& theta, const std::vector<FiniteField::Code>& S,
                                                    std::size_t limit);
bool verify_decomposition(const ResidueDecomposition& d, const std::vector<FiniteField::Code>& S);

// Elements of k not of the form a + b + c*d with a, b, c, d in S.
std::vector<FiniteField::Code> uncovered(const FiniteField& k, const std::vector<FiniteField::Code>& S);

struct ScanRecord {
  std::int64_t q = 0;
  std::string set;
  std::size_t size = 0;
  bool applicable = true;
  bool covered = false;
  std::vector<FiniteField::Code> failures;
  std::int64_t ms = 0;
};

struct ScanSummary {
  std::vector<ScanRecord> records;
  // Least q in range such that every applicable q' >= q is covered.
  std::optional<std::int64_t> N;
  // Applicable q that fail after a smaller applicable q was covered.
  std::vector<std::int64_t> regressions;
};

std::vector<std::int64_t> prime_powers(std::int64_t lo, std::int64_t hi);
// Some (p, f) with p^f = q, or nullopt.
std::optional<std::pair<std::int64_t, int>> prime_power(std::int64_t q);

ScanRecord scan_one(const std::string& set, std::int64_t q);
ScanSummary scan_N(const std::string& set, std::int64_t qmin, std::int64_t qmax, int threads = 1);
std::string scan_record_json(const ScanRecord& r);

// theta - (b + c*d) for canonical lifts b, c, d of a residue decomposition,
// with all four re-verified in the base set of K. Throws NotIntegral,
// ResidueNotCovered.
LiftedDecomposition lift_decomposition(const Element& theta, BaseSet base);
bool verify_lifted(const LiftedDecomposition& d);

struct PowerCheck {
  bool by_enumeration = false;
  bool by_gcd = false;
};
PowerCheck power_surjective_check(std::int64_t q, std::int64_t m);
// Throws std::logic_error if enumeration and the gcd rule disagree.
bool power_surjective(std::int64_t q, std::int64_t m);

struct CubesRecord {
  int f = 0;
  bool all_cubes = false;
  bool enumerated = false;
};
std::vector<CubesRecord> all_cubes_char2_scan(int fmax);

// Affine points (w, v, x) on
//   dimC:  w^2 = 4 + x, a v^2 = x            (odd q, a a non-square)
//          w^3 = 1 + x, a v^3 = x            (q even, a a non-cube)
//   dim2C: 1 + 4x = a w^2, 1 + 4/x = a v^2   (odd q, a a non-square)
//          w^2 + w = a - x, v^2 + v = a - 1/x (q even, a outside y^2 + y)
// Throws BadParameter if a violates the hypothesis.
std::int64_t curve_points(const std::string& curve, const FiniteFieldPtr& k, FiniteField::Code a);
// The least admissible parameter for the curve, or nullopt.
std::optional<FiniteField::Code> curve_parameter(const std::string& curve, const FiniteField& k);

}  // namespace valring
