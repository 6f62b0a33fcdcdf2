#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace valring {

// Sample counts and ranges for the invariant suites.
struct SuiteScale {
  int membership_samples = 500;
  int lemma_samples = 1000;
  std::int64_t lift_qmax = 49;
  int unit_samples = 200;
  std::int64_t scan_qmax = 101;
  std::int64_t power_qmax = 4096;
  std::int64_t power_mmax = 60;
  int cubes_fmax = 12;
  int edef_samples = 200;
  int prime_samples = 500;
  int evaluator_samples = 1000;
  int roundtrip_samples = 10000;
  int hensel_samples = 500;
  std::int64_t nth_qmax = 512;
  std::int64_t nth_nmax = 12;
  int threads = 4;

  static SuiteScale full() { return {}; }
  static SuiteScale reduced();
};

struct SuiteResult {
  std::string name;
  std::int64_t checks = 0;
  std::int64_t failures = 0;
  std::vector<std::string> messages;
  std::int64_t ms = 0;
  bool ok() const { return failures == 0 && checks > 0; }
};

// main2, main, lemma-val, unit-powers, cd-scan, appendix, e-def, main-prime,
// evaluator, hensel.
const std::vector<std::string>& suite_names();
// Throws BadParameter for an unknown name.
SuiteResult run_suite(const std::string& name, const SuiteScale& scale, std::uint64_t seed);
std::string suite_result_json(const SuiteResult& r);

// Fields each suite samples from.
const std::vector<std::string>& membership_fields();

}  // namespace valring
