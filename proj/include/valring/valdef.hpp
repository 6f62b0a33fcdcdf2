#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "valring/decompose.hpp"
#include "valring/field.hpp"
#include "valring/formula.hpp"
#include "valring/predicates.hpp"

namespace valring {

// --- constants ----------------------------------------------------------------------

struct EllConstant {
  std::int64_t q = 0;
  std::int64_t ell = 0;
  bool uniform = false;
};

// q(q - 1).
EllConstant choose_ell(std::int64_t q);
// lcm of q'(q' - 1) over prime powers q' < N; q is carried along.
EllConstant choose_ell_uniform(std::int64_t N, std::int64_t q = 0);

// Directory holding the N fixture: $VALRING_CACHE if set, else the bundled
// data directory.
std::string cache_dir();
std::string fixture_path();
struct NFixture {
  std::optional<std::int64_t> N_T;
  std::optional<std::int64_t> N_Tplus;
  std::int64_t qmax = 0;
  int version = 0;
};
// Empty fields when the file is missing or lacks an entry.
NFixture load_fixture();
void save_fixture(const NFixture& fx);
std::optional<std::int64_t> recorded_N(BaseSet base);

// --- membership ---------------------------------------------------------------------

enum class Method { Main, Main2 };
std::string_view method_name(Method m);
Method parse_method(std::string_view s);
BaseSet method_base(Method m);

enum class Branch { SumsetSell, CauchyDavenport, NegativeValuation };
std::string_view branch_name(Branch b);

enum class BranchChoice { Auto, SumsetOnly, DecompositionOnly };
enum class EllMode { PerField, Uniform };

struct DecideOptions {
  BranchChoice branch = BranchChoice::Auto;
  EllMode ell_mode = EllMode::PerField;
  // Overrides the exponent (e.g. one read off a formula).
  std::optional<std::int64_t> ell;
  // Overrides the fixture.
  std::optional<std::int64_t> N;
};

struct MembershipCertificate {
  bool inside = false;
  Method method = Method::Main2;
  Branch branch = Branch::NegativeValuation;
  Element x;
  // NegativeValuation
  Valuation val;
  // SumsetSell: x = shift + unit, unit^ell - 1 + a = shifted, a and shifted in the base set.
  int shift = 0;
  Element unit, a, shifted;
  std::int64_t ell = 0;
  // CauchyDavenport
  std::optional<LiftedDecomposition> decomposition;
};

// Throws MethodInapplicable, NotExact.
MembershipCertificate decide_OK(const Element& x, Method method, const DecideOptions& options = {});
bool oracle_OK(const Element& x);

// Re-checks a certificate using field arithmetic and the base-set predicates only.
bool verify_certificate(const MembershipCertificate& c);

// Compact form {"verdict","branch",...}; `full` adds x, method, base, shifted.
std::string certificate_json(const MembershipCertificate& c, bool full = false);
// Parses a certificate printed by certificate_json(c, true) back over K.
MembershipCertificate certificate_from_json(const std::string& text, const FieldPtr& K);

// --- formulas -----------------------------------------------------------------------

// Membership formulas over T and T+, macros expanded.
FormulaPtr main_formula(std::int64_t ell);
FormulaPtr main2_formula(std::int64_t ell);
// main2 with every PAS2(t) replaced by P2(1 + 4t).
FormulaPtr main_prime_formula(std::int64_t ell);
FormulaPtr T_formula(const std::string& var);
FormulaPtr Tplus_formula(const std::string& var);

struct ExtensionPlan {
  std::int64_t p = 2;
  int f = 1;
  int e = 1;
  // Monic integer polynomial of degree f, low-to-high.
  std::vector<Integer> G;
  // Hstar[j] = coefficients (low-to-high in z) of H*_j, j = 0..e-1.
  std::vector<std::vector<Rational>> Hstar;
  int which_power = 2;
};

// Parses a JSON plan: {"p":2,"f":1,"e":2,"G":[-1,1],"eis":[-2,0,1]} with
// "Hstar":[[...],...] accepted instead of "eis". Throws InvalidPlan.
ExtensionPlan parse_plan(const std::string& json);
ExtensionPlan make_plan(std::int64_t p, int f, const std::vector<Rational>& eis);
// Throws InvalidPlan unless G is irreducible mod p and H*_eta is Eisenstein
// at every root eta of G.
void validate_plan(const ExtensionPlan& plan);
// The tower Q_p(gamma, pi) defined by the plan.
FieldPtr plan_field(const ExtensionPlan& plan);
std::string plan_json(const ExtensionPlan& plan);

struct ExtensionFormulas {
  FormulaPtr existential;
  FormulaPtr universal;
};
ExtensionFormulas build_extension_formula(const ExtensionPlan& plan);

// Roots in K of G, and of H*_eta for a root eta.
std::vector<Element> roots_of_G(const ExtensionPlan& plan, const Field& K);
std::vector<Element> uniformizer_set(const ExtensionPlan& plan, const Field& K);

struct ExtensionReport {
  int samples = 0;
  int existential_agree = 0;
  int universal_agree = 0;
  int existential_unknown = 0;
  int universal_unknown = 0;
  std::vector<std::string> failures;
  int uniformizers = 0;
  int uniformizers_ok = 0;
  bool ok() const {
    return existential_agree == samples && universal_agree == samples && uniformizers > 0 &&
           uniformizers == uniformizers_ok;
  }
};
ExtensionReport verify_extension_formula(const ExtensionPlan& plan, const FieldPtr& K, int samples,
                                         std::uint64_t seed);
std::string extension_report_json(const ExtensionReport& r);

// Deciders for the formulas above, recognised up to commutativity and
// renaming of bound variables.
const Registry& default_registry();

}  // namespace valring
