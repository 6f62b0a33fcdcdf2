#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace valring {

// An element of the value group (1/e)Z extended by +infinity. Stored as a
// reduced fraction num/den with den > 0.
class Valuation {
 public:
  Valuation() = default;
  Valuation(std::int64_t num, std::int64_t den = 1);

  static Valuation infinity();

  bool is_infinite() const { return infinite_; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integral() const { return !infinite_ && den_ == 1; }

  // Value scaled by e, i.e. the exponent of the uniformizer. Requires that
  // den divides e.
  std::int64_t in_units(int e) const;

  Valuation operator+(const Valuation& o) const;
  Valuation operator-(const Valuation& o) const;
  Valuation operator*(std::int64_t k) const;

  bool operator==(const Valuation& o) const;
  std::strong_ordering operator<=>(const Valuation& o) const;

  std::string to_string() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  bool infinite_ = false;
};

}  // namespace valring
