#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace quanttm {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact decimal quantity (probabilities, degrees, recovery levels, days,
// exchange rates, DREAD scores). Parsed from decimal text, never from a
// binary float directly, so 0.2 really is 1/5.
class Decimal {
 public:
  Decimal() = default;
  Decimal(std::int64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Decimal(Rational v) : value_(std::move(v)) {}

  // Accepts "12", "-0.25", "1e-05", "2.5E3". Throws Error(InvalidValue).
  static Decimal parse(std::string_view text);
  // Shortest round-trip representation of `v`, then parse().
  static Decimal from_double(double v);

  const Rational& rational() const noexcept { return value_; }
  double to_double() const;
  bool is_integer() const;
  // Exact text when the value terminates in base 10; otherwise rounded to
  // 18 fractional digits.
  std::string str() const;

  friend bool operator==(const Decimal& a, const Decimal& b) { return a.value_ == b.value_; }
  friend bool operator<(const Decimal& a, const Decimal& b) { return a.value_ < b.value_; }
  friend bool operator>(const Decimal& a, const Decimal& b) { return b < a; }
  friend bool operator<=(const Decimal& a, const Decimal& b) { return !(b < a); }
  friend bool operator>=(const Decimal& a, const Decimal& b) { return !(a < b); }

 private:
  Rational value_{0};
};

// Round half away from zero to an integer ("half-up" on magnitudes).
// Throws Error(InvalidValue) if the result does not fit in int64.
std::int64_t round_half_up(const Rational& value);

}  // namespace quanttm
