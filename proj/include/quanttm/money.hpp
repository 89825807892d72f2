#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "quanttm/decimal.hpp"

namespace quanttm {

// Number of minor-unit digits for an ISO-4217 code, or -1 if the code is
// not in the built-in table.
int currency_exponent(std::string_view code);
bool is_valid_currency(std::string_view code);

// Integer count of minor currency units. Arithmetic between amounts of
// different currencies throws Error(MixedCurrency).
class Money {
 public:
  Money() = default;
  Money(std::int64_t amount_minor, std::string currency);

  static Money zero(std::string currency) { return Money(0, std::move(currency)); }
  // Round half-up a major-unit quantity into minor units.
  static Money from_major(const Rational& major, std::string currency);
  static Money from_minor_exact(const Rational& minor, std::string currency);

  std::int64_t amount_minor() const noexcept { return amount_minor_; }
  const std::string& currency() const noexcept { return currency_; }
  int exponent() const { return currency_exponent(currency_); }

  Rational major() const;
  // "1620.00" (no currency suffix), exact.
  std::string major_str() const;
  // "1620.00 USD"
  std::string str() const;

  Money operator+(const Money& other) const;
  Money operator-(const Money& other) const;
  Money operator-() const { return Money(-amount_minor_, currency_); }
  Money& operator+=(const Money& other) { return *this = *this + other; }

  bool operator==(const Money&) const = default;
  // Ordering is only meaningful within one currency.
  std::strong_ordering operator<=>(const Money& other) const;

 private:
  std::int64_t amount_minor_ = 0;
  std::string currency_ = "USD";
};

// amount_minor' = round_half_up(amount_minor * rate), rescaled when the two
// currencies carry a different number of minor digits.
Money convert_currency(const Money& m, const Decimal& rate, std::string_view target);

}  // namespace quanttm
