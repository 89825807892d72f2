#include "quanttm/money.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "quanttm/errors.hpp"

namespace quanttm {

namespace {

struct CurrencyInfo {
  std::string_view code;
  int exponent;
};

constexpr std::array<CurrencyInfo, 44> kCurrencies{{
    {"AED", 2}, {"ARS", 2}, {"AUD", 2}, {"BHD", 3}, {"BRL", 2}, {"CAD", 2}, {"CHF", 2},
    {"CLP", 0}, {"CNY", 2}, {"COP", 2}, {"CZK", 2}, {"DKK", 2}, {"EGP", 2}, {"EUR", 2},
    {"GBP", 2}, {"HKD", 2}, {"HUF", 2}, {"IDR", 2}, {"ILS", 2}, {"INR", 2}, {"ISK", 0},
    {"JOD", 3}, {"JPY", 0}, {"KRW", 0}, {"KWD", 3}, {"MXN", 2}, {"MYR", 2}, {"NOK", 2},
    {"NZD", 2}, {"OMR", 3}, {"PHP", 2}, {"PLN", 2}, {"RON", 2}, {"RUB", 2}, {"SAR", 2},
    {"SEK", 2}, {"SGD", 2}, {"THB", 2}, {"TRY", 2}, {"TWD", 2}, {"UAH", 2}, {"USD", 2},
    {"VND", 0}, {"ZAR", 2},
}};

BigInt pow10(int n) {
  BigInt r = 1;
  for (int i = 0; i < n; ++i) r *= 10;
  return r;
}

void require_same(const Money& a, const Money& b) {
  if (a.currency() != b.currency()) {
    throw Error(ErrorCode::MixedCurrency, "cannot combine " + a.currency() + " with " + b.currency());
  }
}

}  // namespace

int currency_exponent(std::string_view code) {
  auto it = std::find_if(kCurrencies.begin(), kCurrencies.end(),
                         [&](const CurrencyInfo& c) { return c.code == code; });
  return it == kCurrencies.end() ? -1 : it->exponent;
}

bool is_valid_currency(std::string_view code) { return currency_exponent(code) >= 0; }

Money::Money(std::int64_t amount_minor, std::string currency)
    : amount_minor_(amount_minor), currency_(std::move(currency)) {
  if (!is_valid_currency(currency_)) {
    throw Error(ErrorCode::InvalidCurrency, "unknown currency code '" + currency_ + "'");
  }
}

Money Money::from_major(const Rational& major, std::string currency) {
  int e = currency_exponent(currency);
  if (e < 0) throw Error(ErrorCode::InvalidCurrency, "unknown currency code '" + currency + "'");
  return Money(round_half_up(major * Rational(pow10(e))), std::move(currency));
}

Money Money::from_minor_exact(const Rational& minor, std::string currency) {
  return Money(round_half_up(minor), std::move(currency));
}

Rational Money::major() const { return Rational(BigInt(amount_minor_), pow10(exponent())); }

std::string Money::major_str() const {
  int e = exponent();
  bool negative = amount_minor_ < 0;
  // Avoid overflow on INT64_MIN by going through BigInt.
  BigInt mag = BigInt(amount_minor_);
  if (negative) mag = -mag;
  std::string digits = mag.str();
  if (e > 0) {
    if (static_cast<int>(digits.size()) <= e) digits.insert(0, e - digits.size() + 1, '0');
    digits.insert(digits.size() - e, ".");
  }
  return negative ? "-" + digits : digits;
}

std::string Money::str() const { return major_str() + " " + currency_; }

Money Money::operator+(const Money& other) const {
  require_same(*this, other);
  return Money(amount_minor_ + other.amount_minor_, currency_);
}

Money Money::operator-(const Money& other) const {
  require_same(*this, other);
  return Money(amount_minor_ - other.amount_minor_, currency_);
}

std::strong_ordering Money::operator<=>(const Money& other) const {
  require_same(*this, other);
  return amount_minor_ <=> other.amount_minor_;
}

Money convert_currency(const Money& m, const Decimal& rate, std::string_view target) {
  if (rate.rational() <= 0) {
    throw Error(ErrorCode::NonPositiveRate, "conversion rate must be positive, got " + rate.str());
  }
  int to = currency_exponent(target);
  if (to < 0) throw Error(ErrorCode::InvalidCurrency, "unknown currency code '" + std::string(target) + "'");
  int from = m.exponent();
  Rational scaled = Rational(BigInt(m.amount_minor())) * rate.rational();
  if (to > from) scaled *= Rational(pow10(to - from));
  if (from > to) scaled /= Rational(pow10(from - to));
  return Money(round_half_up(scaled), std::string(target));
}

}  // namespace quanttm
