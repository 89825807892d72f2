#include "quanttm/decimal.hpp"

#include <charconv>
#include <limits>

#include "quanttm/errors.hpp"

namespace quanttm {

namespace {

[[noreturn]] void bad_decimal(std::string_view text) {
  throw Error(ErrorCode::InvalidValue, "not a decimal number: '" + std::string(text) + "'");
}

BigInt pow10(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 0; i < n; ++i) r *= 10;
  return r;
}

}  // namespace

Decimal Decimal::parse(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  BigInt digits = 0;
  long scale = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      any_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) bad_decimal(text);
  long exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') bad_decimal(text);
    ++i;
    auto rest = text.substr(i);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
    if (ec != std::errc{} || ptr != rest.data() + rest.size() || rest.empty()) bad_decimal(text);
    if (exponent > 400 || exponent < -400) bad_decimal(text);
  }
  long shift = exponent - scale;
  Rational value = shift >= 0 ? Rational(digits * pow10(static_cast<unsigned>(shift)))
                              : Rational(digits, pow10(static_cast<unsigned>(-shift)));
  return Decimal(negative ? Rational(-value) : value);
}

Decimal Decimal::from_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw Error(ErrorCode::InvalidValue, "unrepresentable number");
  return parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

double Decimal::to_double() const { return value_.convert_to<double>(); }

bool Decimal::is_integer() const { return denominator(value_) == 1; }

std::string Decimal::str() const {
  BigInt num = numerator(value_);
  BigInt den = denominator(value_);
  bool negative = num < 0;
  if (negative) num = -num;

  // Smallest k with den | 10^k, if den = 2^a 5^b.
  BigInt rest = den;
  unsigned twos = 0, fives = 0;
  while (rest % 2 == 0) { rest /= 2; ++twos; }
  while (rest % 5 == 0) { rest /= 5; ++fives; }
  unsigned k = std::max(twos, fives);
  BigInt scaled;
  if (rest == 1) {
    scaled = num * pow10(k) / den;
  } else {
    k = 18;
    BigInt p = pow10(k);
    scaled = (num * p * 2 + den) / (den * 2);
  }
  std::string digits = scaled.str();
  if (digits.size() <= k) digits.insert(0, k - digits.size() + 1, '0');
  std::string out = digits.substr(0, digits.size() - k);
  std::string frac = digits.substr(digits.size() - k);
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (!frac.empty()) out += "." + frac;
  if (negative && out != "0") out.insert(0, "-");
  return out;
}

std::int64_t round_half_up(const Rational& value) {
  BigInt num = numerator(value);
  BigInt den = denominator(value);
  bool negative = num < 0;
  if (negative) num = -num;
  BigInt q = (num * 2 + den) / (den * 2);
  if (negative) q = -q;
  if (q > std::numeric_limits<std::int64_t>::max() || q < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorCode::InvalidValue, "amount exceeds 64-bit range");
  }
  return q.convert_to<std::int64_t>();
}

}  // namespace quanttm
