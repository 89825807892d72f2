#include <gtest/gtest.h>

#include "quanttm/decimal.hpp"
#include "quanttm/errors.hpp"
#include "quanttm/money.hpp"

using namespace quanttm;

TEST(Decimal, ParsesExactly) {
  EXPECT_EQ(Decimal::parse("0.2").rational(), Rational(1, 5));
  EXPECT_EQ(Decimal::parse("-0.25").rational(), Rational(-1, 4));
  EXPECT_EQ(Decimal::parse("1e-05").rational(), Rational(1, 100000));
  EXPECT_EQ(Decimal::parse("2.5E3").rational(), Rational(2500));
  EXPECT_EQ(Decimal::parse("12").rational(), Rational(12));
}

TEST(Decimal, RejectsGarbage) {
  for (const char* bad : {"", "abc", "1.2.3", "--1", "1e", ".", "1,5", "nan", "inf"}) {
    EXPECT_THROW(Decimal::parse(bad), Error) << bad;
  }
}

TEST(Decimal, FromDoubleUsesShortestForm) {
  EXPECT_EQ(Decimal::from_double(0.1), Decimal::parse("0.1"));
  EXPECT_EQ(Decimal::from_double(1.08), Decimal::parse("1.08"));
  EXPECT_EQ(Decimal::from_double(1e-5), Decimal::parse("0.00001"));
}

TEST(Decimal, Str) {
  EXPECT_EQ(Decimal::parse("194.40").str(), "194.4");
  EXPECT_EQ(Decimal(48).str(), "48");
  EXPECT_EQ(Decimal::parse("-0.5").str(), "-0.5");
  EXPECT_TRUE(Decimal(3).is_integer());
  EXPECT_FALSE(Decimal::parse("3.5").is_integer());
}

TEST(Decimal, RoundHalfUp) {
  EXPECT_EQ(round_half_up(Rational(5, 2)), 3);
  EXPECT_EQ(round_half_up(Rational(-5, 2)), -3);
  EXPECT_EQ(round_half_up(Rational(49, 10)), 5);
  EXPECT_EQ(round_half_up(Rational(44, 10)), 4);
  EXPECT_EQ(round_half_up(Rational(-44, 10)), -4);
  EXPECT_THROW(round_half_up(Rational(BigInt(1) << 70)), Error);
}

TEST(Money, CurrencyTable) {
  EXPECT_EQ(currency_exponent("USD"), 2);
  EXPECT_EQ(currency_exponent("JPY"), 0);
  EXPECT_EQ(currency_exponent("BHD"), 3);
  EXPECT_FALSE(is_valid_currency("usd"));
  EXPECT_FALSE(is_valid_currency("XYZ"));
  EXPECT_THROW(Money(1, "XYZ"), Error);
}

TEST(Money, Formatting) {
  EXPECT_EQ(Money(162000, "USD").str(), "1620.00 USD");
  EXPECT_EQ(Money(-21600, "USD").major_str(), "-216.00");
  EXPECT_EQ(Money(5, "JPY").major_str(), "5");
  EXPECT_EQ(Money(1234, "BHD").major_str(), "1.234");
  EXPECT_EQ(Money(-5, "USD").major_str(), "-0.05");
}

TEST(Money, FromMajorRoundsHalfUp) {
  EXPECT_EQ(Money::from_major(Rational(194), "USD").amount_minor(), 19400);
  EXPECT_EQ(Money::from_major(Rational(1, 200), "USD").amount_minor(), 1);
  EXPECT_EQ(Money::from_major(Rational(-1, 200), "USD").amount_minor(), -1);
}

TEST(Money, MixedCurrencyArithmeticThrows) {
  try {
    (void)(Money(1, "USD") + Money(1, "CHF"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MixedCurrency);
  }
  EXPECT_EQ(Money(1, "USD") + Money(2, "USD"), Money(3, "USD"));
  EXPECT_LT(Money(1, "USD"), Money(2, "USD"));
}

TEST(Money, Conversion) {
  // 1500.00 CHF at 1.08 -> 1620.00 USD
  EXPECT_EQ(convert_currency(Money(150000, "CHF"), Decimal::parse("1.08"), "USD"), Money(162000, "USD"));
  // 100.00 USD at 150 -> 15000 JPY (no minor digits)
  EXPECT_EQ(convert_currency(Money(10000, "USD"), Decimal(150), "JPY"), Money(15000, "JPY"));
  EXPECT_EQ(convert_currency(Money(15000, "JPY"), Decimal::parse("0.0066667"), "USD"), Money(10000, "USD"));
  try {
    convert_currency(Money(1, "USD"), Decimal(0), "CHF");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveRate);
  }
  EXPECT_THROW(convert_currency(Money(1, "USD"), Decimal(1), "XYZ"), Error);
}
