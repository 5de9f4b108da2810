#pragma once

// Configurable-precision floating point: radix r, P significant radix-r
// digits, unbounded exponent, and either truncation or binary
// round-to-nearest-even. There are no NaNs, infinities, subnormals or signed
// zeros in this arithmetic.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "pae/error.hpp"

namespace pae {

using BigInt = boost::multiprecision::cpp_int;

enum class Rounding { TruncateTowardZero, RoundNearestEven };

// "trunc" / "rne"
std::string_view rounding_name(Rounding rounding);
std::optional<Rounding> parse_rounding(std::string_view name);

inline constexpr int kMaxRadix = 36;
inline constexpr int kBinary32MantissaBits = 23;

class FloatFormat {
 public:
  // Throws InvalidFormat unless 2 <= radix <= 36, precision >= 1, and
  // RoundNearestEven is only paired with radix 2.
  FloatFormat(int radix, int precision_digits, Rounding rounding);

  // Binary format with `mantissa_bits` stored bits plus the hidden bit.
  static FloatFormat binary(int mantissa_bits, Rounding rounding);

  int radix() const { return radix_; }
  int precision() const { return precision_; }
  Rounding rounding() const { return rounding_; }

  FloatFormat with_rounding(Rounding rounding) const {
    return FloatFormat(radix_, precision_, rounding);
  }

  friend bool operator==(const FloatFormat&, const FloatFormat&) = default;

 private:
  int radix_;
  int precision_;
  Rounding rounding_;
};

namespace detail {
struct ValueAccess;
}

// sign * significand * radix^exponent.
//
// Nonzero values are kept canonical: the significand has no trailing zero
// digits (they live in the exponent) and at most P digits for the format
// that produced it. Zero is significand 0, exponent 0, positive. Structural
// equality is therefore value equality.
class FloatValue {
 public:
  FloatValue() = default;

  bool negative() const { return negative_; }
  const BigInt& significand() const { return significand_; }
  std::int64_t exponent() const { return exponent_; }
  bool is_zero() const { return significand_ == 0; }

  FloatValue operator-() const;

  friend bool operator==(const FloatValue&, const FloatValue&) = default;

 private:
  friend struct detail::ValueAccess;
  FloatValue(bool negative, BigInt significand, std::int64_t exponent)
      : negative_(negative),
        significand_(std::move(significand)),
        exponent_(exponent) {}

  bool negative_ = false;
  BigInt significand_ = 0;
  std::int64_t exponent_ = 0;
};

// coefficient * radix^exponent rounded to the format. This is the single
// rounding point every arithmetic operation funnels through.
FloatValue round_to_format(const BigInt& coefficient, std::int64_t exponent,
                           const FloatFormat& fmt);

FloatValue from_integer(const BigInt& x, const FloatFormat& fmt);

// Throws NotAnInteger when the value has a fractional part.
BigInt to_integer(const FloatValue& v, const FloatFormat& fmt);
bool is_integer(const FloatValue& v, const FloatFormat& fmt);

FloatValue add(const FloatValue& a, const FloatValue& b, const FloatFormat& fmt);
FloatValue sub(const FloatValue& a, const FloatValue& b, const FloatFormat& fmt);
FloatValue mul(const FloatValue& a, const FloatValue& b, const FloatFormat& fmt);

FloatValue power_of_radix(std::int64_t e, const FloatFormat& fmt);

// Radix digits of an integer value, zero-padded on the left to a whole
// number of `group`-digit blocks and separated by single spaces. Digits are
// '0'-'9' then 'a'-'z'; negative values get a leading '-'.
// Throws NotAnInteger for fractional values.
std::string render_digits(const FloatValue& v, const FloatFormat& fmt, int group);

// Integers print in decimal, anything else as "<significand>*r^<exponent>".
std::string describe(const FloatValue& v, const FloatFormat& fmt);

// Number of radix digits in x > 0 (0 for x == 0).
int digit_count(const BigInt& x, int radix);
BigInt radix_pow(int radix, std::int64_t e);

}  // namespace pae
