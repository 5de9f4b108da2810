#include "pae/softfloat.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace pae {

namespace mp = boost::multiprecision;

namespace detail {
struct ValueAccess {
  static FloatValue make(bool negative, BigInt significand, std::int64_t exponent) {
    return FloatValue(negative, std::move(significand), exponent);
  }
};
}  // namespace detail

std::string_view rounding_name(Rounding rounding) {
  switch (rounding) {
    case Rounding::TruncateTowardZero:
      return "trunc";
    case Rounding::RoundNearestEven:
      return "rne";
  }
  return "?";
}

std::optional<Rounding> parse_rounding(std::string_view name) {
  if (name == "trunc") return Rounding::TruncateTowardZero;
  if (name == "rne") return Rounding::RoundNearestEven;
  return std::nullopt;
}

FloatFormat::FloatFormat(int radix, int precision_digits, Rounding rounding)
    : radix_(radix), precision_(precision_digits), rounding_(rounding) {
  if (radix < 2 || radix > kMaxRadix) {
    throw InvalidFormat("radix must be in [2, 36], got " + std::to_string(radix));
  }
  if (precision_digits < 1) {
    throw InvalidFormat("precision must be at least one digit, got " +
                        std::to_string(precision_digits));
  }
  if (rounding == Rounding::RoundNearestEven && radix != 2) {
    throw InvalidFormat("round-to-nearest-even is only defined for radix 2");
  }
}

FloatFormat FloatFormat::binary(int mantissa_bits, Rounding rounding) {
  if (mantissa_bits < 0) {
    throw InvalidFormat("mantissa width must be nonnegative, got " +
                        std::to_string(mantissa_bits));
  }
  return FloatFormat(2, mantissa_bits + 1, rounding);
}

namespace {

int log2_of_radix(int radix) {
  return (radix & (radix - 1)) == 0 ? static_cast<int>(mp::msb(unsigned(radix)))
                                    : 0;
}

// x * radix^k for k >= 0.
BigInt scale_up(const BigInt& x, int radix, std::int64_t k) {
  if (k == 0 || x == 0) return x;
  if (int b = log2_of_radix(radix)) return x << static_cast<unsigned>(k * b);
  return x * radix_pow(radix, k);
}

// Splits x into (x / radix^k, x mod radix^k) for k >= 0.
std::pair<BigInt, BigInt> split_low(const BigInt& x, int radix, std::int64_t k) {
  if (k == 0) return {x, BigInt(0)};
  if (int b = log2_of_radix(radix)) {
    const auto bits = static_cast<unsigned>(k * b);
    BigInt low = x & ((BigInt(1) << bits) - 1);
    return {x >> bits, std::move(low)};
  }
  BigInt q, r;
  mp::divide_qr(x, radix_pow(radix, k), q, r);
  return {std::move(q), std::move(r)};
}

}  // namespace

BigInt radix_pow(int radix, std::int64_t e) {
  if (e < 0) throw std::invalid_argument("radix_pow: negative exponent");
  if (int b = log2_of_radix(radix)) return BigInt(1) << static_cast<unsigned>(e * b);
  return mp::pow(BigInt(radix), static_cast<unsigned>(e));
}

int digit_count(const BigInt& x, int radix) {
  if (x == 0) return 0;
  const BigInt mag = x < 0 ? BigInt(-x) : BigInt();
  const BigInt& m = x < 0 ? mag : x;
  const auto top_bit = static_cast<std::int64_t>(mp::msb(m));
  if (int b = log2_of_radix(radix)) return static_cast<int>(top_bit / b + 1);
  // Estimate from the bit length, then correct by at most a step either way.
  auto d = static_cast<std::int64_t>(
      std::floor(static_cast<double>(top_bit) / std::log2(double(radix))));
  d = std::max<std::int64_t>(d, 0);
  while (d > 0 && radix_pow(radix, d) > m) --d;
  while (radix_pow(radix, d + 1) <= m) ++d;
  return static_cast<int>(d + 1);
}

FloatValue FloatValue::operator-() const {
  FloatValue out = *this;
  if (!out.is_zero()) out.negative_ = !out.negative_;
  return out;
}

namespace {

using u128 = unsigned __int128;

// Bit access shared by the BigInt path and the native 128-bit fast path.
std::int64_t top_bit(const BigInt& x) { return static_cast<std::int64_t>(mp::msb(x)); }
std::int64_t low_bit(const BigInt& x) { return static_cast<std::int64_t>(mp::lsb(x)); }
bool test_bit(const BigInt& x, unsigned i) { return mp::bit_test(x, i); }

std::int64_t top_bit(u128 x) {
  const auto hi = static_cast<std::uint64_t>(x >> 64);
  return hi ? 127 - std::countl_zero(hi) : 63 - std::countl_zero(static_cast<std::uint64_t>(x));
}
std::int64_t low_bit(u128 x) {
  const auto lo = static_cast<std::uint64_t>(x);
  return lo ? std::countr_zero(lo) : 64 + std::countr_zero(static_cast<std::uint64_t>(x >> 64));
}
bool test_bit(u128 x, unsigned i) { return i < 128 && ((x >> i) & 1) != 0; }

// Low limb of a nonnegative BigInt that fits in 64 bits.
std::optional<std::uint64_t> small_value(const BigInt& x) {
  if (x.backend().size() != 1) return std::nullopt;
  return static_cast<std::uint64_t>(x.backend().limbs()[0]);
}

BigInt to_big(u128 x) {
  const auto hi = static_cast<std::uint64_t>(x >> 64);
  BigInt out = static_cast<std::uint64_t>(x);
  if (hi) out |= BigInt(hi) << 64;
  return out;
}

// Radix 2^b: rounds mag (nonzero) to P digits and strips trailing zero
// digits, adjusting the exponent.
template <typename U>
void round_binary(U& mag, std::int64_t& exponent, int b, const FloatFormat& fmt) {
  const std::int64_t digits = top_bit(mag) / b + 1;
  if (digits > fmt.precision()) {
    const std::int64_t drop = digits - fmt.precision();
    const auto drop_bits = static_cast<unsigned>(drop * b);
    bool round_up = false;
    if (fmt.rounding() == Rounding::RoundNearestEven) {
      // Binary only: round bit is the top dropped bit, sticky is the rest.
      const unsigned round_pos = drop_bits - 1;
      const bool round_bit = test_bit(mag, round_pos);
      const bool sticky = round_pos > 0 && low_bit(mag) < round_pos;
      round_up = round_bit && (sticky || test_bit(mag, drop_bits));
    }
    mag >>= drop_bits;
    if (round_up) mag += 1;
    exponent += drop;
  }
  const std::int64_t zeros = low_bit(mag) / b;
  if (zeros > 0) {
    mag >>= static_cast<unsigned>(zeros * b);
    exponent += zeros;
  }
}

FloatValue pack_small(bool negative, u128 mag, std::int64_t exponent, int b,
                      const FloatFormat& fmt) {
  if (mag == 0) return FloatValue{};
  round_binary(mag, exponent, b, fmt);
  return detail::ValueAccess::make(negative, to_big(mag), exponent);
}

// Rounds and canonicalizes sign * mag * radix^exponent, consuming `mag`.
FloatValue round_pack(bool negative, BigInt mag, std::int64_t exponent,
                      const FloatFormat& fmt) {
  if (mag == 0) return FloatValue{};
  const int radix = fmt.radix();

  if (const int b = log2_of_radix(radix)) {
    if (auto v = small_value(mag)) return pack_small(negative, *v, exponent, b, fmt);
    round_binary(mag, exponent, b, fmt);
    return detail::ValueAccess::make(negative, std::move(mag), exponent);
  }

  const int digits = digit_count(mag, radix);
  if (digits > fmt.precision()) {
    // Truncation is the only mode for radices other than 2.
    const std::int64_t drop = digits - fmt.precision();
    mag /= radix_pow(radix, drop);
    exponent += drop;
  }
  BigInt q, r;
  for (;;) {
    mp::divide_qr(mag, BigInt(radix), q, r);
    if (r != 0) break;
    mag.swap(q);
    ++exponent;
  }
  return detail::ValueAccess::make(negative, std::move(mag), exponent);
}

}  // namespace

FloatValue round_to_format(const BigInt& coefficient, std::int64_t exponent,
                           const FloatFormat& fmt) {
  if (coefficient == 0) return FloatValue{};
  if (coefficient < 0) return round_pack(true, -coefficient, exponent, fmt);
  return round_pack(false, coefficient, exponent, fmt);
}

FloatValue from_integer(const BigInt& x, const FloatFormat& fmt) {
  return round_to_format(x, 0, fmt);
}

namespace {

BigInt signed_significand(const FloatValue& v) {
  return v.negative() ? BigInt(-v.significand()) : v.significand();
}

}  // namespace

bool is_integer(const FloatValue& v, const FloatFormat& fmt) {
  if (v.is_zero() || v.exponent() >= 0) return true;
  return split_low(v.significand(), fmt.radix(), -v.exponent()).second == 0;
}

BigInt to_integer(const FloatValue& v, const FloatFormat& fmt) {
  if (v.is_zero()) return 0;
  if (v.exponent() >= 0) {
    return scale_up(signed_significand(v), fmt.radix(), v.exponent());
  }
  auto [whole, frac] = split_low(v.significand(), fmt.radix(), -v.exponent());
  if (frac != 0) {
    throw NotAnInteger(describe(v, fmt) + " has a fractional part");
  }
  return v.negative() ? BigInt(-whole) : whole;
}

FloatValue add(const FloatValue& a, const FloatValue& b, const FloatFormat& fmt) {
  if (b.is_zero()) return round_pack(a.negative(), a.significand(), a.exponent(), fmt);
  if (a.is_zero()) return round_pack(b.negative(), b.significand(), b.exponent(), fmt);

  const int radix = fmt.radix();
  const int a_digits = digit_count(a.significand(), radix);
  const int b_digits = digit_count(b.significand(), radix);
  const bool a_larger = a.exponent() + a_digits >= b.exponent() + b_digits;
  const FloatValue& big = a_larger ? a : b;
  const FloatValue& small = a_larger ? b : a;
  const int big_digits = a_larger ? a_digits : b_digits;
  const int small_digits = a_larger ? b_digits : a_digits;

  // An operand lying wholly below the round digit of the larger one only
  // matters as a sticky contribution; collapse it so the alignment shift
  // stays bounded by the precision instead of the exponent gap.
  const std::int64_t floor_pos = big.exponent() + big_digits - fmt.precision() - 2;
  BigInt small_sig;
  std::int64_t small_exp;
  if (big_digits <= fmt.precision() && small.exponent() + small_digits <= floor_pos) {
    small_sig = 1;
    small_exp = floor_pos - 1;
  } else {
    small_sig = small.significand();
    small_exp = small.exponent();
  }

  const std::int64_t base = std::min(big.exponent(), small_exp);
  const bool same_sign = big.negative() == small.negative();

  if (const int b = log2_of_radix(radix)) {
    const auto big_small = small_value(big.significand());
    const auto small_small = small_value(small_sig);
    const std::int64_t big_shift = (big.exponent() - base) * b;
    const std::int64_t small_shift = (small_exp - base) * b;
    if (big_small && small_small && big_shift < 64 && small_shift < 64) {
      const u128 x = u128(*big_small) << big_shift;
      const u128 y = u128(*small_small) << small_shift;
      if (same_sign) return pack_small(big.negative(), x + y, base, b, fmt);
      if (x >= y) return pack_small(big.negative(), x - y, base, b, fmt);
      return pack_small(!big.negative(), y - x, base, b, fmt);
    }
  }

  BigInt sum = scale_up(big.significand(), radix, big.exponent() - base);
  if (same_sign) {
    sum += scale_up(small_sig, radix, small_exp - base);
  } else {
    sum -= scale_up(small_sig, radix, small_exp - base);
  }
  if (sum == 0) return FloatValue{};
  if (sum < 0) return round_pack(!big.negative(), -sum, base, fmt);
  return round_pack(big.negative(), std::move(sum), base, fmt);
}

FloatValue sub(const FloatValue& a, const FloatValue& b, const FloatFormat& fmt) {
  return add(a, -b, fmt);
}

FloatValue mul(const FloatValue& a, const FloatValue& b, const FloatFormat& fmt) {
  if (a.is_zero() || b.is_zero()) return FloatValue{};
  const bool negative = a.negative() != b.negative();
  // A power-of-radix factor only moves the exponent.
  if (a.significand() == 1) {
    return round_pack(negative, b.significand(), a.exponent() + b.exponent(), fmt);
  }
  if (b.significand() == 1) {
    return round_pack(negative, a.significand(), a.exponent() + b.exponent(), fmt);
  }
  if (const int bits = log2_of_radix(fmt.radix())) {
    const auto x = small_value(a.significand());
    const auto y = small_value(b.significand());
    if (x && y) return pack_small(negative, u128(*x) * *y, a.exponent() + b.exponent(), bits, fmt);
  }
  return round_pack(negative, a.significand() * b.significand(),
                    a.exponent() + b.exponent(), fmt);
}

FloatValue power_of_radix(std::int64_t e, const FloatFormat& fmt) {
  return round_to_format(1, e, fmt);
}

namespace {

std::string integer_digits(BigInt mag, int radix) {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string out;
  BigInt q, r;
  while (mag != 0) {
    mp::divide_qr(mag, BigInt(radix), q, r);
    out.push_back(kDigits[r.convert_to<int>()]);
    mag.swap(q);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

std::string render_digits(const FloatValue& v, const FloatFormat& fmt, int group) {
  if (group < 1) throw std::invalid_argument("render_digits: group must be >= 1");
  const BigInt value = to_integer(v, fmt);
  std::string digits = integer_digits(mp::abs(value), fmt.radix());
  const std::size_t width = std::max<std::size_t>(
      group, (digits.size() + group - 1) / group * group);
  digits.insert(0, width - digits.size(), '0');

  std::string out = value < 0 ? "-" : "";
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && i % group == 0) out.push_back(' ');
    out.push_back(digits[i]);
  }
  return out;
}

std::string describe(const FloatValue& v, const FloatFormat& fmt) {
  if (is_integer(v, fmt)) return to_integer(v, fmt).str();
  std::string out = v.negative() ? "-" : "";
  out += v.significand().str();
  out += "*" + std::to_string(fmt.radix()) + "^" + std::to_string(v.exponent());
  return out;
}

}  // namespace pae
