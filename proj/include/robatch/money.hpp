#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "robatch/errors.hpp"

namespace robatch {

using int128 = __int128;

/// Monetary amount as a fixed-precision decimal: an integer count of
/// micro-units (1e-6). Keeping money integral makes budget traces exactly
/// reproducible; parsing rejects inputs finer than the grid instead of
/// silently rounding them.
class Money {
  public:
    static constexpr std::int64_t kScale = 1'000'000;

    constexpr Money() = default;

    static constexpr Money from_micro(std::int64_t micro) { return Money(micro); }
    static Money from_units(std::int64_t units);

    /// Parses a plain decimal string like "39.3", "0.000001" or "-2".
    /// At most 6 fractional digits; no exponents.
    static Money parse(std::string_view text);

    constexpr std::int64_t micro() const { return micro_; }
    double to_double() const { return static_cast<double>(micro_) / kScale; }

    /// Canonical decimal form: fractional part trimmed of trailing zeros,
    /// omitted entirely when zero ("39.3", "26", "-0.5").
    std::string str() const;

    constexpr bool is_zero() const { return micro_ == 0; }
    constexpr bool is_negative() const { return micro_ < 0; }

    Money operator+(Money rhs) const;
    Money operator-(Money rhs) const;
    Money& operator+=(Money rhs) { return *this = *this + rhs; }
    Money& operator-=(Money rhs) { return *this = *this - rhs; }

    /// Checked multiplication by a scalar count (tokens, invocations).
    Money operator*(std::int64_t count) const;

    friend constexpr bool operator==(Money a, Money b) { return a.micro_ == b.micro_; }
    friend constexpr bool operator!=(Money a, Money b) { return a.micro_ != b.micro_; }
    friend constexpr bool operator<(Money a, Money b) { return a.micro_ < b.micro_; }
    friend constexpr bool operator<=(Money a, Money b) { return a.micro_ <= b.micro_; }
    friend constexpr bool operator>(Money a, Money b) { return a.micro_ > b.micro_; }
    friend constexpr bool operator>=(Money a, Money b) { return a.micro_ >= b.micro_; }

  private:
    constexpr explicit Money(std::int64_t micro) : micro_(micro) {}

    std::int64_t micro_ = 0;
};

/// Utility scores are quantized to the same 1e-6 grid as money so that
/// priority comparisons in the scheduler are exact integer arithmetic.
using UtilityMicro = std::int64_t;
constexpr std::int64_t kUtilityScale = 1'000'000;

/// Rounds a fraction in [0, 1] to the utility grid (clamping).
UtilityMicro utility_from_double(double value);

inline double utility_to_double(UtilityMicro u) {
    return static_cast<double>(u) / kUtilityScale;
}

/// Least common multiple with an overflow guard; used to pick the tick scale
/// for exact budget accounting.
std::int64_t checked_lcm(std::int64_t a, std::int64_t b, std::int64_t limit);

} // namespace robatch
