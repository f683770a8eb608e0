#include "robatch/money.hpp"

#include <cctype>
#include <cstdio>
#include <numeric>

namespace robatch {

namespace {

[[noreturn]] void bad_money(std::string_view text) {
    throw schema_error("invalid money literal '" + std::string(text) +
                       "' (expected decimal with at most 6 fractional digits)");
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw schema_error("money overflow");
    return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw schema_error("money overflow");
    return out;
}

} // namespace

Money Money::from_units(std::int64_t units) {
    return Money(checked_mul(units, kScale));
}

Money Money::parse(std::string_view text) {
    if (text.empty()) bad_money(text);
    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    if (pos == text.size()) bad_money(text);

    std::int64_t whole = 0;
    bool any_digit = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        whole = checked_add(checked_mul(whole, 10), text[pos] - '0');
        any_digit = true;
        ++pos;
    }

    std::int64_t frac = 0;
    int frac_digits = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            if (frac_digits == 6) bad_money(text); // finer than the money grid
            frac = frac * 10 + (text[pos] - '0');
            ++frac_digits;
            any_digit = true;
            ++pos;
        }
        if (frac_digits == 0) bad_money(text);
    }
    if (!any_digit || pos != text.size()) bad_money(text);

    for (int i = frac_digits; i < 6; ++i) frac *= 10;
    std::int64_t micro = checked_add(checked_mul(whole, kScale), frac);
    return Money(negative ? -micro : micro);
}

std::string Money::str() const {
    std::int64_t v = micro_;
    std::string sign;
    if (v < 0) {
        sign = "-";
        v = -v;
    }
    std::int64_t whole = v / kScale;
    std::int64_t frac = v % kScale;
    char buf[32];
    if (frac == 0) {
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(whole));
        return sign + buf;
    }
    std::snprintf(buf, sizeof buf, "%06lld", static_cast<long long>(frac));
    std::string digits(buf);
    while (digits.back() == '0') digits.pop_back();
    char head[32];
    std::snprintf(head, sizeof head, "%lld", static_cast<long long>(whole));
    return sign + head + "." + digits;
}

Money Money::operator+(Money rhs) const { return Money(checked_add(micro_, rhs.micro_)); }

Money Money::operator-(Money rhs) const {
    std::int64_t out;
    if (__builtin_sub_overflow(micro_, rhs.micro_, &out)) throw schema_error("money overflow");
    return Money(out);
}

Money Money::operator*(std::int64_t count) const { return Money(checked_mul(micro_, count)); }

UtilityMicro utility_from_double(double value) {
    if (!(value > 0.0)) return 0; // also catches NaN
    if (value >= 1.0) return kUtilityScale;
    return static_cast<UtilityMicro>(value * kUtilityScale + 0.5);
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b, std::int64_t limit) {
    std::int64_t g = std::gcd(a, b);
    int128 l = static_cast<int128>(a / g) * b;
    if (l > limit) {
        throw schema_error("batch-size grid too irregular for exact budget accounting "
                           "(tick scale would exceed " + std::to_string(limit) + ")");
    }
    return static_cast<std::int64_t>(l);
}

} // namespace robatch
