#include "evfin/money.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include <fmt/format.h>

#include "evfin/errors.hpp"

namespace evfin {

namespace {

// Money stays within +/- 2^62 cents so that sums of two never wrap.
constexpr std::int64_t money_limit = std::int64_t{1} << 62;

std::int64_t checked(long double cents) {
    if (!std::isfinite(cents) || std::fabs(cents) >= static_cast<long double>(money_limit)) {
        throw DomainError("currency amount out of range");
    }
    return static_cast<std::int64_t>(cents);
}

std::string group_thousands(std::uint64_t value) {
    std::string digits = std::to_string(value);
    std::string out;
    out.reserve(digits.size() + digits.size() / 3);
    const std::size_t lead = digits.size() % 3;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i != 0 && (i % 3) == lead) {
            out.push_back(',');
        }
        out.push_back(digits[i]);
    }
    return out;
}

} // namespace

Money Money::from_dollars_exact(double dollars) {
    const long double cents = static_cast<long double>(dollars) * 100.0L;
    const long double nearest = std::round(cents);
    if (std::fabs(cents - nearest) > 1e-6L) {
        throw ValidationError(fmt::format("amount {} has sub-cent precision", dollars));
    }
    return Money(checked(nearest));
}

Money Money::operator+(Money other) const {
    std::int64_t sum = 0;
    if (__builtin_add_overflow(cents_, other.cents_, &sum) || std::llabs(sum) >= money_limit) {
        throw DomainError("currency sum out of range");
    }
    return Money(sum);
}

Money Money::operator-(Money other) const { return *this + Money(-other.cents_); }

Money Money::times(std::int64_t count) const {
    std::int64_t product = 0;
    if (__builtin_mul_overflow(cents_, count, &product) || std::llabs(product) >= money_limit) {
        throw DomainError("currency product out of range");
    }
    return Money(product);
}

Money Money::scaled(double factor) const {
    return Money(checked(std::round(static_cast<long double>(cents_) * static_cast<long double>(factor))));
}

std::string format_usd(Money amount) {
    const std::int64_t cents = amount.cents();
    const std::uint64_t magnitude = cents < 0 ? static_cast<std::uint64_t>(-cents) : static_cast<std::uint64_t>(cents);
    std::string text = cents < 0 ? "-$" : "$";
    text += group_thousands(magnitude / 100);
    if (magnitude % 100 != 0) {
        text += fmt::format(".{:02}", magnitude % 100);
    }
    return text;
}

std::string format_decimal(Money amount) {
    const std::int64_t cents = amount.cents();
    const std::uint64_t magnitude = cents < 0 ? static_cast<std::uint64_t>(-cents) : static_cast<std::uint64_t>(cents);
    return fmt::format("{}{}.{:02}", cents < 0 ? "-" : "", magnitude / 100, magnitude % 100);
}

} // namespace evfin
