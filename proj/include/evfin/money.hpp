#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace evfin {

// Signed currency amount held as integer US cents.
class Money {
public:
    constexpr Money() = default;

    static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }
    static constexpr Money from_dollars(std::int64_t dollars) { return Money(dollars * 100); }

    // Rejects amounts that are not representable to the cent (tolerance 1e-6 cent).
    static Money from_dollars_exact(double dollars);

    constexpr std::int64_t cents() const { return cents_; }
    constexpr double dollars() const { return static_cast<double>(cents_) / 100.0; }

    constexpr bool is_zero() const { return cents_ == 0; }
    constexpr bool is_negative() const { return cents_ < 0; }

    Money operator+(Money other) const;
    Money operator-(Money other) const;
    Money operator-() const { return Money(-cents_); }
    Money& operator+=(Money other) { return *this = *this + other; }
    Money& operator-=(Money other) { return *this = *this - other; }

    // Checked integer scaling.
    Money times(std::int64_t count) const;

    // Rounds to the nearest cent, halves away from zero.
    Money scaled(double factor) const;

    friend constexpr auto operator<=>(Money, Money) = default;

private:
    constexpr explicit Money(std::int64_t cents) : cents_(cents) {}
    std::int64_t cents_ = 0;
};

// "$10,000,000" when cents are zero, "$33.34" otherwise; negatives as "-$500,000".
std::string format_usd(Money amount);

// Plain machine-readable decimal: "720000.00", "-500000.00".
std::string format_decimal(Money amount);

} // namespace evfin
