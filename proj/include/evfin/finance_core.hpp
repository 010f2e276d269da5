#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evfin/money.hpp"

namespace evfin {

enum class CostCategory { capital, indirect, operating_reserve, contingency };

std::string_view to_string(CostCategory category);
std::optional<CostCategory> parse_cost_category(std::string_view text);

struct CostLineItem {
    std::string label;
    CostCategory category = CostCategory::capital;
    Money amount;

    bool operator==(const CostLineItem&) const = default;
};

// Priced per unit, e.g. "60 Level 2 chargers at $5,000".
struct CostUnitItem {
    std::string label;
    std::int64_t unit_count = 0;
    Money unit_cost;

    Money extended() const { return unit_cost.times(unit_count); }

    bool operator==(const CostUnitItem&) const = default;
};

struct CostModel {
    std::vector<CostLineItem> line_items;
    std::vector<CostUnitItem> unit_items;

    bool operator==(const CostModel&) const = default;
};

void validate(const CostModel& model);

// Exact integer-cent sum of every line and unit item.
Money total_cost(const CostModel& model);

// Subtotal for one category; unit items count as capital.
Money category_total(const CostModel& model, CostCategory category);

struct ChargerFleet {
    std::int64_t level3_count = 0;
    std::int64_t level2_count = 0;
    Money level3_annual_revenue;  // whole fleet, per year
    Money level2_annual_revenue;
    double revenue_multiplier = 1.0;

    bool operator==(const ChargerFleet&) const = default;
};

void validate(const ChargerFleet& fleet);

struct OperatingSchedule {
    int horizon_years = 10;
    int subsidized_years = 5;
    Money annual_opex_after_subsidy;

    bool operator==(const OperatingSchedule&) const = default;
};

void validate(const OperatingSchedule& schedule);

// Level coupon paid every year through the tenor, bullet principal at tenor end.
struct GreenBond {
    Money principal;
    double coupon = 0.0;
    int tenor_years = 0;

    bool operator==(const GreenBond&) const = default;
};

Money annual_coupon(const GreenBond& bond);
Money debt_service(const GreenBond& bond, int year);

enum class FundingSource { federal_grant, private_equity, crowdfunding_proceeds, donor_match, green_bond };

std::string_view to_string(FundingSource source);
std::optional<FundingSource> parse_funding_source(std::string_view text);

struct FundingStack {
    Money federal_grant;
    Money private_equity;
    Money crowdfunding_proceeds;
    Money donor_match;
    std::vector<GreenBond> green_bonds;
    // Grant programs cap the federal share of total cost; nullopt disables the rule.
    std::optional<double> max_federal_share = 0.80;

    Money green_bond_principal() const;
    Money total() const;
    Money amount(FundingSource source) const;

    bool operator==(const FundingStack&) const = default;
};

// Checks non-negativity, conservation against `project_cost`, and the matching-fund rule.
void validate(const FundingStack& funding, Money project_cost);

struct EquityStructure {
    double operator_fraction = 0.5;
    double crowd_fraction = 0.5;

    static EquityStructure cppp(double crowd_fraction) { return {1.0 - crowd_fraction, crowd_fraction}; }
    static EquityStructure traditional_ppp() { return {1.0, 0.0}; }

    bool operator==(const EquityStructure&) const = default;
};

inline constexpr double equity_sum_tolerance = 1e-12;

void validate(const EquityStructure& equity);

struct ShareOffering {
    Money share_price;
    std::int64_t num_shares = 0;
    std::int64_t per_holder_cap = 0;
    // Reference fair value behind the advertised discount; informational only.
    std::optional<std::string> discount_note;
    // Non-monetary value attached to each share per year (community-share variation).
    Money in_kind_value_per_share_year;

    Money proceeds() const { return share_price.times(num_shares); }

    bool operator==(const ShareOffering&) const = default;
};

void validate(const ShareOffering& offering);

Money level3_revenue(const ChargerFleet& fleet, const OperatingSchedule& schedule, int year);
Money level2_revenue(const ChargerFleet& fleet, const OperatingSchedule& schedule, int year);

// (level3 + level2) x multiplier, rounded once to the cent. Throws OutOfRangeError outside 1..horizon.
Money annual_gross_revenue(const ChargerFleet& fleet, const OperatingSchedule& schedule, int year);

// Zero while the grant covers operations, then the flat post-subsidy cost.
Money opex(const OperatingSchedule& schedule, int year);

Money operating_profit(const ChargerFleet& fleet, const OperatingSchedule& schedule, int year);

struct WaterfallSplit {
    Money operator_share;
    Money crowd_pool;
    bool distributing = true;

    bool operator==(const WaterfallSplit&) const = default;
};

// Operator share rounds down to the cent, the crowd pool takes the remainder.
// Negative profit distributes nothing and marks the split non-distributing.
WaterfallSplit dividend_waterfall(Money profit, const EquityStructure& equity);

// crowd_pool / num_shares kept as an exact ratio of cents.
struct PerShareAmount {
    std::int64_t pool_cents = 0;
    std::int64_t num_shares = 1;

    double dollars() const;
    // Nearest cent, halves away from zero.
    Money rounded() const;
    bool exact_in_cents() const { return pool_cents % num_shares == 0; }

    bool operator==(const PerShareAmount& other) const {
        return static_cast<__int128>(pool_cents) * other.num_shares ==
               static_cast<__int128>(other.pool_cents) * num_shares;
    }
};

PerShareAmount per_share_dividend(Money crowd_pool, std::int64_t num_shares);

} // namespace evfin
