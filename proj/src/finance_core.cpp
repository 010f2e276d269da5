#include "evfin/finance_core.hpp"

#include <array>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "evfin/errors.hpp"

namespace evfin {

namespace {

constexpr std::array category_names{
    std::pair{CostCategory::capital, std::string_view{"capital"}},
    std::pair{CostCategory::indirect, std::string_view{"indirect"}},
    std::pair{CostCategory::operating_reserve, std::string_view{"operating_reserve"}},
    std::pair{CostCategory::contingency, std::string_view{"contingency"}},
};

constexpr std::array source_names{
    std::pair{FundingSource::federal_grant, std::string_view{"federal_grant"}},
    std::pair{FundingSource::private_equity, std::string_view{"private_equity"}},
    std::pair{FundingSource::crowdfunding_proceeds, std::string_view{"crowdfunding_proceeds"}},
    std::pair{FundingSource::donor_match, std::string_view{"donor_match"}},
    std::pair{FundingSource::green_bond, std::string_view{"green_bond"}},
};

void require_non_negative(Money amount, const std::string& path) {
    if (amount.is_negative()) {
        throw ValidationError(fmt::format("must be non-negative (got {})", format_usd(amount)), path);
    }
}

void require_year(const OperatingSchedule& schedule, int year) {
    if (year < 1 || year > schedule.horizon_years) {
        throw OutOfRangeError(fmt::format("year {} outside horizon 1..{}", year, schedule.horizon_years));
    }
}

} // namespace

std::string_view to_string(CostCategory category) {
    for (const auto& [value, name] : category_names) {
        if (value == category) {
            return name;
        }
    }
    return "unknown";
}

std::optional<CostCategory> parse_cost_category(std::string_view text) {
    for (const auto& [value, name] : category_names) {
        if (name == text) {
            return value;
        }
    }
    return std::nullopt;
}

std::string_view to_string(FundingSource source) {
    for (const auto& [value, name] : source_names) {
        if (value == source) {
            return name;
        }
    }
    return "unknown";
}

std::optional<FundingSource> parse_funding_source(std::string_view text) {
    for (const auto& [value, name] : source_names) {
        if (name == text) {
            return value;
        }
    }
    return std::nullopt;
}

void validate(const CostModel& model) {
    for (std::size_t i = 0; i < model.line_items.size(); ++i) {
        const auto& item = model.line_items[i];
        const std::string path = fmt::format("cost_model.line_items[{}]", i);
        if (item.label.empty()) {
            throw ValidationError("label must not be empty", path + ".label");
        }
        require_non_negative(item.amount, path + ".amount");
    }
    for (std::size_t i = 0; i < model.unit_items.size(); ++i) {
        const auto& item = model.unit_items[i];
        const std::string path = fmt::format("cost_model.unit_items[{}]", i);
        if (item.label.empty()) {
            throw ValidationError("label must not be empty", path + ".label");
        }
        if (item.unit_count < 0) {
            throw ValidationError("must be non-negative", path + ".unit_count");
        }
        require_non_negative(item.unit_cost, path + ".unit_cost");
    }
    (void)total_cost(model);
}

Money total_cost(const CostModel& model) {
    Money total;
    for (const auto& item : model.line_items) {
        total += item.amount;
    }
    for (const auto& item : model.unit_items) {
        total += item.extended();
    }
    return total;
}

Money category_total(const CostModel& model, CostCategory category) {
    Money total;
    for (const auto& item : model.line_items) {
        if (item.category == category) {
            total += item.amount;
        }
    }
    if (category == CostCategory::capital) {
        for (const auto& item : model.unit_items) {
            total += item.extended();
        }
    }
    return total;
}

void validate(const ChargerFleet& fleet) {
    if (fleet.level3_count < 0) {
        throw ValidationError("must be non-negative", "fleet.level3_count");
    }
    if (fleet.level2_count < 0) {
        throw ValidationError("must be non-negative", "fleet.level2_count");
    }
    require_non_negative(fleet.level3_annual_revenue, "fleet.level3_annual_revenue");
    require_non_negative(fleet.level2_annual_revenue, "fleet.level2_annual_revenue");
    if (!std::isfinite(fleet.revenue_multiplier) || fleet.revenue_multiplier <= 0.0) {
        throw ValidationError("must be a finite value > 0", "fleet.revenue_multiplier");
    }
}

void validate(const OperatingSchedule& schedule) {
    if (schedule.horizon_years < 1) {
        throw ValidationError("must be at least 1", "schedule.horizon_years");
    }
    if (schedule.subsidized_years < 0 || schedule.subsidized_years > schedule.horizon_years) {
        throw ValidationError(fmt::format("must lie in 0..{} (horizon)", schedule.horizon_years),
                              "schedule.subsidized_years");
    }
    require_non_negative(schedule.annual_opex_after_subsidy, "schedule.annual_opex_after_subsidy");
}

Money annual_coupon(const GreenBond& bond) { return bond.principal.scaled(bond.coupon); }

Money debt_service(const GreenBond& bond, int year) {
    if (year < 1 || year > bond.tenor_years) {
        return {};
    }
    Money service = annual_coupon(bond);
    if (year == bond.tenor_years) {
        service += bond.principal;
    }
    return service;
}

Money FundingStack::green_bond_principal() const {
    Money total;
    for (const auto& bond : green_bonds) {
        total += bond.principal;
    }
    return total;
}

Money FundingStack::total() const {
    return federal_grant + private_equity + crowdfunding_proceeds + donor_match + green_bond_principal();
}

Money FundingStack::amount(FundingSource source) const {
    switch (source) {
    case FundingSource::federal_grant: return federal_grant;
    case FundingSource::private_equity: return private_equity;
    case FundingSource::crowdfunding_proceeds: return crowdfunding_proceeds;
    case FundingSource::donor_match: return donor_match;
    case FundingSource::green_bond: return green_bond_principal();
    }
    return {};
}

void validate(const FundingStack& funding, Money project_cost) {
    require_non_negative(funding.federal_grant, "funding.federal_grant");
    require_non_negative(funding.private_equity, "funding.private_equity");
    require_non_negative(funding.crowdfunding_proceeds, "funding.crowdfunding_proceeds");
    require_non_negative(funding.donor_match, "funding.donor_match");
    for (std::size_t i = 0; i < funding.green_bonds.size(); ++i) {
        const auto& bond = funding.green_bonds[i];
        const std::string path = fmt::format("funding.green_bonds[{}]", i);
        if (bond.principal <= Money{}) {
            throw ValidationError("principal must be positive", path + ".principal");
        }
        if (!std::isfinite(bond.coupon) || bond.coupon < 0.0) {
            throw ValidationError("coupon must be a finite value >= 0", path + ".coupon");
        }
        if (bond.tenor_years < 1) {
            throw ValidationError("tenor must be at least 1 year", path + ".tenor");
        }
    }
    const Money sources = funding.total();
    if (sources != project_cost) {
        throw ValidationError(fmt::format("funding sources total {} but project cost is {}", format_usd(sources),
                                          format_usd(project_cost)),
                              "funding");
    }
    if (funding.max_federal_share) {
        const double share = *funding.max_federal_share;
        if (!std::isfinite(share) || share < 0.0 || share > 1.0) {
            throw ValidationError("must lie in [0, 1]", "funding.max_federal_share");
        }
        const Money limit = project_cost.scaled(share);
        if (funding.federal_grant > limit) {
            throw ValidationError(fmt::format("federal grant {} exceeds {:.0f}% of project cost ({}); non-federal "
                                              "match below the required share",
                                              format_usd(funding.federal_grant), share * 100.0, format_usd(limit)),
                                  "funding.federal_grant");
        }
    }
}

void validate(const EquityStructure& equity) {
    const auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    if (!in_unit(equity.operator_fraction)) {
        throw ValidationError("must lie in [0, 1]", "equity.operator_fraction");
    }
    if (!in_unit(equity.crowd_fraction)) {
        throw ValidationError("must lie in [0, 1]", "equity.crowd_fraction");
    }
    if (std::fabs(equity.operator_fraction + equity.crowd_fraction - 1.0) > equity_sum_tolerance) {
        throw ValidationError(fmt::format("operator_fraction + crowd_fraction = {} (must equal 1)",
                                          equity.operator_fraction + equity.crowd_fraction),
                              "equity");
    }
}

void validate(const ShareOffering& offering) {
    if (offering.share_price <= Money{}) {
        throw ValidationError("must be positive", "offering.share_price");
    }
    if (offering.num_shares <= 0) {
        throw ValidationError("must be positive", "offering.num_shares");
    }
    if (offering.per_holder_cap <= 0) {
        throw ValidationError("must be positive", "offering.per_holder_cap");
    }
    require_non_negative(offering.in_kind_value_per_share_year, "offering.in_kind_value_per_share_year");
    (void)offering.proceeds();
}

Money level3_revenue(const ChargerFleet& fleet, const OperatingSchedule& schedule, int year) {
    require_year(schedule, year);
    return fleet.level3_annual_revenue.scaled(fleet.revenue_multiplier);
}

Money level2_revenue(const ChargerFleet& fleet, const OperatingSchedule& schedule, int year) {
    return annual_gross_revenue(fleet, schedule, year) - level3_revenue(fleet, schedule, year);
}

Money annual_gross_revenue(const ChargerFleet& fleet, const OperatingSchedule& schedule, int year) {
    require_year(schedule, year);
    return (fleet.level3_annual_revenue + fleet.level2_annual_revenue).scaled(fleet.revenue_multiplier);
}

Money opex(const OperatingSchedule& schedule, int year) {
    require_year(schedule, year);
    return year <= schedule.subsidized_years ? Money{} : schedule.annual_opex_after_subsidy;
}

Money operating_profit(const ChargerFleet& fleet, const OperatingSchedule& schedule, int year) {
    return annual_gross_revenue(fleet, schedule, year) - opex(schedule, year);
}

WaterfallSplit dividend_waterfall(Money profit, const EquityStructure& equity) {
    if (profit.is_negative()) {
        return {Money{}, Money{}, false};
    }
    const long double exact = static_cast<long double>(profit.cents()) * equity.operator_fraction;
    const long double nearest = std::round(exact);
    // Snap representation noise (0.3 is not exact in binary) before flooring.
    const long double operator_cents = std::fabs(exact - nearest) < 1e-6L ? nearest : std::floor(exact);
    const Money operator_share = Money::from_cents(static_cast<std::int64_t>(operator_cents));
    return {operator_share, profit - operator_share, true};
}

double PerShareAmount::dollars() const {
    return static_cast<double>(pool_cents) / static_cast<double>(num_shares) / 100.0;
}

Money PerShareAmount::rounded() const {
    std::int64_t quotient = pool_cents / num_shares;
    const std::int64_t remainder = pool_cents % num_shares;
    if (2 * static_cast<__int128>(remainder < 0 ? -remainder : remainder) >= num_shares) {
        quotient += pool_cents < 0 ? -1 : 1;
    }
    return Money::from_cents(quotient);
}

PerShareAmount per_share_dividend(Money crowd_pool, std::int64_t num_shares) {
    if (num_shares <= 0) {
        throw DomainError("per-share dividend needs a positive share count");
    }
    return {crowd_pool.cents(), num_shares};
}

} // namespace evfin
