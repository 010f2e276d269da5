#include "evfin/engine.hpp"

#include <array>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "evfin/errors.hpp"

namespace evfin {

bool ScenarioResult::infeasible() const {
    for (const auto& row : years) {
        if (row.debt_exceeds_revenue) {
            return true;
        }
    }
    return false;
}

ScenarioResult run_deterministic(const Scenario& scenario, const RunOptions& options) {
    validate(scenario);

    ScenarioResult result;
    result.years = project_years(scenario);
    result.investor_series = CashFlowSeries(Perspective::per_share);
    result.investor_series.append(0, -scenario.offering.share_price.dollars());
    for (const auto& row : result.years) {
        result.per_share_dividends.push_back(row.per_share);
        result.investor_series.append(row.year, row.per_share.dollars());
        result.operator_total += row.operator_dividend;
        result.crowd_total += row.crowd_dividend;
        if (row.debt_exceeds_revenue) {
            result.warnings.push_back(fmt::format("year {}: debt service {} exceeds revenue {}", row.year,
                                                  format_usd(row.debt_service), format_usd(row.gross_revenue)));
        }
        if (!row.distributing) {
            result.warnings.push_back(fmt::format("year {}: distributable profit {} is negative; no dividend",
                                                  row.year, format_usd(row.distributable)));
        }
    }

    result.investor_irr = try_irr(result.investor_series);
    if (result.investor_irr && result.investor_irr->multiple_roots) {
        result.warnings.push_back(
            fmt::format("investor cash flows change sign more than once; {} IRR root(s) bracketed",
                        result.investor_irr->roots.size()));
    }

    const ShareLedger ledger = scenario.ledger ? *scenario.ledger : ShareLedger::fully_eligible(scenario.offering);
    result.compliance = benefit_allocation(scenario, ledger, options.method, options.threshold);
    return result;
}

namespace {

// Pulls `amount` out of private equity first, then the federal grant.
void displace_funding(FundingStack& funding, Money amount, const char* what) {
    if (amount > funding.private_equity + funding.federal_grant) {
        throw ValidationError(fmt::format("{} of {} exceeds private equity plus federal grant ({})", what,
                                          format_usd(amount), format_usd(funding.private_equity + funding.federal_grant)),
                              "variations");
    }
    const Money from_private = std::min(amount, funding.private_equity);
    funding.private_equity -= from_private;
    funding.federal_grant -= amount - from_private;
}

struct VariationApplier {
    Scenario& s;

    void operator()(const DonorMatch& v) const {
        if (!std::isfinite(v.ratio) || v.ratio < 0.0) {
            throw ValidationError("donor match ratio must be >= 0", "variations.donor_match.ratio");
        }
        const Money match = s.funding.crowdfunding_proceeds.scaled(v.ratio);
        displace_funding(s.funding, match, "donor match");
        s.funding.donor_match += match;
    }

    void operator()(const GreenBondIssue& v) const {
        const auto& bond = v.bond;
        if (bond.principal <= Money{}) {
            throw ValidationError("principal must be positive", "variations.green_bond.principal");
        }
        if (!std::isfinite(bond.coupon) || bond.coupon < 0.0) {
            throw ValidationError("coupon must be >= 0", "variations.green_bond.coupon");
        }
        if (bond.tenor_years < 1 || bond.tenor_years > s.schedule.horizon_years) {
            throw ValidationError(fmt::format("tenor must lie in 1..{} (horizon)", s.schedule.horizon_years),
                                  "variations.green_bond.tenor");
        }
        displace_funding(s.funding, bond.principal, "green bond principal");
        s.funding.green_bonds.push_back(bond);
    }

    void operator()(const Rebate& v) const {
        if (v.per_participant.is_negative()) {
            throw ValidationError("must be non-negative", "variations.rebate.per_participant");
        }
        if (v.participants < 0) {
            throw ValidationError("must be non-negative", "variations.rebate.participants");
        }
        const Money amount = v.per_participant.times(v.participants);
        switch (v.funded_from) {
        case FundingSource::federal_grant: s.funding.federal_grant += amount; break;
        case FundingSource::private_equity: s.funding.private_equity += amount; break;
        case FundingSource::donor_match:
            if (s.funding.donor_match.is_zero()) {
                throw ValidationError("scenario has no donor_match source", "variations.rebate.funded_from");
            }
            s.funding.donor_match += amount;
            break;
        case FundingSource::green_bond:
            if (s.funding.green_bonds.empty()) {
                throw ValidationError("scenario has no green_bond source", "variations.rebate.funded_from");
            }
            s.funding.green_bonds.back().principal += amount;
            break;
        case FundingSource::crowdfunding_proceeds:
            throw ValidationError("crowdfunding proceeds are fixed by the share offering",
                                  "variations.rebate.funded_from");
        }
        s.cost_model.line_items.push_back(
            {fmt::format("EV purchase rebates ({} x {})", v.participants, format_usd(v.per_participant)),
             CostCategory::indirect, amount});
    }

    void operator()(const CommunityShares& v) const {
        if (v.in_kind_value_per_share_year.is_negative()) {
            throw ValidationError("must be non-negative", "variations.community_shares.in_kind_value_per_share_year");
        }
        s.offering.in_kind_value_per_share_year = v.in_kind_value_per_share_year;
    }
};

void rebalance_private_equity(Scenario& s, Money old_amount, Money new_amount, const char* what) {
    s.funding.private_equity += old_amount - new_amount;
    if (s.funding.private_equity.is_negative()) {
        throw ValidationError(fmt::format("{} leaves private equity negative ({})", what,
                                          format_usd(s.funding.private_equity)),
                              "funding.private_equity");
    }
}

std::int64_t whole_number(double value, const char* path) {
    if (!std::isfinite(value) || value != std::floor(value) || std::fabs(value) > 9.0e15) {
        throw ValidationError(fmt::format("{} is not a whole number", value), path);
    }
    return static_cast<std::int64_t>(value);
}

void rebuild_offering(Scenario& s, const ShareOffering& offering) {
    const Money old_proceeds = s.funding.crowdfunding_proceeds;
    validate(offering);
    s.offering = offering;
    s.funding.crowdfunding_proceeds = offering.proceeds();
    rebalance_private_equity(s, old_proceeds, s.funding.crowdfunding_proceeds, "new offering size");
    if (s.ledger) {
        s.ledger = ShareLedger(offering, s.ledger->entries());
    }
}

constexpr std::array sweep_names{
    std::pair{SweepParameter::share_price, std::string_view{"offering.share_price"}},
    std::pair{SweepParameter::num_shares, std::string_view{"offering.num_shares"}},
    std::pair{SweepParameter::crowd_fraction, std::string_view{"equity.crowd_fraction"}},
    std::pair{SweepParameter::federal_share, std::string_view{"funding.federal_share"}},
    std::pair{SweepParameter::revenue_multiplier, std::string_view{"fleet.revenue_multiplier"}},
    std::pair{SweepParameter::opex, std::string_view{"schedule.annual_opex_after_subsidy"}},
    std::pair{SweepParameter::subsidized_years, std::string_view{"schedule.subsidized_years"}},
};

} // namespace

Scenario apply_variation(const Scenario& scenario, const Variation& variation) {
    Scenario out = scenario;
    std::visit(VariationApplier{out}, variation);
    validate(out);
    return out;
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view path) {
    for (const auto& [value, name] : sweep_names) {
        // Accept the full path or its last segment.
        if (path == name || path == name.substr(name.find('.') + 1)) {
            return value;
        }
    }
    if (path == "opex") {
        return SweepParameter::opex;
    }
    if (path == "equity_split") {
        return SweepParameter::crowd_fraction;
    }
    return std::nullopt;
}

std::string_view to_string(SweepParameter parameter) {
    for (const auto& [value, name] : sweep_names) {
        if (value == parameter) {
            return name;
        }
    }
    return "unknown";
}

Scenario with_parameter(const Scenario& scenario, SweepParameter parameter, double value) {
    Scenario s = scenario;
    const std::string path{to_string(parameter)};
    switch (parameter) {
    case SweepParameter::share_price: {
        ShareOffering offering = s.offering;
        offering.share_price = Money::from_dollars_exact(value);
        rebuild_offering(s, offering);
        break;
    }
    case SweepParameter::num_shares: {
        ShareOffering offering = s.offering;
        offering.num_shares = whole_number(value, path.c_str());
        rebuild_offering(s, offering);
        break;
    }
    case SweepParameter::crowd_fraction:
        if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
            throw ValidationError("must lie in [0, 1]", path);
        }
        s.equity = EquityStructure::cppp(value);
        break;
    case SweepParameter::federal_share: {
        if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
            throw ValidationError("must lie in [0, 1]", path);
        }
        const Money old_grant = s.funding.federal_grant;
        s.funding.federal_grant = total_cost(s.cost_model).scaled(value);
        rebalance_private_equity(s, old_grant, s.funding.federal_grant, "federal share");
        break;
    }
    case SweepParameter::revenue_multiplier:
        s.fleet.revenue_multiplier = value;
        break;
    case SweepParameter::opex:
        s.schedule.annual_opex_after_subsidy = Money::from_dollars_exact(value);
        break;
    case SweepParameter::subsidized_years:
        s.schedule.subsidized_years = static_cast<int>(whole_number(value, path.c_str()));
        break;
    }
    validate(s);
    return s;
}

std::vector<SweepPoint> sweep(const Scenario& scenario, SweepParameter parameter, const std::vector<double>& values,
                              const RunOptions& options) {
    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (double value : values) {
        points.push_back({value, run_deterministic(with_parameter(scenario, parameter, value), options)});
    }
    return points;
}

std::vector<SweepPoint> sweep(const Scenario& scenario, std::string_view parameter_path,
                              const std::vector<double>& values, const RunOptions& options) {
    const auto parameter = parse_sweep_parameter(parameter_path);
    if (!parameter) {
        throw ValidationError(fmt::format("unknown sweep parameter '{}'", parameter_path), "param");
    }
    return sweep(scenario, *parameter, values, options);
}

} // namespace evfin
