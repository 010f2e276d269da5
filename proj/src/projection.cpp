#include "evfin/projection.hpp"

namespace evfin {

std::vector<YearRow> project_years(const Scenario& scenario) {
    const auto& fleet = scenario.fleet;
    const auto& schedule = scenario.schedule;
    std::vector<YearRow> rows;
    rows.reserve(static_cast<std::size_t>(schedule.horizon_years));
    for (int year = 1; year <= schedule.horizon_years; ++year) {
        YearRow row;
        row.year = year;
        row.gross_revenue = annual_gross_revenue(fleet, schedule, year);
        row.level3_revenue = level3_revenue(fleet, schedule, year);
        row.level2_revenue = row.gross_revenue - row.level3_revenue;
        row.opex = opex(schedule, year);
        row.operating_profit = row.gross_revenue - row.opex;
        for (const auto& bond : scenario.funding.green_bonds) {
            row.debt_service += debt_service(bond, year);
        }
        row.debt_exceeds_revenue = row.debt_service > row.gross_revenue;
        row.distributable = row.operating_profit - row.debt_service;

        const WaterfallSplit split = dividend_waterfall(row.distributable, scenario.equity);
        row.operator_dividend = split.operator_share;
        row.crowd_dividend = split.crowd_pool;
        row.distributing = split.distributing;
        row.per_share = per_share_dividend(split.crowd_pool, scenario.offering.num_shares);
        rows.push_back(row);
    }
    return rows;
}

CashFlowSeries investor_cashflow_series(const Scenario& scenario) {
    CashFlowSeries series(Perspective::per_share);
    series.append(0, -scenario.offering.share_price.dollars());
    for (const auto& row : project_years(scenario)) {
        series.append(row.year, row.per_share.dollars());
    }
    return series;
}

} // namespace evfin
