#pragma once

#include <vector>

#include "evfin/cash_flow.hpp"
#include "evfin/scenario.hpp"

namespace evfin {

// One operating year of the equity waterfall.
struct YearRow {
    int year = 0;
    Money level3_revenue;
    Money level2_revenue;
    Money gross_revenue;
    Money opex;
    Money operating_profit;
    Money debt_service;
    Money distributable;  // operating profit after senior debt service
    Money operator_dividend;
    Money crowd_dividend;
    PerShareAmount per_share;
    bool distributing = true;
    bool debt_exceeds_revenue = false;

    bool operator==(const YearRow&) const = default;
};

// Years 1..horizon. The scenario is assumed valid.
std::vector<YearRow> project_years(const Scenario& scenario);

// Year 0 pays the share price, years 1..horizon receive the per-share dividend.
CashFlowSeries investor_cashflow_series(const Scenario& scenario);

} // namespace evfin
