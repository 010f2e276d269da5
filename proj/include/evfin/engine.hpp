#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evfin/cash_flow.hpp"
#include "evfin/compliance.hpp"
#include "evfin/projection.hpp"
#include "evfin/scenario.hpp"

namespace evfin {

struct ScenarioResult {
    std::vector<YearRow> years;
    std::vector<PerShareAmount> per_share_dividends;  // years 1..horizon
    CashFlowSeries investor_series{Perspective::per_share};
    std::optional<IrrResult> investor_irr;  // nullopt: no IRR
    ComplianceReport compliance;
    Money operator_total;
    Money crowd_total;
    std::vector<std::string> warnings;

    bool infeasible() const;
};

struct RunOptions {
    BenefitAccountingMethod method;
    double threshold = justice40_threshold;
};

// Uses the scenario's ledger for compliance, or a fully eligible-held offering when absent.
ScenarioResult run_deterministic(const Scenario& scenario, const RunOptions& options = {});

// Returns a new validated scenario; the input is untouched.
Scenario apply_variation(const Scenario& scenario, const Variation& variation);

enum class SweepParameter {
    share_price,
    num_shares,
    crowd_fraction,
    federal_share,
    revenue_multiplier,
    opex,
    subsidized_years,
};

std::optional<SweepParameter> parse_sweep_parameter(std::string_view path);
std::string_view to_string(SweepParameter parameter);

// Scenario with one parameter replaced, rebalancing private equity where funding changes.
Scenario with_parameter(const Scenario& scenario, SweepParameter parameter, double value);

struct SweepPoint {
    double value = 0.0;
    ScenarioResult result;
};

std::vector<SweepPoint> sweep(const Scenario& scenario, SweepParameter parameter, const std::vector<double>& values,
                              const RunOptions& options = {});

// Throws ValidationError for an unknown path.
std::vector<SweepPoint> sweep(const Scenario& scenario, std::string_view parameter_path,
                              const std::vector<double>& values, const RunOptions& options = {});

} // namespace evfin
