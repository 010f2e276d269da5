#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evfin/compliance.hpp"
#include "evfin/engine.hpp"
#include "evfin/monte_carlo.hpp"

namespace evfin {

enum class RoiMode { ppp, cppp, both };

// PPP column holds the same deal with 100/0 equity.
struct RoiResults {
    std::optional<ScenarioResult> ppp;
    std::optional<ScenarioResult> cppp;
};

RoiResults compute_roi_results(const Scenario& scenario, RoiMode mode, const RunOptions& options = {});

// Consecutive years with identical rows collapse into one block ("Year 1 to 5").
struct YearBlock {
    int first_year = 0;
    int last_year = 0;
};
std::vector<YearBlock> year_blocks(const RoiResults& results);

std::string render_cost_table(const CostModel& model);
std::string render_roi_table(const RoiResults& results, RoiMode mode);
std::string render_compliance(const ComplianceReport& report);
std::string render_irr(const ScenarioResult& result);
std::string render_sweep(std::string_view parameter, const std::vector<SweepPoint>& points);
std::string render_monte_carlo(const MonteCarloSummary& summary);
std::string render_allocation(const ShareLedger& ledger);

// CSV outputs: one header row, plain decimals.
std::string roi_csv(const ScenarioResult& result);
std::string compliance_csv(const ComplianceReport& report);
std::string sweep_csv(std::string_view parameter, const std::vector<SweepPoint>& points);
std::string monte_carlo_csv(const MonteCarloSummary& summary);

std::string method_name(const BenefitAccountingMethod& method);

} // namespace evfin
