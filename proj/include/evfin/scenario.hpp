#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "evfin/crowd_ledger.hpp"
#include "evfin/finance_core.hpp"

namespace evfin {

// A complete deal: what is built, how it earns, who pays for it and who owns it.
struct Scenario {
    CostModel cost_model;
    ChargerFleet fleet;
    OperatingSchedule schedule;
    FundingStack funding;
    EquityStructure equity;
    ShareOffering offering;
    std::optional<ShareLedger> ledger;

    bool operator==(const Scenario&) const = default;
};

// Throws ValidationError naming the first violated invariant.
void validate(const Scenario& scenario);

// The hypothetical Montgomery County deal: 40 Level 3 and 60 Level 2 chargers,
// $10M cost, $8M federal / $1.5M private / $500k crowd, 5000 shares at $100.
Scenario reference_scenario();

struct DonorMatch {
    double ratio = 0.0;
};

struct GreenBondIssue {
    GreenBond bond;
};

struct Rebate {
    Money per_participant;
    std::int64_t participants = 0;
    FundingSource funded_from = FundingSource::federal_grant;
};

struct CommunityShares {
    Money in_kind_value_per_share_year;
};

using Variation = std::variant<DonorMatch, GreenBondIssue, Rebate, CommunityShares>;

} // namespace evfin
