#pragma once

#include <variant>

#include "evfin/crowd_ledger.hpp"
#include "evfin/scenario.hpp"

namespace evfin {

struct NominalSum {
    bool operator==(const NominalSum&) const = default;
};
struct DiscountedSum {
    double rate = 0.0;
    bool operator==(const DiscountedSum&) const = default;
};

struct BenefitAccountingMethod {
    std::variant<NominalSum, DiscountedSum> kind = NominalSum{};
    bool include_in_kind = false;

    bool operator==(const BenefitAccountingMethod&) const = default;
};

inline constexpr double justice40_threshold = 0.40;

struct ComplianceReport {
    Money benefits_to_disadvantaged;
    Money total_distributed_benefits;
    double fraction = 0.0;
    double threshold = justice40_threshold;
    bool pass = false;
    BenefitAccountingMethod method;

    bool operator==(const ComplianceReport&) const = default;
};

// Benefits are the distributed dividends (plus in-kind share value when enabled).
// Each year's crowd pool goes pro-rata to holders with an allocation; with no
// holders it counts toward the total but reaches nobody.
ComplianceReport benefit_allocation(const Scenario& scenario, const ShareLedger& ledger,
                                    const BenefitAccountingMethod& method = {},
                                    double threshold = justice40_threshold);

struct Justice40Verdict {
    bool pass = false;
    double margin = 0.0;  // fraction - threshold
};

// Inclusive: a fraction equal to the threshold passes.
Justice40Verdict check_justice40(const ComplianceReport& report);

} // namespace evfin
