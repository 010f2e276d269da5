#include "evfin/compliance.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "evfin/errors.hpp"
#include "evfin/projection.hpp"

namespace evfin {

namespace {

class BenefitAccumulator {
public:
    explicit BenefitAccumulator(const BenefitAccountingMethod& method) {
        if (const auto* discounted = std::get_if<DiscountedSum>(&method.kind)) {
            if (!(discounted->rate > -1.0) || !std::isfinite(discounted->rate)) {
                throw DomainError(fmt::format("benefit discount rate {} must exceed -1", discounted->rate));
            }
            rate_ = discounted->rate;
        }
    }

    void add(int year, Money amount) {
        if (!rate_) {
            nominal_ += amount;
            return;
        }
        discounted_ += static_cast<long double>(amount.cents()) /
                       std::pow(1.0L + static_cast<long double>(*rate_), static_cast<long double>(year));
    }

    Money total() const {
        if (!rate_) {
            return nominal_;
        }
        return Money::from_cents(static_cast<std::int64_t>(std::llround(discounted_)));
    }

private:
    std::optional<double> rate_;
    Money nominal_;
    long double discounted_ = 0.0L;
};

} // namespace

ComplianceReport benefit_allocation(const Scenario& scenario, const ShareLedger& ledger,
                                    const BenefitAccountingMethod& method, double threshold) {
    if (!std::isfinite(threshold) || threshold < 0.0 || threshold > 1.0) {
        throw ValidationError("threshold must lie in [0, 1]", "threshold");
    }
    if (ledger.offering().num_shares != scenario.offering.num_shares) {
        throw ValidationError(fmt::format("ledger covers {} shares, offering has {}", ledger.offering().num_shares,
                                          scenario.offering.num_shares),
                              "ledger");
    }

    BenefitAccumulator disadvantaged(method);
    BenefitAccumulator total(method);

    // Pro-rata weights over holders with an allocation, as in dividend distribution.
    std::vector<std::int64_t> weights;
    std::vector<bool> eligible;
    std::int64_t held = 0;
    std::int64_t eligible_held = 0;
    for (const auto& entry : ledger.entries()) {
        if (entry.allocated_shares > 0) {
            weights.push_back(entry.allocated_shares);
            eligible.push_back(entry.holder.eligible);
            held += entry.allocated_shares;
            if (entry.holder.eligible) {
                eligible_held += entry.allocated_shares;
            }
        }
    }

    const Money in_kind_per_share = method.include_in_kind ? scenario.offering.in_kind_value_per_share_year : Money{};

    for (const auto& row : project_years(scenario)) {
        const auto parts = held > 0 ? largest_remainder_split(row.crowd_dividend, weights) : std::vector<Money>{};
        Money to_disadvantaged;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (eligible[i]) {
                to_disadvantaged += parts[i];
            }
        }
        to_disadvantaged += in_kind_per_share.times(eligible_held);
        disadvantaged.add(row.year, to_disadvantaged);
        total.add(row.year, row.operator_dividend + row.crowd_dividend + in_kind_per_share.times(held));
    }

    ComplianceReport report;
    report.method = method;
    report.threshold = threshold;
    report.benefits_to_disadvantaged = disadvantaged.total();
    report.total_distributed_benefits = total.total();
    if (report.total_distributed_benefits > Money{}) {
        report.fraction = static_cast<double>(report.benefits_to_disadvantaged.cents()) /
                          static_cast<double>(report.total_distributed_benefits.cents());
        report.fraction = std::clamp(report.fraction, 0.0, 1.0);
    }
    report.pass = report.fraction >= report.threshold;
    return report;
}

Justice40Verdict check_justice40(const ComplianceReport& report) {
    return {report.fraction >= report.threshold, report.fraction - report.threshold};
}

} // namespace evfin
