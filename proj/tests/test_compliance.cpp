#include <doctest.h>

#include <random>

#include <fmt/format.h>

#include "evfin/compliance.hpp"
#include "evfin/errors.hpp"
#include "evfin/projection.hpp"

using namespace evfin;

namespace {

// Ledger issuing `eligible_shares` to eligible holders in cap-sized blocks; the rest stay unissued.
ShareLedger eligible_ledger(const ShareOffering& offering, std::int64_t eligible_shares) {
    std::vector<LedgerEntry> entries;
    std::int64_t issued = 0;
    for (int i = 0; issued < eligible_shares; ++i) {
        const std::int64_t block = std::min(offering.per_holder_cap, eligible_shares - issued);
        entries.push_back({{HolderId(fmt::format("holder-{:05}", i)), true, {}}, block, block});
        issued += block;
    }
    return ShareLedger(offering, entries);
}

} // namespace

TEST_SUITE("benefit allocation") {
    TEST_CASE("fully eligible crowd takes half the dividends") {
        const Scenario s = reference_scenario();
        const auto report = benefit_allocation(s, ShareLedger::fully_eligible(s.offering));
        CHECK(report.benefits_to_disadvantaged == Money::from_dollars(2'350'000));
        CHECK(report.total_distributed_benefits == Money::from_dollars(4'700'000));
        CHECK(report.fraction == doctest::Approx(0.50).epsilon(1e-9));
        CHECK(report.pass);
    }

    TEST_CASE("no eligible holders fails") {
        const Scenario s = reference_scenario();
        const auto report = benefit_allocation(s, eligible_ledger(s.offering, 0));
        CHECK(report.fraction == 0.0);
        CHECK_FALSE(report.pass);
    }

    TEST_CASE("traditional split routes nothing to the crowd") {
        Scenario s = reference_scenario();
        s.equity = EquityStructure::traditional_ppp();
        const auto report = benefit_allocation(s, ShareLedger::fully_eligible(s.offering));
        CHECK(report.fraction == 0.0);
        CHECK_FALSE(report.pass);
    }

    TEST_CASE("partially issued eligible ledger still matches the crowd fraction") {
        const Scenario s = reference_scenario();
        const auto report = benefit_allocation(s, eligible_ledger(s.offering, 50));
        CHECK(report.benefits_to_disadvantaged == Money::from_dollars(2'350'000));
        CHECK(report.total_distributed_benefits == Money::from_dollars(4'700'000));
        CHECK(report.fraction == 0.5);
    }

    TEST_CASE("applicants that received nothing do not change the result") {
        const Scenario s = reference_scenario();
        const ShareLedger ledger(s.offering, {{{HolderId("a"), true, {}}, 50, 50}, {{HolderId("b"), false, {}}, 40, 0}});
        CHECK(benefit_allocation(s, ledger).fraction == 0.5);
    }

    TEST_CASE("discounting at zero equals the nominal sum") {
        const Scenario s = reference_scenario();
        const auto ledger = eligible_ledger(s.offering, 2500);
        const auto nominal = benefit_allocation(s, ledger);
        const auto discounted = benefit_allocation(s, ledger, {DiscountedSum{0.0}, false});
        CHECK(discounted.benefits_to_disadvantaged == nominal.benefits_to_disadvantaged);
        CHECK(discounted.total_distributed_benefits == nominal.total_distributed_benefits);
        CHECK(discounted.fraction == nominal.fraction);
    }

    TEST_CASE("discounting with a proportional ledger keeps the fraction") {
        const Scenario s = reference_scenario();
        const auto ledger = ShareLedger::fully_eligible(s.offering);
        const auto report = benefit_allocation(s, ledger, {DiscountedSum{0.05}, false});
        CHECK(report.total_distributed_benefits < Money::from_dollars(4'700'000));
        CHECK(report.fraction == doctest::Approx(0.5).epsilon(1e-9));
    }

    TEST_CASE("invalid inputs") {
        const Scenario s = reference_scenario();
        const auto ledger = ShareLedger::fully_eligible(s.offering);
        CHECK_THROWS_AS(benefit_allocation(s, ledger, {DiscountedSum{-1.0}, false}), DomainError);
        CHECK_THROWS_AS(benefit_allocation(s, ledger, {}, 1.5), ValidationError);
        ShareOffering other = s.offering;
        other.num_shares = 4000;
        CHECK_THROWS_AS(benefit_allocation(s, ShareLedger::fully_eligible(other)), ValidationError);
    }

    TEST_CASE("in-kind value raises both sides") {
        Scenario s = reference_scenario();
        s.offering.in_kind_value_per_share_year = Money::from_dollars(5);
        const auto ledger = eligible_ledger(s.offering, 2500);
        const auto cash = benefit_allocation(s, ledger);
        const auto with_kind = benefit_allocation(s, ledger, {NominalSum{}, true});
        // 2500 held, all eligible: $5 x 2500 x 10 years on each side.
        CHECK(with_kind.benefits_to_disadvantaged - cash.benefits_to_disadvantaged == Money::from_dollars(125'000));
        CHECK(with_kind.total_distributed_benefits - cash.total_distributed_benefits == Money::from_dollars(125'000));
    }

    TEST_CASE("property: eligible-held shares reproduce the waterfall split") {
        std::mt19937_64 gen(31);
        std::uniform_int_distribution<std::int64_t> issued(1, 5000);
        std::uniform_int_distribution<int> percent(0, 100);
        for (int i = 0; i < 200; ++i) {
            Scenario s = reference_scenario();
            const int crowd = percent(gen);
            s.equity = {(100 - crowd) / 100.0, crowd / 100.0};
            const auto report = benefit_allocation(s, eligible_ledger(s.offering, issued(gen)));
            Money crowd_total;
            Money all;
            for (const auto& row : project_years(s)) {
                crowd_total += row.crowd_dividend;
                all += row.crowd_dividend + row.operator_dividend;
            }
            REQUIRE(report.benefits_to_disadvantaged == crowd_total);
            REQUIRE(report.total_distributed_benefits == all);
            REQUIRE(report.fraction == doctest::Approx(s.equity.crowd_fraction).epsilon(1e-7));
            if (crowd == 50) {
                REQUIRE(report.fraction == 0.5);
            }
        }
    }

    TEST_CASE("property: fraction is monotone in eligible shares and stays in [0, 1]") {
        std::mt19937_64 gen(37);
        std::uniform_int_distribution<std::int64_t> shares(0, 5000);
        for (int i = 0; i < 200; ++i) {
            Scenario s = reference_scenario();
            s.offering.in_kind_value_per_share_year = Money::from_cents(static_cast<std::int64_t>(gen() % 2000));
            const BenefitAccountingMethod method{DiscountedSum{0.03}, gen() % 2 == 0};
            std::int64_t a = shares(gen);
            std::int64_t b = shares(gen);
            if (a > b) {
                std::swap(a, b);
            }
            const auto low = benefit_allocation(s, eligible_ledger(s.offering, a), method);
            const auto high = benefit_allocation(s, eligible_ledger(s.offering, b), method);
            REQUIRE(low.fraction <= high.fraction);
            REQUIRE(low.fraction >= 0.0);
            REQUIRE(high.fraction <= 1.0);
        }
    }
}

TEST_SUITE("threshold verdict") {
    TEST_CASE("threshold is inclusive") {
        ComplianceReport r;
        r.fraction = 0.40;
        CHECK(check_justice40(r).pass);
        CHECK(check_justice40(r).margin == doctest::Approx(0.0));
        r.fraction = 0.39;
        CHECK_FALSE(check_justice40(r).pass);
        CHECK(check_justice40(r).margin == doctest::Approx(-0.01));
        r.fraction = 0.55;
        r.threshold = 0.6;
        CHECK_FALSE(check_justice40(r).pass);
    }
}
