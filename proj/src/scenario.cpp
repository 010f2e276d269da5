#include "evfin/scenario.hpp"

#include <fmt/format.h>

#include "evfin/errors.hpp"

namespace evfin {

void validate(const Scenario& scenario) {
    validate(scenario.cost_model);
    validate(scenario.fleet);
    validate(scenario.schedule);
    validate(scenario.equity);
    validate(scenario.offering);
    validate(scenario.funding, total_cost(scenario.cost_model));

    for (std::size_t i = 0; i < scenario.funding.green_bonds.size(); ++i) {
        if (scenario.funding.green_bonds[i].tenor_years > scenario.schedule.horizon_years) {
            throw ValidationError(fmt::format("tenor {} exceeds horizon {}", scenario.funding.green_bonds[i].tenor_years,
                                              scenario.schedule.horizon_years),
                                  fmt::format("funding.green_bonds[{}].tenor", i));
        }
    }

    const Money offered = scenario.offering.proceeds();
    if (offered != scenario.funding.crowdfunding_proceeds) {
        throw ValidationError(fmt::format("offering proceeds {} ({} shares x {}) differ from crowdfunding_proceeds {}",
                                          format_usd(offered), scenario.offering.num_shares,
                                          format_usd(scenario.offering.share_price),
                                          format_usd(scenario.funding.crowdfunding_proceeds)),
                              "funding.crowdfunding_proceeds");
    }

    if (scenario.ledger) {
        const auto& ledger_offering = scenario.ledger->offering();
        if (ledger_offering.num_shares != scenario.offering.num_shares ||
            ledger_offering.share_price != scenario.offering.share_price ||
            ledger_offering.per_holder_cap != scenario.offering.per_holder_cap) {
            throw ValidationError("ledger was built for a different offering", "ledger_csv");
        }
    }
}

Scenario reference_scenario() {
    Scenario s;
    s.cost_model.line_items = {
        {"Level 3 labor", CostCategory::capital, Money::from_dollars(1'000'000)},
        {"Level 3 material", CostCategory::capital, Money::from_dollars(1'000'000)},
        {"Level 3 permit & tax", CostCategory::capital, Money::from_dollars(20'000)},
        {"Level 3 land", CostCategory::capital, Money::from_dollars(1'000'000)},
        {"Traffic management", CostCategory::indirect, Money::from_dollars(2'000'000)},
        {"Design and construction", CostCategory::indirect, Money::from_dollars(800'000)},
        {"Public engagement", CostCategory::indirect, Money::from_dollars(1'000'000)},
        {"Operation for 5 years", CostCategory::operating_reserve, Money::from_dollars(2'500'000)},
        {"Contingency", CostCategory::contingency, Money::from_dollars(380'000)},
    };
    s.cost_model.unit_items = {
        {"Level 2 chargers", 60, Money::from_dollars(5'000)},
    };

    s.fleet = {40, 60, Money::from_dollars(360'000), Money::from_dollars(360'000), 1.0};
    s.schedule = {10, 5, Money::from_dollars(500'000)};

    s.funding.federal_grant = Money::from_dollars(8'000'000);
    s.funding.private_equity = Money::from_dollars(1'500'000);
    s.funding.crowdfunding_proceeds = Money::from_dollars(500'000);
    s.funding.max_federal_share = 0.80;

    s.equity = {0.5, 0.5};

    s.offering.share_price = Money::from_dollars(100);
    s.offering.num_shares = 5000;
    s.offering.per_holder_cap = 50;
    s.offering.discount_note = "offered at a deep discount to community members; no fair-value baseline";
    return s;
}

} // namespace evfin
