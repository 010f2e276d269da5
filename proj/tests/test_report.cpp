#include <doctest.h>

#include <random>
#include <sstream>

#include "evfin/ledger_csv.hpp"
#include "evfin/report.hpp"

using namespace evfin;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> cells_of(const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream in(line);
    for (std::string cell; in >> cell;) {
        cells.push_back(cell);
    }
    return cells;
}

// Last `n` whitespace-separated cells of the row whose label starts the line.
std::vector<std::string> row(const std::string& table, const std::string& label, std::size_t n) {
    for (const auto& line : lines_of(table)) {
        if (line.rfind(label + "  ", 0) == 0) {
            auto cells = cells_of(line.substr(label.size()));
            REQUIRE(cells.size() == n);
            return cells;
        }
    }
    FAIL("row not found: " << label);
    return {};
}

bool has_row(const std::string& table, const std::string& label) {
    for (const auto& line : lines_of(table)) {
        if (line.rfind(label + "  ", 0) == 0) {
            return true;
        }
    }
    return false;
}

std::int64_t cents_of(const std::string& decimal) { return std::llround(std::stod(decimal) * 100.0); }

} // namespace

TEST_SUITE("report tables") {
    TEST_CASE("cost table lists every item and the total") {
        const auto table = render_cost_table(reference_scenario().cost_model);
        CHECK(lines_of(table).front() == "EV charging network cost items");
        CHECK(row(table, "Level 2 chargers (60 x $5,000)", 2) == std::vector<std::string>{"capital", "$300,000"});
        CHECK(row(table, "Contingency", 2) == std::vector<std::string>{"contingency", "$380,000"});
        CHECK(row(table, "Total", 1) == std::vector<std::string>{"$10,000,000"});
    }

    TEST_CASE("both-mode ROI table reproduces the reference cells") {
        const auto table = render_roi_table(compute_roi_results(reference_scenario(), RoiMode::both), RoiMode::both);
        using V = std::vector<std::string>;
        CHECK(row(table, "Revenue of level 3 charges", 4) == V{"$360,000", "$360,000", "$360,000", "$360,000"});
        CHECK(row(table, "Total Revenue", 4) == V{"$720,000", "$720,000", "$720,000", "$720,000"});
        CHECK(row(table, "Operation Cost", 4) == V{"-", "-", "$500,000", "$500,000"});
        CHECK(row(table, "Operating Profit", 4) == V{"$720,000", "$720,000", "$220,000", "$220,000"});
        CHECK(row(table, "Dividend to PPP Operator", 4) == V{"$720,000", "-", "$220,000", "-"});
        CHECK(row(table, "Dividend to CPPP Operator", 4) == V{"-", "$360,000", "-", "$110,000"});
        CHECK(row(table, "Dividend to Crowdfunding", 4) == V{"-", "$360,000", "-", "$110,000"});
        CHECK(row(table, "Return per share (crowdfunding)", 4) == V{"-", "$72", "-", "$22"});
        CHECK_FALSE(has_row(table, "Green Bond Debt Service"));
    }

    TEST_CASE("ppp mode omits the crowdfunding rows") {
        const auto table = render_roi_table(compute_roi_results(reference_scenario(), RoiMode::ppp), RoiMode::ppp);
        CHECK(row(table, "Dividend to PPP Operator", 2) == std::vector<std::string>{"$720,000", "$220,000"});
        CHECK_FALSE(has_row(table, "Dividend to Crowdfunding"));
        CHECK_FALSE(has_row(table, "Return per share (crowdfunding)"));
        CHECK_FALSE(has_row(table, "Dividend to CPPP Operator"));
    }

    TEST_CASE("zero revenue shows the unsubsidized operating loss") {
        Scenario s = reference_scenario();
        s.fleet.level3_annual_revenue = Money{};
        s.fleet.level2_annual_revenue = Money{};
        const auto table = render_roi_table(compute_roi_results(s, RoiMode::cppp), RoiMode::cppp);
        CHECK(row(table, "Total Revenue", 2) == std::vector<std::string>{"$0", "$0"});
        CHECK(row(table, "Revenue of level 2 charges", 2) == std::vector<std::string>{"$0", "$0"});
        CHECK(row(table, "Operating Profit", 2) == std::vector<std::string>{"$0", "-$500,000"});
    }

    TEST_CASE("debt rows appear only with a bond") {
        const Scenario s = apply_variation(reference_scenario(),
                                           GreenBondIssue{{Money::from_dollars(1'000'000), 0.05, 10}});
        const auto results = compute_roi_results(s, RoiMode::cppp);
        const auto table = render_roi_table(results, RoiMode::cppp);
        CHECK(has_row(table, "Green Bond Debt Service"));
        CHECK(has_row(table, "Distributable Profit"));
        const auto blocks = year_blocks(results);
        REQUIRE(blocks.size() == 3);
        CHECK(blocks.back().first_year == 10);
    }

    TEST_CASE("compliance block") {
        const auto text = render_compliance(run_deterministic(reference_scenario()).compliance);
        CHECK(text.find("fraction: 0.5000") != std::string::npos);
        CHECK(text.find("margin: +0.1000") != std::string::npos);
        CHECK(text.find("result: PASS") != std::string::npos);
    }

    TEST_CASE("irr block rounds to a tenth of a percent") {
        const auto text = render_irr(run_deterministic(reference_scenario()));
        CHECK(lines_of(text).front() == "Investor IRR: 68.2%");
        Scenario s = reference_scenario();
        s.fleet.level3_annual_revenue = Money{};
        s.fleet.level2_annual_revenue = Money{};
        CHECK(render_irr(run_deterministic(s)).find("none") != std::string::npos);
    }

    TEST_CASE("allocation listing") {
        const Scenario s = reference_scenario();
        const auto ledger = allocate(s.offering, {{{HolderId("z"), true, {}}, 70, 0}}, Fcfs{});
        const auto text = render_allocation(ledger);
        CHECK(text.find("z") != std::string::npos);
        CHECK(text.find("50") != std::string::npos);
    }
}

TEST_SUITE("report csv") {
    TEST_CASE("property: csv rows re-sum to engine totals") {
        std::mt19937_64 gen(61);
        std::uniform_real_distribution<double> mult(0.0, 2.5);
        std::uniform_int_distribution<std::int64_t> opex(0, 100'000'000);
        std::uniform_int_distribution<int> percent(0, 100);
        for (int i = 0; i < 200; ++i) {
            Scenario s = reference_scenario();
            s.fleet.revenue_multiplier = mult(gen);
            s.schedule.annual_opex_after_subsidy = Money::from_cents(opex(gen));
            const int crowd = percent(gen);
            s.equity = {(100 - crowd) / 100.0, crowd / 100.0};
            const auto result = run_deterministic(s);
            const auto lines = lines_of(roi_csv(result));
            REQUIRE(lines.size() == 11);
            REQUIRE(split_csv_line(lines[0])[5] == "operating_profit");
            std::int64_t operator_sum = 0;
            std::int64_t crowd_sum = 0;
            for (std::size_t y = 1; y < lines.size(); ++y) {
                const auto f = split_csv_line(lines[y]);
                REQUIRE(cents_of(f[3]) == cents_of(f[1]) + cents_of(f[2]));
                REQUIRE(cents_of(f[5]) == cents_of(f[3]) - cents_of(f[4]));
                REQUIRE(cents_of(f[5]) == result.years[y - 1].operating_profit.cents());
                operator_sum += cents_of(f[8]);
                crowd_sum += cents_of(f[9]);
            }
            REQUIRE(operator_sum == result.operator_total.cents());
            REQUIRE(crowd_sum == result.crowd_total.cents());
        }
    }

    TEST_CASE("monte carlo and compliance csv have a header") {
        MonteCarloSettings settings;
        settings.samples = 10;
        const auto summary = monte_carlo(reference_scenario(), {parse_distribution("uniform:0.9:1.1")}, settings);
        CHECK(lines_of(monte_carlo_csv(summary)).front() == "statistic,value");
        CHECK(lines_of(compliance_csv(run_deterministic(reference_scenario()).compliance)).size() == 2);
    }
}
