// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "../oracles.hpp"
#include "evfin/cli.hpp"
#include "evfin/engine.hpp"
#include "evfin/monte_carlo.hpp"
#include "evfin/scenario_document.hpp"

using namespace evfin;

namespace {

const std::filesystem::path data_dir = EVFIN_DATA_DIR;
const std::filesystem::path golden_dir = EVFIN_GOLDEN_DIR;
const std::filesystem::path fixture_dir = EVFIN_FIXTURE_DIR;

// Collects failed expectations for one criterion.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        ++count_;
        if (!ok) {
            failures_.push_back(what);
        }
    }
    bool ok() const { return failures_.empty(); }
    int count() const { return count_; }
    const std::vector<std::string>& failures() const { return failures_; }

private:
    int count_ = 0;
    std::vector<std::string> failures_;
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Scenario reference_document() { return parse_scenario(data_dir / "reference.json").scenario; }

CashFlowSeries per_share(const std::vector<double>& amounts) {
    return CashFlowSeries::from_amounts(Perspective::per_share, amounts);
}

std::vector<double> random_investment(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> outlay(100.0, 10'000.0);
    std::uniform_int_distribution<int> length(1, 30);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double invest = outlay(gen);
    std::vector<double> flows{-invest};
    const int years = length(gen);
    for (int t = 0; t < years; ++t) {
        flows.push_back(unit(gen) < 0.1 ? 0.0 : invest * unit(gen));
    }
    flows.back() += invest * 0.01;
    return flows;
}

void table1(Checks& c) {
    const Scenario s = reference_document();
    c.expect(total_cost(s.cost_model).cents() == 1'000'000'000, "total cost is $10,000,000");

    struct Row {
        const char* label;
        std::int64_t dollars;
    };
    const std::vector<Row> expected{{"Level 3 labor", 1'000'000},       {"Level 3 material", 1'000'000},
                                    {"Level 3 permit & tax", 20'000},   {"Level 3 land", 1'000'000},
                                    {"Traffic management", 2'000'000},  {"Design and construction", 800'000},
                                    {"Public engagement", 1'000'000},   {"Operation for 5 years", 2'500'000},
                                    {"Contingency", 380'000}};
    c.expect(s.cost_model.line_items.size() == expected.size(), "nine priced line items");
    for (std::size_t i = 0; i < expected.size() && i < s.cost_model.line_items.size(); ++i) {
        const auto& item = s.cost_model.line_items[i];
        c.expect(item.label == expected[i].label && item.amount == Money::from_dollars(expected[i].dollars),
                 fmt::format("line item {} is {} ${}", i, expected[i].label, expected[i].dollars));
    }
    c.expect(s.cost_model.unit_items.size() == 1, "one unit-priced item");
    if (!s.cost_model.unit_items.empty()) {
        const auto& chargers = s.cost_model.unit_items[0];
        c.expect(chargers.unit_count == 60 && chargers.unit_cost == Money::from_dollars(5'000) &&
                     chargers.extended() == Money::from_dollars(300'000),
                 "60 Level 2 chargers at $5,000 = $300,000");
    }
}

void table2(Checks& c) {
    const auto result = run_deterministic(reference_document());
    c.expect(result.years.size() == 10, "ten projected years");
    for (const auto& row : result.years) {
        const bool early = row.year <= 5;
        const std::string y = fmt::format("year {}", row.year);
        c.expect(row.gross_revenue == Money::from_dollars(720'000), y + " total revenue $720,000");
        c.expect(row.level3_revenue == Money::from_dollars(360'000), y + " level 3 revenue $360,000");
        c.expect(row.level2_revenue == Money::from_dollars(360'000), y + " level 2 revenue $360,000");
        c.expect(row.operating_profit == Money::from_dollars(early ? 720'000 : 220'000), y + " operating profit");
        c.expect(row.operator_dividend == Money::from_dollars(early ? 360'000 : 110'000), y + " operator dividend");
        c.expect(row.crowd_dividend == Money::from_dollars(early ? 360'000 : 110'000), y + " crowd dividend");
        const auto& d = result.per_share_dividends.at(static_cast<std::size_t>(row.year - 1));
        c.expect(d.exact_in_cents() && d.rounded() == Money::from_dollars(early ? 72 : 22), y + " per-share return");
    }
    Scenario ppp = reference_document();
    ppp.equity = EquityStructure::traditional_ppp();
    const auto ppp_result = run_deterministic(ppp);
    c.expect(ppp_result.years.front().operator_dividend == Money::from_dollars(720'000) &&
                 ppp_result.years.back().operator_dividend == Money::from_dollars(220'000),
             "PPP operator dividends $720,000 then $220,000");
}

void irr_claim(Checks& c) {
    const std::vector<double> flows{-100, 72, 72, 72, 72, 72, 22, 22, 22, 22, 22};
    const auto series = per_share(flows);
    const auto result = irr(series);
    c.expect(result.rate >= 0.67 && result.rate <= 0.69, fmt::format("irr {} within [0.67, 0.69]", result.rate));
    c.expect(std::fabs(npv(series, result.rate)) <= 1e-6, "npv at the computed rate within $1e-6");
    const double oracle_rate = oracle::irr_bisection(flows, 0.0L, 1.0L);
    c.expect(std::fabs(result.rate - oracle_rate) <= 1e-9, "agrees with the bisection oracle");
    const auto engine = run_deterministic(reference_document());
    c.expect(engine.investor_irr && engine.investor_irr->rate == result.rate, "engine series gives the same irr");
}

void justice40(Checks& c) {
    const Scenario s = reference_document();
    const auto report = benefit_allocation(s, ShareLedger::fully_eligible(s.offering));
    c.expect(report.benefits_to_disadvantaged == Money::from_dollars(2'350'000), "eligible benefits $2,350,000");
    c.expect(report.total_distributed_benefits == Money::from_dollars(4'700'000), "total benefits $4,700,000");
    c.expect(report.fraction == 0.5, "fraction exactly 0.50");
    c.expect(check_justice40(report).pass, "0.50 >= 0.40 passes");

    Scenario ppp = s;
    ppp.equity = EquityStructure::traditional_ppp();
    const auto ppp_report = benefit_allocation(ppp, ShareLedger::fully_eligible(ppp.offering));
    c.expect(ppp_report.fraction == 0.0, "traditional split fraction exactly 0");
    c.expect(!check_justice40(ppp_report).pass, "traditional split fails");
}

void properties(Checks& c) {
    constexpr int cases = 250;
    std::mt19937_64 gen(0xACCE97);

    bool waterfall_ok = true;
    std::uniform_int_distribution<std::int64_t> profit(-1'000'000'000'000, 1'000'000'000'000);
    std::uniform_real_distribution<double> fraction(0.0, 1.0);
    for (int i = 0; i < cases; ++i) {
        const double op = fraction(gen);
        const Money p = Money::from_cents(profit(gen));
        const auto split = dividend_waterfall(p, {op, 1.0 - op});
        if (p >= Money{}) {
            waterfall_ok = waterfall_ok && split.operator_share + split.crowd_pool == p;
        } else {
            waterfall_ok = waterfall_ok && split.operator_share == Money{} && split.crowd_pool == Money{};
        }
    }
    c.expect(waterfall_ok, "waterfall conserves profit to the cent");

    bool distribution_ok = true;
    std::uniform_int_distribution<std::int64_t> pool_cents(0, 100'000'000'000);
    std::uniform_int_distribution<int> holders(1, 120);
    std::uniform_int_distribution<std::int64_t> held(1, 100);
    for (int i = 0; i < cases; ++i) {
        std::vector<LedgerEntry> entries;
        std::int64_t total = 0;
        const int n = holders(gen);
        for (int h = 0; h < n; ++h) {
            const std::int64_t shares = held(gen);
            entries.push_back({{HolderId(fmt::format("h{:04}", h)), true, {}}, shares, shares});
            total += shares;
        }
        ShareOffering offering;
        offering.share_price = Money::from_dollars(1);
        offering.num_shares = total;
        offering.per_holder_cap = 100;
        const ShareLedger ledger(offering, entries);
        const Money pool = Money::from_cents(pool_cents(gen));
        const auto payouts = distribute_dividend(ledger, pool);
        Money sum;
        for (const auto& e : ledger.entries()) {
            const Money paid = payouts.at(e.holder.id);
            sum += paid;
            const __int128 diff = static_cast<__int128>(paid.cents()) * total -
                                  static_cast<__int128>(pool.cents()) * e.allocated_shares;
            distribution_ok = distribution_ok && (diff < 0 ? -diff : diff) < total;
        }
        distribution_ok = distribution_ok && sum == pool;
    }
    c.expect(distribution_ok, "dividend distribution conserves the pool within a cent per holder");

    bool scale_ok = true;
    bool fixed_point_ok = true;
    std::uniform_real_distribution<double> log_scale(-2.0, 2.0);
    for (int i = 0; i < cases; ++i) {
        const auto flows = random_investment(gen);
        const auto base = try_irr(per_share(flows));
        const auto scaled = try_irr(per_share(flows).scaled(std::pow(10.0, log_scale(gen))));
        scale_ok = scale_ok && base && scaled && std::fabs(base->rate - scaled->rate) <= 1e-9;
        fixed_point_ok = fixed_point_ok && base && std::fabs(npv(per_share(flows), base->rate)) <= 1e-6;
    }
    c.expect(scale_ok, "irr scale invariance within 1e-9");
    c.expect(fixed_point_ok, "npv(irr) within $1e-6 of zero");

    bool single_ok = true;
    std::uniform_real_distribution<double> principal(1.0, 1e6);
    std::uniform_real_distribution<double> rate(-0.9, 5.0);
    for (int i = 0; i < cases; ++i) {
        const double p = principal(gen);
        const double r = rate(gen);
        const auto result = try_irr(per_share({-p, p * (1.0 + r)}));
        single_ok = single_ok && result && std::fabs(result->rate - r) <= 1e-9;
    }
    c.expect(single_ok, "single-period irr identity within 1e-9");

    bool allocation_ok = true;
    std::uniform_int_distribution<std::int64_t> requested(1, 150);
    std::uniform_int_distribution<std::int64_t> size(1, 6000);
    std::uniform_int_distribution<std::int64_t> cap(1, 120);
    std::uniform_int_distribution<int> applicants(0, 250);
    for (int i = 0; i < cases; ++i) {
        ShareOffering offering;
        offering.share_price = Money::from_dollars(100);
        offering.num_shares = size(gen);
        offering.per_holder_cap = cap(gen);
        std::vector<Application> apps;
        const int n = applicants(gen);
        for (int a = 0; a < n; ++a) {
            apps.push_back({{HolderId(fmt::format("a{:04}", a)), gen() % 5 != 0, {}}, requested(gen), a});
        }
        const AllocationPolicy policy = i % 2 == 0 ? AllocationPolicy{Fcfs{}} : AllocationPolicy{Lottery{gen()}};
        const auto ledger = allocate(offering, apps, policy);
        std::int64_t total = 0;
        for (const auto& e : ledger.entries()) {
            allocation_ok = allocation_ok && e.allocated_shares >= 0 && e.allocated_shares <= offering.per_holder_cap &&
                            e.allocated_shares <= e.requested_shares && (e.allocated_shares == 0 || e.holder.eligible);
            total += e.allocated_shares;
        }
        allocation_ok = allocation_ok && total <= offering.num_shares;
    }
    c.expect(allocation_ok, "allocation respects caps, offering size and eligibility");
}

void monte_carlo_checks(Checks& c) {
    const Scenario s = reference_document();
    const auto direct = run_deterministic(s);

    MonteCarloSettings settings;
    settings.samples = 200;
    settings.seed = 0x5EED;
    const auto point = run_samples(s, {{DistributionTarget::revenue_multiplier, Point{1.0}}}, settings);
    bool point_ok = true;
    for (const auto& o : point) {
        point_ok = point_ok && o.irr && *o.irr == direct.investor_irr->rate &&
                   o.year1_per_share == direct.per_share_dividends.front().dollars() &&
                   o.compliance_pass == direct.compliance.pass;
    }
    c.expect(point_ok, "point distribution reproduces the deterministic result");

    const std::vector<DistributionSpec> dists{{DistributionTarget::revenue_multiplier, Uniform{0.8, 1.2}}};
    settings.samples = 10'000;
    settings.threads = 1;
    const auto serial = monte_carlo(s, dists, settings);
    bool identical = monte_carlo(s, dists, settings) == serial;
    for (unsigned threads : {2u, 4u, 8u}) {
        settings.threads = threads;
        identical = identical && monte_carlo(s, dists, settings) == serial;
    }
    c.expect(identical, "same seed gives bit-identical summaries at 1, 2, 4 and 8 threads");
    c.expect(std::fabs(serial.mean_year1_per_share - 72.0) <= 0.50,
             fmt::format("mean year-1 per-share dividend {} within $0.50 of $72", serial.mean_year1_per_share));

    long double total = 0.0L;
    for (std::uint64_t i = 0; i < 10'000; ++i) {
        std::uint64_t state = oracle::stream_state(settings.seed, i);
        const long double m = 0.8L + 0.4L * oracle::unit(state);
        const long double gross = std::llround(72'000'000.0L * static_cast<double>(m));
        const long double crowd = gross - std::floor(gross / 2.0L);
        total += crowd / 5000.0L / 100.0L;
    }
    const double oracle_mean = static_cast<double>(total / 10'000.0L);
    c.expect(std::fabs(serial.mean_year1_per_share - oracle_mean) <= 1e-9,
             fmt::format("matches the straight-loop oracle mean {}", oracle_mean));
}

void variations(Checks& c) {
    const Scenario base = reference_document();
    const Scenario matched = apply_variation(base, DonorMatch{1.0});
    c.expect(matched.funding.donor_match == Money::from_dollars(500'000), "donor match source $500,000");
    c.expect(matched.funding.total() == Money::from_dollars(10'000'000), "funding total stays $10,000,000");
    c.expect(matched.funding.private_equity == Money::from_dollars(1'000'000), "private equity drops to $1,000,000");

    const Scenario bonded = apply_variation(base, GreenBondIssue{{Money::from_dollars(1'000'000), 0.05, 10}});
    const auto result = run_deterministic(bonded);
    bool sixty_seven = true;
    for (int year = 1; year <= 5; ++year) {
        // (720,000 - 50,000) x 0.5 / 5000 by hand.
        const auto& d = result.per_share_dividends.at(static_cast<std::size_t>(year - 1));
        sixty_seven = sixty_seven && d.exact_in_cents() && d.rounded() == Money::from_dollars(67);
        sixty_seven = sixty_seven && result.years[static_cast<std::size_t>(year - 1)].debt_service ==
                                         Money::from_dollars(50'000);
    }
    c.expect(sixty_seven, "green bond cuts years 1-5 per-share dividend to exactly $67");
    c.expect(bonded.funding.total() == Money::from_dollars(10'000'000), "green bond keeps the funding total");
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

void cli_goldens(Checks& c) {
    const std::string reference = (data_dir / "reference.json").string();
    for (const std::string command : {"report", "irr", "compliance"}) {
        const auto r = cli({command, reference});
        c.expect(r.code == exit_ok, command + " exits 0");
        c.expect(r.out == slurp(golden_dir / (command + ".txt")), command + " output matches the golden file");
    }
    struct Malformed {
        const char* file;
        const char* path;
    };
    for (const auto& m : {Malformed{"negative_price.json", "offering.share_price"},
                          Malformed{"unknown_key.json", "fleet.level3_chargers"},
                          Malformed{"underfunded.json", "funding"}, Malformed{"syntax_error.json", ":63:"}}) {
        const auto r = cli({"report", (fixture_dir / m.file).string()});
        c.expect(r.code == exit_validation, fmt::format("{} exits 1", m.file));
        c.expect(r.err.find(m.path) != std::string::npos, fmt::format("{} names {}", m.file, m.path));
    }
}

} // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        std::function<void(Checks&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "cost table total and line items", table1},
        {2, "return-on-investment table", table2},
        {3, "investor IRR", irr_claim},
        {4, "Justice40 compliance", justice40},
        {5, "property suite", properties},
        {6, "Monte Carlo determinism and linearity", monte_carlo_checks},
        {7, "variation arithmetic", variations},
        {8, "CLI golden outputs and diagnostics", cli_goldens},
    };

    int failed = 0;
    for (const auto& criterion : criteria) {
        Checks checks;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.run(checks);
        } catch (const std::exception& e) {
            checks.expect(false, fmt::format("unexpected exception: {}", e.what()));
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << fmt::format("{} criterion {}: {} ({} checks, {:.2f} s)\n", checks.ok() ? "PASS" : "FAIL",
                                 criterion.number, criterion.name, checks.count(), seconds);
        for (const auto& failure : checks.failures()) {
            std::cout << "    failed: " << failure << "\n";
        }
        failed += checks.ok() ? 0 : 1;
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
                             criteria.size());
    return failed == 0 ? 0 : 1;
}
