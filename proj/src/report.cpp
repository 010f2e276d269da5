#include "evfin/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

namespace evfin {

namespace {

// Left-aligned label column, right-aligned value columns, two spaces between.
class TextTable {
public:
    explicit TextTable(std::size_t left_columns = 1) : left_columns_(left_columns) {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    std::string str() const {
        std::vector<std::size_t> widths;
        for (const auto& row : rows_) {
            widths.resize(std::max(widths.size(), row.size()), 0);
            for (std::size_t c = 0; c < row.size(); ++c) {
                widths[c] = std::max(widths[c], row[c].size());
            }
        }
        std::string out;
        for (const auto& row : rows_) {
            std::string line;
            for (std::size_t c = 0; c < row.size(); ++c) {
                const std::string_view gap = c == 0 ? "" : "  ";
                if (c < left_columns_) {
                    line += fmt::format("{}{:<{}}", gap, row[c], widths[c]);
                } else {
                    line += fmt::format("{}{:>{}}", gap, row[c], widths[c]);
                }
            }
            while (!line.empty() && line.back() == ' ') {
                line.pop_back();
            }
            out += line + "\n";
        }
        return out;
    }

private:
    std::size_t left_columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::string dash_if_zero(Money amount) { return amount.is_zero() ? "-" : format_usd(amount); }

std::string percent(double fraction) { return fmt::format("{:.1f}%", fraction * 100.0); }

bool same_figures(const YearRow& a, const YearRow& b) {
    YearRow shifted = b;
    shifted.year = a.year;
    return a == shifted;
}

std::string block_label(const YearBlock& block) {
    return block.first_year == block.last_year ? fmt::format("Year {}", block.first_year)
                                               : fmt::format("Year {} to {}", block.first_year, block.last_year);
}

} // namespace

std::string method_name(const BenefitAccountingMethod& method) {
    if (const auto* discounted = std::get_if<DiscountedSum>(&method.kind)) {
        return fmt::format("discounted_sum(rate={})", discounted->rate);
    }
    return "nominal_sum";
}

RoiResults compute_roi_results(const Scenario& scenario, RoiMode mode, const RunOptions& options) {
    RoiResults results;
    if (mode != RoiMode::ppp) {
        results.cppp = run_deterministic(scenario, options);
    }
    if (mode != RoiMode::cppp) {
        Scenario traditional = scenario;
        traditional.equity = EquityStructure::traditional_ppp();
        results.ppp = run_deterministic(traditional, options);
    }
    return results;
}

std::vector<YearBlock> year_blocks(const RoiResults& results) {
    const ScenarioResult& any = results.cppp ? *results.cppp : *results.ppp;
    std::vector<YearBlock> blocks;
    for (std::size_t i = 0; i < any.years.size(); ++i) {
        const int year = any.years[i].year;
        bool extends = !blocks.empty();
        if (extends) {
            for (const auto* result : {results.ppp ? &*results.ppp : nullptr, results.cppp ? &*results.cppp : nullptr}) {
                if (result && !same_figures(result->years[i - 1], result->years[i])) {
                    extends = false;
                }
            }
        }
        if (extends) {
            blocks.back().last_year = year;
        } else {
            blocks.push_back({year, year});
        }
    }
    return blocks;
}

std::string render_cost_table(const CostModel& model) {
    TextTable table(2);
    table.add({"Item", "Category", "Cost"});
    constexpr std::array order{CostCategory::capital, CostCategory::indirect, CostCategory::operating_reserve,
                               CostCategory::contingency};
    for (const auto category : order) {
        for (const auto& item : model.line_items) {
            if (item.category == category) {
                table.add({item.label, std::string(to_string(category)), format_usd(item.amount)});
            }
        }
        if (category == CostCategory::capital) {
            for (const auto& item : model.unit_items) {
                table.add({fmt::format("{} ({} x {})", item.label, item.unit_count, format_usd(item.unit_cost)),
                           "capital", format_usd(item.extended())});
            }
        }
    }
    table.add({"Total", "", format_usd(total_cost(model))});
    return "EV charging network cost items\n" + table.str();
}

std::string render_roi_table(const RoiResults& results, RoiMode mode) {
    const bool show_ppp = mode != RoiMode::cppp && results.ppp;
    const bool show_cppp = mode != RoiMode::ppp && results.cppp;
    const auto blocks = year_blocks(results);

    struct Column {
        const ScenarioResult* result;
        std::size_t index;  // first year of the block
        bool ppp;
    };
    std::vector<Column> columns;
    TextTable table;
    std::vector<std::string> years_header{""};
    std::vector<std::string> model_header{""};
    for (const auto& block : blocks) {
        const auto index = static_cast<std::size_t>(block.first_year - 1);
        if (show_ppp) {
            columns.push_back({&*results.ppp, index, true});
            years_header.push_back(block_label(block));
            model_header.push_back("PPP");
        }
        if (show_cppp) {
            columns.push_back({&*results.cppp, index, false});
            years_header.push_back(block_label(block));
            model_header.push_back("CPPP");
        }
    }
    table.add(years_header);
    if (show_ppp && show_cppp) {
        table.add(model_header);
    }

    const auto row = [&](const std::string& label, auto&& cell) {
        std::vector<std::string> cells{label};
        for (const auto& column : columns) {
            cells.push_back(cell(column, column.result->years[column.index]));
        }
        table.add(std::move(cells));
    };

    bool any_debt = false;
    for (const auto& column : columns) {
        for (const auto& year : column.result->years) {
            any_debt = any_debt || !year.debt_service.is_zero();
        }
    }

    row("Revenue of level 3 charges", [](const Column&, const YearRow& y) { return format_usd(y.level3_revenue); });
    row("Revenue of level 2 charges", [](const Column&, const YearRow& y) { return format_usd(y.level2_revenue); });
    row("Total Revenue", [](const Column&, const YearRow& y) { return format_usd(y.gross_revenue); });
    row("Operation Cost", [](const Column&, const YearRow& y) { return dash_if_zero(y.opex); });
    row("Operating Profit", [](const Column&, const YearRow& y) { return format_usd(y.operating_profit); });
    if (any_debt) {
        row("Green Bond Debt Service", [](const Column&, const YearRow& y) { return dash_if_zero(y.debt_service); });
        row("Distributable Profit", [](const Column&, const YearRow& y) { return format_usd(y.distributable); });
    }
    if (show_ppp) {
        row("Dividend to PPP Operator",
            [](const Column& c, const YearRow& y) { return c.ppp ? format_usd(y.operator_dividend) : "-"; });
    }
    if (show_cppp) {
        row("Dividend to CPPP Operator",
            [](const Column& c, const YearRow& y) { return c.ppp ? "-" : format_usd(y.operator_dividend); });
        row("Dividend to Crowdfunding",
            [](const Column& c, const YearRow& y) { return c.ppp ? "-" : format_usd(y.crowd_dividend); });
        row("Return per share (crowdfunding)",
            [](const Column& c, const YearRow& y) { return c.ppp ? "-" : format_usd(y.per_share.rounded()); });
    }
    return "Return on investment\n" + table.str();
}

std::string render_compliance(const ComplianceReport& report) {
    const auto verdict = check_justice40(report);
    std::string out = "Justice40 benefit allocation\n";
    out += fmt::format("method: {}\n", method_name(report.method));
    out += fmt::format("in_kind: {}\n", report.method.include_in_kind ? "included" : "excluded");
    out += fmt::format("benefits_to_disadvantaged: {}\n", format_usd(report.benefits_to_disadvantaged));
    out += fmt::format("total_distributed_benefits: {}\n", format_usd(report.total_distributed_benefits));
    out += fmt::format("fraction: {:.4f}\n", report.fraction);
    out += fmt::format("threshold: {:.4f}\n", report.threshold);
    out += fmt::format("margin: {:+.4f}\n", verdict.margin);
    out += fmt::format("result: {}\n", verdict.pass ? "PASS" : "FAIL");
    return out;
}

std::string render_irr(const ScenarioResult& result) {
    std::vector<std::string> flows;
    for (const auto& flow : result.investor_series.flows()) {
        flows.push_back(fmt::format("{}", flow.amount));
    }
    std::string out;
    if (!result.investor_irr) {
        out += "Investor IRR: none (no sign change or no root in (-99.9%, 1000%])\n";
    } else {
        const auto& irr_result = *result.investor_irr;
        out += fmt::format("Investor IRR: {}\n", percent(irr_result.rate));
        out += fmt::format("rate: {:.6f} (bracket scan 0.01, bisection to 1e-10; |NPV| <= $1e-6)\n", irr_result.rate);
        const double residual = npv(result.investor_series, irr_result.rate);
        out += fmt::format("npv_at_rate: {}\n", std::fabs(residual) <= 1e-6 ? "within $1e-6 of zero"
                                                                              : fmt::format("{:.3e}", residual));
        if (irr_result.multiple_roots) {
            std::vector<std::string> roots;
            for (double root : irr_result.roots) {
                roots.push_back(fmt::format("{:.6f}", root));
            }
            out += fmt::format("warning: multiple sign changes; roots {}\n", fmt::join(roots, ", "));
        }
    }
    out += fmt::format("per-share cash flows (year 0..{}): {}\n", result.investor_series.size() - 1,
                       fmt::join(flows, ", "));
    return out;
}

std::string render_sweep(std::string_view parameter, const std::vector<SweepPoint>& points) {
    TextTable table;
    table.add({std::string(parameter), "IRR", "Year-1 per share", "Operator total", "Crowd total", "J40 fraction",
               "J40"});
    for (const auto& point : points) {
        const auto& r = point.result;
        table.add({fmt::format("{}", point.value), r.investor_irr ? percent(r.investor_irr->rate) : "none",
                   r.per_share_dividends.empty() ? "-" : format_usd(r.per_share_dividends.front().rounded()),
                   format_usd(r.operator_total), format_usd(r.crowd_total),
                   fmt::format("{:.4f}", r.compliance.fraction), r.compliance.pass ? "PASS" : "FAIL"});
    }
    return table.str();
}

std::string render_monte_carlo(const MonteCarloSummary& s) {
    const auto opt = [](const std::optional<double>& v) { return v ? percent(*v) : std::string("n/a"); };
    std::string out = "Monte Carlo summary\n";
    out += fmt::format("samples: {}\n", s.samples);
    out += fmt::format("no_irr_samples: {}\n", s.n_no_irr);
    out += fmt::format("irr_mean: {}\n", opt(s.irr_mean));
    out += fmt::format("irr_median: {}\n", opt(s.irr_median));
    out += fmt::format("irr_p5: {}\n", opt(s.irr_p5));
    out += fmt::format("irr_p95: {}\n", opt(s.irr_p95));
    out += fmt::format("prob_irr_at_least_{}: {:.4f}\n", percent(s.target_irr), s.prob_irr_at_least_target);
    out += fmt::format("prob_compliance_pass: {:.4f}\n", s.prob_compliance_pass);
    out += fmt::format("mean_year1_per_share: ${:.4f}\n", s.mean_year1_per_share);
    out += fmt::format("infeasible_samples: {}\n", s.n_infeasible);
    return out;
}

std::string render_allocation(const ShareLedger& ledger) {
    TextTable table(2);
    table.add({"holder_id", "eligible", "requested", "allocated"});
    std::size_t holders = 0;
    for (const auto& entry : ledger.entries()) {
        table.add({entry.holder.id.str(), entry.holder.eligible ? "yes" : "no", std::to_string(entry.requested_shares),
                   std::to_string(entry.allocated_shares)});
        holders += entry.allocated_shares > 0 ? 1 : 0;
    }
    std::string out = table.str();
    out += fmt::format("allocated {} of {} shares to {} holder(s); unissued {}; proceeds {}\n",
                       ledger.allocated_total(), ledger.offering().num_shares, holders, ledger.unissued(),
                       format_usd(proceeds(ledger)));
    return out;
}

std::string roi_csv(const ScenarioResult& result) {
    std::string out = "year,level3_revenue,level2_revenue,total_revenue,operation_cost,operating_profit,debt_service,"
                      "distributable,operator_dividend,crowd_dividend,per_share_dividend,distributing\n";
    for (const auto& y : result.years) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", y.year, format_decimal(y.level3_revenue),
                           format_decimal(y.level2_revenue), format_decimal(y.gross_revenue), format_decimal(y.opex),
                           format_decimal(y.operating_profit), format_decimal(y.debt_service),
                           format_decimal(y.distributable), format_decimal(y.operator_dividend),
                           format_decimal(y.crowd_dividend), format_decimal(y.per_share.rounded()),
                           y.distributing ? "true" : "false");
    }
    return out;
}

std::string compliance_csv(const ComplianceReport& report) {
    const auto verdict = check_justice40(report);
    const auto* discounted = std::get_if<DiscountedSum>(&report.method.kind);
    std::string out = "method,rate,include_in_kind,benefits_to_disadvantaged,total_distributed_benefits,fraction,"
                      "threshold,margin,pass\n";
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", discounted ? "discounted_sum" : "nominal_sum",
                       discounted ? fmt::format("{}", discounted->rate) : std::string("0"),
                       report.method.include_in_kind ? "true" : "false",
                       format_decimal(report.benefits_to_disadvantaged),
                       format_decimal(report.total_distributed_benefits), report.fraction, report.threshold,
                       verdict.margin, verdict.pass ? "true" : "false");
    return out;
}

std::string sweep_csv(std::string_view parameter, const std::vector<SweepPoint>& points) {
    std::string out = "parameter,value,irr,year1_per_share,operator_total,crowd_total,compliance_fraction,"
                      "compliance_pass\n";
    for (const auto& point : points) {
        const auto& r = point.result;
        out += fmt::format("{},{},{},{},{},{},{},{}\n", parameter, point.value,
                           r.investor_irr ? fmt::format("{}", r.investor_irr->rate) : std::string(),
                           r.per_share_dividends.empty() ? std::string()
                                                         : format_decimal(r.per_share_dividends.front().rounded()),
                           format_decimal(r.operator_total), format_decimal(r.crowd_total), r.compliance.fraction,
                           r.compliance.pass ? "true" : "false");
    }
    return out;
}

std::string monte_carlo_csv(const MonteCarloSummary& s) {
    const auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); };
    std::string out = "statistic,value\n";
    out += fmt::format("samples,{}\n", s.samples);
    out += fmt::format("n_no_irr,{}\n", s.n_no_irr);
    out += fmt::format("irr_mean,{}\n", opt(s.irr_mean));
    out += fmt::format("irr_median,{}\n", opt(s.irr_median));
    out += fmt::format("irr_p5,{}\n", opt(s.irr_p5));
    out += fmt::format("irr_p95,{}\n", opt(s.irr_p95));
    out += fmt::format("target_irr,{}\n", s.target_irr);
    out += fmt::format("prob_irr_at_least_target,{}\n", s.prob_irr_at_least_target);
    out += fmt::format("prob_compliance_pass,{}\n", s.prob_compliance_pass);
    out += fmt::format("mean_year1_per_share,{}\n", s.mean_year1_per_share);
    out += fmt::format("n_infeasible,{}\n", s.n_infeasible);
    return out;
}

} // namespace evfin
