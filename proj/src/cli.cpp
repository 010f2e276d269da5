#include "evfin/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "evfin/compliance.hpp"
#include "evfin/engine.hpp"
#include "evfin/errors.hpp"
#include "evfin/ledger_csv.hpp"
#include "evfin/monte_carlo.hpp"
#include "evfin/report.hpp"
#include "evfin/scenario_document.hpp"

namespace evfin {

namespace {

struct GlobalFlags {
    std::string csv_path;
    bool quiet = false;
    bool strict = false;
};

struct ComplianceFlags {
    double threshold = justice40_threshold;
    std::string method = "nominal";
    double rate = 0.0;
    bool in_kind = false;

    RunOptions options() const {
        RunOptions run;
        run.threshold = threshold;
        run.method.include_in_kind = in_kind;
        if (method == "discounted") {
            run.method.kind = DiscountedSum{rate};
        } else if (method != "nominal") {
            throw ValidationError(fmt::format("unknown method '{}' (nominal or discounted)", method), "method");
        }
        return run;
    }
};

void add_compliance_flags(CLI::App& sub, ComplianceFlags& flags) {
    sub.add_option("--threshold", flags.threshold, "Justice40 threshold fraction")->capture_default_str();
    sub.add_option("--method", flags.method, "benefit accounting: nominal | discounted")
        ->check(CLI::IsMember({"nominal", "discounted"}))
        ->capture_default_str();
    sub.add_option("--rate", flags.rate, "discount rate for --method discounted")->capture_default_str();
    sub.add_flag("--in-kind", flags.in_kind, "count in-kind community-share value as a benefit");
}

void write_csv(const GlobalFlags& flags, const std::string& content) {
    if (flags.csv_path.empty()) {
        return;
    }
    std::ofstream out(flags.csv_path, std::ios::binary);
    if (!out) {
        throw IoError(fmt::format("cannot write CSV to '{}'", flags.csv_path));
    }
    out << content;
    if (!out) {
        throw IoError(fmt::format("failed writing CSV to '{}'", flags.csv_path));
    }
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (token.empty() || used != token.size()) {
            throw ValidationError(fmt::format("bad sweep value '{}'", token), "values");
        }
        values.push_back(value);
    }
    if (values.empty()) {
        throw ValidationError("at least one value is required", "values");
    }
    return values;
}

// Warnings go to stderr; with --strict an infeasible run is an error outcome.
int finish(const GlobalFlags& flags, const ScenarioResult& result, std::ostream& err) {
    if (!flags.quiet) {
        for (const auto& warning : result.warnings) {
            err << "warning: " << warning << "\n";
        }
    }
    if (flags.strict && result.infeasible()) {
        err << "error: debt service exceeds revenue (--strict)\n";
        return exit_infeasible;
    }
    return exit_ok;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Project-finance model for crowd-funded EV charging partnerships", "evfin"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--csv", flags.csv_path, "also write machine-readable CSV to PATH");
    app.add_flag("--quiet", flags.quiet, "suppress text output and warnings");
    app.add_flag("--strict", flags.strict, "treat infeasibility warnings as errors (exit 2)");

    std::string scenario_path;
    const auto with_scenario = [&](CLI::App* sub) {
        sub->fallthrough();
        sub->add_option("scenario", scenario_path, "scenario JSON file")->required();
        return sub;
    };

    ComplianceFlags compliance_flags;
    std::string roi_mode = "both";
    auto* report = with_scenario(app.add_subcommand("report", "cost table, ROI table and compliance block"));
    report->add_option("--mode", roi_mode, "ROI columns: ppp | cppp | both")
        ->check(CLI::IsMember({"ppp", "cppp", "both"}))
        ->capture_default_str();
    add_compliance_flags(*report, compliance_flags);

    auto* irr_cmd = with_scenario(app.add_subcommand("irr", "per-share investor IRR"));

    auto* compliance = with_scenario(app.add_subcommand("compliance", "Justice40 benefit-allocation check"));
    add_compliance_flags(*compliance, compliance_flags);

    std::string sweep_param;
    std::string sweep_values;
    auto* sweep_cmd = with_scenario(app.add_subcommand("sweep", "deterministic parameter sweep"));
    sweep_cmd->add_option("--param", sweep_param, "parameter path, e.g. offering.share_price")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();
    add_compliance_flags(*sweep_cmd, compliance_flags);

    MonteCarloSettings mc_settings;
    std::vector<std::string> dist_specs;
    auto* mc = with_scenario(app.add_subcommand("mc", "seeded Monte Carlo over revenue uncertainty"));
    mc->add_option("--n", mc_settings.samples, "number of samples")->required();
    mc->add_option("--seed", mc_settings.seed, "64-bit seed")->capture_default_str();
    mc->add_option("--dist", dist_specs, "uniform:lo:hi | tri:lo:mode:hi | point:v (revenue multiplier)");
    mc->add_option("--target", mc_settings.target_irr, "IRR target for the exceedance probability")
        ->capture_default_str();
    mc->add_option("--threads", mc_settings.threads, "worker threads (results do not depend on it)")
        ->capture_default_str();
    add_compliance_flags(*mc, compliance_flags);

    std::string applications_path;
    std::string policy = "fcfs";
    std::uint64_t lottery_seed = 0;
    auto* allocate_cmd = with_scenario(app.add_subcommand("allocate", "allocate the share offering to applicants"));
    allocate_cmd->add_option("--applications", applications_path, "applications CSV")->required();
    allocate_cmd->add_option("--policy", policy, "fcfs | lottery")
        ->check(CLI::IsMember({"fcfs", "lottery"}))
        ->capture_default_str();
    allocate_cmd->add_option("--seed", lottery_seed, "lottery seed")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        if (app.get_subcommands().empty()) {
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (args[i] == "--csv") {
                    ++i;
                } else if (!args[i].empty() && args[i][0] != '-') {
                    err << fmt::format("error: unknown subcommand '{}'\n", args[i]) << app.help();
                    return exit_validation;
                }
            }
        }
        err << "error: " << e.what() << "\n" << app.help();
        return exit_validation;
    }

    std::ostringstream discard;
    std::ostream& text = flags.quiet ? discard : out;

    try {
        const ScenarioDocument doc = parse_scenario(scenario_path);
        const Scenario& scenario = doc.scenario;

        if (report->parsed()) {
            const RunOptions options = compliance_flags.options();
            const RoiMode mode = roi_mode == "ppp" ? RoiMode::ppp : roi_mode == "cppp" ? RoiMode::cppp : RoiMode::both;
            const RoiResults results = compute_roi_results(scenario, mode, options);
            const ScenarioResult& primary = results.cppp ? *results.cppp : *results.ppp;
            text << render_cost_table(scenario.cost_model) << "\n" << render_roi_table(results, mode) << "\n";
            if (results.cppp) {
                text << render_compliance(results.cppp->compliance);
            }
            if (!doc.defaults_applied.empty()) {
                text << fmt::format("defaults applied: {}\n", fmt::join(doc.defaults_applied, "; "));
            }
            write_csv(flags, roi_csv(primary));
            return finish(flags, primary, err);
        }

        if (irr_cmd->parsed()) {
            const ScenarioResult result = run_deterministic(scenario);
            text << render_irr(result);
            std::string csv = "year,cash_flow\n";
            for (const auto& flow : result.investor_series.flows()) {
                csv += fmt::format("{},{}\n", flow.year, flow.amount);
            }
            write_csv(flags, csv);
            return finish(flags, result, err);
        }

        if (compliance->parsed()) {
            const ScenarioResult result = run_deterministic(scenario, compliance_flags.options());
            text << render_compliance(result.compliance);
            write_csv(flags, compliance_csv(result.compliance));
            return finish(flags, result, err);
        }

        if (sweep_cmd->parsed()) {
            const auto points = sweep(scenario, sweep_param, parse_values(sweep_values), compliance_flags.options());
            const std::string name{to_string(*parse_sweep_parameter(sweep_param))};
            text << render_sweep(name, points);
            write_csv(flags, sweep_csv(name, points));
            int code = exit_ok;
            for (const auto& point : points) {
                code = std::max(code, finish(flags, point.result, err));
            }
            return code;
        }

        if (mc->parsed()) {
            std::vector<DistributionSpec> dists;
            for (const auto& spec : dist_specs) {
                dists.push_back(parse_distribution(spec));
            }
            mc_settings.run = compliance_flags.options();
            const MonteCarloSummary summary = monte_carlo(scenario, dists, mc_settings);
            text << render_monte_carlo(summary);
            write_csv(flags, monte_carlo_csv(summary));
            if (flags.strict && summary.n_infeasible > 0) {
                err << "error: " << summary.n_infeasible << " sample(s) with debt service above revenue (--strict)\n";
                return exit_infeasible;
            }
            return exit_ok;
        }

        if (allocate_cmd->parsed()) {
            const auto rows = read_ledger_csv(std::filesystem::path(applications_path));
            const AllocationPolicy chosen = policy == "lottery" ? AllocationPolicy{Lottery{lottery_seed}} : Fcfs{};
            const ShareLedger ledger = allocate(scenario.offering, applications_from_rows(rows), chosen);
            text << render_allocation(ledger);
            std::ostringstream csv;
            write_ledger_csv(csv, ledger);
            write_csv(flags, csv.str());
            return exit_ok;
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const OutOfRangeError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    }
    err << app.help();
    return exit_validation;
}

} // namespace evfin
