#include "evfin/monte_carlo.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include <fmt/format.h>

#include "evfin/errors.hpp"

namespace evfin {

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

double parse_number(std::string_view token, std::string_view spec) {
    const std::string text(token);
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw ValidationError(fmt::format("bad number '{}' in distribution '{}'", token, spec), "dist");
    }
    return value;
}

} // namespace

void validate(const DistributionSpec& spec) {
    struct Checker {
        void operator()(const Uniform& u) const {
            if (!positive(u.lo) || !positive(u.hi) || u.lo > u.hi) {
                throw ValidationError(fmt::format("uniform({}, {}) needs 0 < lo <= hi", u.lo, u.hi), "dist");
            }
        }
        void operator()(const Triangular& t) const {
            if (!positive(t.lo) || !positive(t.mode) || !positive(t.hi) || t.lo > t.mode || t.mode > t.hi) {
                throw ValidationError(
                    fmt::format("triangular({}, {}, {}) needs 0 < lo <= mode <= hi", t.lo, t.mode, t.hi), "dist");
            }
        }
        void operator()(const Point& p) const {
            if (!positive(p.value)) {
                throw ValidationError(fmt::format("point({}) needs a value > 0", p.value), "dist");
            }
        }
    };
    std::visit(Checker{}, spec.shape);
}

DistributionSpec parse_distribution(std::string_view text) {
    std::string_view body = text;
    if (const auto eq = body.find('='); eq != std::string_view::npos) {
        if (body.substr(0, eq) != "revenue_multiplier") {
            throw ValidationError(fmt::format("unknown distribution target '{}'", body.substr(0, eq)), "dist");
        }
        body = body.substr(eq + 1);
    }
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = body.find(':', start);
        parts.push_back(body.substr(start, colon - start));
        if (colon == std::string_view::npos) {
            break;
        }
        start = colon + 1;
    }

    DistributionSpec spec;
    const auto& kind = parts.front();
    const auto args = parts.size() - 1;
    if (kind == "uniform" && args == 2) {
        spec.shape = Uniform{parse_number(parts[1], text), parse_number(parts[2], text)};
    } else if ((kind == "tri" || kind == "triangular") && args == 3) {
        spec.shape = Triangular{parse_number(parts[1], text), parse_number(parts[2], text), parse_number(parts[3], text)};
    } else if (kind == "point" && args == 1) {
        spec.shape = Point{parse_number(parts[1], text)};
    } else {
        throw ValidationError(
            fmt::format("bad distribution '{}' (expected uniform:lo:hi, tri:lo:mode:hi or point:v)", text), "dist");
    }
    validate(spec);
    return spec;
}

double draw(const DistributionShape& shape, SplitMix64& stream) {
    struct Drawer {
        SplitMix64& stream;
        double operator()(const Uniform& u) const { return u.lo + (u.hi - u.lo) * stream.unit(); }
        double operator()(const Triangular& t) const {
            const double u = stream.unit();
            const double width = t.hi - t.lo;
            if (width == 0.0) {
                return t.lo;
            }
            const double split = (t.mode - t.lo) / width;
            if (u < split) {
                return t.lo + std::sqrt(u * width * (t.mode - t.lo));
            }
            return t.hi - std::sqrt((1.0 - u) * width * (t.hi - t.mode));
        }
        double operator()(const Point& p) const { return p.value; }
    };
    return std::visit(Drawer{stream}, shape);
}

SampleOutcome run_sample(const Scenario& scenario, const std::vector<DistributionSpec>& dists,
                         const MonteCarloSettings& settings, std::int64_t index) {
    SplitMix64 stream = derived_stream(settings.seed, static_cast<std::uint64_t>(index));
    Scenario sample = scenario;
    for (const auto& dist : dists) {
        switch (dist.target) {
        case DistributionTarget::revenue_multiplier:
            sample.fleet.revenue_multiplier = draw(dist.shape, stream);
            break;
        }
    }
    const ScenarioResult result = run_deterministic(sample, settings.run);

    SampleOutcome outcome;
    outcome.revenue_multiplier = sample.fleet.revenue_multiplier;
    if (result.investor_irr) {
        outcome.irr = result.investor_irr->rate;
    }
    outcome.year1_per_share = result.per_share_dividends.empty() ? 0.0 : result.per_share_dividends.front().dollars();
    outcome.compliance_pass = result.compliance.pass;
    outcome.infeasible = result.infeasible();
    return outcome;
}

std::vector<SampleOutcome> run_samples(const Scenario& scenario, const std::vector<DistributionSpec>& dists,
                                       const MonteCarloSettings& settings) {
    if (settings.samples < 1) {
        throw ValidationError("sample count must be at least 1", "n");
    }
    bool seen_multiplier = false;
    for (const auto& dist : dists) {
        validate(dist);
        if (dist.target == DistributionTarget::revenue_multiplier) {
            if (seen_multiplier) {
                throw ValidationError("revenue_multiplier has more than one distribution", "dist");
            }
            seen_multiplier = true;
        }
    }
    validate(scenario);

    const auto n = static_cast<std::size_t>(settings.samples);
    std::vector<SampleOutcome> outcomes(n);
    const unsigned threads = std::max(1u, std::min<unsigned>(settings.threads, static_cast<unsigned>(n)));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            outcomes[i] = run_sample(scenario, dists, settings, static_cast<std::int64_t>(i));
        }
        return outcomes;
    }

    std::vector<std::exception_ptr> failures(threads);
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += threads) {
                    outcomes[i] = run_sample(scenario, dists, settings, static_cast<std::int64_t>(i));
                }
            } catch (...) {
                failures[t] = std::current_exception();
            }
        });
    }
    for (auto& worker : workers) {
        worker.join();
    }
    for (const auto& failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }
    return outcomes;
}

double quantile(const std::vector<double>& sorted, double q) {
    const double position = q * static_cast<double>(sorted.size() - 1);
    const auto lower = static_cast<std::size_t>(std::floor(position));
    const std::size_t upper = std::min(lower + 1, sorted.size() - 1);
    const double weight = position - static_cast<double>(lower);
    return sorted[lower] + (sorted[upper] - sorted[lower]) * weight;
}

MonteCarloSummary summarize(const std::vector<SampleOutcome>& outcomes, double target_irr) {
    MonteCarloSummary summary;
    summary.samples = static_cast<std::int64_t>(outcomes.size());
    summary.target_irr = target_irr;

    std::vector<double> irrs;
    irrs.reserve(outcomes.size());
    double irr_sum = 0.0;
    double dividend_sum = 0.0;
    std::int64_t hits = 0;
    std::int64_t passes = 0;
    for (const auto& outcome : outcomes) {
        dividend_sum += outcome.year1_per_share;
        if (outcome.compliance_pass) {
            ++passes;
        }
        if (outcome.infeasible) {
            ++summary.n_infeasible;
        }
        if (!outcome.irr) {
            ++summary.n_no_irr;
            continue;
        }
        irrs.push_back(*outcome.irr);
        irr_sum += *outcome.irr;
        if (*outcome.irr >= target_irr) {
            ++hits;
        }
    }
    if (outcomes.empty()) {
        return summary;
    }
    const auto n = static_cast<double>(outcomes.size());
    summary.mean_year1_per_share = dividend_sum / n;
    summary.prob_irr_at_least_target = static_cast<double>(hits) / n;
    summary.prob_compliance_pass = static_cast<double>(passes) / n;
    if (!irrs.empty()) {
        summary.irr_mean = irr_sum / static_cast<double>(irrs.size());
        std::sort(irrs.begin(), irrs.end());
        summary.irr_median = quantile(irrs, 0.5);
        summary.irr_p5 = quantile(irrs, 0.05);
        summary.irr_p95 = quantile(irrs, 0.95);
    }
    return summary;
}

MonteCarloSummary monte_carlo(const Scenario& scenario, const std::vector<DistributionSpec>& dists,
                              const MonteCarloSettings& settings) {
    return summarize(run_samples(scenario, dists, settings), settings.target_irr);
}

} // namespace evfin
