#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "evfin/engine.hpp"
#include "evfin/rng.hpp"

namespace evfin {

struct Uniform {
    double lo = 0.0;
    double hi = 0.0;
};
struct Triangular {
    double lo = 0.0;
    double mode = 0.0;
    double hi = 0.0;
};
struct Point {
    double value = 0.0;
};
using DistributionShape = std::variant<Uniform, Triangular, Point>;

enum class DistributionTarget { revenue_multiplier };

struct DistributionSpec {
    DistributionTarget target = DistributionTarget::revenue_multiplier;
    DistributionShape shape;
};

void validate(const DistributionSpec& spec);

// Compact grammar: "uniform:lo:hi", "tri:lo:mode:hi", "point:v".
DistributionSpec parse_distribution(std::string_view text);

// Inverse-CDF draw from one stream.
double draw(const DistributionShape& shape, SplitMix64& stream);

struct MonteCarloSettings {
    std::int64_t samples = 1000;
    std::uint64_t seed = 0;
    double target_irr = 0.0;
    unsigned threads = 1;  // any value yields the same summary
    RunOptions run;
};

struct SampleOutcome {
    double revenue_multiplier = 1.0;
    std::optional<double> irr;
    double year1_per_share = 0.0;  // USD
    bool compliance_pass = false;
    bool infeasible = false;
};

struct MonteCarloSummary {
    std::int64_t samples = 0;
    std::int64_t n_no_irr = 0;
    // IRR statistics exclude no-IRR samples; nullopt when every sample lacks an IRR.
    std::optional<double> irr_mean;
    std::optional<double> irr_median;
    std::optional<double> irr_p5;
    std::optional<double> irr_p95;
    double target_irr = 0.0;
    double prob_irr_at_least_target = 0.0;  // no-IRR samples count as misses
    double prob_compliance_pass = 0.0;
    double mean_year1_per_share = 0.0;
    std::int64_t n_infeasible = 0;

    bool operator==(const MonteCarloSummary&) const = default;
};

SampleOutcome run_sample(const Scenario& scenario, const std::vector<DistributionSpec>& dists,
                         const MonteCarloSettings& settings, std::int64_t index);

std::vector<SampleOutcome> run_samples(const Scenario& scenario, const std::vector<DistributionSpec>& dists,
                                       const MonteCarloSettings& settings);

MonteCarloSummary summarize(const std::vector<SampleOutcome>& outcomes, double target_irr);

MonteCarloSummary monte_carlo(const Scenario& scenario, const std::vector<DistributionSpec>& dists,
                              const MonteCarloSettings& settings);

// Linear interpolation between order statistics; `sorted` must be ascending and nonempty.
double quantile(const std::vector<double>& sorted, double q);

} // namespace evfin
