#include "evfin/cash_flow.hpp"

#include <cmath>

#include <fmt/format.h>

#include "evfin/errors.hpp"

namespace evfin {

std::string_view to_string(Perspective perspective) {
    switch (perspective) {
    case Perspective::project: return "project";
    case Perspective::operator_: return "operator";
    case Perspective::crowd_pool: return "crowd_pool";
    case Perspective::per_share: return "per_share";
    case Perspective::holder: return "holder";
    }
    return "unknown";
}

CashFlowSeries CashFlowSeries::from_amounts(Perspective perspective, std::span<const double> amounts) {
    CashFlowSeries series(perspective);
    for (std::size_t t = 0; t < amounts.size(); ++t) {
        series.append(static_cast<int>(t), amounts[t]);
    }
    return series;
}

void CashFlowSeries::append(int year, double amount) {
    if (year < 0) {
        throw ValidationError(fmt::format("cash flow year {} is negative", year));
    }
    if (!flows_.empty() && year <= flows_.back().year) {
        throw ValidationError(fmt::format("cash flow years must be strictly increasing ({} after {})", year,
                                          flows_.back().year));
    }
    if (!std::isfinite(amount)) {
        throw ValidationError("cash flow amount must be finite");
    }
    flows_.push_back({year, amount});
}

std::vector<double> CashFlowSeries::amounts() const {
    std::vector<double> out;
    out.reserve(flows_.size());
    for (const auto& flow : flows_) {
        out.push_back(flow.amount);
    }
    return out;
}

CashFlowSeries CashFlowSeries::scaled(double factor) const {
    CashFlowSeries out(perspective_);
    for (const auto& flow : flows_) {
        out.append(flow.year, flow.amount * factor);
    }
    return out;
}

double npv(const CashFlowSeries& series, double rate) {
    if (!(rate > -1.0)) {
        throw DomainError(fmt::format("discount rate {} must exceed -1", rate));
    }
    const long double growth = 1.0L + static_cast<long double>(rate);
    long double total = 0.0L;
    long double factor = 1.0L;
    int factor_year = 0;
    for (const auto& flow : series.flows()) {
        for (; factor_year < flow.year; ++factor_year) {
            factor *= growth;
        }
        total += static_cast<long double>(flow.amount) / factor;
    }
    return static_cast<double>(total);
}

int sign_changes(const CashFlowSeries& series) {
    int changes = 0;
    int previous = 0;
    for (const auto& flow : series.flows()) {
        const int sign = (flow.amount > 0.0) - (flow.amount < 0.0);
        if (sign == 0) {
            continue;
        }
        if (previous != 0 && sign != previous) {
            ++changes;
        }
        previous = sign;
    }
    return changes;
}

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double bisect(const CashFlowSeries& series, double lo, double hi, double f_lo, const IrrSolverSettings& settings) {
    double mid = lo;
    for (int iteration = 0; iteration < 2000; ++iteration) {
        mid = lo + (hi - lo) / 2.0;
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double f_mid = npv(series, mid);
        if (f_mid == 0.0) {
            return mid;
        }
        if (sign_of(f_mid) == sign_of(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= settings.rate_tolerance && std::fabs(f_mid) <= settings.npv_tolerance) {
            break;
        }
    }
    return mid;
}

} // namespace

std::optional<IrrResult> try_irr(const CashFlowSeries& series, const IrrSolverSettings& settings) {
    const int changes = sign_changes(series);
    if (changes == 0) {
        return std::nullopt;
    }

    std::vector<double> grid{settings.lower};
    const auto first_step = static_cast<long>(std::floor(settings.lower / settings.scan_step)) + 1;
    const auto last_step = std::lround(settings.upper / settings.scan_step);
    for (long k = first_step; k <= last_step; ++k) {
        const double point = static_cast<double>(k) * settings.scan_step;
        if (point > grid.back()) {
            grid.push_back(point);
        }
    }

    std::vector<double> values;
    values.reserve(grid.size());
    for (double point : grid) {
        values.push_back(npv(series, point));
    }

    IrrResult result;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (values[i] == 0.0) {
            result.roots.push_back(grid[i]);
            continue;
        }
        if (i + 1 == grid.size() || values[i + 1] == 0.0) {
            continue;
        }
        if (std::isnan(values[i]) || std::isnan(values[i + 1])) {
            continue;
        }
        if (sign_of(values[i]) != sign_of(values[i + 1])) {
            result.roots.push_back(bisect(series, grid[i], grid[i + 1], values[i], settings));
        }
    }
    if (result.roots.empty()) {
        return std::nullopt;
    }
    result.rate = result.roots.front();
    result.multiple_roots = changes > 1;
    return result;
}

IrrResult irr(const CashFlowSeries& series, const IrrSolverSettings& settings) {
    auto result = try_irr(series, settings);
    if (!result) {
        if (sign_changes(series) == 0) {
            throw NoIrrError("no IRR: cash flows never change sign");
        }
        throw NoIrrError(fmt::format("no IRR in ({}, {}]", settings.lower, settings.upper));
    }
    return *result;
}

} // namespace evfin
