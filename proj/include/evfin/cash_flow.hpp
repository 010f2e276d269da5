#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace evfin {

enum class Perspective { project, operator_, crowd_pool, per_share, holder };

std::string_view to_string(Perspective perspective);

struct CashFlow {
    int year = 0;
    double amount = 0.0;  // USD, end of year; year 0 is the investment epoch

    bool operator==(const CashFlow&) const = default;
};

// Year-indexed signed amounts from one party's point of view.
class CashFlowSeries {
public:
    explicit CashFlowSeries(Perspective perspective = Perspective::project) : perspective_(perspective) {}

    // amounts[t] lands in year t.
    static CashFlowSeries from_amounts(Perspective perspective, std::span<const double> amounts);
    static CashFlowSeries from_amounts(Perspective perspective, std::initializer_list<double> amounts) {
        return from_amounts(perspective, std::span<const double>(amounts.begin(), amounts.size()));
    }

    // Years must be strictly increasing; throws ValidationError otherwise.
    void append(int year, double amount);

    Perspective perspective() const { return perspective_; }
    const std::vector<CashFlow>& flows() const { return flows_; }
    std::vector<double> amounts() const;
    bool empty() const { return flows_.empty(); }
    std::size_t size() const { return flows_.size(); }

    CashFlowSeries scaled(double factor) const;

    bool operator==(const CashFlowSeries&) const = default;

private:
    Perspective perspective_;
    std::vector<CashFlow> flows_;
};

// Sum of amount / (1 + rate)^year. Throws DomainError for rate <= -1.
double npv(const CashFlowSeries& series, double rate);

// Number of sign changes between consecutive nonzero flows.
int sign_changes(const CashFlowSeries& series);

struct IrrResult {
    double rate = 0.0;           // smallest bracketed root
    std::vector<double> roots;   // every bracketed root, ascending
    bool multiple_roots = false; // more than one sign change in the series
};

struct IrrSolverSettings {
    double lower = -0.999;
    double upper = 10.0;
    double scan_step = 0.01;
    double rate_tolerance = 1e-10;
    double npv_tolerance = 1e-6;
};

// Bracket scan over (lower, upper] followed by bisection inside each bracket.
std::optional<IrrResult> try_irr(const CashFlowSeries& series, const IrrSolverSettings& settings = {});

// As try_irr but throws NoIrrError when the series has no sign change or no root in range.
IrrResult irr(const CashFlowSeries& series, const IrrSolverSettings& settings = {});

} // namespace evfin
