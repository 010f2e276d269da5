#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "evfin/finance_core.hpp"

namespace evfin {

// Opaque holder token; ordering is plain byte order and drives tie-breaking.
class HolderId {
public:
    HolderId() = default;
    explicit HolderId(std::string value) : value_(std::move(value)) {}

    const std::string& str() const { return value_; }

    friend auto operator<=>(const HolderId&, const HolderId&) = default;

private:
    std::string value_;
};

struct Holder {
    HolderId id;
    bool eligible = false;  // verified disadvantaged-community member; verified upstream
    std::optional<std::string> community_tag;

    bool operator==(const Holder&) const = default;
};

struct Application {
    Holder holder;
    std::int64_t requested_shares = 0;
    std::int64_t arrival_order = 0;

    bool operator==(const Application&) const = default;
};

struct Fcfs {};
struct Lottery {
    std::uint64_t seed = 0;
};
using AllocationPolicy = std::variant<Fcfs, Lottery>;

struct LedgerEntry {
    Holder holder;
    std::int64_t requested_shares = 0;
    std::int64_t allocated_shares = 0;

    bool operator==(const LedgerEntry&) const = default;
};

// Finalized share register. Entries are kept sorted by holder id and include
// applicants that received nothing.
class ShareLedger {
public:
    ShareLedger() = default;

    // Validates uniqueness, caps, eligibility and the offering size.
    ShareLedger(ShareOffering offering, std::vector<LedgerEntry> entries);

    const ShareOffering& offering() const { return offering_; }
    const std::vector<LedgerEntry>& entries() const { return entries_; }

    std::int64_t allocated_total() const;
    std::int64_t allocated(const HolderId& id) const;
    std::int64_t unissued() const { return offering_.num_shares - allocated_total(); }

    // Every share of the offering held by one eligible pool holder.
    static ShareLedger fully_eligible(const ShareOffering& offering);

    bool operator==(const ShareLedger&) const = default;

private:
    ShareOffering offering_;
    std::vector<LedgerEntry> entries_;
};

// Grants min(requested, cap, remaining) per eligible application in policy order.
ShareLedger allocate(const ShareOffering& offering, const std::vector<Application>& applications,
                     const AllocationPolicy& policy);

Money proceeds(const ShareLedger& ledger);

// Largest-remainder split of `pool` over integer weights; leftover cents go to the
// largest remainders, ties to the lower index. Sum of result equals pool exactly.
std::vector<Money> largest_remainder_split(Money pool, const std::vector<std::int64_t>& weights);

// Pro-rata by allocated shares over holders with a nonzero allocation.
std::map<HolderId, Money> distribute_dividend(const ShareLedger& ledger, Money crowd_pool);

} // namespace evfin
