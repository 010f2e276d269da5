#include "evfin/crowd_ledger.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "evfin/errors.hpp"
#include "evfin/rng.hpp"

namespace evfin {

ShareLedger::ShareLedger(ShareOffering offering, std::vector<LedgerEntry> entries)
    : offering_(std::move(offering)), entries_(std::move(entries)) {
    validate(offering_);
    std::sort(entries_.begin(), entries_.end(),
              [](const LedgerEntry& a, const LedgerEntry& b) { return a.holder.id < b.holder.id; });
    std::int64_t total = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& entry = entries_[i];
        const std::string path = fmt::format("ledger[{}]", entry.holder.id.str());
        if (entry.holder.id.str().empty()) {
            throw ValidationError("holder_id must not be empty", "ledger");
        }
        if (i > 0 && entries_[i - 1].holder.id == entry.holder.id) {
            throw ValidationError("duplicate holder_id", path);
        }
        if (entry.requested_shares < 0 || entry.allocated_shares < 0) {
            throw ValidationError("share counts must be non-negative", path);
        }
        if (entry.allocated_shares > offering_.per_holder_cap) {
            throw ValidationError(fmt::format("allocation {} exceeds per-holder cap {}", entry.allocated_shares,
                                              offering_.per_holder_cap),
                                  path);
        }
        if (entry.allocated_shares > 0 && !entry.holder.eligible) {
            throw ValidationError("ineligible holder cannot hold shares", path);
        }
        total += entry.allocated_shares;
    }
    if (total > offering_.num_shares) {
        throw ValidationError(fmt::format("{} shares allocated but only {} offered", total, offering_.num_shares),
                              "ledger");
    }
}

std::int64_t ShareLedger::allocated_total() const {
    std::int64_t total = 0;
    for (const auto& entry : entries_) {
        total += entry.allocated_shares;
    }
    return total;
}

std::int64_t ShareLedger::allocated(const HolderId& id) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                                     [](const LedgerEntry& e, const HolderId& key) { return e.holder.id < key; });
    return it != entries_.end() && it->holder.id == id ? it->allocated_shares : 0;
}

ShareLedger ShareLedger::fully_eligible(const ShareOffering& offering) {
    validate(offering);
    std::vector<LedgerEntry> entries;
    std::int64_t remaining = offering.num_shares;
    for (std::int64_t n = 1; remaining > 0; ++n) {
        const std::int64_t block = std::min(remaining, offering.per_holder_cap);
        Holder holder{HolderId(fmt::format("pool-{:06}", n)), true, std::string("eligible pool")};
        entries.push_back({std::move(holder), block, block});
        remaining -= block;
    }
    return ShareLedger(offering, std::move(entries));
}

ShareLedger allocate(const ShareOffering& offering, const std::vector<Application>& applications,
                     const AllocationPolicy& policy) {
    validate(offering);
    std::set<HolderId> seen;
    for (const auto& app : applications) {
        const std::string path = fmt::format("applications[{}]", app.holder.id.str());
        if (!seen.insert(app.holder.id).second) {
            throw ValidationError("duplicate application for holder", path);
        }
        if (app.requested_shares <= 0) {
            throw ValidationError(fmt::format("requested_shares must be positive (got {})", app.requested_shares),
                                  path);
        }
        if (app.arrival_order < 0) {
            throw ValidationError("arrival_order must be non-negative", path);
        }
    }

    std::vector<const Application*> order;
    order.reserve(applications.size());
    for (const auto& app : applications) {
        order.push_back(&app);
    }

    if (std::holds_alternative<Fcfs>(policy)) {
        std::sort(order.begin(), order.end(), [](const Application* a, const Application* b) {
            if (a->arrival_order != b->arrival_order) {
                return a->arrival_order < b->arrival_order;
            }
            return a->holder.id < b->holder.id;
        });
    } else {
        // Canonical order first so the permutation depends only on the set of applications.
        std::sort(order.begin(), order.end(),
                  [](const Application* a, const Application* b) { return a->holder.id < b->holder.id; });
        SplitMix64 rng(std::get<Lottery>(policy).seed);
        for (std::size_t i = order.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(rng.below(i));
            std::swap(order[i - 1], order[j]);
        }
    }

    std::vector<LedgerEntry> entries;
    entries.reserve(applications.size());
    std::int64_t remaining = offering.num_shares;
    for (const Application* app : order) {
        std::int64_t grant = 0;
        if (app->holder.eligible) {
            grant = std::min({app->requested_shares, offering.per_holder_cap, remaining});
        }
        remaining -= grant;
        entries.push_back({app->holder, app->requested_shares, grant});
    }
    return ShareLedger(offering, std::move(entries));
}

Money proceeds(const ShareLedger& ledger) { return ledger.offering().share_price.times(ledger.allocated_total()); }

std::vector<Money> largest_remainder_split(Money pool, const std::vector<std::int64_t>& weights) {
    if (pool.is_negative()) {
        throw DomainError("cannot split a negative pool");
    }
    __int128 weight_total = 0;
    for (const auto w : weights) {
        if (w < 0) {
            throw DomainError("split weights must be non-negative");
        }
        weight_total += w;
    }
    if (weight_total == 0) {
        if (pool.is_zero()) {
            return std::vector<Money>(weights.size());
        }
        throw DomainError("undistributable: positive pool with zero total weight");
    }

    std::vector<Money> out(weights.size());
    std::vector<__int128> remainders(weights.size());
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const __int128 numerator = static_cast<__int128>(pool.cents()) * weights[i];
        const auto base = static_cast<std::int64_t>(numerator / weight_total);
        remainders[i] = numerator % weight_total;
        out[i] = Money::from_cents(base);
        assigned += base;
    }

    std::int64_t leftover = pool.cents() - assigned;
    std::vector<std::size_t> by_remainder(weights.size());
    std::iota(by_remainder.begin(), by_remainder.end(), std::size_t{0});
    std::stable_sort(by_remainder.begin(), by_remainder.end(),
                     [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
    for (std::size_t k = 0; leftover > 0; ++k, --leftover) {
        out[by_remainder[k]] += Money::from_cents(1);
    }
    return out;
}

std::map<HolderId, Money> distribute_dividend(const ShareLedger& ledger, Money crowd_pool) {
    if (crowd_pool.is_negative()) {
        throw DomainError("crowd pool must be non-negative");
    }
    std::vector<const LedgerEntry*> holders;
    std::vector<std::int64_t> weights;
    for (const auto& entry : ledger.entries()) {
        if (entry.allocated_shares > 0) {
            holders.push_back(&entry);
            weights.push_back(entry.allocated_shares);
        }
    }
    std::map<HolderId, Money> payouts;
    if (holders.empty()) {
        if (!crowd_pool.is_zero()) {
            throw DomainError(fmt::format("undistributable: {} pool but no shares allocated", format_usd(crowd_pool)));
        }
        return payouts;
    }
    const auto split = largest_remainder_split(crowd_pool, weights);
    for (std::size_t i = 0; i < holders.size(); ++i) {
        payouts.emplace(holders[i]->holder.id, split[i]);
    }
    return payouts;
}

} // namespace evfin
