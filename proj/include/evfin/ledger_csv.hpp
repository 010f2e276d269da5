#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "evfin/crowd_ledger.hpp"

namespace evfin {

// Columns: holder_id, eligible, community_tag, requested_shares, allocated_shares.
struct LedgerRow {
    Holder holder;
    std::int64_t requested_shares = 0;
    std::int64_t allocated_shares = 0;
};

// Header row required. Throws ValidationError with "line N" context.
std::vector<LedgerRow> read_ledger_csv(std::istream& in, const std::string& source_name = "<csv>");
std::vector<LedgerRow> read_ledger_csv(const std::filesystem::path& path);

// Row order is arrival order; allocated_shares is ignored.
std::vector<Application> applications_from_rows(const std::vector<LedgerRow>& rows);

ShareLedger ledger_from_rows(const ShareOffering& offering, const std::vector<LedgerRow>& rows);

void write_ledger_csv(std::ostream& out, const ShareLedger& ledger);

// RFC 4180 style split of a single line; quotes may wrap commas and doubled quotes.
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_escape(const std::string& field);

} // namespace evfin
