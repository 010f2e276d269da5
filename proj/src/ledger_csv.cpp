#include "evfin/ledger_csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "evfin/errors.hpp"

namespace evfin {

namespace {

constexpr std::array<std::string_view, 5> ledger_columns{"holder_id", "eligible", "community_tag", "requested_shares",
                                                         "allocated_shares"};

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

bool parse_bool(const std::string& text, const std::string& where) {
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw ValidationError(fmt::format("{}: eligible must be true/false (got '{}')", where, text));
}

std::int64_t parse_count(const std::string& text, const std::string& where, const char* column) {
    if (text.empty()) {
        return 0;
    }
    std::int64_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw ValidationError(fmt::format("{}: {} must be an integer (got '{}')", where, column, text));
    }
    return value;
}

} // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    if (quoted) {
        throw ValidationError("unterminated quoted field");
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<LedgerRow> read_ledger_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    int line_number = 0;
    std::vector<LedgerRow> rows;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_number;
        if (line_number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) {
            continue;
        }
        const std::string where = fmt::format("{}:{}", source_name, line_number);
        std::vector<std::string> fields;
        try {
            fields = split_csv_line(line);
        } catch (const ValidationError& e) {
            throw ValidationError(fmt::format("{}: {}", where, e.what()));
        }
        for (auto& f : fields) {
            f = trim(f);
        }
        if (!header_seen) {
            if (fields.size() != ledger_columns.size()) {
                throw ValidationError(fmt::format("{}: header must be {}", where, fmt::join(ledger_columns, ",")));
            }
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] != ledger_columns[i]) {
                    throw ValidationError(fmt::format("{}: expected column '{}' but found '{}'", where,
                                                      ledger_columns[i], fields[i]));
                }
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != ledger_columns.size()) {
            throw ValidationError(
                fmt::format("{}: expected {} fields, found {}", where, ledger_columns.size(), fields.size()));
        }
        LedgerRow row;
        if (fields[0].empty()) {
            throw ValidationError(fmt::format("{}: holder_id must not be empty", where));
        }
        row.holder.id = HolderId(fields[0]);
        row.holder.eligible = parse_bool(fields[1], where);
        if (!fields[2].empty()) {
            row.holder.community_tag = fields[2];
        }
        row.requested_shares = parse_count(fields[3], where, "requested_shares");
        row.allocated_shares = parse_count(fields[4], where, "allocated_shares");
        rows.push_back(std::move(row));
    }
    if (!header_seen) {
        throw ValidationError(fmt::format("{}: missing header row", source_name));
    }
    return rows;
}

std::vector<LedgerRow> read_ledger_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot read ledger file '{}'", path.string()));
    }
    return read_ledger_csv(in, path.string());
}

std::vector<Application> applications_from_rows(const std::vector<LedgerRow>& rows) {
    std::vector<Application> applications;
    applications.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        applications.push_back({rows[i].holder, rows[i].requested_shares, static_cast<std::int64_t>(i)});
    }
    return applications;
}

ShareLedger ledger_from_rows(const ShareOffering& offering, const std::vector<LedgerRow>& rows) {
    std::vector<LedgerEntry> entries;
    entries.reserve(rows.size());
    for (const auto& row : rows) {
        entries.push_back({row.holder, row.requested_shares, row.allocated_shares});
    }
    return ShareLedger(offering, std::move(entries));
}

void write_ledger_csv(std::ostream& out, const ShareLedger& ledger) {
    out << fmt::format("{}\n", fmt::join(ledger_columns, ","));
    for (const auto& entry : ledger.entries()) {
        out << csv_escape(entry.holder.id.str()) << ',' << (entry.holder.eligible ? "true" : "false") << ','
            << csv_escape(entry.holder.community_tag.value_or("")) << ',' << entry.requested_shares << ','
            << entry.allocated_shares << '\n';
    }
}

} // namespace evfin
