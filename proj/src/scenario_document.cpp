#include "evfin/scenario_document.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "evfin/engine.hpp"
#include "evfin/errors.hpp"
#include "evfin/ledger_csv.hpp"

namespace evfin {

namespace {

using nlohmann::json;

// Tracks how far the JSON lexer has read so SAX events can be tied to lines.
struct CountingIterator {
    using iterator_category = std::input_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    const char* at = nullptr;
    std::size_t* consumed = nullptr;

    reference operator*() const { return *at; }
    CountingIterator& operator++() {
        ++at;
        ++*consumed;
        return *this;
    }
    CountingIterator operator++(int) {
        CountingIterator copy = *this;
        ++*this;
        return copy;
    }
    bool operator==(const CountingIterator& other) const { return at == other.at; }
    bool operator!=(const CountingIterator& other) const { return at != other.at; }
};

// Maps JSON pointers ("/funding/federal_grant") to 1-based source lines.
class LineIndex {
public:
    explicit LineIndex(std::string_view text) : text_(text) {}

    void build() {
        std::size_t consumed = 0;
        Sax sax{*this, consumed};
        CountingIterator first{text_.data(), &consumed};
        CountingIterator last{text_.data() + text_.size(), &consumed};
        json::sax_parse(first, last, &sax);
    }

    int line_at_offset(std::size_t offset) const {
        offset = std::min(offset, text_.size());
        int line = 1;
        for (std::size_t i = 0; i < offset; ++i) {
            if (text_[i] == '\n') {
                ++line;
            }
        }
        return line;
    }

    // Longest recorded prefix of `pointer`, so unknown leaves fall back to their parent.
    std::optional<int> line_of(std::string pointer) const {
        while (true) {
            if (const auto it = lines_.find(pointer); it != lines_.end()) {
                return it->second;
            }
            if (pointer.empty()) {
                return std::nullopt;
            }
            pointer.erase(pointer.rfind('/'));
        }
    }

private:
    struct Frame {
        bool array = false;
        std::size_t next_index = 0;
        std::string key;
    };

    struct Sax {
        LineIndex& index;
        std::size_t& consumed;

        bool scalar() {
            index.record(consumed);
            index.advance();
            return true;
        }
        bool null() { return scalar(); }
        bool boolean(bool) { return scalar(); }
        bool number_integer(json::number_integer_t) { return scalar(); }
        bool number_unsigned(json::number_unsigned_t) { return scalar(); }
        bool number_float(json::number_float_t, const std::string&) { return scalar(); }
        bool string(std::string&) { return scalar(); }
        bool binary(json::binary_t&) { return scalar(); }
        bool start_object(std::size_t) {
            index.record(consumed);
            index.frames_.push_back({false, 0, {}});
            return true;
        }
        bool end_object() {
            index.frames_.pop_back();
            index.advance();
            return true;
        }
        bool start_array(std::size_t) {
            index.record(consumed);
            index.frames_.push_back({true, 0, {}});
            return true;
        }
        bool end_array() { return end_object(); }
        bool key(std::string& k) {
            index.frames_.back().key = k;
            index.record_key(consumed);
            return true;
        }
        bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) { return false; }
    };

    std::string pointer() const {
        std::string out;
        for (const auto& frame : frames_) {
            out += '/';
            out += frame.array ? std::to_string(frame.next_index) : frame.key;
        }
        return out;
    }

    // The lexer may have read one delimiter past the token; step back over whitespace.
    int token_line(std::size_t consumed) const {
        std::size_t end = std::min(consumed, text_.size());
        while (end > 0 && std::isspace(static_cast<unsigned char>(text_[end - 1]))) {
            --end;
        }
        return line_at_offset(end == 0 ? 0 : end - 1);
    }

    void record(std::size_t consumed) { lines_.try_emplace(pointer(), token_line(consumed)); }
    void record_key(std::size_t consumed) { lines_[pointer()] = token_line(consumed); }

    void advance() {
        if (!frames_.empty() && frames_.back().array) {
            ++frames_.back().next_index;
        }
    }

    std::string_view text_;
    std::vector<Frame> frames_;
    std::map<std::string, int> lines_;
};

// "funding.green_bonds[0].principal" -> "/funding/green_bonds/0/principal"
std::string to_pointer(const std::string& dotted) {
    std::string out;
    std::string segment;
    const auto flush = [&] {
        if (!segment.empty()) {
            out += '/';
            out += segment;
            segment.clear();
        }
    };
    for (char c : dotted) {
        if (c == '.' || c == '[') {
            flush();
        } else if (c == ']') {
            flush();
        } else {
            segment.push_back(c);
        }
    }
    flush();
    return out;
}

class DocumentReader {
public:
    DocumentReader(const LineIndex& lines, std::string source) : lines_(lines), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& message) const {
        const std::string where = path.empty() ? std::string{} : path + ": ";
        throw ValidationError(ValidationError::Located{}, fmt::format("{}{}{}", location(path), where, message), path);
    }

    std::string location(const std::string& path) const {
        const auto line = lines_.line_of(to_pointer(path));
        return line ? fmt::format("{}:{}: ", source_, *line) : fmt::format("{}: ", source_);
    }

    const json& object(const json& parent, const std::string& key, const std::string& path) const {
        const json& value = member(parent, key, path);
        if (!value.is_object()) {
            fail(path, "expected an object");
        }
        return value;
    }

    const json& member(const json& parent, const std::string& key, const std::string& path) const {
        const auto it = parent.find(key);
        if (it == parent.end()) {
            fail(path, "required field is missing");
        }
        return *it;
    }

    void allow_keys(const json& object, std::initializer_list<std::string_view> keys, const std::string& path) const {
        for (const auto& item : object.items()) {
            bool known = false;
            for (auto k : keys) {
                known = known || item.key() == k;
            }
            if (!known) {
                fail(join(path, item.key()), "unknown field");
            }
        }
    }

    Money money(const json& parent, const std::string& key, const std::string& path) const {
        const json& value = member(parent, key, path);
        if (!value.is_number()) {
            fail(path, "expected a currency amount in dollars");
        }
        Money amount;
        try {
            amount = Money::from_dollars_exact(value.get<double>());
        } catch (const std::exception& e) {
            fail(path, e.what());
        }
        if (amount.is_negative()) {
            fail(path, fmt::format("negative currency amount {}", format_usd(amount)));
        }
        return amount;
    }

    std::int64_t integer(const json& parent, const std::string& key, const std::string& path) const {
        const json& value = member(parent, key, path);
        if (!value.is_number_integer()) {
            fail(path, "expected an integer");
        }
        return value.get<std::int64_t>();
    }

    double number(const json& parent, const std::string& key, const std::string& path) const {
        const json& value = member(parent, key, path);
        if (!value.is_number()) {
            fail(path, "expected a number");
        }
        return value.get<double>();
    }

    std::string text(const json& parent, const std::string& key, const std::string& path) const {
        const json& value = member(parent, key, path);
        if (!value.is_string()) {
            fail(path, "expected a string");
        }
        return value.get<std::string>();
    }

    static std::string join(const std::string& path, std::string_view key) {
        return path.empty() ? std::string(key) : fmt::format("{}.{}", path, key);
    }

private:
    const LineIndex& lines_;
    std::string source_;
};

CostModel read_cost_model(const DocumentReader& r, const json& doc) {
    const json& node = r.object(doc, "cost_model", "cost_model");
    r.allow_keys(node, {"line_items", "unit_items"}, "cost_model");
    CostModel model;
    if (node.contains("line_items")) {
        const json& items = node["line_items"];
        if (!items.is_array()) {
            r.fail("cost_model.line_items", "expected an array");
        }
        for (std::size_t i = 0; i < items.size(); ++i) {
            const std::string path = fmt::format("cost_model.line_items[{}]", i);
            const json& item = items[i];
            if (!item.is_object()) {
                r.fail(path, "expected an object");
            }
            r.allow_keys(item, {"label", "category", "amount"}, path);
            CostLineItem line;
            line.label = r.text(item, "label", path + ".label");
            const std::string category = r.text(item, "category", path + ".category");
            const auto parsed = parse_cost_category(category);
            if (!parsed) {
                r.fail(path + ".category",
                       fmt::format("unknown category '{}' (capital, indirect, operating_reserve, contingency)",
                                   category));
            }
            line.category = *parsed;
            line.amount = r.money(item, "amount", path + ".amount");
            model.line_items.push_back(std::move(line));
        }
    }
    if (node.contains("unit_items")) {
        const json& items = node["unit_items"];
        if (!items.is_array()) {
            r.fail("cost_model.unit_items", "expected an array");
        }
        for (std::size_t i = 0; i < items.size(); ++i) {
            const std::string path = fmt::format("cost_model.unit_items[{}]", i);
            const json& item = items[i];
            if (!item.is_object()) {
                r.fail(path, "expected an object");
            }
            r.allow_keys(item, {"label", "unit_count", "unit_cost"}, path);
            CostUnitItem unit;
            unit.label = r.text(item, "label", path + ".label");
            unit.unit_count = r.integer(item, "unit_count", path + ".unit_count");
            if (unit.unit_count < 0) {
                r.fail(path + ".unit_count", "must be non-negative");
            }
            unit.unit_cost = r.money(item, "unit_cost", path + ".unit_cost");
            model.unit_items.push_back(std::move(unit));
        }
    }
    return model;
}

ChargerFleet read_fleet(const DocumentReader& r, const json& doc, std::vector<std::string>& defaults) {
    const json& node = r.object(doc, "fleet", "fleet");
    r.allow_keys(node,
                 {"level3_count", "level2_count", "level3_annual_revenue", "level2_annual_revenue",
                  "revenue_multiplier"},
                 "fleet");
    ChargerFleet fleet;
    fleet.level3_count = r.integer(node, "level3_count", "fleet.level3_count");
    fleet.level2_count = r.integer(node, "level2_count", "fleet.level2_count");
    fleet.level3_annual_revenue = r.money(node, "level3_annual_revenue", "fleet.level3_annual_revenue");
    fleet.level2_annual_revenue = r.money(node, "level2_annual_revenue", "fleet.level2_annual_revenue");
    if (node.contains("revenue_multiplier")) {
        fleet.revenue_multiplier = r.number(node, "revenue_multiplier", "fleet.revenue_multiplier");
    } else {
        defaults.emplace_back("fleet.revenue_multiplier = 1.0");
    }
    return fleet;
}

OperatingSchedule read_schedule(const DocumentReader& r, const json& doc, std::vector<std::string>& defaults) {
    const json& node = r.object(doc, "schedule", "schedule");
    r.allow_keys(node, {"horizon_years", "subsidized_years", "annual_opex_after_subsidy"}, "schedule");
    OperatingSchedule schedule;
    if (node.contains("horizon_years")) {
        schedule.horizon_years = static_cast<int>(r.integer(node, "horizon_years", "schedule.horizon_years"));
    } else {
        defaults.emplace_back("schedule.horizon_years = 10");
    }
    schedule.subsidized_years = static_cast<int>(r.integer(node, "subsidized_years", "schedule.subsidized_years"));
    schedule.annual_opex_after_subsidy =
        r.money(node, "annual_opex_after_subsidy", "schedule.annual_opex_after_subsidy");
    return schedule;
}

GreenBond read_bond(const DocumentReader& r, const json& node, const std::string& path) {
    if (!node.is_object()) {
        r.fail(path, "expected an object");
    }
    GreenBond bond;
    bond.principal = r.money(node, "principal", path + ".principal");
    bond.coupon = r.number(node, "coupon", path + ".coupon");
    bond.tenor_years = static_cast<int>(r.integer(node, "tenor", path + ".tenor"));
    return bond;
}

FundingStack read_funding(const DocumentReader& r, const json& doc, std::vector<std::string>& defaults) {
    const json& node = r.object(doc, "funding", "funding");
    r.allow_keys(node,
                 {"federal_grant", "private_equity", "crowdfunding_proceeds", "donor_match", "green_bonds",
                  "max_federal_share"},
                 "funding");
    FundingStack funding;
    funding.federal_grant = r.money(node, "federal_grant", "funding.federal_grant");
    funding.private_equity = r.money(node, "private_equity", "funding.private_equity");
    funding.crowdfunding_proceeds = r.money(node, "crowdfunding_proceeds", "funding.crowdfunding_proceeds");
    if (node.contains("donor_match")) {
        funding.donor_match = r.money(node, "donor_match", "funding.donor_match");
    }
    if (node.contains("green_bonds")) {
        const json& bonds = node["green_bonds"];
        if (!bonds.is_array()) {
            r.fail("funding.green_bonds", "expected an array");
        }
        for (std::size_t i = 0; i < bonds.size(); ++i) {
            const std::string path = fmt::format("funding.green_bonds[{}]", i);
            r.allow_keys(bonds[i], {"principal", "coupon", "tenor"}, path);
            funding.green_bonds.push_back(read_bond(r, bonds[i], path));
        }
    }
    if (!node.contains("max_federal_share")) {
        defaults.emplace_back("funding.max_federal_share = 0.8");
    } else if (node["max_federal_share"].is_null()) {
        funding.max_federal_share.reset();
    } else {
        funding.max_federal_share = r.number(node, "max_federal_share", "funding.max_federal_share");
    }
    return funding;
}

EquityStructure read_equity(const DocumentReader& r, const json& doc, std::vector<std::string>& defaults) {
    if (!doc.contains("equity")) {
        defaults.emplace_back("equity = 50/50");
        return {0.5, 0.5};
    }
    const json& node = r.object(doc, "equity", "equity");
    r.allow_keys(node, {"operator_fraction", "crowd_fraction"}, "equity");
    const bool has_operator = node.contains("operator_fraction");
    const bool has_crowd = node.contains("crowd_fraction");
    if (!has_operator && !has_crowd) {
        defaults.emplace_back("equity = 50/50");
        return {0.5, 0.5};
    }
    EquityStructure equity;
    if (has_operator && has_crowd) {
        equity.operator_fraction = r.number(node, "operator_fraction", "equity.operator_fraction");
        equity.crowd_fraction = r.number(node, "crowd_fraction", "equity.crowd_fraction");
    } else if (has_crowd) {
        equity = EquityStructure::cppp(r.number(node, "crowd_fraction", "equity.crowd_fraction"));
        defaults.emplace_back("equity.operator_fraction = 1 - crowd_fraction");
    } else {
        const double operator_fraction = r.number(node, "operator_fraction", "equity.operator_fraction");
        equity = {operator_fraction, 1.0 - operator_fraction};
        defaults.emplace_back("equity.crowd_fraction = 1 - operator_fraction");
    }
    return equity;
}

ShareOffering read_offering(const DocumentReader& r, const json& doc) {
    const json& node = r.object(doc, "offering", "offering");
    r.allow_keys(node, {"share_price", "num_shares", "per_holder_cap", "discount_note", "in_kind_value_per_share_year"},
                 "offering");
    ShareOffering offering;
    offering.share_price = r.money(node, "share_price", "offering.share_price");
    offering.num_shares = r.integer(node, "num_shares", "offering.num_shares");
    offering.per_holder_cap = r.integer(node, "per_holder_cap", "offering.per_holder_cap");
    if (node.contains("discount_note") && !node["discount_note"].is_null()) {
        offering.discount_note = r.text(node, "discount_note", "offering.discount_note");
    }
    if (node.contains("in_kind_value_per_share_year")) {
        offering.in_kind_value_per_share_year =
            r.money(node, "in_kind_value_per_share_year", "offering.in_kind_value_per_share_year");
    }
    return offering;
}

Variation read_variation(const DocumentReader& r, const json& node, const std::string& path) {
    if (!node.is_object()) {
        r.fail(path, "expected an object");
    }
    const std::string type = r.text(node, "type", path + ".type");
    if (type == "donor_match") {
        r.allow_keys(node, {"type", "ratio"}, path);
        return DonorMatch{r.number(node, "ratio", path + ".ratio")};
    }
    if (type == "green_bond") {
        r.allow_keys(node, {"type", "principal", "coupon", "tenor"}, path);
        return GreenBondIssue{read_bond(r, node, path)};
    }
    if (type == "rebate") {
        r.allow_keys(node, {"type", "per_participant", "participants", "funded_from"}, path);
        Rebate rebate;
        rebate.per_participant = r.money(node, "per_participant", path + ".per_participant");
        rebate.participants = r.integer(node, "participants", path + ".participants");
        const std::string source = r.text(node, "funded_from", path + ".funded_from");
        const auto parsed = parse_funding_source(source);
        if (!parsed) {
            r.fail(path + ".funded_from", fmt::format("unknown funding source '{}'", source));
        }
        rebate.funded_from = *parsed;
        return rebate;
    }
    if (type == "community_shares") {
        r.allow_keys(node, {"type", "in_kind_value_per_share_year"}, path);
        return CommunityShares{r.money(node, "in_kind_value_per_share_year", path + ".in_kind_value_per_share_year")};
    }
    r.fail(path + ".type", fmt::format("unknown variation type '{}'", type));
}

// Domain paths such as "variations.green_bond.tenor" become "variations[2].tenor".
std::string variation_path(const std::string& domain_path, std::size_t index) {
    const std::string prefix = "variations";
    if (domain_path.rfind(prefix, 0) != 0) {
        return domain_path;
    }
    std::string rest = domain_path.substr(prefix.size());
    if (!rest.empty() && rest.front() == '.') {
        const auto next = rest.find('.', 1);
        rest = next == std::string::npos ? std::string{} : rest.substr(next);
    }
    return fmt::format("variations[{}]{}", index, rest);
}

std::string strip_path_prefix(const std::string& message, const std::string& path) {
    const std::string prefix = path + ": ";
    return message.rfind(prefix, 0) == 0 ? message.substr(prefix.size()) : message;
}

} // namespace

ScenarioDocument parse_scenario_text(std::string_view text, const std::filesystem::path& base_dir,
                                     const std::string& source_name) {
    LineIndex lines(text);
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError(fmt::format("{}:{}: JSON syntax error: {}", source_name,
                                          lines.line_at_offset(e.byte == 0 ? 0 : e.byte - 1), e.what()));
    }
    lines.build();
    const DocumentReader r(lines, source_name);

    if (!doc.is_object()) {
        r.fail("", "top level must be an object");
    }
    r.allow_keys(doc,
                 {"schema_version", "description", "cost_model", "fleet", "schedule", "funding", "equity", "offering",
                  "variations", "ledger_csv"},
                 "");
    const std::string version = r.text(doc, "schema_version", "schema_version");
    if (version != scenario_schema_version) {
        r.fail("schema_version", fmt::format("unsupported schema_version '{}' (expected '{}')", version,
                                             scenario_schema_version));
    }

    ScenarioDocument out;
    out.source = source_name;
    Scenario base;
    base.cost_model = read_cost_model(r, doc);
    base.fleet = read_fleet(r, doc, out.defaults_applied);
    base.schedule = read_schedule(r, doc, out.defaults_applied);
    base.funding = read_funding(r, doc, out.defaults_applied);
    base.equity = read_equity(r, doc, out.defaults_applied);
    base.offering = read_offering(r, doc);

    if (doc.contains("variations")) {
        const json& list = doc["variations"];
        if (!list.is_array()) {
            r.fail("variations", "expected an array");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            out.variations.push_back(read_variation(r, list[i], fmt::format("variations[{}]", i)));
        }
    }

    try {
        validate(base);
    } catch (const ValidationError& e) {
        r.fail(e.path(), strip_path_prefix(e.what(), e.path()));
    }

    Scenario scenario = base;
    for (std::size_t i = 0; i < out.variations.size(); ++i) {
        try {
            scenario = apply_variation(scenario, out.variations[i]);
        } catch (const ValidationError& e) {
            const std::string path = variation_path(e.path(), i);
            r.fail(path, fmt::format("after variation {}: {}", i, strip_path_prefix(e.what(), e.path())));
        }
    }

    if (doc.contains("ledger_csv")) {
        const std::filesystem::path ledger_path = base_dir / r.text(doc, "ledger_csv", "ledger_csv");
        if (!std::filesystem::exists(ledger_path)) {
            throw IoError(fmt::format("{}referenced ledger file '{}' does not exist", r.location("ledger_csv"),
                                      ledger_path.string()));
        }
        try {
            scenario.ledger = ledger_from_rows(scenario.offering, read_ledger_csv(ledger_path));
        } catch (const ValidationError& e) {
            r.fail("ledger_csv", e.what());
        }
    }

    out.scenario = std::move(scenario);
    return out;
}

ScenarioDocument parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot read scenario file '{}'", path.string()));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str(), path.parent_path(), path.string());
}

namespace {

json money_json(Money amount) {
    if (amount.cents() % 100 == 0) {
        return amount.cents() / 100;
    }
    return amount.dollars();
}

} // namespace

std::string serialize_scenario(const Scenario& s) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = std::string(scenario_schema_version);

    auto& cost = doc["cost_model"];
    cost["line_items"] = nlohmann::ordered_json::array();
    for (const auto& item : s.cost_model.line_items) {
        cost["line_items"].push_back(
            {{"label", item.label}, {"category", std::string(to_string(item.category))}, {"amount", money_json(item.amount)}});
    }
    cost["unit_items"] = nlohmann::ordered_json::array();
    for (const auto& item : s.cost_model.unit_items) {
        cost["unit_items"].push_back(
            {{"label", item.label}, {"unit_count", item.unit_count}, {"unit_cost", money_json(item.unit_cost)}});
    }

    doc["fleet"] = {{"level3_count", s.fleet.level3_count},
                    {"level2_count", s.fleet.level2_count},
                    {"level3_annual_revenue", money_json(s.fleet.level3_annual_revenue)},
                    {"level2_annual_revenue", money_json(s.fleet.level2_annual_revenue)},
                    {"revenue_multiplier", s.fleet.revenue_multiplier}};

    doc["schedule"] = {{"horizon_years", s.schedule.horizon_years},
                       {"subsidized_years", s.schedule.subsidized_years},
                       {"annual_opex_after_subsidy", money_json(s.schedule.annual_opex_after_subsidy)}};

    auto& funding = doc["funding"];
    funding["federal_grant"] = money_json(s.funding.federal_grant);
    funding["private_equity"] = money_json(s.funding.private_equity);
    funding["crowdfunding_proceeds"] = money_json(s.funding.crowdfunding_proceeds);
    funding["donor_match"] = money_json(s.funding.donor_match);
    funding["green_bonds"] = nlohmann::ordered_json::array();
    for (const auto& bond : s.funding.green_bonds) {
        funding["green_bonds"].push_back(
            {{"principal", money_json(bond.principal)}, {"coupon", bond.coupon}, {"tenor", bond.tenor_years}});
    }
    if (s.funding.max_federal_share) {
        funding["max_federal_share"] = *s.funding.max_federal_share;
    } else {
        funding["max_federal_share"] = nullptr;
    }

    doc["equity"] = {{"operator_fraction", s.equity.operator_fraction}, {"crowd_fraction", s.equity.crowd_fraction}};

    auto& offering = doc["offering"];
    offering["share_price"] = money_json(s.offering.share_price);
    offering["num_shares"] = s.offering.num_shares;
    offering["per_holder_cap"] = s.offering.per_holder_cap;
    if (s.offering.discount_note) {
        offering["discount_note"] = *s.offering.discount_note;
    }
    offering["in_kind_value_per_share_year"] = money_json(s.offering.in_kind_value_per_share_year);

    return doc.dump(2) + "\n";
}

} // namespace evfin
