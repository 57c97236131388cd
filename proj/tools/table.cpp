#include "table.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ldfec::cli {

using nlohmann::json;

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error("row width " + std::to_string(row.size()) + " does not match " +
                               std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
}

namespace {

std::string quote_always(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + "\"";
}

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    return quote_always(s);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

// Integers have no '.', exponent, or non-numeric characters; doubles parse fully with strtod.
Cell parse_cell(const std::string& s, bool was_quoted) {
    if (was_quoted || s.empty()) {
        return s;
    }
    char* end = nullptr;
    if (s.find_first_of(".eEn") == std::string::npos) {
        const long long v = std::strtoll(s.c_str(), &end, 10);
        if (end != nullptr && *end == '\0') {
            return static_cast<std::int64_t>(v);
        }
    }
    const double d = std::strtod(s.c_str(), &end);
    if (end != nullptr && *end == '\0') {
        return d;
    }
    return s;
}

}  // namespace

std::string format_cell(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) {
        return std::to_string(*i);
    }
    if (const auto* d = std::get_if<double>(&c)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", *d);
        std::string s = buf;
        // Keep integral doubles recognisable as doubles when read back.
        if (s.find_first_of(".eEn") == std::string::npos) {
            s += ".0";
        }
        return s;
    }
    return std::get<std::string>(c);
}

void write_csv(std::ostream& os, const Table& t) {
    os << "# command=" << t.command << "\n";
    os << "# seed=" << t.seed << "\n";
    os << "# build=" << t.build << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        os << (i ? "," : "") << quote(t.columns[i]);
    }
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "");
            if (const auto* str = std::get_if<std::string>(&row[i])) {
                // Strings are always quoted so that numeric-looking text stays text.
                os << quote_always(*str);
            } else {
                os << format_cell(row[i]);
            }
        }
        os << "\n";
    }
}

Table read_csv(std::istream& is) {
    Table t;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                continue;
            }
            const std::string key = line.substr(2, eq - 2);
            const std::string value = line.substr(eq + 1);
            if (key == "command") {
                t.command = value;
            } else if (key == "seed") {
                t.seed = std::stoull(value);
            } else if (key == "build") {
                t.build = value;
            }
            continue;
        }
        if (!header) {
            t.columns = split_csv(line);
            header = true;
            continue;
        }
        // Track which fields were quoted so quoted numbers stay strings.
        std::vector<Cell> row;
        std::string cur;
        bool quoted = false;
        bool was_quoted = false;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            const char ch = i < line.size() ? line[i] : ',';
            if (quoted) {
                if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else if (ch == '"') {
                    quoted = false;
                } else {
                    cur += ch;
                }
            } else if (ch == '"') {
                quoted = true;
                was_quoted = true;
            } else if (ch == ',') {
                row.push_back(parse_cell(cur, was_quoted));
                cur.clear();
                was_quoted = false;
            } else {
                cur += ch;
            }
        }
        t.add_row(std::move(row));
    }
    return t;
}

std::string to_json(const Table& t) {
    json j;
    j["command"] = t.command;
    j["seed"] = t.seed;
    j["build"] = t.build;
    j["columns"] = t.columns;
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (const auto& c : row) {
            std::visit([&](const auto& v) { r.push_back(v); }, c);
        }
        rows.push_back(r);
    }
    j["rows"] = rows;
    return j.dump(2);
}

Table from_json(const std::string& text) {
    const json j = json::parse(text);
    Table t;
    t.command = j.at("command").get<std::string>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.build = j.at("build").get<std::string>();
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
        std::vector<Cell> row;
        for (const auto& v : r) {
            if (v.is_string()) {
                row.emplace_back(v.get<std::string>());
            } else if (v.is_number_integer()) {
                row.emplace_back(v.get<std::int64_t>());
            } else {
                row.emplace_back(v.get<double>());
            }
        }
        t.add_row(std::move(row));
    }
    return t;
}

}  // namespace ldfec::cli
