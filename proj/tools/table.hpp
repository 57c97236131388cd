#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace ldfec::cli {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
    std::string command;
    std::uint64_t seed = 0;
    std::string build;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    bool operator==(const Table&) const = default;
};

// Comment lines "# command=...", "# seed=...", "# build=...", then a header row and one line per row.
// Doubles use %.17g, so the text parses back to the same value.
void write_csv(std::ostream& os, const Table& t);
Table read_csv(std::istream& is);

std::string to_json(const Table& t);
Table from_json(const std::string& text);

std::string format_cell(const Cell& c);

}  // namespace ldfec::cli
