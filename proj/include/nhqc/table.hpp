#pragma once
// Column-oriented output tables with a comment header, rendered to CSV or
// JSON. All number formatting is locale-independent and byte-deterministic:
// doubles print as shortest-17-significant-digit decimal with '.' separator.

#include <string>
#include <variant>
#include <vector>

namespace nhqc {

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> comments;  // emitted first, one "# ..." line each
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

// "%.17g"-style rendering; nan and inf spell exactly "nan", "inf", "-inf".
std::string format_double(double v);

std::string render_csv(const Table& t);
std::string render_json(const Table& t);  // {"comments": [...], "columns": [...], "rows": [[...], ...]}

// Renders in the requested format ("csv" | "json") and writes the file.
void write_table(const Table& t, const std::string& path, const std::string& format);

}  // namespace nhqc
