#include "nhqc/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace nhqc {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string render_cell(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    return std::get<std::string>(c);
}

}  // namespace

std::string render_csv(const Table& t) {
    std::string out;
    for (const auto& c : t.comments) {
        out += "# ";
        out += c;
        out += '\n';
    }
    for (std::size_t k = 0; k < t.columns.size(); ++k) {
        if (k) out += ',';
        out += t.columns[k];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += render_cell(row[k]);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const Table& t) {
    nlohmann::ordered_json j;
    j["comments"] = t.comments;
    j["columns"] = t.columns;
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json jr = nlohmann::ordered_json::array();
        for (const auto& c : row) {
            if (std::holds_alternative<double>(c)) {
                const double v = std::get<double>(c);
                if (std::isfinite(v))
                    jr.push_back(v);
                else
                    jr.push_back(format_double(v));  // JSON numbers exclude nan/inf
            } else {
                jr.push_back(std::get<std::string>(c));
            }
        }
        rows.push_back(std::move(jr));
    }
    return j.dump(1, ' ') + "\n";
}

void write_table(const Table& t, const std::string& path, const std::string& format) {
    std::string body;
    if (format == "csv")
        body = render_csv(t);
    else if (format == "json")
        body = render_json(t);
    else
        throw std::runtime_error("unknown output format '" + format + "'");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << body;
    if (!f) throw std::runtime_error("short write to '" + path + "'");
}

}  // namespace nhqc
