#include "onebit/table.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace onebit::report {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_number(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    return x;
}

}  // namespace

Table::Table(std::string name, std::vector<std::pair<std::string, std::string>> header)
    : name(std::move(name)) {
    for (auto& [col, unit] : header) columns.push_back({std::move(col), std::move(unit), {}});
}

std::size_t Table::rows() const { return columns.empty() ? 0 : columns.front().values.size(); }

void Table::add_row(const std::vector<double>& row) {
    if (row.size() != columns.size()) {
        throw std::invalid_argument("row has " + std::to_string(row.size()) + " values, table has " +
                                    std::to_string(columns.size()) + " columns");
    }
    for (std::size_t i = 0; i < row.size(); ++i) columns[i].values.push_back(row[i]);
}

const Column& Table::column(const std::string& col, const std::string& unit) const {
    for (const auto& c : columns) {
        if (c.name == col && c.unit == unit) return c;
    }
    throw std::out_of_range("no column " + col + "[" + unit + "] in " + name);
}

Format parse_format(const std::string& name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw std::invalid_argument("unknown format '" + name + "' (csv|json)");
}

std::string extension(Format f) { return f == Format::csv ? ".csv" : ".json"; }

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    // counts such as n_blocks read better as 100000 than 1e+05
    const bool integral = std::abs(x) < 1e15 && x == std::trunc(x);
    const auto [ptr, ec] = integral ? std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed)
                                    : std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw std::runtime_error("format_number failed");
    return {buf, ptr};
}

void write_csv(std::ostream& os, const Table& t, const std::string& meta) {
    os << "# " << meta << " series=" << t.name;
    if (t.partial) os << " partial=1 note=\"" << t.note << '"';
    os << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) os << ',';
        os << t.columns[i].name << '[' << t.columns[i].unit << ']';
    }
    os << '\n';
    for (std::size_t r = 0; r < t.rows(); ++r) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            if (i) os << ',';
            os << format_number(t.columns[i].values[r]);
        }
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& t, const std::string& meta) {
    nlohmann::ordered_json doc;
    doc["meta"] = meta;
    doc["name"] = t.name;
    doc["partial"] = t.partial;
    if (t.partial) doc["note"] = t.note;
    doc["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : t.columns) {
        nlohmann::ordered_json values = nlohmann::ordered_json::array();
        for (double v : c.values) {
            // JSON has no NaN/inf literals
            if (std::isfinite(v)) {
                values.push_back(v);
            } else {
                values.push_back(nullptr);
            }
        }
        doc["columns"].push_back({{"name", c.name}, {"unit", c.unit}, {"values", values}});
    }
    os << doc.dump(2) << '\n';
}

void write_table(std::ostream& os, const Table& t, const std::string& meta, Format f) {
    if (f == Format::csv) {
        write_csv(os, t, meta);
    } else {
        write_json(os, t, meta);
    }
}

Table read_csv(std::istream& is) {
    Table t;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split(line, ',');
        if (!header) {
            for (const auto& f : fields) {
                const auto open = f.find('[');
                if (open == std::string::npos || f.back() != ']') {
                    throw std::invalid_argument("header field without unit tag: '" + f + "'");
                }
                t.columns.push_back({f.substr(0, open), f.substr(open + 1, f.size() - open - 2), {}});
            }
            header = true;
            continue;
        }
        std::vector<double> row;
        for (const auto& f : fields) row.push_back(parse_number(f));
        t.add_row(row);
    }
    return t;
}

}  // namespace onebit::report
