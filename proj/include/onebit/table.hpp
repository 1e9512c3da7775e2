#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

// Column-oriented numeric tables and their CSV / JSON serialisation.

namespace onebit::report {

struct Column {
    std::string name;
    std::string unit;
    std::vector<double> values;
};

struct Table {
    /// Series name, used for file names and the metadata line.
    std::string name;
    std::vector<Column> columns;
    /// Set when a numerical failure cut the table short.
    bool partial = false;
    std::string note;

    Table() = default;
    Table(std::string name, std::vector<std::pair<std::string, std::string>> header);

    std::size_t rows() const;
    /// Appends one value per column; throws std::invalid_argument on a size mismatch.
    void add_row(const std::vector<double>& row);
    const Column& column(const std::string& name, const std::string& unit) const;
};

enum class Format { csv, json };

Format parse_format(const std::string& name);
std::string extension(Format f);

/// Shortest decimal that parses back to the same double.
std::string format_number(double x);

/// One "# meta" line, a "name[unit]" header row, then data rows.
void write_csv(std::ostream& os, const Table& t, const std::string& meta);

/// {"meta": ..., "name": ..., "partial": ..., "columns": [{"name", "unit", "values"}]}.
void write_json(std::ostream& os, const Table& t, const std::string& meta);

void write_table(std::ostream& os, const Table& t, const std::string& meta, Format f);

/// Parses the CSV produced by write_csv (metadata line skipped).
Table read_csv(std::istream& is);

}  // namespace onebit::report
