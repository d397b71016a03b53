#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace wscat {

using Cell = std::variant<double, long long, bool, std::string>;

// One schema, two encodings: CSV rows or a JSON array of objects keyed by
// column name.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// 17 significant digits, '.' separator; round-trips through strtod.
std::string format_double(double v);

void write_csv(const Table& table, std::ostream& os);
void write_json(const Table& table, std::ostream& os);

struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Minimal reader for the files written by write_csv (double-quoted fields may
// contain commas).
CsvData read_csv(std::istream& is);

}  // namespace wscat
