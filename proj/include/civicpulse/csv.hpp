#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace civicpulse {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;  // 1-based line number where each row starts

    int column(std::string_view name) const;  // -1 if absent
};

/// RFC 4180 reader: quoted fields, doubled quotes, embedded commas/newlines,
/// CRLF or LF line endings. First row is the header.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Quotes a field only when it contains a comma, a quote, or a line break.
std::string csv_escape(std::string_view field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace civicpulse
