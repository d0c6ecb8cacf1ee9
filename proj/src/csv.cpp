#include "civicpulse/csv.hpp"

#include <fstream>

#include "civicpulse/errors.hpp"

namespace civicpulse {

int CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool quoted_field = false;
    bool record_open = false;
    bool have_header = false;
    std::size_t line = 1;
    std::size_t record_line = 1;

    auto finish_record = [&]() {
        record.push_back(field);
        field.clear();
        quoted_field = false;
        if (!have_header) {
            table.header = record;
            have_header = true;
        } else {
            table.rows.push_back(record);
            table.row_lines.push_back(record_line);
        }
        record.clear();
        record_open = false;
    };

    char c;
    while (in.get(c)) {
        if (!record_open) {
            record_open = true;
            record_line = line;
        }
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
        } else if (c == '"' && field.empty() && !quoted_field) {
            in_quotes = true;
            quoted_field = true;
        } else if (c == ',') {
            record.push_back(field);
            field.clear();
            quoted_field = false;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && in.peek() == '\n') in.get(c);
            ++line;
            finish_record();
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) throw PipelineError("csv: unterminated quoted field");
    if (record_open) finish_record();
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PipelineError("cannot open file: " + path);
    return read_csv(in);
}

std::string csv_escape(std::string_view field) {
    bool needs_quote = false;
    for (char c : field) {
        if (c == ',' || c == '"' || c == '\r' || c == '\n') {
            needs_quote = true;
            break;
        }
    }
    if (!needs_quote) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << csv_escape(fields[i]);
    }
    out.put('\n');
}

}  // namespace civicpulse
