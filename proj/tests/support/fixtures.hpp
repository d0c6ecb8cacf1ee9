#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {

struct DifferentialRow {
    std::string text;
    double neg, neu, pos, compound;
};

inline std::vector<DifferentialRow> load_differential_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture: " + path);
    std::vector<DifferentialRow> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            continue;  // header
        }
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == '\t') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (fields.size() != 5) throw std::runtime_error("bad fixture row: " + line);
        rows.push_back({fields[0], std::stod(fields[1]), std::stod(fields[2]),
                        std::stod(fields[3]), std::stod(fields[4])});
    }
    return rows;
}

}  // namespace testsupport
