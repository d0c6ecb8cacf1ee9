#include "civicpulse/jsonl.hpp"

#include <fstream>
#include <ostream>

#include "civicpulse/errors.hpp"

namespace civicpulse {

void for_each_jsonl_line(const std::string& path,
                         const std::function<void(std::size_t, const std::string&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PipelineError("cannot open file: " + path);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = true;
        for (char c : line) {
            if (c != ' ' && c != '\t') {
                blank = false;
                break;
            }
        }
        if (blank) continue;
        fn(line_number, line);
    }
}

void append_jsonl(std::ostream& out, const Json& value) {
    out << value.dump() << "\n";
}

}  // namespace civicpulse
