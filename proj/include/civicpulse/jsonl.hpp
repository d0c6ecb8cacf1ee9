#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include <json.hpp>

namespace civicpulse {

using Json = nlohmann::ordered_json;

/// Calls `fn(line_number, raw_line)` for every non-empty line of a JSONL file.
/// Line numbers are 1-based. Throws PipelineError if the file cannot be opened.
void for_each_jsonl_line(const std::string& path,
                         const std::function<void(std::size_t, const std::string&)>& fn);

/// Serializes one JSON value per line (compact, LF-terminated).
void append_jsonl(std::ostream& out, const Json& value);

}  // namespace civicpulse
