#include "civicpulse/ingest.hpp"

#include <cstdlib>
#include <unordered_set>

#include "civicpulse/csv.hpp"
#include "civicpulse/errors.hpp"
#include "civicpulse/jsonl.hpp"
#include "civicpulse/log.hpp"
#include "civicpulse/preprocess.hpp"
#include "civicpulse/text.hpp"
#include "civicpulse/timeutil.hpp"

namespace civicpulse {

namespace {

// Field-level parse failure; converted into a RejectedRecord by the caller.
struct RecordError {
    std::string reason;
};

std::optional<std::int64_t> parse_epoch_seconds(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::string buf(s);
    char* end = nullptr;
    errno = 0;
    long long value = std::strtoll(buf.c_str(), &end, 10);
    if (errno != 0 || end != buf.c_str() + buf.size()) return std::nullopt;
    return static_cast<std::int64_t>(value);
}

std::int64_t parse_created_at(std::string_view s) {
    if (auto ts = parse_rfc3339(s)) return *ts;
    if (auto epoch = parse_epoch_seconds(s)) return *epoch;
    throw RecordError{"created_at is neither RFC 3339 nor epoch seconds: \"" + std::string(s) +
                      "\""};
}

std::optional<double> parse_double_field(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::string buf(s);
    char* end = nullptr;
    errno = 0;
    double value = std::strtod(buf.c_str(), &end);
    if (errno != 0 || end != buf.c_str() + buf.size()) return std::nullopt;
    return value;
}

void attach_geo(RawPost& post, std::optional<double> lat, std::optional<double> lon) {
    if (!lat && !lon) return;
    if (lat.has_value() != lon.has_value()) {
        throw RecordError{"geo requires both lat and lon"};
    }
    if (!valid_coordinates(*lat, *lon)) {
        throw RecordError{"coordinates out of range"};
    }
    post.geo = GeoPoint{*lat, *lon};
}

Platform parse_platform(std::string_view s) {
    auto platform = platform_from_string(s);
    if (!platform) throw RecordError{"unknown platform: \"" + std::string(s) + "\""};
    return *platform;
}

// --- JSONL ----------------------------------------------------------------

std::string json_field_string(const Json& obj, const char* key, bool required) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        if (required) throw RecordError{std::string("missing ") + key};
        return {};
    }
    if (!it->is_string()) throw RecordError{std::string(key) + " must be a string"};
    return it->get<std::string>();
}

RawPost parse_json_record(const Json& obj) {
    if (!obj.is_object()) throw RecordError{"record is not a JSON object"};

    RawPost post;

    // id: opaque string; numeric ids from raw exports are accepted verbatim.
    auto id_it = obj.find("id");
    if (id_it == obj.end() || id_it->is_null()) throw RecordError{"missing id"};
    if (id_it->is_string()) {
        post.id = id_it->get<std::string>();
    } else if (id_it->is_number_integer()) {
        post.id = std::to_string(id_it->get<std::int64_t>());
    } else {
        throw RecordError{"id must be a string"};
    }
    if (post.id.empty()) throw RecordError{"empty id"};

    post.platform = parse_platform(json_field_string(obj, "platform", true));

    auto text_it = obj.find("text");
    if (text_it == obj.end() || text_it->is_null()) throw RecordError{"missing text"};
    if (!text_it->is_string()) throw RecordError{"text must be a string"};
    post.text = text_it->get<std::string>();

    auto ts_it = obj.find("created_at");
    if (ts_it == obj.end() || ts_it->is_null()) throw RecordError{"missing created_at"};
    if (ts_it->is_string()) {
        post.created_at = parse_created_at(ts_it->get<std::string>());
    } else if (ts_it->is_number_integer()) {
        post.created_at = ts_it->get<std::int64_t>();
    } else if (ts_it->is_number_float()) {
        post.created_at = static_cast<std::int64_t>(ts_it->get<double>());
    } else {
        throw RecordError{"created_at must be a string or number"};
    }

    std::optional<double> lat, lon;
    if (auto it = obj.find("lat"); it != obj.end() && !it->is_null()) {
        if (!it->is_number()) throw RecordError{"lat must be a number"};
        lat = it->get<double>();
    }
    if (auto it = obj.find("lon"); it != obj.end() && !it->is_null()) {
        if (!it->is_number()) throw RecordError{"lon must be a number"};
        lon = it->get<double>();
    }
    attach_geo(post, lat, lon);

    if (auto it = obj.find("is_retweet"); it != obj.end() && !it->is_null()) {
        if (!it->is_boolean()) throw RecordError{"is_retweet must be a boolean"};
        post.is_retweet = it->get<bool>();
    }
    if (std::string lang = json_field_string(obj, "lang", false); !lang.empty()) {
        post.lang = std::move(lang);
    }
    if (std::string parent = json_field_string(obj, "parent_id", false); !parent.empty()) {
        post.parent_id = std::move(parent);
    }
    return post;
}

LoadResult load_jsonl(const std::filesystem::path& path) {
    LoadResult result;
    for_each_jsonl_line(path, [&](std::size_t line_number, std::string_view line) {
        Json parsed = Json::parse(line, nullptr, false);
        if (parsed.is_discarded()) {
            result.rejects.push_back({line_number, "invalid JSON"});
            return;
        }
        try {
            result.posts.push_back(parse_json_record(parsed));
        } catch (const RecordError& err) {
            result.rejects.push_back({line_number, err.reason});
        }
    });
    return result;
}

// --- CSV ------------------------------------------------------------------

bool parse_csv_bool(std::string_view s) {
    std::string lower = ascii_lower(s);
    if (lower == "true" || lower == "1") return true;
    if (lower == "false" || lower == "0") return false;
    throw RecordError{"is_retweet must be true/false/1/0, got \"" + std::string(s) + "\""};
}

LoadResult load_csv(const std::filesystem::path& path) {
    CsvTable table = read_csv_file(path.string());
    const int id_col = table.column("id");
    const int platform_col = table.column("platform");
    const int text_col = table.column("text");
    const int created_col = table.column("created_at");
    if (id_col < 0 || platform_col < 0 || text_col < 0 || created_col < 0) {
        throw PipelineError("csv export must have columns id,platform,text,created_at: " +
                            path.string());
    }
    const int lat_col = table.column("lat");
    const int lon_col = table.column("lon");
    const int retweet_col = table.column("is_retweet");
    const int lang_col = table.column("lang");
    const int parent_col = table.column("parent_id");

    auto cell = [](const std::vector<std::string>& row, int col) -> std::string_view {
        if (col < 0 || static_cast<std::size_t>(col) >= row.size()) return {};
        return row[static_cast<std::size_t>(col)];
    };

    LoadResult result;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t line_number = table.row_lines[i];
        try {
            RawPost post;
            post.id = std::string(cell(row, id_col));
            if (post.id.empty()) throw RecordError{"empty id"};
            post.platform = parse_platform(cell(row, platform_col));
            post.text = std::string(cell(row, text_col));
            if (post.text.empty()) throw RecordError{"missing text"};
            post.created_at = parse_created_at(cell(row, created_col));

            std::optional<double> lat, lon;
            if (std::string_view s = cell(row, lat_col); !s.empty()) {
                lat = parse_double_field(s);
                if (!lat) throw RecordError{"lat must be a number"};
            }
            if (std::string_view s = cell(row, lon_col); !s.empty()) {
                lon = parse_double_field(s);
                if (!lon) throw RecordError{"lon must be a number"};
            }
            attach_geo(post, lat, lon);

            if (std::string_view s = cell(row, retweet_col); !s.empty()) {
                post.is_retweet = parse_csv_bool(s);
            }
            if (std::string_view s = cell(row, lang_col); !s.empty()) {
                post.lang = std::string(s);
            }
            if (std::string_view s = cell(row, parent_col); !s.empty()) {
                post.parent_id = std::string(s);
            }
            result.posts.push_back(std::move(post));
        } catch (const RecordError& err) {
            result.rejects.push_back({line_number, err.reason});
        }
    }
    return result;
}

bool is_english_tag(std::string_view lang) {
    std::size_t cut = lang.find_first_of("-_");
    std::string_view primary = (cut == std::string_view::npos) ? lang : lang.substr(0, cut);
    return ascii_lower(primary) == "en";
}

}  // namespace

std::optional<InputFormat> input_format_from_string(std::string_view name) {
    std::string lower = ascii_lower(name);
    if (lower == "jsonl") return InputFormat::Jsonl;
    if (lower == "csv") return InputFormat::Csv;
    return std::nullopt;
}

std::string to_string(InputFormat format) {
    return format == InputFormat::Jsonl ? "jsonl" : "csv";
}

LoadResult load_posts(const std::filesystem::path& path, InputFormat format) {
    LoadResult result =
        format == InputFormat::Jsonl ? load_jsonl(path) : load_csv(path);
    if (!result.rejects.empty()) {
        log_warn("load_posts: " + std::to_string(result.rejects.size()) + " rejected record(s) in " +
                 path.string());
    }
    return result;
}

std::vector<RawPost> filter_relevant(const std::vector<RawPost>& posts,
                                     const KeywordSet& keywords,
                                     const std::optional<BoundingBox>& bbox) {
    std::vector<RawPost> kept;
    for (const RawPost& post : posts) {
        std::string lowered = ascii_lower(post.text);
        bool matched = false;
        for (const std::string& phrase : keywords.phrases) {
            if (lowered.find(phrase) != std::string::npos) {
                matched = true;
                break;
            }
        }
        if (!matched) continue;
        if (bbox && post.geo && !bbox->contains(*post.geo)) continue;
        kept.push_back(post);
    }
    return kept;
}

std::string normalize_for_dedupe(std::string_view text) {
    return collapse_whitespace(strip_urls(ascii_lower(text)));
}

std::vector<RawPost> clean_corpus(const std::vector<RawPost>& posts) {
    std::vector<RawPost> kept;
    std::unordered_set<std::string> seen_ids;
    std::unordered_set<std::string> seen_texts;
    for (const RawPost& post : posts) {
        if (post.is_retweet) continue;
        if (post.lang && !is_english_tag(*post.lang)) continue;
        // Platform names are fixed-length enum strings, so "platform\nrest"
        // decomposes unambiguously and the keys cannot collide.
        std::string id_key = to_string(post.platform) + "\n" + post.id;
        if (!seen_ids.insert(std::move(id_key)).second) continue;
        std::string text_key = to_string(post.platform) + "\n" + normalize_for_dedupe(post.text);
        if (!seen_texts.insert(std::move(text_key)).second) continue;
        kept.push_back(post);
    }
    return kept;
}

}  // namespace civicpulse
