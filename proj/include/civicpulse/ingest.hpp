#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "civicpulse/types.hpp"

namespace civicpulse {

enum class InputFormat { Jsonl, Csv };

std::optional<InputFormat> input_format_from_string(std::string_view name);
std::string to_string(InputFormat format);

// One record that failed to parse; the surrounding load keeps going.
struct RejectedRecord {
    std::size_t line_number = 0;
    std::string reason;
};

struct LoadResult {
    std::vector<RawPost> posts;    // well-formed records, in file order
    std::vector<RejectedRecord> rejects;
};

// Loads a post export. JSONL: one object per line, keys id, platform, text,
// created_at required; lat, lon, is_retweet, lang, parent_id optional.
// CSV: header row with the same names; empty cells mean "absent".
// Timestamps are RFC 3339 strings or epoch seconds. Malformed records land
// in `rejects` with their 1-based line number; an unreadable file throws.
LoadResult load_posts(const std::filesystem::path& path, InputFormat format);

// Keeps posts whose lowercased text contains at least one keyword phrase as
// a substring. With a bounding box, geotagged posts must also fall inside it
// (inclusive bounds); posts without coordinates pass the geo test.
std::vector<RawPost> filter_relevant(const std::vector<RawPost>& posts,
                                     const KeywordSet& keywords,
                                     const std::optional<BoundingBox>& bbox);

// Drops retweets, posts with a non-English lang tag, exact duplicates by
// (platform, id), and near-duplicates whose normalized text matches an
// earlier kept post on the same platform. Order-preserving and idempotent.
std::vector<RawPost> clean_corpus(const std::vector<RawPost>& posts);

// Near-duplicate key: lowercased, URLs removed, whitespace collapsed.
std::string normalize_for_dedupe(std::string_view text);

}  // namespace civicpulse
