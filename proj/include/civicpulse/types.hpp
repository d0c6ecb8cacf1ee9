#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace civicpulse {

enum class Platform { Twitter, Reddit };

std::string to_string(Platform platform);
std::optional<Platform> platform_from_string(std::string_view name);

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

bool valid_coordinates(double lat, double lon);

/// One social-media post as ingested from a file export.
struct RawPost {
    std::string id;
    Platform platform = Platform::Twitter;
    std::string text;
    std::int64_t created_at = 0;  // UTC epoch seconds
    std::optional<GeoPoint> geo;
    bool is_retweet = false;
    std::optional<std::string> lang;
    std::optional<std::string> parent_id;
};

struct BoundingBox {
    double min_lat = 0.0;
    double min_lon = 0.0;
    double max_lat = 0.0;
    double max_lon = 0.0;

    // inclusive on all four bounds
    bool contains(const GeoPoint& p) const {
        return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon && p.lon <= max_lon;
    }
    void validate() const;
};

/// Lowercase keyword phrases; a post is relevant if its lowercased text
/// contains at least one phrase as a substring.
struct KeywordSet {
    std::vector<std::string> phrases;
    void validate() const;  // non-empty, lowercase, no duplicates
};

/// A cleaned post carrying both the untouched original text (for sentiment)
/// and the normalized token list (for topic modeling).
struct CleanDoc {
    std::string post_id;
    Platform platform = Platform::Twitter;
    std::string raw_text;
    std::vector<std::string> tokens;
    std::int64_t created_at = 0;
    std::optional<GeoPoint> geo;
};

enum class Label { Negative, Neutral, Positive };

std::string to_string(Label label);
std::optional<Label> label_from_string(std::string_view name);

struct SentimentResult {
    double neg = 0.0;
    double neu = 0.0;
    double pos = 0.0;
    double compound = 0.0;
    Label label = Label::Neutral;
};

}  // namespace civicpulse
