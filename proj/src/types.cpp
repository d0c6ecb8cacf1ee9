#include "civicpulse/types.hpp"

#include <unordered_set>

#include "civicpulse/errors.hpp"
#include "civicpulse/text.hpp"

namespace civicpulse {

std::string to_string(Platform platform) {
    switch (platform) {
        case Platform::Twitter: return "Twitter";
        case Platform::Reddit: return "Reddit";
    }
    return "Twitter";
}

std::optional<Platform> platform_from_string(std::string_view name) {
    std::string lower = ascii_lower(name);
    if (lower == "twitter") return Platform::Twitter;
    if (lower == "reddit") return Platform::Reddit;
    return std::nullopt;
}

bool valid_coordinates(double lat, double lon) {
    return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

void BoundingBox::validate() const {
    if (!(min_lat <= max_lat) || !(min_lon <= max_lon))
        throw ConfigError("bbox: min must not exceed max");
    if (!valid_coordinates(min_lat, min_lon) || !valid_coordinates(max_lat, max_lon))
        throw ConfigError("bbox: coordinates out of range");
}

void KeywordSet::validate() const {
    if (phrases.empty()) throw ConfigError("keywords: list must be non-empty");
    std::unordered_set<std::string> seen;
    for (const auto& p : phrases) {
        if (p.empty()) throw ConfigError("keywords: empty phrase");
        if (p != ascii_lower(p)) throw ConfigError("keywords: phrase must be lowercase: '" + p + "'");
        if (!seen.insert(p).second) throw ConfigError("keywords: duplicate phrase: '" + p + "'");
    }
}

std::string to_string(Label label) {
    switch (label) {
        case Label::Negative: return "Negative";
        case Label::Neutral: return "Neutral";
        case Label::Positive: return "Positive";
    }
    return "Neutral";
}

std::optional<Label> label_from_string(std::string_view name) {
    std::string lower = ascii_lower(name);
    if (lower == "negative") return Label::Negative;
    if (lower == "neutral") return Label::Neutral;
    if (lower == "positive") return Label::Positive;
    return std::nullopt;
}

}  // namespace civicpulse
