#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "civicpulse/exactsum.hpp"
#include "civicpulse/types.hpp"

namespace civicpulse {

enum class LocationType { Commercial, Highway, MajorRoad, Residential, UrbanCore };

std::string to_string(LocationType type);
std::optional<LocationType> location_type_from_string(std::string_view name);

struct Zone {
    std::vector<GeoPoint> polygon;  // exterior ring; closing vertex not repeated
    LocationType type = LocationType::Commercial;
};

struct ZoneConfig {
    std::vector<Zone> zones;
    std::optional<LocationType> default_type;  // fallback for points in no zone
};

/// Loads zones from a GeoJSON FeatureCollection of Polygon features, each
/// carrying a "location_type" property. Coordinates are [lon, lat] per
/// RFC 7946; a repeated closing vertex is dropped. Every ring must have
/// >= 3 distinct vertices, valid coordinates, a single exterior ring, and be
/// simple (non-self-intersecting). Violations throw ConfigError.
/// default_type is left unset; it comes from the run configuration.
ZoneConfig load_zones(const std::string& path);

/// First zone (in config order) whose polygon contains the point; polygon
/// boundaries count as inside. Falls back to default_type; nullopt means
/// unclassified (excluded from location bins).
std::optional<LocationType> classify_location(double lat, double lon,
                                              const ZoneConfig& zones);

struct TemporalBin {
    int hour = 0;     // 0-23, local
    int weekday = 0;  // 0 = Monday ... 6 = Sunday, local
    bool rush = false;

    bool operator==(const TemporalBin& other) const = default;
};

/// Converts a UTC timestamp to local time using a fixed minute offset
/// (within +/-14h, else ConfigError) and bins it. Rush hours are the
/// half-open windows [07,09) and [17,19) local.
TemporalBin bin_temporal(std::int64_t created_at_utc, int tz_offset_minutes);

/// One aggregation cell. The sum is kept exact so that sharded aggregation
/// followed by merge_results reproduces whole-corpus bins bit for bit; the
/// mean is derived at read time.
struct BinStats {
    std::int64_t count = 0;
    ExactSum sum;

    void add(double compound);
    double mean() const;  // throws PipelineError when count == 0
    bool operator==(const BinStats& other) const = default;
};

/// One geotagged post, ready to serialize as a GeoJSON Point feature.
struct PointFeature {
    std::string post_id;
    double lat = 0.0;
    double lon = 0.0;
    double compound = 0.0;
    Label label = Label::Neutral;
    std::optional<int> topic_id;  // absent when the doc holds no topic
    int local_hour = 0;

    bool operator==(const PointFeature& other) const = default;
};

struct SpatioTemporalResult {
    // Geotagged + zone-classified docs only.
    std::map<LocationType, BinStats> by_location;
    // All docs.
    std::map<int, BinStats> by_hour;
    std::map<int, BinStats> by_weekday;
    std::map<std::pair<int, int>, BinStats> by_weekday_hour;  // (weekday, hour)
    BinStats rush;
    BinStats non_rush;

    std::int64_t total_docs = 0;
    std::int64_t geotagged_docs = 0;
    std::int64_t unclassified_docs = 0;  // geotagged but in no zone, no default

    std::vector<PointFeature> features;  // one per geotagged doc, input order
};

/// Aggregates sentiment into spatial and temporal bins. Every doc must have
/// a sentiment entry (missing -> PipelineError naming the doc). topic_of may
/// omit docs; their features carry no topic id.
SpatioTemporalResult aggregate_bins(
    const std::vector<CleanDoc>& docs,
    const std::unordered_map<std::string, SentimentResult>& sentiments,
    const std::unordered_map<std::string, int>& topic_of,
    const ZoneConfig& zones,
    int tz_offset_minutes);

/// Exact, associative merge: bins combine by (count, exact sum); features
/// concatenate in merge order.
void merge_results(SpatioTemporalResult& into, const SpatioTemporalResult& from);

/// RFC 7946 FeatureCollection with one Point feature per geotagged doc,
/// coordinates [lon, lat], properties {post_id, compound, label, topic_id,
/// local_hour}.
std::string to_geojson(const SpatioTemporalResult& result);

}  // namespace civicpulse
