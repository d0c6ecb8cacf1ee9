#include "civicpulse/spatiotemporal.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "civicpulse/errors.hpp"
#include "civicpulse/jsonl.hpp"
#include "civicpulse/log.hpp"
#include "civicpulse/timeutil.hpp"

namespace civicpulse {

namespace {

// Planar geometry on (x = lon, y = lat); zone polygons are small enough that
// treating degrees as Cartesian is the intended interpretation.

double cross(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) {
    return (b.lon - a.lon) * (c.lat - a.lat) - (b.lat - a.lat) * (c.lon - a.lon);
}

int orientation(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) {
    const double v = cross(a, b, c);
    return (v > 0.0) - (v < 0.0);
}

bool within_box(const GeoPoint& a, const GeoPoint& b, const GeoPoint& p) {
    return std::min(a.lat, b.lat) <= p.lat && p.lat <= std::max(a.lat, b.lat) &&
           std::min(a.lon, b.lon) <= p.lon && p.lon <= std::max(a.lon, b.lon);
}

bool on_segment(const GeoPoint& a, const GeoPoint& b, const GeoPoint& p) {
    return orientation(a, b, p) == 0 && within_box(a, b, p);
}

bool segments_touch(const GeoPoint& p1, const GeoPoint& q1,
                    const GeoPoint& p2, const GeoPoint& q2) {
    const int d1 = orientation(p2, q2, p1);
    const int d2 = orientation(p2, q2, q1);
    const int d3 = orientation(p1, q1, p2);
    const int d4 = orientation(p1, q1, q2);
    if (d1 != d2 && d3 != d4) return true;
    if (d1 == 0 && within_box(p2, q2, p1)) return true;
    if (d2 == 0 && within_box(p2, q2, q1)) return true;
    if (d3 == 0 && within_box(p1, q1, p2)) return true;
    if (d4 == 0 && within_box(p1, q1, q2)) return true;
    return false;
}

// Ray casting with an explicit boundary check; boundary counts as inside.
bool ring_contains(const std::vector<GeoPoint>& ring, double lat, double lon) {
    const GeoPoint p{lat, lon};
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const GeoPoint& a = ring[j];
        const GeoPoint& b = ring[i];
        if (on_segment(a, b, p)) return true;
        if ((a.lat > lat) != (b.lat > lat)) {
            const double x_hit = a.lon + (lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
            if (lon < x_hit) inside = !inside;
        }
    }
    return inside;
}

// A ring is simple when non-adjacent edges never touch and adjacent edges
// share exactly their common vertex (no spikes, no zero-length edges).
void validate_simple_ring(const std::vector<GeoPoint>& ring, const std::string& where) {
    const std::size_t n = ring.size();
    auto vertex = [&](std::size_t i) -> const GeoPoint& { return ring[i % n]; };
    for (std::size_t i = 0; i < n; ++i) {
        const GeoPoint& a = vertex(i);
        const GeoPoint& b = vertex(i + 1);
        if (a.lat == b.lat && a.lon == b.lon) {
            throw ConfigError(where + ": polygon has a zero-length edge");
        }
        // Spike: the next edge folds back along this one.
        if (on_segment(a, b, vertex(i + 2)) || on_segment(b, vertex(i + 2), a)) {
            throw ConfigError(where + ": polygon is self-intersecting");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_touch(vertex(i), vertex(i + 1), vertex(j), vertex(j + 1))) {
                throw ConfigError(where + ": polygon is self-intersecting");
            }
        }
    }
}

void merge_bin(BinStats& into, const BinStats& from) {
    into.count += from.count;
    into.sum.merge(from.sum);
}

template <typename Map>
void merge_bin_map(Map& into, const Map& from) {
    for (const auto& [key, stats] : from) merge_bin(into[key], stats);
}

}  // namespace

std::string to_string(LocationType type) {
    switch (type) {
        case LocationType::Commercial: return "Commercial";
        case LocationType::Highway: return "Highway";
        case LocationType::MajorRoad: return "MajorRoad";
        case LocationType::Residential: return "Residential";
        case LocationType::UrbanCore: return "UrbanCore";
    }
    return "Commercial";
}

std::optional<LocationType> location_type_from_string(std::string_view name) {
    if (name == "Commercial") return LocationType::Commercial;
    if (name == "Highway") return LocationType::Highway;
    if (name == "MajorRoad") return LocationType::MajorRoad;
    if (name == "Residential") return LocationType::Residential;
    if (name == "UrbanCore") return LocationType::UrbanCore;
    return std::nullopt;
}

ZoneConfig load_zones(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw ConfigError("zones: cannot open " + path);
    Json root;
    try {
        root = Json::parse(in);
    } catch (const Json::exception& e) {
        throw ConfigError("zones: " + path + " is not valid JSON: " + e.what());
    }
    if (!root.is_object() || root.value("type", std::string{}) != "FeatureCollection") {
        throw ConfigError("zones: " + path + " must be a GeoJSON FeatureCollection");
    }
    const auto features = root.find("features");
    if (features == root.end() || !features->is_array()) {
        throw ConfigError("zones: " + path + " has no features array");
    }

    ZoneConfig config;
    std::size_t index = 0;
    for (const Json& feature : *features) {
        const std::string where = "zones: feature " + std::to_string(index++);
        if (!feature.is_object() || feature.value("type", std::string{}) != "Feature") {
            throw ConfigError(where + ": expected a Feature object");
        }
        const auto geometry = feature.find("geometry");
        if (geometry == feature.end() || !geometry->is_object()) {
            throw ConfigError(where + ": missing geometry");
        }
        const std::string geom_type = geometry->value("type", std::string{});
        if (geom_type != "Polygon") {
            throw ConfigError(where + ": geometry must be a Polygon, got \"" + geom_type + "\"");
        }
        const auto rings = geometry->find("coordinates");
        if (rings == geometry->end() || !rings->is_array() || rings->empty()) {
            throw ConfigError(where + ": missing polygon coordinates");
        }
        if (rings->size() > 1) {
            throw ConfigError(where + ": only a single exterior ring is supported");
        }

        Zone zone;
        for (const Json& position : rings->front()) {
            if (!position.is_array() || position.size() < 2 ||
                !position[0].is_number() || !position[1].is_number()) {
                throw ConfigError(where + ": positions must be [lon, lat] numbers");
            }
            // GeoJSON order is [lon, lat].
            zone.polygon.push_back({position[1].get<double>(), position[0].get<double>()});
        }
        if (zone.polygon.size() >= 2) {
            const GeoPoint& first = zone.polygon.front();
            const GeoPoint& last = zone.polygon.back();
            if (first.lat == last.lat && first.lon == last.lon) zone.polygon.pop_back();
        }
        if (zone.polygon.size() < 3) {
            throw ConfigError(where + ": polygon needs at least 3 distinct vertices");
        }
        for (const GeoPoint& v : zone.polygon) {
            if (!valid_coordinates(v.lat, v.lon)) {
                throw ConfigError(where + ": vertex out of coordinate range");
            }
        }
        validate_simple_ring(zone.polygon, where);

        const auto properties = feature.find("properties");
        if (properties == feature.end() || !properties->is_object()) {
            throw ConfigError(where + ": missing properties");
        }
        const auto type_it = properties->find("location_type");
        if (type_it == properties->end() || !type_it->is_string()) {
            throw ConfigError(where + ": missing \"location_type\" property");
        }
        const auto type = location_type_from_string(type_it->get<std::string>());
        if (!type) {
            throw ConfigError(where + ": unknown location_type \"" +
                              type_it->get<std::string>() + "\"");
        }
        zone.type = *type;
        config.zones.push_back(std::move(zone));
    }
    return config;
}

std::optional<LocationType> classify_location(double lat, double lon,
                                              const ZoneConfig& zones) {
    for (const Zone& zone : zones.zones) {
        if (ring_contains(zone.polygon, lat, lon)) return zone.type;
    }
    return zones.default_type;
}

TemporalBin bin_temporal(std::int64_t created_at_utc, int tz_offset_minutes) {
    if (tz_offset_minutes < -840 || tz_offset_minutes > 840) {
        throw ConfigError("tz_offset_minutes must be within [-840, 840], got " +
                          std::to_string(tz_offset_minutes));
    }
    const std::int64_t local = created_at_utc + std::int64_t{tz_offset_minutes} * 60;
    std::int64_t days = local / 86400;
    if (local % 86400 < 0) --days;  // floor toward past for pre-1970 stamps
    const std::int64_t second_of_day = local - days * 86400;

    TemporalBin bin;
    bin.hour = static_cast<int>(second_of_day / 3600);
    bin.weekday = weekday_from_days(days);
    bin.rush = (bin.hour >= 7 && bin.hour < 9) || (bin.hour >= 17 && bin.hour < 19);
    return bin;
}

void BinStats::add(double compound) {
    ++count;
    sum.add(compound);
}

double BinStats::mean() const {
    if (count == 0) throw PipelineError("mean of an empty bin");
    return sum.value() / static_cast<double>(count);
}

SpatioTemporalResult aggregate_bins(
    const std::vector<CleanDoc>& docs,
    const std::unordered_map<std::string, SentimentResult>& sentiments,
    const std::unordered_map<std::string, int>& topic_of,
    const ZoneConfig& zones,
    int tz_offset_minutes) {
    SpatioTemporalResult out;
    out.total_docs = static_cast<std::int64_t>(docs.size());

    for (const CleanDoc& doc : docs) {
        const auto sentiment = sentiments.find(doc.post_id);
        if (sentiment == sentiments.end()) {
            throw PipelineError("missing sentiment for doc \"" + doc.post_id + "\"");
        }
        const double compound = sentiment->second.compound;

        const TemporalBin bin = bin_temporal(doc.created_at, tz_offset_minutes);
        out.by_hour[bin.hour].add(compound);
        out.by_weekday[bin.weekday].add(compound);
        out.by_weekday_hour[{bin.weekday, bin.hour}].add(compound);
        (bin.rush ? out.rush : out.non_rush).add(compound);

        if (!doc.geo) continue;
        ++out.geotagged_docs;
        const auto type = classify_location(doc.geo->lat, doc.geo->lon, zones);
        if (type) {
            out.by_location[*type].add(compound);
        } else {
            ++out.unclassified_docs;
        }

        PointFeature feature;
        feature.post_id = doc.post_id;
        feature.lat = doc.geo->lat;
        feature.lon = doc.geo->lon;
        feature.compound = compound;
        feature.label = sentiment->second.label;
        const auto topic = topic_of.find(doc.post_id);
        if (topic != topic_of.end()) feature.topic_id = topic->second;
        feature.local_hour = bin.hour;
        out.features.push_back(std::move(feature));
    }

    if (out.unclassified_docs > 0) {
        log_warn("aggregate_bins: " + std::to_string(out.unclassified_docs) +
                 " geotagged doc(s) matched no zone and no default type; excluded "
                 "from location bins");
    }
    return out;
}

void merge_results(SpatioTemporalResult& into, const SpatioTemporalResult& from) {
    merge_bin_map(into.by_location, from.by_location);
    merge_bin_map(into.by_hour, from.by_hour);
    merge_bin_map(into.by_weekday, from.by_weekday);
    merge_bin_map(into.by_weekday_hour, from.by_weekday_hour);
    merge_bin(into.rush, from.rush);
    merge_bin(into.non_rush, from.non_rush);
    into.total_docs += from.total_docs;
    into.geotagged_docs += from.geotagged_docs;
    into.unclassified_docs += from.unclassified_docs;
    into.features.insert(into.features.end(), from.features.begin(), from.features.end());
}

std::string to_geojson(const SpatioTemporalResult& result) {
    Json collection;
    collection["type"] = "FeatureCollection";
    Json features = Json::array();
    for (const PointFeature& f : result.features) {
        Json feature;
        feature["type"] = "Feature";
        Json geometry;
        geometry["type"] = "Point";
        geometry["coordinates"] = Json::array({f.lon, f.lat});
        feature["geometry"] = std::move(geometry);
        Json properties;
        properties["post_id"] = f.post_id;
        properties["compound"] = f.compound;
        properties["label"] = to_string(f.label);
        if (f.topic_id) {
            properties["topic_id"] = *f.topic_id;
        } else {
            properties["topic_id"] = nullptr;
        }
        properties["local_hour"] = f.local_hour;
        feature["properties"] = std::move(properties);
        features.push_back(std::move(feature));
    }
    collection["features"] = std::move(features);
    return collection.dump(2);
}

}  // namespace civicpulse
