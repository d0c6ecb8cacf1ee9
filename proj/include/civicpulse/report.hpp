#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "civicpulse/jsonl.hpp"
#include "civicpulse/spatiotemporal.hpp"
#include "civicpulse/stats.hpp"
#include "civicpulse/topics.hpp"

namespace civicpulse {

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::int64_t count = 0;

    bool operator==(const HistogramBin& other) const = default;
};

/// Uniform bins over [-1, 1], right-open except the last bin, which is
/// closed at 1. bin_width must be in (0, 2] and divide the interval evenly
/// (ConfigError otherwise); a compound outside [-1, 1] is a PipelineError.
std::vector<HistogramBin> build_histogram(const std::vector<double>& compounds,
                                          double bin_width);

struct ManifestInput {
    std::string path;
    std::string sha256;
};

struct ManifestInfo {
    Json config_snapshot;  // the effective configuration for the run
    std::string config_sha256;
    std::vector<ManifestInput> inputs;
    std::uint64_t seed = 0;
    std::string tool_version;
};

struct ReportInputs {
    DistributionTable distribution;
    std::vector<TopicSentimentRow> topics;
    std::map<int, std::string> theme_labels;  // optional display names per topic
    SpatioTemporalResult spatiotemporal;
    std::vector<HistogramBin> histogram;
    ManifestInfo manifest;
};

/// Writes the report bundle into out_dir with fixed file names:
/// distribution.csv, topics.csv, spatial.csv, temporal.csv, histogram.csv,
/// points.geojson, manifest.json. Output is byte-deterministic for
/// identical inputs. Throws PipelineError naming the path on write failure.
void emit_report(const ReportInputs& inputs, const std::string& out_dir);

}  // namespace civicpulse
