#include "civicpulse/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "civicpulse/csv.hpp"
#include "civicpulse/errors.hpp"
#include "civicpulse/timeutil.hpp"

namespace civicpulse {

namespace {

namespace fs = std::filesystem;

// Fixed-decimal rendering; "-0.000" collapses to "0.000" so that rounding
// never manufactures a signed zero in the tables.
std::string fixed_decimal(double value, int places) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, value);
    std::string out = buf;
    if (out.size() > 1 && out.front() == '-' &&
        out.find_first_not_of("0.", 1) == std::string::npos) {
        out.erase(0, 1);
    }
    return out;
}

// Shortest practical rendering for bin edges: trims the artifacts of
// repeated width addition (e.g. -0.7000000000000002 -> "-0.7").
std::string edge_value(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    std::string out = buf;
    if (out == "-0") out = "0";
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) throw PipelineError("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) throw PipelineError("cannot write " + path.string());
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::ostringstream out;
    write_csv_row(out, fields);
    return out.str();
}

std::string distribution_csv(const DistributionTable& table) {
    std::string out = csv_line({"group", "posts", "negative", "negative_pct", "neutral",
                                "neutral_pct", "positive", "positive_pct",
                                "mean_compound"});
    for (const DistributionRow& row : table.rows) {
        out += csv_line({row.group,
                         std::to_string(row.total()),
                         std::to_string(row.negative_count),
                         fixed_decimal(row.negative_pct(), 1),
                         std::to_string(row.neutral_count),
                         fixed_decimal(row.neutral_pct(), 1),
                         std::to_string(row.positive_count),
                         fixed_decimal(row.positive_pct(), 1),
                         fixed_decimal(row.mean_compound, 3)});
    }
    return out;
}

std::string topics_csv(const std::vector<TopicSentimentRow>& rows,
                       const std::map<int, std::string>& theme_labels) {
    std::string out = csv_line(
        {"topic_id", "theme", "top_keywords", "doc_count", "share_pct", "avg_compound"});
    for (const TopicSentimentRow& row : rows) {
        std::string keywords;
        for (const std::string& word : row.top_keywords) {
            if (!keywords.empty()) keywords += ' ';
            keywords += word;
        }
        const auto label = theme_labels.find(row.topic_id);
        out += csv_line({std::to_string(row.topic_id),
                         label == theme_labels.end() ? std::string{} : label->second,
                         keywords,
                         std::to_string(row.doc_count),
                         fixed_decimal(row.share_pct, 1),
                         fixed_decimal(row.avg_compound, 3)});
    }
    return out;
}

std::string spatial_csv(const SpatioTemporalResult& result) {
    std::string out = csv_line({"location_type", "count", "mean_compound"});
    for (const auto& [type, stats] : result.by_location) {
        out += csv_line({to_string(type), std::to_string(stats.count),
                         fixed_decimal(stats.mean(), 3)});
    }
    return out;
}

std::string temporal_csv(const SpatioTemporalResult& result) {
    std::string out = csv_line({"weekday", "hour", "count", "mean_compound"});
    for (const auto& [key, stats] : result.by_weekday_hour) {
        out += csv_line({kWeekdayNames[key.first], std::to_string(key.second),
                         std::to_string(stats.count), fixed_decimal(stats.mean(), 3)});
    }
    return out;
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
    std::string out = csv_line({"bin_lower", "bin_upper", "count"});
    for (const HistogramBin& bin : bins) {
        out += csv_line({edge_value(bin.lower), edge_value(bin.upper),
                         std::to_string(bin.count)});
    }
    return out;
}

std::string manifest_json(const ManifestInfo& manifest) {
    // Plain (key-sorted) json gives a canonical, deterministic rendering.
    nlohmann::json doc;
    doc["config"] = manifest.config_snapshot;
    doc["config_sha256"] = manifest.config_sha256;
    nlohmann::json inputs = nlohmann::json::array();
    for (const ManifestInput& input : manifest.inputs) {
        inputs.push_back({{"path", input.path}, {"sha256", input.sha256}});
    }
    doc["inputs"] = std::move(inputs);
    doc["seed"] = manifest.seed;
    doc["tool"] = "civic-pulse";
    doc["tool_version"] = manifest.tool_version;
    return doc.dump(2) + "\n";
}

}  // namespace

std::vector<HistogramBin> build_histogram(const std::vector<double>& compounds,
                                          double bin_width) {
    if (!(bin_width > 0.0) || bin_width > 2.0) {
        throw ConfigError("histogram bin width must be in (0, 2], got " +
                          std::to_string(bin_width));
    }
    const double bins_exact = 2.0 / bin_width;
    const double rounded = std::round(bins_exact);
    if (std::fabs(bins_exact - rounded) > 1e-9) {
        throw ConfigError("histogram bin width must divide [-1, 1] evenly, got " +
                          std::to_string(bin_width));
    }
    const int num_bins = static_cast<int>(rounded);

    std::vector<HistogramBin> bins(static_cast<std::size_t>(num_bins));
    for (int i = 0; i < num_bins; ++i) {
        bins[static_cast<std::size_t>(i)].lower = -1.0 + i * bin_width;
        bins[static_cast<std::size_t>(i)].upper =
            (i + 1 == num_bins) ? 1.0 : -1.0 + (i + 1) * bin_width;
    }
    for (const double x : compounds) {
        if (!(x >= -1.0 && x <= 1.0)) {
            throw PipelineError("histogram: compound outside [-1, 1]: " +
                                std::to_string(x));
        }
        // Right-open bins; x == 1 falls past the end and joins the last bin.
        const int index = std::min(num_bins - 1,
                                   static_cast<int>(std::floor((x + 1.0) / bin_width)));
        ++bins[static_cast<std::size_t>(index)].count;
    }
    return bins;
}

void emit_report(const ReportInputs& inputs, const std::string& out_dir) {
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw PipelineError("cannot create " + dir.string() + ": " + ec.message());

    write_file(dir / "distribution.csv", distribution_csv(inputs.distribution));
    write_file(dir / "topics.csv", topics_csv(inputs.topics, inputs.theme_labels));
    write_file(dir / "spatial.csv", spatial_csv(inputs.spatiotemporal));
    write_file(dir / "temporal.csv", temporal_csv(inputs.spatiotemporal));
    write_file(dir / "histogram.csv", histogram_csv(inputs.histogram));
    write_file(dir / "points.geojson", to_geojson(inputs.spatiotemporal) + "\n");
    write_file(dir / "manifest.json", manifest_json(inputs.manifest));
}

}  // namespace civicpulse
