#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "civicpulse/ingest.hpp"
#include "civicpulse/jsonl.hpp"
#include "civicpulse/spatiotemporal.hpp"
#include "civicpulse/types.hpp"

namespace civicpulse {

struct InputSpec {
    std::string path;      // as written in the config
    std::string resolved;  // absolute, relative paths anchored at the config file
    InputFormat format = InputFormat::Jsonl;
};

struct LdaConfig {
    std::vector<int> k_candidates = {4, 5, 6, 7, 8};
    std::optional<double> alpha;  // unset -> 50/K per candidate
    double beta = 0.01;
    int iters = 1000;
    std::uint64_t seed = 0;  // mandatory in the config file, no default
    int min_df = 2;
    double max_df_frac = 0.95;
    int top_n = 10;
};

/// The validated run configuration. Relative paths in the file resolve
/// against the config file's directory.
struct PipelineConfig {
    std::vector<InputSpec> inputs;
    KeywordSet keywords;
    std::optional<BoundingBox> bbox;

    std::string lexicon_path;
    std::string stopwords_path;
    std::string lemma_table_path;
    std::optional<std::string> zones_path;
    std::optional<LocationType> default_location_type;

    LdaConfig lda;
    int tz_offset_minutes = -300;
    double histogram_bin_width = 0.1;
    std::map<int, std::string> theme_labels;
    std::string out_dir = "out";

    Json snapshot;              // effective config (defaults applied), paths as written
    std::string config_sha256;  // hash of the config file bytes
};

/// Parses and validates a config file. All schema violations are collected
/// and reported together in one ConfigError, one message per line, each
/// naming the offending field.
PipelineConfig load_config(const std::string& path);

enum class Stage { Ingest, Score, Topics, Spatiotemporal, Stats, Report };

std::string to_string(Stage stage);
std::optional<Stage> stage_from_string(std::string_view name);

/// Runs one stage, reading upstream artifacts from <out_dir>/artifacts and
/// writing this stage's artifacts there (the report stage writes the bundle
/// into <out_dir> itself). A missing upstream artifact raises PipelineError
/// ("missing upstream artifact ...").
void run_stage(const PipelineConfig& config, Stage stage, int threads);

/// The six stages in dependency order; equivalent to running them one by one.
void run_all(const PipelineConfig& config, int threads);

}  // namespace civicpulse
