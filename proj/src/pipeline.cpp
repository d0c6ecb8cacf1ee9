#include "civicpulse/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "civicpulse/errors.hpp"
#include "civicpulse/log.hpp"
#include "civicpulse/preprocess.hpp"
#include "civicpulse/report.hpp"
#include "civicpulse/sentiment.hpp"
#include "civicpulse/sha256.hpp"
#include "civicpulse/stats.hpp"
#include "civicpulse/topics.hpp"
#include "civicpulse/version.hpp"

namespace civicpulse {

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Config parsing. Violations are collected, not thrown one at a time, so a
// bad config reports every problem in a single pass.
// ---------------------------------------------------------------------------

struct Validator {
    std::vector<std::string> errors;

    void fail(const std::string& field, const std::string& msg) {
        errors.push_back(field + ": " + msg);
    }
};

bool is_integer(const Json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

void check_known_keys(Validator& v, const Json& obj, const std::string& where,
                      std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end()) {
            v.fail(where.empty() ? key : where + "." + key, "unknown field");
        }
    }
}

// Returns the field when present with the right JSON type, else records an
// error (or stays silent for absent optional fields).
const Json* expect(Validator& v, const Json& obj, const std::string& where,
                   const char* key, const char* type_name, bool required,
                   bool (*pred)(const Json&)) {
    const std::string field = where.empty() ? key : where + "." + key;
    if (!obj.contains(key)) {
        if (required) v.fail(field, std::string("required ") + type_name + " is missing");
        return nullptr;
    }
    const Json& value = obj.at(key);
    if (!pred(value)) {
        v.fail(field, std::string("expected ") + type_name);
        return nullptr;
    }
    return &value;
}

const Json* expect_string(Validator& v, const Json& obj, const std::string& where,
                          const char* key, bool required) {
    return expect(v, obj, where, key, "string", required,
                  [](const Json& j) { return j.is_string(); });
}

const Json* expect_object(Validator& v, const Json& obj, const std::string& where,
                          const char* key, bool required) {
    return expect(v, obj, where, key, "object", required,
                  [](const Json& j) { return j.is_object(); });
}

const Json* expect_array(Validator& v, const Json& obj, const std::string& where,
                         const char* key, bool required) {
    return expect(v, obj, where, key, "array", required,
                  [](const Json& j) { return j.is_array(); });
}

const Json* expect_number(Validator& v, const Json& obj, const std::string& where,
                          const char* key, bool required) {
    return expect(v, obj, where, key, "number", required,
                  [](const Json& j) { return j.is_number(); });
}

const Json* expect_int(Validator& v, const Json& obj, const std::string& where,
                       const char* key, bool required) {
    return expect(v, obj, where, key, "integer", required, &is_integer);
}

std::string resolve_against(const fs::path& base_dir, const std::string& raw) {
    fs::path p(raw);
    if (!p.is_absolute()) p = base_dir / p;
    return p.lexically_normal().string();
}

// Resolves a path field against the config directory and checks the file
// exists. Returns the resolved path, empty on failure.
std::string path_field(Validator& v, const fs::path& base_dir, const std::string& field,
                       const std::string& raw) {
    if (raw.empty()) {
        v.fail(field, "path must not be empty");
        return {};
    }
    std::string resolved = resolve_against(base_dir, raw);
    if (!fs::exists(resolved)) {
        v.fail(field, "file not found: " + raw);
        return {};
    }
    return resolved;
}

Json effective_snapshot(const PipelineConfig& cfg) {
    Json snap;
    Json inputs = Json::array();
    for (const auto& in : cfg.inputs)
        inputs.push_back(Json{{"path", in.path}, {"format", to_string(in.format)}});
    snap["inputs"] = std::move(inputs);
    snap["keywords"] = cfg.keywords.phrases;
    if (cfg.bbox) {
        snap["bbox"] = Json{{"min_lat", cfg.bbox->min_lat},
                            {"min_lon", cfg.bbox->min_lon},
                            {"max_lat", cfg.bbox->max_lat},
                            {"max_lon", cfg.bbox->max_lon}};
    }
    Json data;
    data["lexicon"] = cfg.lexicon_path;
    data["stopwords"] = cfg.stopwords_path;
    data["lemma_table"] = cfg.lemma_table_path;
    if (cfg.zones_path) data["zones"] = *cfg.zones_path;
    snap["data"] = std::move(data);
    if (cfg.default_location_type)
        snap["default_location_type"] = to_string(*cfg.default_location_type);
    Json lda;
    lda["k_candidates"] = cfg.lda.k_candidates;
    lda["alpha"] = cfg.lda.alpha ? Json(*cfg.lda.alpha) : Json(nullptr);
    lda["beta"] = cfg.lda.beta;
    lda["iters"] = cfg.lda.iters;
    lda["seed"] = cfg.lda.seed;
    lda["min_df"] = cfg.lda.min_df;
    lda["max_df_frac"] = cfg.lda.max_df_frac;
    lda["top_n"] = cfg.lda.top_n;
    snap["lda"] = std::move(lda);
    snap["thresholds"] = Json{{"negative", -0.05}, {"positive", 0.05}};
    snap["tz_offset_minutes"] = cfg.tz_offset_minutes;
    snap["histogram_bin_width"] = cfg.histogram_bin_width;
    Json labels = Json::object();
    for (const auto& [topic, name] : cfg.theme_labels) labels[std::to_string(topic)] = name;
    snap["theme_labels"] = std::move(labels);
    snap["out_dir"] = cfg.out_dir;
    return snap;
}

// ---------------------------------------------------------------------------
// Artifact paths and low-level I/O.
// ---------------------------------------------------------------------------

fs::path artifacts_dir(const PipelineConfig& cfg) {
    return fs::path(cfg.out_dir) / "artifacts";
}

void require_artifact(const fs::path& p) {
    if (!fs::exists(p))
        throw PipelineError("missing upstream artifact " + p.string() +
                            "; run the producing stage first");
}

void write_text_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw PipelineError("cannot write " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw PipelineError("cannot write " + p.string());
}

Json parse_json_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw PipelineError("cannot open artifact " + p.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw PipelineError("artifact " + p.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Artifact record formats.
// ---------------------------------------------------------------------------

Json doc_to_json(const CleanDoc& d) {
    Json j;
    j["id"] = d.post_id;
    j["platform"] = to_string(d.platform);
    j["text"] = d.raw_text;
    j["tokens"] = d.tokens;
    j["created_at"] = d.created_at;
    if (d.geo) {
        j["lat"] = d.geo->lat;
        j["lon"] = d.geo->lon;
    }
    return j;
}

[[noreturn]] void artifact_error(const fs::path& p, std::size_t line, const std::string& msg) {
    throw PipelineError("artifact " + p.string() + " line " + std::to_string(line) + ": " + msg);
}

CleanDoc doc_from_json(const Json& j, const fs::path& src, std::size_t line) {
    try {
        CleanDoc d;
        d.post_id = j.at("id").get<std::string>();
        const auto platform = platform_from_string(j.at("platform").get<std::string>());
        if (!platform) artifact_error(src, line, "unknown platform");
        d.platform = *platform;
        d.raw_text = j.at("text").get<std::string>();
        d.tokens = j.at("tokens").get<std::vector<std::string>>();
        d.created_at = j.at("created_at").get<std::int64_t>();
        if (j.contains("lat") != j.contains("lon"))
            artifact_error(src, line, "lat and lon must appear together");
        if (j.contains("lat"))
            d.geo = GeoPoint{j.at("lat").get<double>(), j.at("lon").get<double>()};
        return d;
    } catch (const nlohmann::json::exception& e) {
        artifact_error(src, line, e.what());
    }
}

struct ScoredArtifact {
    std::vector<std::string> ids;              // file order
    std::vector<Platform> platforms;           // parallel to ids
    std::vector<SentimentResult> results;      // parallel to ids
    std::unordered_map<std::string, SentimentResult> by_id;
};

ScoredArtifact read_scored_artifact(const PipelineConfig& cfg) {
    const fs::path p = artifacts_dir(cfg) / "scored.jsonl";
    require_artifact(p);
    ScoredArtifact scored;
    for_each_jsonl_line(p.string(), [&](std::size_t line, const std::string& raw) {
        try {
            const Json j = Json::parse(raw);
            const auto platform = platform_from_string(j.at("platform").get<std::string>());
            if (!platform) artifact_error(p, line, "unknown platform");
            SentimentResult s;
            s.neg = j.at("neg").get<double>();
            s.neu = j.at("neu").get<double>();
            s.pos = j.at("pos").get<double>();
            s.compound = j.at("compound").get<double>();
            const auto label = label_from_string(j.at("label").get<std::string>());
            if (!label) artifact_error(p, line, "unknown label");
            s.label = *label;
            std::string id = j.at("id").get<std::string>();
            scored.by_id[id] = s;
            scored.ids.push_back(std::move(id));
            scored.platforms.push_back(*platform);
            scored.results.push_back(s);
        } catch (const nlohmann::json::exception& e) {
            artifact_error(p, line, e.what());
        }
    });
    return scored;
}

std::vector<CleanDoc> read_posts_artifact(const PipelineConfig& cfg) {
    const fs::path p = artifacts_dir(cfg) / "posts.jsonl";
    require_artifact(p);
    std::vector<CleanDoc> docs;
    for_each_jsonl_line(p.string(), [&](std::size_t line, const std::string& raw) {
        try {
            docs.push_back(doc_from_json(Json::parse(raw), p, line));
        } catch (const nlohmann::json::exception& e) {
            artifact_error(p, line, e.what());
        }
    });
    return docs;
}

Json bin_to_json(const BinStats& b) {
    return Json{{"count", b.count}, {"sum", b.sum.value()}};
}

BinStats bin_from_json(const Json& j) {
    BinStats b;
    b.count = j.at("count").get<std::int64_t>();
    b.sum.add(j.at("sum").get<double>());
    return b;
}

Json spatiotemporal_to_json(const SpatioTemporalResult& r) {
    Json j;
    j["total_docs"] = r.total_docs;
    j["geotagged_docs"] = r.geotagged_docs;
    j["unclassified_docs"] = r.unclassified_docs;
    Json by_location = Json::object();
    for (const auto& [type, bin] : r.by_location) by_location[to_string(type)] = bin_to_json(bin);
    j["by_location"] = std::move(by_location);
    Json by_hour = Json::object();
    for (const auto& [hour, bin] : r.by_hour) by_hour[std::to_string(hour)] = bin_to_json(bin);
    j["by_hour"] = std::move(by_hour);
    Json by_weekday = Json::object();
    for (const auto& [wd, bin] : r.by_weekday) by_weekday[std::to_string(wd)] = bin_to_json(bin);
    j["by_weekday"] = std::move(by_weekday);
    Json by_weekday_hour = Json::array();
    for (const auto& [key, bin] : r.by_weekday_hour) {
        Json cell = bin_to_json(bin);
        cell["weekday"] = key.first;
        cell["hour"] = key.second;
        by_weekday_hour.push_back(std::move(cell));
    }
    j["by_weekday_hour"] = std::move(by_weekday_hour);
    j["rush"] = bin_to_json(r.rush);
    j["non_rush"] = bin_to_json(r.non_rush);
    Json features = Json::array();
    for (const auto& f : r.features) {
        Json fj;
        fj["post_id"] = f.post_id;
        fj["lat"] = f.lat;
        fj["lon"] = f.lon;
        fj["compound"] = f.compound;
        fj["label"] = to_string(f.label);
        fj["topic_id"] = f.topic_id ? Json(*f.topic_id) : Json(nullptr);
        fj["local_hour"] = f.local_hour;
        features.push_back(std::move(fj));
    }
    j["features"] = std::move(features);
    return j;
}

SpatioTemporalResult spatiotemporal_from_json(const Json& j, const fs::path& src) {
    try {
        SpatioTemporalResult r;
        r.total_docs = j.at("total_docs").get<std::int64_t>();
        r.geotagged_docs = j.at("geotagged_docs").get<std::int64_t>();
        r.unclassified_docs = j.at("unclassified_docs").get<std::int64_t>();
        for (const auto& [name, bin] : j.at("by_location").items()) {
            const auto type = location_type_from_string(name);
            if (!type)
                throw PipelineError("artifact " + src.string() + ": unknown location type \"" +
                                    name + "\"");
            r.by_location[*type] = bin_from_json(bin);
        }
        for (const auto& [key, bin] : j.at("by_hour").items())
            r.by_hour[std::stoi(key)] = bin_from_json(bin);
        for (const auto& [key, bin] : j.at("by_weekday").items())
            r.by_weekday[std::stoi(key)] = bin_from_json(bin);
        for (const auto& cell : j.at("by_weekday_hour")) {
            const auto key = std::make_pair(cell.at("weekday").get<int>(),
                                            cell.at("hour").get<int>());
            r.by_weekday_hour[key] = bin_from_json(cell);
        }
        r.rush = bin_from_json(j.at("rush"));
        r.non_rush = bin_from_json(j.at("non_rush"));
        for (const auto& fj : j.at("features")) {
            PointFeature f;
            f.post_id = fj.at("post_id").get<std::string>();
            f.lat = fj.at("lat").get<double>();
            f.lon = fj.at("lon").get<double>();
            f.compound = fj.at("compound").get<double>();
            const auto label = label_from_string(fj.at("label").get<std::string>());
            if (!label)
                throw PipelineError("artifact " + src.string() + ": unknown label");
            f.label = *label;
            if (!fj.at("topic_id").is_null()) f.topic_id = fj.at("topic_id").get<int>();
            f.local_hour = fj.at("local_hour").get<int>();
            r.features.push_back(std::move(f));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw PipelineError("artifact " + src.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Stages.
// ---------------------------------------------------------------------------

void stage_ingest(const PipelineConfig& cfg) {
    std::vector<RawPost> all;
    Json rejects = Json::array();
    for (const auto& in : cfg.inputs) {
        LoadResult result = load_posts(in.resolved, in.format);
        for (const auto& rej : result.rejects) {
            rejects.push_back(Json{{"source", in.path},
                                   {"line", rej.line_number},
                                   {"reason", rej.reason}});
        }
        std::move(result.posts.begin(), result.posts.end(), std::back_inserter(all));
    }
    const std::size_t loaded = all.size();
    const auto relevant = filter_relevant(all, cfg.keywords, cfg.bbox);
    const auto cleaned = clean_corpus(relevant);

    const auto stopwords = Stopwords::load(cfg.stopwords_path);
    const auto lemmatizer = Lemmatizer::load(cfg.lemma_table_path);

    const fs::path dir = artifacts_dir(cfg);
    fs::create_directories(dir);
    {
        const fs::path p = dir / "posts.jsonl";
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw PipelineError("cannot write " + p.string());
        for (const auto& post : cleaned) {
            CleanDoc doc{post.id, post.platform, post.text,
                         normalize_for_topics(post.text, stopwords, lemmatizer),
                         post.created_at, post.geo};
            append_jsonl(out, doc_to_json(doc));
        }
        out.flush();
        if (!out) throw PipelineError("cannot write " + p.string());
    }
    {
        const fs::path p = dir / "rejects.jsonl";
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw PipelineError("cannot write " + p.string());
        for (const auto& rej : rejects) append_jsonl(out, rej);
        out.flush();
        if (!out) throw PipelineError("cannot write " + p.string());
    }
    log_info("ingest: " + std::to_string(loaded) + " posts loaded, " +
             std::to_string(relevant.size()) + " relevant, " + std::to_string(cleaned.size()) +
             " kept after cleaning, " + std::to_string(rejects.size()) + " records rejected");
}

void stage_score(const PipelineConfig& cfg) {
    const auto docs = read_posts_artifact(cfg);
    const auto lexicon = sentiment::load_lexicon(cfg.lexicon_path);
    const fs::path p = artifacts_dir(cfg) / "scored.jsonl";
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw PipelineError("cannot write " + p.string());
    for (const auto& doc : docs) {
        const SentimentResult s = sentiment::score_text(doc.raw_text, lexicon);
        Json j;
        j["id"] = doc.post_id;
        j["platform"] = to_string(doc.platform);
        j["neg"] = s.neg;
        j["neu"] = s.neu;
        j["pos"] = s.pos;
        j["compound"] = s.compound;
        j["label"] = to_string(s.label);
        append_jsonl(out, j);
    }
    out.flush();
    if (!out) throw PipelineError("cannot write " + p.string());
    log_info("score: " + std::to_string(docs.size()) + " docs scored");
}

void stage_topics(const PipelineConfig& cfg, int threads) {
    const auto docs = read_posts_artifact(cfg);
    const auto dtm = build_dtm(docs, cfg.lda.min_df, cfg.lda.max_df_frac);
    const TopicModel model =
        select_num_topics(dtm, cfg.lda.k_candidates, cfg.lda.alpha, cfg.lda.beta,
                          cfg.lda.iters, cfg.lda.seed, threads);
    write_text_file(artifacts_dir(cfg) / "model.json", model_to_json(model).dump(2) + "\n");
    std::ostringstream msg;
    msg << "topics: selected K=" << model.K << " (coherence " << model.coherence << ") over "
        << dtm.num_docs() << " docs, vocabulary " << dtm.vocab_size();
    log_info(msg.str());
}

void stage_spatiotemporal(const PipelineConfig& cfg) {
    const auto docs = read_posts_artifact(cfg);
    const auto scored = read_scored_artifact(cfg);
    const fs::path model_path = artifacts_dir(cfg) / "model.json";
    require_artifact(model_path);
    const TopicModel model = model_from_json(parse_json_file(model_path));

    const auto dominant = dominant_topics(model);
    std::unordered_map<std::string, int> topic_of;
    for (std::size_t i = 0; i < model.doc_ids.size(); ++i)
        topic_of[model.doc_ids[i]] = dominant[i];

    ZoneConfig zones;
    if (cfg.zones_path) zones = load_zones(*cfg.zones_path);
    zones.default_type = cfg.default_location_type;

    const SpatioTemporalResult result =
        aggregate_bins(docs, scored.by_id, topic_of, zones, cfg.tz_offset_minutes);
    write_text_file(artifacts_dir(cfg) / "spatiotemporal.json",
                    spatiotemporal_to_json(result).dump(2) + "\n");
    log_info("spatiotemporal: " + std::to_string(result.total_docs) + " docs binned, " +
             std::to_string(result.geotagged_docs) + " geotagged");
}

void stage_stats(const PipelineConfig& cfg) {
    const auto scored = read_scored_artifact(cfg);
    std::vector<std::pair<Platform, SentimentResult>> labeled;
    std::vector<double> compounds;
    labeled.reserve(scored.ids.size());
    compounds.reserve(scored.ids.size());
    for (std::size_t i = 0; i < scored.ids.size(); ++i) {
        labeled.emplace_back(scored.platforms[i], scored.results[i]);
        compounds.push_back(scored.results[i].compound);
    }
    const DistributionTable table = distribution_table(labeled);
    const TTestResult tt = one_sample_ttest(compounds, 0.0);

    Json j;
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        rows.push_back(Json{{"group", row.group},
                            {"negative", row.negative_count},
                            {"neutral", row.neutral_count},
                            {"positive", row.positive_count},
                            {"mean_compound", row.mean_compound}});
    }
    j["distribution"] = std::move(rows);
    j["ttest"] = Json{{"t", tt.t},          {"df", tt.df},   {"p", tt.p},
                      {"one_sided_p", tt.one_sided_p},       {"n", tt.n},
                      {"mean", tt.mean},    {"sd", tt.sd}};
    write_text_file(artifacts_dir(cfg) / "stats.json", j.dump(2) + "\n");
    log_info("stats: t=" + std::to_string(tt.t) + " over n=" + std::to_string(tt.n));
}

void stage_report(const PipelineConfig& cfg) {
    const fs::path dir = artifacts_dir(cfg);
    const fs::path model_path = dir / "model.json";
    const fs::path st_path = dir / "spatiotemporal.json";
    const fs::path stats_path = dir / "stats.json";
    require_artifact(model_path);
    require_artifact(st_path);
    require_artifact(stats_path);
    const auto scored = read_scored_artifact(cfg);

    ReportInputs inputs;
    try {
        const Json stats_json = parse_json_file(stats_path);
        for (const auto& row : stats_json.at("distribution")) {
            DistributionRow r;
            r.group = row.at("group").get<std::string>();
            r.negative_count = row.at("negative").get<std::int64_t>();
            r.neutral_count = row.at("neutral").get<std::int64_t>();
            r.positive_count = row.at("positive").get<std::int64_t>();
            r.mean_compound = row.at("mean_compound").get<double>();
            inputs.distribution.rows.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw PipelineError("artifact " + stats_path.string() + ": " + e.what());
    }

    const TopicModel model = model_from_json(parse_json_file(model_path));
    inputs.topics = topic_sentiment_table(model, scored.by_id);
    inputs.theme_labels = cfg.theme_labels;
    inputs.spatiotemporal = spatiotemporal_from_json(parse_json_file(st_path), st_path);

    std::vector<double> compounds;
    compounds.reserve(scored.results.size());
    for (const auto& s : scored.results) compounds.push_back(s.compound);
    inputs.histogram = build_histogram(compounds, cfg.histogram_bin_width);

    inputs.manifest.config_snapshot = cfg.snapshot;
    inputs.manifest.config_sha256 = cfg.config_sha256;
    for (const auto& in : cfg.inputs)
        inputs.manifest.inputs.push_back(ManifestInput{in.path, sha256_file_hex(in.resolved)});
    inputs.manifest.seed = cfg.lda.seed;
    inputs.manifest.tool_version = kToolVersion;

    emit_report(inputs, cfg.out_dir);
    log_info("report: bundle written to " + cfg.out_dir);
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config " + path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string raw = buf.str();

    Json root;
    try {
        root = Json::parse(raw);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + ": invalid JSON: " + std::string(e.what()));
    }

    Validator v;
    PipelineConfig cfg;
    if (!root.is_object()) {
        throw ConfigError("config " + path + ": top level must be a JSON object");
    }
    const fs::path base_dir = fs::absolute(fs::path(path)).parent_path();

    check_known_keys(v, root, "",
                     {"inputs", "keywords", "bbox", "data", "default_location_type", "lda",
                      "thresholds", "tz_offset_minutes", "histogram_bin_width", "theme_labels",
                      "out_dir"});

    if (const Json* inputs = expect_array(v, root, "", "inputs", true)) {
        if (inputs->empty()) v.fail("inputs", "at least one input file is required");
        for (std::size_t i = 0; i < inputs->size(); ++i) {
            const std::string where = "inputs[" + std::to_string(i) + "]";
            const Json& entry = (*inputs)[i];
            if (!entry.is_object()) {
                v.fail(where, "expected object with path and format");
                continue;
            }
            check_known_keys(v, entry, where, {"path", "format"});
            InputSpec spec;
            if (const Json* p = expect_string(v, entry, where, "path", true)) {
                spec.path = p->get<std::string>();
                spec.resolved = path_field(v, base_dir, where + ".path", spec.path);
            }
            if (const Json* f = expect_string(v, entry, where, "format", true)) {
                const auto format = input_format_from_string(f->get<std::string>());
                if (!format)
                    v.fail(where + ".format", "expected \"jsonl\" or \"csv\"");
                else
                    spec.format = *format;
            }
            cfg.inputs.push_back(std::move(spec));
        }
    }

    if (const Json* keywords = expect_array(v, root, "", "keywords", true)) {
        for (std::size_t i = 0; i < keywords->size(); ++i) {
            if (!(*keywords)[i].is_string()) {
                v.fail("keywords[" + std::to_string(i) + "]", "expected string");
                continue;
            }
            cfg.keywords.phrases.push_back((*keywords)[i].get<std::string>());
        }
        try {
            cfg.keywords.validate();
        } catch (const ConfigError& e) {
            v.fail("keywords", e.what());
        }
    }

    if (const Json* bbox = expect_object(v, root, "", "bbox", false)) {
        check_known_keys(v, *bbox, "bbox", {"min_lat", "min_lon", "max_lat", "max_lon"});
        BoundingBox box;
        bool complete = true;
        const auto coord = [&](const char* key, double& slot) {
            if (const Json* c = expect_number(v, *bbox, "bbox", key, true))
                slot = c->get<double>();
            else
                complete = false;
        };
        coord("min_lat", box.min_lat);
        coord("min_lon", box.min_lon);
        coord("max_lat", box.max_lat);
        coord("max_lon", box.max_lon);
        if (complete) {
            try {
                box.validate();
                cfg.bbox = box;
            } catch (const ConfigError& e) {
                v.fail("bbox", e.what());
            }
        }
    }

    if (const Json* data = expect_object(v, root, "", "data", true)) {
        check_known_keys(v, *data, "data", {"lexicon", "stopwords", "lemma_table", "zones"});
        if (const Json* p = expect_string(v, *data, "data", "lexicon", true))
            cfg.lexicon_path = path_field(v, base_dir, "data.lexicon", p->get<std::string>());
        if (const Json* p = expect_string(v, *data, "data", "stopwords", true))
            cfg.stopwords_path = path_field(v, base_dir, "data.stopwords", p->get<std::string>());
        if (const Json* p = expect_string(v, *data, "data", "lemma_table", true))
            cfg.lemma_table_path =
                path_field(v, base_dir, "data.lemma_table", p->get<std::string>());
        if (const Json* p = expect_string(v, *data, "data", "zones", false)) {
            const std::string resolved =
                path_field(v, base_dir, "data.zones", p->get<std::string>());
            if (!resolved.empty()) cfg.zones_path = resolved;
        }
    }

    if (const Json* dlt = expect_string(v, root, "", "default_location_type", false)) {
        const auto type = location_type_from_string(dlt->get<std::string>());
        if (!type)
            v.fail("default_location_type",
                   "unknown location type \"" + dlt->get<std::string>() + "\"");
        else
            cfg.default_location_type = type;
    }

    if (const Json* lda = expect_object(v, root, "", "lda", true)) {
        check_known_keys(v, *lda, "lda",
                         {"k_candidates", "alpha", "beta", "iters", "seed", "min_df",
                          "max_df_frac", "top_n"});
        if (const Json* ks = expect_array(v, *lda, "lda", "k_candidates", false)) {
            std::vector<int> candidates;
            bool ok = true;
            for (std::size_t i = 0; i < ks->size(); ++i) {
                const std::string where = "lda.k_candidates[" + std::to_string(i) + "]";
                if (!is_integer((*ks)[i])) {
                    v.fail(where, "expected integer");
                    ok = false;
                    continue;
                }
                const int k = (*ks)[i].get<int>();
                if (k < 2) {
                    v.fail(where, "topic counts must be >= 2");
                    ok = false;
                    continue;
                }
                if (std::find(candidates.begin(), candidates.end(), k) != candidates.end()) {
                    v.fail(where, "duplicate candidate " + std::to_string(k));
                    ok = false;
                    continue;
                }
                candidates.push_back(k);
            }
            if (ok && candidates.empty()) v.fail("lda.k_candidates", "must not be empty");
            if (ok && !candidates.empty()) cfg.lda.k_candidates = std::move(candidates);
        }
        if (lda->contains("alpha") && !lda->at("alpha").is_null()) {
            if (const Json* a = expect_number(v, *lda, "lda", "alpha", false)) {
                const double alpha = a->get<double>();
                if (!(alpha > 0.0))
                    v.fail("lda.alpha", "must be positive (or null for the 50/K default)");
                else
                    cfg.lda.alpha = alpha;
            }
        }
        if (const Json* b = expect_number(v, *lda, "lda", "beta", false)) {
            const double beta = b->get<double>();
            if (!(beta > 0.0))
                v.fail("lda.beta", "must be positive");
            else
                cfg.lda.beta = beta;
        }
        if (const Json* it = expect_int(v, *lda, "lda", "iters", false)) {
            const int iters = it->get<int>();
            if (iters < 1)
                v.fail("lda.iters", "must be >= 1");
            else
                cfg.lda.iters = iters;
        }
        if (const Json* seed = expect(v, *lda, "lda", "seed",
                                      "non-negative integer (mandatory, no default)", true,
                                      &is_integer)) {
            if (seed->is_number_integer() && seed->get<std::int64_t>() < 0)
                v.fail("lda.seed", "must be non-negative");
            else
                cfg.lda.seed = seed->get<std::uint64_t>();
        }
        if (const Json* md = expect_int(v, *lda, "lda", "min_df", false)) {
            const int min_df = md->get<int>();
            if (min_df < 1)
                v.fail("lda.min_df", "must be >= 1");
            else
                cfg.lda.min_df = min_df;
        }
        if (const Json* mf = expect_number(v, *lda, "lda", "max_df_frac", false)) {
            const double frac = mf->get<double>();
            if (!(frac > 0.0) || frac > 1.0)
                v.fail("lda.max_df_frac", "must be in (0, 1]");
            else
                cfg.lda.max_df_frac = frac;
        }
        if (const Json* tn = expect_int(v, *lda, "lda", "top_n", false)) {
            const int top_n = tn->get<int>();
            if (top_n < 2)
                v.fail("lda.top_n", "must be >= 2");
            else
                cfg.lda.top_n = top_n;
        }
    }

    if (const Json* thresholds = expect_object(v, root, "", "thresholds", false)) {
        check_known_keys(v, *thresholds, "thresholds", {"negative", "positive"});
        if (const Json* neg = expect_number(v, *thresholds, "thresholds", "negative", true)) {
            if (std::fabs(neg->get<double>() - (-0.05)) > 1e-12)
                v.fail("thresholds.negative", "classification thresholds are fixed at -0.05/0.05");
        }
        if (const Json* pos = expect_number(v, *thresholds, "thresholds", "positive", true)) {
            if (std::fabs(pos->get<double>() - 0.05) > 1e-12)
                v.fail("thresholds.positive", "classification thresholds are fixed at -0.05/0.05");
        }
    }

    if (const Json* tz = expect_int(v, root, "", "tz_offset_minutes", false)) {
        const int minutes = tz->get<int>();
        if (minutes < -840 || minutes > 840)
            v.fail("tz_offset_minutes", "must be within +/-840 minutes");
        else
            cfg.tz_offset_minutes = minutes;
    }

    if (const Json* width = expect_number(v, root, "", "histogram_bin_width", false)) {
        try {
            build_histogram({}, width->get<double>());
            cfg.histogram_bin_width = width->get<double>();
        } catch (const ConfigError& e) {
            v.fail("histogram_bin_width", e.what());
        }
    }

    if (const Json* labels = expect_object(v, root, "", "theme_labels", false)) {
        for (const auto& [key, value] : labels->items()) {
            const std::string where = "theme_labels[\"" + key + "\"]";
            std::size_t consumed = 0;
            int topic = -1;
            try {
                topic = std::stoi(key, &consumed);
            } catch (const std::exception&) {
                consumed = 0;
            }
            if (consumed != key.size() || topic < 0) {
                v.fail(where, "key must be a non-negative topic id");
                continue;
            }
            if (!value.is_string() || value.get<std::string>().empty()) {
                v.fail(where, "expected non-empty string");
                continue;
            }
            cfg.theme_labels[topic] = value.get<std::string>();
        }
    }

    if (const Json* out = expect_string(v, root, "", "out_dir", false)) {
        if (out->get<std::string>().empty())
            v.fail("out_dir", "must not be empty");
        else
            cfg.out_dir = out->get<std::string>();
    }

    if (!v.errors.empty()) {
        std::string msg = "config " + path + ": " + std::to_string(v.errors.size()) +
                          " problem(s)";
        for (const auto& e : v.errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }

    cfg.snapshot = effective_snapshot(cfg);
    cfg.config_sha256 = sha256_hex(raw);
    return cfg;
}

std::string to_string(Stage stage) {
    switch (stage) {
        case Stage::Ingest: return "ingest";
        case Stage::Score: return "score";
        case Stage::Topics: return "topics";
        case Stage::Spatiotemporal: return "spatiotemporal";
        case Stage::Stats: return "stats";
        case Stage::Report: return "report";
    }
    return "unknown";
}

std::optional<Stage> stage_from_string(std::string_view name) {
    if (name == "ingest") return Stage::Ingest;
    if (name == "score") return Stage::Score;
    if (name == "topics") return Stage::Topics;
    if (name == "spatiotemporal") return Stage::Spatiotemporal;
    if (name == "stats") return Stage::Stats;
    if (name == "report") return Stage::Report;
    return std::nullopt;
}

void run_stage(const PipelineConfig& config, Stage stage, int threads) {
    switch (stage) {
        case Stage::Ingest: stage_ingest(config); return;
        case Stage::Score: stage_score(config); return;
        case Stage::Topics: stage_topics(config, threads); return;
        case Stage::Spatiotemporal: stage_spatiotemporal(config); return;
        case Stage::Stats: stage_stats(config); return;
        case Stage::Report: stage_report(config); return;
    }
}

void run_all(const PipelineConfig& config, int threads) {
    for (const Stage stage : {Stage::Ingest, Stage::Score, Stage::Topics,
                              Stage::Spatiotemporal, Stage::Stats, Stage::Report}) {
        run_stage(config, stage, threads);
    }
}

}  // namespace civicpulse
