// Acceptance gate: runs the nine release criteria and prints one
// [PASS]/[FAIL] line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "civicpulse/errors.hpp"
#include "civicpulse/ingest.hpp"
#include "civicpulse/pipeline.hpp"
#include "civicpulse/sentiment.hpp"
#include "civicpulse/spatiotemporal.hpp"
#include "civicpulse/stats.hpp"
#include "civicpulse/topics.hpp"
#include "support/synthetic.hpp"

using namespace civicpulse;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const char* kFixtureDir = CP_SOURCE_DIR "/tests/fixtures";
const char* kGoldenDir = CP_SOURCE_DIR "/tests/golden/bundle";
const char* kLexicon = CP_SOURCE_DIR "/data/vader_lexicon.txt";

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    bool ok = true;
    std::string first_failure;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            first_failure = what;
        }
    }
};

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 3) {
    std::ostringstream out;
    out.precision(digits);
    out << std::fixed << v;
    return out.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw PipelineError("cannot open " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

// --- 1. quoted-score parity ------------------------------------------------

Outcome criterion1() {
    const auto lexicon = sentiment::load_lexicon(kLexicon);
    const auto start = Clock::now();
    const auto negative = sentiment::score_text(
        "Avoid exit 374 if possible - major accident causing delays", lexicon);
    const auto positive = sentiment::score_text(
        "SmartTrips Knoxville promoting bike sharing to reduce Knoxville traffic congestion",
        lexicon);
    const double elapsed = ms_since(start);

    Check c;
    c.expect(std::fabs(negative.compound - (-0.680)) <= 0.005,
             "negative sentence scored " + fmt(negative.compound));
    c.expect(std::fabs(positive.compound - 0.649) <= 0.005,
             "positive sentence scored " + fmt(positive.compound));
    c.expect(elapsed < 1000.0, "scoring took " + fmt(elapsed) + " ms");
    if (!c.ok) return {false, c.first_failure};
    return {true, "compound " + fmt(negative.compound) + " / " + fmt(positive.compound) +
                      " within 0.005 (" + fmt(elapsed) + " ms)"};
}

// --- 2. differential fixture -----------------------------------------------

Outcome criterion2() {
    const auto lexicon = sentiment::load_lexicon(kLexicon);
    std::ifstream in(fs::path(kFixtureDir) / "vader_differential.tsv");
    if (!in) return {false, "fixture vader_differential.tsv missing"};
    std::string line;
    std::getline(in, line);  // header
    int total = 0;
    int agree = 0;
    double worst = 0.0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_tabs(line);
        if (cells.size() != 5) return {false, "malformed fixture row"};
        const double expected = std::stod(cells[4]);
        const double got = sentiment::score_text(cells[0], lexicon).compound;
        const double diff = std::fabs(got - expected);
        worst = std::max(worst, diff);
        ++total;
        if (diff <= 0.001) ++agree;
    }
    Check c;
    c.expect(total == 300, "expected 300 sentences, found " + std::to_string(total));
    c.expect(agree >= (total * 98 + 99) / 100,
             "only " + std::to_string(agree) + "/" + std::to_string(total) + " within 0.001");
    if (!c.ok) return {false, c.first_failure};
    return {true, std::to_string(agree) + "/300 sentences within 0.001 (max diff " +
                      fmt(worst, 6) + ")"};
}

// --- 3. sentiment property fuzz --------------------------------------------

Outcome criterion3() {
    const auto lexicon = sentiment::load_lexicon(kLexicon);
    const std::vector<std::string> pool = {
        "good",  "bad",    "terrible", "great",  "awful", "love", "hate",  "not",
        "never", "very",   "so",       "this",   "but",   "at",   "least", "kind",
        "of",    "GOOD",   "BAD",      "!",      "!!",    "!!!",  "?",     "??",
        ",",     ":)",     ":(",       "sort",   "traffic", "x9",  "zzqz", "happy",
        "sad",   "barely", "extremely", "friend", "no",    "nor",  "n't",   "",
    };
    std::mt19937_64 rng(9001);
    const auto start = Clock::now();

    Check c;
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const int len = static_cast<int>(rng() % 26);
        std::string text;
        for (int k = 0; k < len; ++k) {
            if (k > 0) text += ' ';
            text += pool[rng() % pool.size()];
        }
        const SentimentResult r = sentiment::score_text(text, lexicon);
        c.expect(std::fabs(r.neg + r.neu + r.pos - 1.0) <= 1e-6,
                 "proportions sum " + fmt(r.neg + r.neu + r.pos, 9) + " for \"" + text + "\"");
        c.expect(r.compound >= -1.0 && r.compound <= 1.0,
                 "compound out of range for \"" + text + "\"");
        c.expect(r.label == sentiment::classify(r.compound), "label disagrees with classify");
        ++checked;
        if (!c.ok) break;
    }
    // Threshold exactness at the classification boundaries.
    c.expect(sentiment::classify(-0.05) == Label::Negative, "classify(-0.05) != Negative");
    c.expect(sentiment::classify(0.05) == Label::Positive, "classify(0.05) != Positive");
    c.expect(sentiment::classify(std::nextafter(-0.05, 0.0)) == Label::Neutral,
             "classify(nextafter(-0.05, 0)) != Neutral");
    c.expect(sentiment::classify(std::nextafter(0.05, 0.0)) == Label::Neutral,
             "classify(nextafter(0.05, 0)) != Neutral");
    c.expect(sentiment::classify(0.0) == Label::Neutral, "classify(0) != Neutral");

    const double elapsed = ms_since(start);
    c.expect(elapsed < 10000.0, "fuzzing took " + fmt(elapsed) + " ms");
    if (!c.ok) return {false, c.first_failure};
    return {true, std::to_string(checked) + " strings: simplex within 1e-6, compound in [-1,1], " +
                      "boundaries exact at -0.05/0.05 (" + fmt(elapsed) + " ms)"};
}

// --- 4. topic recovery ------------------------------------------------------

Outcome criterion4() {
    const auto start = Clock::now();
    int pure = 0;
    int picked = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto corpus = testsupport::make_synthetic_corpus(200, 3, 20, 15, 30, 9000 + seed);
        const DocTermMatrix dtm = build_dtm(corpus.docs, 1, 1.0);
        const TopicModel model = fit_lda(dtm, 3, 50.0 / 3.0, 0.01, 300, 4242 + seed);
        const double purity =
            testsupport::best_matching_purity(dominant_topics(model), corpus.labels, 3);
        if (purity >= 0.9) ++pure;
        const TopicModel best =
            select_num_topics(dtm, {2, 3, 6}, std::nullopt, 0.01, 300, 8800 + seed * 17, 3);
        if (best.K == 3) ++picked;
    }
    const double elapsed = ms_since(start);

    Check c;
    c.expect(pure >= 4, "purity >= 0.9 on only " + std::to_string(pure) + "/5 seeds");
    c.expect(picked >= 4, "K=3 selected on only " + std::to_string(picked) + "/5 seeds");
    c.expect(elapsed < 60000.0, "took " + fmt(elapsed) + " ms");
    if (!c.ok) return {false, c.first_failure};
    return {true, "purity >= 0.9 on " + std::to_string(pure) + "/5 seeds, K=3 picked on " +
                      std::to_string(picked) + "/5 (" + fmt(elapsed) + " ms)"};
}

// --- 5. sampler invariants ---------------------------------------------------

Outcome criterion5() {
    const auto corpus = testsupport::make_synthetic_corpus(200, 3, 20, 15, 30, 321);
    const DocTermMatrix dtm = build_dtm(corpus.docs, 1, 1.0);
    TopicModel model;
    try {
        // validate_every_sweep re-asserts Gibbs count conservation after
        // every sweep; a violation throws.
        model = fit_lda(dtm, 3, 50.0 / 3.0, 0.01, 60, 654321, /*validate_every_sweep=*/true);
    } catch (const std::exception& e) {
        return {false, std::string("conservation violated: ") + e.what()};
    }
    Check c;
    for (const auto& row : model.phi) {
        double sum = 0.0;
        for (double v : row) sum += v;
        c.expect(std::fabs(sum - 1.0) <= 1e-9, "phi row sums to " + fmt(sum, 12));
    }
    for (const auto& row : model.theta) {
        double sum = 0.0;
        for (double v : row) sum += v;
        c.expect(std::fabs(sum - 1.0) <= 1e-9, "theta row sums to " + fmt(sum, 12));
    }
    if (!c.ok) return {false, c.first_failure};
    return {true, "counts conserved across 60 validated sweeps; phi/theta rows sum to 1 +/- 1e-9"};
}

// --- 6. t-test oracle --------------------------------------------------------

Outcome criterion6() {
    std::ifstream in(fs::path(kFixtureDir) / "ttest_samples.tsv");
    if (!in) return {false, "fixture ttest_samples.tsv missing"};
    Check c;
    std::string line;
    int row = 0;
    int gaussian_rows = 0;
    double worst_t = 0.0;
    double worst_p = 0.0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_tabs(line);
        const int n = std::stoi(cells[0]);
        const double mu0 = std::stod(cells[1]);
        const double p_ref = std::stod(cells[3]);
        std::vector<double> samples;
        const auto hex = split_tabs(cells[7]);
        (void)hex;
        {
            std::istringstream ss(cells[7]);
            std::string tok;
            while (ss >> tok) samples.push_back(std::strtod(tok.c_str(), nullptr));
        }
        c.expect(static_cast<int>(samples.size()) == n, "row sample count mismatch");
        const TTestResult r = one_sample_ttest(samples, mu0);

        // Closed-form reference: two-pass mean/deviation in extended precision.
        long double mean = 0.0L;
        for (double x : samples) mean += x;
        mean /= static_cast<long double>(n);
        long double ssd = 0.0L;
        for (double x : samples) {
            const long double d = static_cast<long double>(x) - mean;
            ssd += d * d;
        }
        const long double sd = std::sqrt(ssd / static_cast<long double>(n - 1));
        const long double t_closed =
            (mean - static_cast<long double>(mu0)) / (sd / std::sqrt(static_cast<long double>(n)));

        const bool gaussian = row >= 3;  // first three rows are crafted cases
        if (gaussian) {
            ++gaussian_rows;
            const double dt = std::fabs(r.t - static_cast<double>(t_closed));
            const double dp = std::fabs(r.p - p_ref);
            worst_t = std::max(worst_t, dt);
            worst_p = std::max(worst_p, dp);
            c.expect(n >= 5 && n <= 500, "sample size out of [5,500]");
            c.expect(dt <= 1e-12, "t off closed form by " + fmt(dt, 16));
            c.expect(dp <= 1e-8, "p off reference by " + fmt(dp, 12));
        }
        ++row;
    }
    c.expect(gaussian_rows == 100,
             "expected 100 Gaussian rows, found " + std::to_string(gaussian_rows));

    const TTestResult hand = one_sample_ttest({1.0, 2.0, 3.0, 4.0, 5.0}, 0.0);
    c.expect(std::fabs(hand.t - 4.242640687119285) <= 1e-12,
             "hand case t = " + fmt(hand.t, 15));
    c.expect(hand.df == 4, "hand case df = " + std::to_string(hand.df));

    if (!c.ok) return {false, c.first_failure};
    return {true, "100 Gaussian samples: max |t - closed form| " + fmt(worst_t, 16) +
                      ", max |p - reference| " + fmt(worst_p, 12) + "; hand case t=4.2426 df=4"};
}

// --- 7. spatiotemporal shard-merge ------------------------------------------

Outcome criterion7() {
    const PipelineConfig cfg = load_config(std::string(kFixtureDir) + "/run_config.json");
    std::vector<RawPost> posts;
    for (const auto& input : cfg.inputs) {
        auto loaded = load_posts(input.resolved, input.format);
        std::move(loaded.posts.begin(), loaded.posts.end(), std::back_inserter(posts));
    }
    const auto kept = clean_corpus(filter_relevant(posts, cfg.keywords, cfg.bbox));

    const auto lexicon = sentiment::load_lexicon(cfg.lexicon_path);
    std::vector<CleanDoc> docs;
    std::unordered_map<std::string, SentimentResult> sentiments;
    for (const auto& post : kept) {
        docs.push_back(CleanDoc{post.id, post.platform, post.text, {}, post.created_at, post.geo});
        sentiments[post.id] = sentiment::score_text(post.text, lexicon);
    }

    ZoneConfig zones = load_zones(*cfg.zones_path);
    zones.default_type = cfg.default_location_type;

    const SpatioTemporalResult whole =
        aggregate_bins(docs, sentiments, {}, zones, cfg.tz_offset_minutes);

    std::vector<std::vector<CleanDoc>> shards(5);
    for (std::size_t i = 0; i < docs.size(); ++i) shards[i % 5].push_back(docs[i]);
    SpatioTemporalResult merged;
    for (const auto& shard : shards) {
        const auto part = aggregate_bins(shard, sentiments, {}, zones, cfg.tz_offset_minutes);
        merge_results(merged, part);
    }

    Check c;
    c.expect(merged.by_location == whole.by_location, "by_location differs after shard merge");
    c.expect(merged.by_hour == whole.by_hour, "by_hour differs after shard merge");
    c.expect(merged.by_weekday == whole.by_weekday, "by_weekday differs after shard merge");
    c.expect(merged.by_weekday_hour == whole.by_weekday_hour,
             "by_weekday_hour differs after shard merge");
    c.expect(merged.rush == whole.rush && merged.non_rush == whole.non_rush,
             "rush partition differs after shard merge");
    c.expect(merged.features.size() == whole.features.size(), "feature counts differ");
    c.expect(whole.rush.count + whole.non_rush.count ==
                 static_cast<std::int64_t>(docs.size()),
             "rush + non-rush counts do not sum to the corpus size");

    // Boundary convention: rush windows are half-open, so local 09:00 and
    // 19:00 are outside, 07:00 and 17:00 inside.
    // 2022-03-01 14:00 UTC at -300 minutes = 09:00 local.
    c.expect(!bin_temporal(1646143200, -300).rush, "09:00 local binned as rush");
    c.expect(bin_temporal(1646143200 - 3600 * 2, -300).rush, "07:00 local not binned as rush");
    c.expect(bin_temporal(1646143200 + 3600 * 8, -300).rush, "17:00 local not binned as rush");
    c.expect(!bin_temporal(1646143200 + 3600 * 10, -300).rush, "19:00 local binned as rush");

    if (!c.ok) return {false, c.first_failure};
    return {true, "5-shard merge bit-exact over " + std::to_string(docs.size()) +
                      " docs; rush " + std::to_string(whole.rush.count) + " + non-rush " +
                      std::to_string(whole.non_rush.count) + " = corpus; 09:00 is non-rush"};
}

// --- 8. end-to-end determinism ----------------------------------------------

const std::vector<std::string> kBundleFiles = {
    "distribution.csv", "topics.csv",     "spatial.csv",  "temporal.csv",
    "histogram.csv",    "points.geojson", "manifest.json"};

Outcome criterion8() {
    PipelineConfig cfg = load_config(std::string(kFixtureDir) + "/run_config.json");
    const fs::path out = fs::path(CP_BINARY_DIR) / "acceptance_scratch" / "bundle";
    fs::remove_all(out);
    cfg.out_dir = out.string();
    cfg.snapshot["out_dir"] = out.string();

    const auto start = Clock::now();
    run_all(cfg, 1);
    std::map<std::string, std::string> first;
    for (const auto& name : kBundleFiles) first[name] = slurp(out / name);
    run_all(cfg, 1);
    const double elapsed = ms_since(start);

    Check c;
    for (const auto& name : kBundleFiles)
        c.expect(slurp(out / name) == first[name], name + " differs between identical runs");
    c.expect(elapsed < 120000.0, "two runs took " + fmt(elapsed) + " ms");

    // Golden comparison: the frozen bundle must match byte for byte, except
    // the manifest's echoed out_dir, which tracks where this run wrote.
    if (!fs::exists(kGoldenDir)) {
        return {false, "goldens not frozen: " + std::string(kGoldenDir) + " missing"};
    }
    for (const auto& name : kBundleFiles) {
        const fs::path golden = fs::path(kGoldenDir) / name;
        if (!fs::exists(golden)) {
            c.expect(false, "golden " + name + " missing");
            continue;
        }
        if (name == "manifest.json") {
            Json ours = Json::parse(first[name]);
            Json theirs = Json::parse(slurp(golden));
            ours["config"]["out_dir"] = "";
            theirs["config"]["out_dir"] = "";
            c.expect(ours == theirs, "manifest.json differs from golden (beyond out_dir)");
        } else {
            c.expect(first[name] == slurp(golden), name + " differs from golden");
        }
    }
    if (!c.ok) return {false, c.first_failure};
    return {true, "two runs byte-identical and equal to frozen goldens (" + fmt(elapsed) +
                      " ms for both runs)"};
}

// --- 9. output schema parity ------------------------------------------------

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

Outcome criterion9() {
    if (!fs::exists(kGoldenDir)) {
        return {false, "goldens not frozen: " + std::string(kGoldenDir) + " missing"};
    }
    Check c;
    const auto expect_header = [&](const char* file, const std::string& header) {
        const fs::path p = fs::path(kGoldenDir) / file;
        if (!fs::exists(p)) {
            c.expect(false, std::string(file) + " missing from goldens");
            return;
        }
        c.expect(first_line(slurp(p)) == header,
                 std::string(file) + " header is not \"" + header + "\"");
    };
    expect_header("distribution.csv",
                  "group,posts,negative,negative_pct,neutral,neutral_pct,positive,"
                  "positive_pct,mean_compound");
    expect_header("topics.csv", "topic_id,theme,top_keywords,doc_count,share_pct,avg_compound");
    expect_header("spatial.csv", "location_type,count,mean_compound");
    expect_header("temporal.csv", "weekday,hour,count,mean_compound");
    expect_header("histogram.csv", "bin_lower,bin_upper,count");

    const std::string dist = slurp(fs::path(kGoldenDir) / "distribution.csv");
    c.expect(dist.find("\nCombined,") != std::string::npos,
             "distribution.csv lacks a Combined row");

    const Json geo = Json::parse(slurp(fs::path(kGoldenDir) / "points.geojson"));
    c.expect(geo.at("type") == "FeatureCollection", "points.geojson is not a FeatureCollection");
    if (!geo.at("features").empty()) {
        const Json& props = geo.at("features").front().at("properties");
        for (const char* key : {"post_id", "compound", "label", "topic_id", "local_hour"})
            c.expect(props.contains(key), std::string("feature properties lack ") + key);
    }

    const Json manifest = Json::parse(slurp(fs::path(kGoldenDir) / "manifest.json"));
    for (const char* key :
         {"config", "config_sha256", "inputs", "seed", "tool", "tool_version"})
        c.expect(manifest.contains(key), std::string("manifest lacks ") + key);

    if (!c.ok) return {false, c.first_failure};
    return {true, "table, GeoJSON, and manifest schemas match the frozen shapes; corpus-level "
                  "values are deliberately not asserted"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"sentiment quoted-score parity", criterion1},
        {"sentiment differential fixture", criterion2},
        {"sentiment property fuzz", criterion3},
        {"topic recovery on synthetic corpus", criterion4},
        {"sampler invariants", criterion5},
        {"t-test oracle", criterion6},
        {"spatiotemporal shard merge", criterion7},
        {"end-to-end determinism vs goldens", criterion8},
        {"output schema parity", criterion9},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("unexpected exception: ") + e.what()};
        }
        if (!outcome.pass) ++failures;
        std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << (i + 1) << ". "
                  << criteria[i].first << ": " << outcome.detail << "\n";
    }
    std::cout << "acceptance: " << (criteria.size() - static_cast<std::size_t>(failures)) << "/"
              << criteria.size() << " criteria passed\n";
    return failures;
}
