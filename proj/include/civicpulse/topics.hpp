#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "civicpulse/jsonl.hpp"
#include "civicpulse/types.hpp"

namespace civicpulse {

// Sparse document-term matrix. Rows hold (term id, count) pairs with term ids
// ascending; every kept row has at least one entry.
struct DocTermMatrix {
    std::vector<std::string> vocab;  // index = term id, sorted lexicographically
    std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> counts;
    std::vector<std::string> doc_ids;              // length D, parallel to counts
    std::vector<std::string> excluded_doc_ids;     // docs emptied by pruning

    std::size_t num_docs() const { return counts.size(); }
    std::size_t vocab_size() const { return vocab.size(); }
    std::int64_t total_tokens() const;
    std::size_t doc_tokens(std::size_t d) const;
};

struct TopicModel {
    int K = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    double coherence = 0.0;
    std::vector<std::string> vocab;     // copied from the matrix it was fit on
    std::vector<std::string> doc_ids;
    std::vector<std::vector<double>> phi;    // K x V, rows sum to 1
    std::vector<std::vector<double>> theta;  // D x K, rows sum to 1
    std::vector<std::vector<std::string>> top_keywords;  // K lists of top-10 terms
    std::vector<std::int32_t> assignments;  // per-token topic ids, fixed token order
};

struct TopicSentimentRow {
    int topic_id = 0;
    std::vector<std::string> top_keywords;
    std::size_t doc_count = 0;
    double share_pct = 0.0;
    double avg_compound = 0.0;
};

// Builds the matrix over tokens appearing in >= min_df docs and in
// <= max_df_frac * D docs (D = input doc count). Docs emptied by pruning are
// excluded from the matrix and listed in excluded_doc_ids. Throws
// PipelineError("vocabulary collapsed...") when nothing survives.
DocTermMatrix build_dtm(const std::vector<CleanDoc>& docs, int min_df, double max_df_frac);

// Collapsed Gibbs sampler, deterministic for a given (dtm, K, alpha, beta,
// iters, seed). Tokens are laid out doc by doc, ascending term id within a
// doc; the RNG is a seeded mt19937_64 consumed in that fixed order.
// `validate_every_sweep` re-checks count conservation after each sweep
// (always checked once at the end).
TopicModel fit_lda(const DocTermMatrix& dtm, int K, double alpha, double beta, int iters,
                   std::uint64_t seed, bool validate_every_sweep = false);

// UMass coherence, averaged over topics: per topic, the sum over ordered
// pairs (w_i, w_j), i != j, of its top_n terms of
// log((D(w_i, w_j) + 1) / D(w_j)), with document frequencies from `dtm`.
double coherence_score(const TopicModel& model, const DocTermMatrix& dtm, int top_n);

// Top `n` term strings for topic k, ranked by phi descending, term id
// ascending on ties.
std::vector<std::string> top_terms(const TopicModel& model, int k, int n);

// Fits one model per candidate K (seed + index), returns the fit with the
// highest coherence; ties go to the smaller K. `alpha` nullopt means the
// 50/K literature default per candidate. `threads` > 1 fits candidates
// concurrently (results are independent of the thread count).
TopicModel select_num_topics(const DocTermMatrix& dtm, const std::vector<int>& k_candidates,
                             std::optional<double> alpha, double beta, int iters,
                             std::uint64_t seed, int threads = 1);

// Dominant topic per document (argmax theta, ties to the lowest topic id).
std::vector<int> dominant_topics(const TopicModel& model);

// Per-topic document counts, percentage shares, and mean compound sentiment.
// Every doc id must have a sentiment entry; shares sum to 100 over topics.
std::vector<TopicSentimentRow> topic_sentiment_table(
    const TopicModel& model,
    const std::unordered_map<std::string, SentimentResult>& sentiments);

// JSON export/import of a fitted model (assignments are not serialized).
Json model_to_json(const TopicModel& model);
TopicModel model_from_json(const Json& j);

}  // namespace civicpulse
