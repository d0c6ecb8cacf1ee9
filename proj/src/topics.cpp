#include "civicpulse/topics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_set>

#include "civicpulse/errors.hpp"
#include "civicpulse/log.hpp"

namespace civicpulse {

std::int64_t DocTermMatrix::total_tokens() const {
    std::int64_t total = 0;
    for (const auto& row : counts) {
        for (const auto& [term, count] : row) total += count;
    }
    return total;
}

std::size_t DocTermMatrix::doc_tokens(std::size_t d) const {
    std::size_t total = 0;
    for (const auto& [term, count] : counts[d]) total += static_cast<std::size_t>(count);
    return total;
}

DocTermMatrix build_dtm(const std::vector<CleanDoc>& docs, int min_df, double max_df_frac) {
    if (min_df < 1) throw ConfigError("build_dtm: min_df must be >= 1");
    if (!(max_df_frac > 0.0) || max_df_frac > 1.0) {
        throw ConfigError("build_dtm: max_df_frac must be in (0, 1]");
    }
    if (docs.empty()) throw PipelineError("vocabulary collapsed: empty corpus");

    const double max_df = max_df_frac * static_cast<double>(docs.size());

    // Document frequency per token.
    std::unordered_map<std::string, std::int32_t> df;
    for (const CleanDoc& doc : docs) {
        std::unordered_set<std::string_view> seen;
        for (const std::string& token : doc.tokens) {
            if (seen.insert(token).second) ++df[token];
        }
    }

    DocTermMatrix dtm;
    for (const auto& [token, freq] : df) {
        if (freq >= min_df && static_cast<double>(freq) <= max_df) dtm.vocab.push_back(token);
    }
    std::sort(dtm.vocab.begin(), dtm.vocab.end());

    std::unordered_map<std::string_view, std::int32_t> term_id;
    term_id.reserve(dtm.vocab.size());
    for (std::size_t i = 0; i < dtm.vocab.size(); ++i) {
        term_id.emplace(dtm.vocab[i], static_cast<std::int32_t>(i));
    }

    for (const CleanDoc& doc : docs) {
        std::unordered_map<std::int32_t, std::int32_t> row_counts;
        for (const std::string& token : doc.tokens) {
            auto it = term_id.find(token);
            if (it != term_id.end()) ++row_counts[it->second];
        }
        if (row_counts.empty()) {
            dtm.excluded_doc_ids.push_back(doc.post_id);
            continue;
        }
        std::vector<std::pair<std::int32_t, std::int32_t>> row(row_counts.begin(),
                                                               row_counts.end());
        std::sort(row.begin(), row.end());
        dtm.counts.push_back(std::move(row));
        dtm.doc_ids.push_back(doc.post_id);
    }

    if (dtm.vocab.empty() || dtm.counts.empty()) {
        throw PipelineError("vocabulary collapsed: no documents survive min_df=" +
                            std::to_string(min_df) +
                            " max_df_frac=" + std::to_string(max_df_frac));
    }
    if (!dtm.excluded_doc_ids.empty()) {
        log_info("build_dtm: " + std::to_string(dtm.excluded_doc_ids.size()) +
                 " doc(s) emptied by vocabulary pruning");
    }
    return dtm;
}

namespace {

// Uniform double in [0, 1) from 53 random bits; one draw per token per sweep,
// consumed in a fixed order, so results depend only on the seed.
inline double next_u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct TokenLayout {
    std::vector<std::int32_t> doc;   // owning doc index per token position
    std::vector<std::int32_t> term;  // term id per token position
};

// Doc-major, ascending term id within a doc; each term repeated `count`
// times. This order is part of the determinism contract.
TokenLayout expand_tokens(const DocTermMatrix& dtm) {
    TokenLayout layout;
    const std::size_t total = static_cast<std::size_t>(dtm.total_tokens());
    layout.doc.reserve(total);
    layout.term.reserve(total);
    for (std::size_t d = 0; d < dtm.counts.size(); ++d) {
        for (const auto& [term, count] : dtm.counts[d]) {
            for (std::int32_t c = 0; c < count; ++c) {
                layout.doc.push_back(static_cast<std::int32_t>(d));
                layout.term.push_back(term);
            }
        }
    }
    return layout;
}

void check_conservation(const std::vector<std::int32_t>& n_dk,
                        const std::vector<std::int32_t>& n_kw,
                        const std::vector<std::int32_t>& n_k, std::int64_t total) {
    auto sum = [](const std::vector<std::int32_t>& v) {
        return std::accumulate(v.begin(), v.end(), std::int64_t{0});
    };
    if (sum(n_dk) != total || sum(n_kw) != total || sum(n_k) != total) {
        throw PipelineError("lda: count conservation violated");
    }
}

std::vector<std::int32_t> top_term_ids(const TopicModel& model, int k, int n) {
    const auto& row = model.phi[static_cast<std::size_t>(k)];
    std::vector<std::int32_t> ids(row.size());
    std::iota(ids.begin(), ids.end(), 0);
    const int keep = std::min<int>(n, static_cast<int>(ids.size()));
    std::partial_sort(ids.begin(), ids.begin() + keep, ids.end(),
                      [&](std::int32_t a, std::int32_t b) {
                          std::size_t ua = static_cast<std::size_t>(a);
                          std::size_t ub = static_cast<std::size_t>(b);
                          if (row[ua] != row[ub]) return row[ua] > row[ub];
                          return a < b;
                      });
    ids.resize(static_cast<std::size_t>(keep));
    return ids;
}

}  // namespace

TopicModel fit_lda(const DocTermMatrix& dtm, int K, double alpha, double beta, int iters,
                   std::uint64_t seed, bool validate_every_sweep) {
    if (K < 1) throw ConfigError("lda: K must be >= 1");
    if (iters < 1) throw ConfigError("lda: iters must be >= 1");
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw ConfigError("lda: alpha and beta must be positive");
    }
    const std::int64_t total = dtm.total_tokens();
    if (static_cast<std::int64_t>(K) > total) {
        throw ConfigError("lda: K=" + std::to_string(K) + " exceeds total token count " +
                          std::to_string(total));
    }

    const std::size_t D = dtm.num_docs();
    const std::size_t V = dtm.vocab_size();
    const std::size_t Ku = static_cast<std::size_t>(K);
    TokenLayout layout = expand_tokens(dtm);
    const std::size_t N = layout.doc.size();

    std::vector<std::int32_t> n_dk(D * Ku, 0);
    std::vector<std::int32_t> n_kw(Ku * V, 0);
    std::vector<std::int32_t> n_k(Ku, 0);
    std::vector<std::int32_t> z(N, 0);

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < N; ++i) {
        int topic = std::min<int>(K - 1, static_cast<int>(next_u01(rng) * K));
        z[i] = topic;
        std::size_t d = static_cast<std::size_t>(layout.doc[i]);
        std::size_t w = static_cast<std::size_t>(layout.term[i]);
        ++n_dk[d * Ku + static_cast<std::size_t>(topic)];
        ++n_kw[static_cast<std::size_t>(topic) * V + w];
        ++n_k[static_cast<std::size_t>(topic)];
    }

    const double v_beta = static_cast<double>(V) * beta;
    std::vector<double> p(Ku, 0.0);
    for (int sweep = 0; sweep < iters; ++sweep) {
        for (std::size_t i = 0; i < N; ++i) {
            const std::size_t d = static_cast<std::size_t>(layout.doc[i]);
            const std::size_t w = static_cast<std::size_t>(layout.term[i]);
            const std::size_t old_topic = static_cast<std::size_t>(z[i]);
            --n_dk[d * Ku + old_topic];
            --n_kw[old_topic * V + w];
            --n_k[old_topic];

            double sum = 0.0;
            for (std::size_t k = 0; k < Ku; ++k) {
                double val = (static_cast<double>(n_dk[d * Ku + k]) + alpha) *
                             (static_cast<double>(n_kw[k * V + w]) + beta) /
                             (static_cast<double>(n_k[k]) + v_beta);
                sum += val;
                p[k] = sum;  // cumulative
            }
            const double r = next_u01(rng) * sum;
            std::size_t new_topic = Ku - 1;
            for (std::size_t k = 0; k < Ku; ++k) {
                if (r < p[k]) {
                    new_topic = k;
                    break;
                }
            }
            z[i] = static_cast<std::int32_t>(new_topic);
            ++n_dk[d * Ku + new_topic];
            ++n_kw[new_topic * V + w];
            ++n_k[new_topic];
        }
        if (validate_every_sweep) check_conservation(n_dk, n_kw, n_k, total);
    }
    check_conservation(n_dk, n_kw, n_k, total);

    TopicModel model;
    model.K = K;
    model.alpha = alpha;
    model.beta = beta;
    model.seed = seed;
    model.vocab = dtm.vocab;
    model.doc_ids = dtm.doc_ids;
    model.assignments = std::move(z);

    model.phi.assign(Ku, std::vector<double>(V, 0.0));
    for (std::size_t k = 0; k < Ku; ++k) {
        const double denom = static_cast<double>(n_k[k]) + v_beta;
        for (std::size_t w = 0; w < V; ++w) {
            model.phi[k][w] = (static_cast<double>(n_kw[k * V + w]) + beta) / denom;
        }
    }
    model.theta.assign(D, std::vector<double>(Ku, 0.0));
    for (std::size_t d = 0; d < D; ++d) {
        const double n_d = static_cast<double>(dtm.doc_tokens(d));
        const double denom = n_d + static_cast<double>(K) * alpha;
        for (std::size_t k = 0; k < Ku; ++k) {
            model.theta[d][k] = (static_cast<double>(n_dk[d * Ku + k]) + alpha) / denom;
        }
    }

    model.top_keywords.reserve(Ku);
    for (int k = 0; k < K; ++k) {
        model.top_keywords.push_back(top_terms(model, k, 10));
    }
    model.coherence = coherence_score(model, dtm, 10);
    return model;
}

std::vector<std::string> top_terms(const TopicModel& model, int k, int n) {
    std::vector<std::string> terms;
    for (std::int32_t id : top_term_ids(model, k, n)) {
        terms.push_back(model.vocab[static_cast<std::size_t>(id)]);
    }
    return terms;
}

double coherence_score(const TopicModel& model, const DocTermMatrix& dtm, int top_n) {
    if (top_n < 2) throw ConfigError("coherence: top_n must be >= 2");
    if (model.vocab != dtm.vocab) {
        throw PipelineError("coherence: model and matrix vocabularies differ");
    }

    // Posting lists (ascending doc ids by construction).
    std::vector<std::vector<std::int32_t>> postings(dtm.vocab_size());
    for (std::size_t d = 0; d < dtm.counts.size(); ++d) {
        for (const auto& [term, count] : dtm.counts[d]) {
            postings[static_cast<std::size_t>(term)].push_back(static_cast<std::int32_t>(d));
        }
    }

    auto co_count = [&](std::int32_t a, std::int32_t b) {
        const auto& pa = postings[static_cast<std::size_t>(a)];
        const auto& pb = postings[static_cast<std::size_t>(b)];
        std::size_t i = 0, j = 0, co = 0;
        while (i < pa.size() && j < pb.size()) {
            if (pa[i] == pb[j]) {
                ++co, ++i, ++j;
            } else if (pa[i] < pb[j]) {
                ++i;
            } else {
                ++j;
            }
        }
        return co;
    };

    double total = 0.0;
    for (int k = 0; k < model.K; ++k) {
        std::vector<std::int32_t> terms = top_term_ids(model, k, top_n);
        double topic_score = 0.0;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            for (std::size_t j = 0; j < terms.size(); ++j) {
                if (i == j) continue;
                const std::size_t df_j = postings[static_cast<std::size_t>(terms[j])].size();
                if (df_j == 0) {
                    throw PipelineError("coherence: zero document frequency for in-vocab term \"" +
                                        model.vocab[static_cast<std::size_t>(terms[j])] + "\"");
                }
                const std::size_t co = co_count(terms[i], terms[j]);
                topic_score += std::log((static_cast<double>(co) + 1.0) /
                                        static_cast<double>(df_j));
            }
        }
        total += topic_score;
    }
    return total / static_cast<double>(model.K);
}

TopicModel select_num_topics(const DocTermMatrix& dtm, const std::vector<int>& k_candidates,
                             std::optional<double> alpha, double beta, int iters,
                             std::uint64_t seed, int threads) {
    if (k_candidates.empty()) throw ConfigError("lda: k_candidates must be non-empty");
    if (threads < 1) threads = 1;

    std::vector<TopicModel> fits(k_candidates.size());
    std::vector<std::exception_ptr> failures(k_candidates.size());

    auto fit_one = [&](std::size_t idx) {
        const int K = k_candidates[idx];
        const double a = alpha ? *alpha : 50.0 / static_cast<double>(K);
        fits[idx] = fit_lda(dtm, K, a, beta, iters, seed + idx);
    };

    if (threads == 1 || k_candidates.size() == 1) {
        for (std::size_t i = 0; i < k_candidates.size(); ++i) fit_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::size_t idx = next.fetch_add(1);
                if (idx >= k_candidates.size()) return;
                try {
                    fit_one(idx);
                } catch (...) {
                    failures[idx] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        const std::size_t n_threads =
            std::min<std::size_t>(static_cast<std::size_t>(threads), k_candidates.size());
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        for (const auto& failure : failures) {
            if (failure) std::rethrow_exception(failure);
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < fits.size(); ++i) {
        const bool better =
            fits[i].coherence > fits[best].coherence ||
            (fits[i].coherence == fits[best].coherence && fits[i].K < fits[best].K);
        if (better) best = i;
    }
    log_info("select_num_topics: chose K=" + std::to_string(fits[best].K) + " (coherence " +
             std::to_string(fits[best].coherence) + ")");
    return std::move(fits[best]);
}

std::vector<int> dominant_topics(const TopicModel& model) {
    std::vector<int> result;
    result.reserve(model.theta.size());
    for (const auto& row : model.theta) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < row.size(); ++k) {
            if (row[k] > row[best]) best = k;  // strict: ties keep the lowest id
        }
        result.push_back(static_cast<int>(best));
    }
    return result;
}

std::vector<TopicSentimentRow> topic_sentiment_table(
    const TopicModel& model,
    const std::unordered_map<std::string, SentimentResult>& sentiments) {
    const std::size_t D = model.doc_ids.size();
    std::vector<int> doms = dominant_topics(model);

    std::vector<std::size_t> doc_count(static_cast<std::size_t>(model.K), 0);
    std::vector<double> compound_sum(static_cast<std::size_t>(model.K), 0.0);
    for (std::size_t d = 0; d < D; ++d) {
        auto it = sentiments.find(model.doc_ids[d]);
        if (it == sentiments.end()) {
            throw PipelineError("missing sentiment for doc \"" + model.doc_ids[d] + "\"");
        }
        const std::size_t k = static_cast<std::size_t>(doms[d]);
        ++doc_count[k];
        compound_sum[k] += it->second.compound;
    }

    std::vector<TopicSentimentRow> rows;
    rows.reserve(static_cast<std::size_t>(model.K));
    for (int k = 0; k < model.K; ++k) {
        const std::size_t ku = static_cast<std::size_t>(k);
        TopicSentimentRow row;
        row.topic_id = k;
        row.top_keywords = model.top_keywords[ku];
        row.doc_count = doc_count[ku];
        row.share_pct = D == 0 ? 0.0
                               : 100.0 * static_cast<double>(doc_count[ku]) /
                                     static_cast<double>(D);
        row.avg_compound =
            doc_count[ku] == 0 ? 0.0 : compound_sum[ku] / static_cast<double>(doc_count[ku]);
        rows.push_back(std::move(row));
    }
    return rows;
}

Json model_to_json(const TopicModel& model) {
    Json j;
    j["k"] = model.K;
    j["alpha"] = model.alpha;
    j["beta"] = model.beta;
    j["seed"] = model.seed;
    j["coherence"] = model.coherence;
    j["vocab"] = model.vocab;
    j["doc_ids"] = model.doc_ids;
    Json phi = Json::array();
    for (const auto& row : model.phi) {
        for (double v : row) phi.push_back(v);
    }
    j["phi"] = std::move(phi);  // row-major K x V
    Json theta = Json::array();
    for (const auto& row : model.theta) {
        for (double v : row) theta.push_back(v);
    }
    j["theta"] = std::move(theta);  // row-major D x K
    j["top_keywords"] = model.top_keywords;
    return j;
}

TopicModel model_from_json(const Json& j) {
    TopicModel model;
    try {
        model.K = j.at("k").get<int>();
        model.alpha = j.at("alpha").get<double>();
        model.beta = j.at("beta").get<double>();
        model.seed = j.at("seed").get<std::uint64_t>();
        model.coherence = j.at("coherence").get<double>();
        model.vocab = j.at("vocab").get<std::vector<std::string>>();
        model.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
        std::vector<double> phi = j.at("phi").get<std::vector<double>>();
        std::vector<double> theta = j.at("theta").get<std::vector<double>>();
        model.top_keywords = j.at("top_keywords").get<std::vector<std::vector<std::string>>>();

        const std::size_t K = static_cast<std::size_t>(model.K);
        const std::size_t V = model.vocab.size();
        const std::size_t D = model.doc_ids.size();
        if (model.K < 1 || phi.size() != K * V || theta.size() != D * K) {
            throw PipelineError("model json: inconsistent dimensions");
        }
        model.phi.assign(K, std::vector<double>(V, 0.0));
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t w = 0; w < V; ++w) model.phi[k][w] = phi[k * V + w];
        }
        model.theta.assign(D, std::vector<double>(K, 0.0));
        for (std::size_t d = 0; d < D; ++d) {
            for (std::size_t k = 0; k < K; ++k) model.theta[d][k] = theta[d * K + k];
        }
    } catch (const Json::exception& err) {
        throw PipelineError(std::string("model json: ") + err.what());
    }
    return model;
}

}  // namespace civicpulse
