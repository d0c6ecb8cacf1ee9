#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "civicpulse/types.hpp"

namespace testsupport {

// Synthetic corpus with a known topic structure: `num_classes` disjoint
// vocabularies of `words_per_class` tokens; each doc draws every token from
// its class vocabulary with a mildly skewed weight profile. Class labels are
// round-robin, so counts are balanced by construction.
struct SyntheticCorpus {
    std::vector<civicpulse::CleanDoc> docs;
    std::vector<int> labels;  // true class per doc
};

inline SyntheticCorpus make_synthetic_corpus(int num_docs, int num_classes, int words_per_class,
                                             int min_len, int max_len, std::uint64_t seed) {
    SyntheticCorpus corpus;
    std::mt19937_64 rng(seed);

    std::vector<std::vector<std::string>> class_vocab(static_cast<std::size_t>(num_classes));
    for (int c = 0; c < num_classes; ++c) {
        for (int w = 0; w < words_per_class; ++w) {
            class_vocab[static_cast<std::size_t>(c)].push_back(
                "c" + std::to_string(c) + "w" + std::to_string(w));
        }
    }
    // Zipf-ish weights shared across classes: word w has weight 1/(1+w/4).
    std::vector<double> weights(static_cast<std::size_t>(words_per_class));
    double weight_sum = 0.0;
    for (int w = 0; w < words_per_class; ++w) {
        weights[static_cast<std::size_t>(w)] = 1.0 / (1.0 + static_cast<double>(w) / 4.0);
        weight_sum += weights[static_cast<std::size_t>(w)];
    }

    auto draw_u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto draw_word = [&](int cls) -> const std::string& {
        double r = draw_u01() * weight_sum;
        double acc = 0.0;
        for (int w = 0; w < words_per_class; ++w) {
            acc += weights[static_cast<std::size_t>(w)];
            if (r < acc) return class_vocab[static_cast<std::size_t>(cls)][static_cast<std::size_t>(w)];
        }
        return class_vocab[static_cast<std::size_t>(cls)].back();
    };

    for (int d = 0; d < num_docs; ++d) {
        const int cls = d % num_classes;
        const int span = max_len - min_len + 1;
        const int len = min_len + static_cast<int>(draw_u01() * span);
        civicpulse::CleanDoc doc;
        doc.post_id = "doc" + std::to_string(d);
        doc.platform = civicpulse::Platform::Twitter;
        doc.created_at = 1646000000 + d * 60;
        for (int i = 0; i < len; ++i) {
            doc.tokens.push_back(draw_word(cls));
        }
        corpus.docs.push_back(std::move(doc));
        corpus.labels.push_back(cls);
    }
    return corpus;
}

// Best document purity over all one-to-one matchings of learned topics to
// true classes (exhaustive permutation; suitable for small K).
inline double best_matching_purity(const std::vector<int>& assigned, const std::vector<int>& labels,
                                   int k) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = i;
    double best = 0.0;
    do {
        std::size_t hits = 0;
        for (std::size_t d = 0; d < assigned.size(); ++d) {
            if (perm[static_cast<std::size_t>(assigned[d])] == labels[d]) ++hits;
        }
        best = std::max(best, static_cast<double>(hits) / static_cast<double>(assigned.size()));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace testsupport
