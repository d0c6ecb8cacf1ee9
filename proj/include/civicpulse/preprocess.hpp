#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace civicpulse {

// Fixed stopword list loaded from a versioned data file (one token per line,
// '#' starts a comment line). The file contents are part of the golden-output
// contract: changing them changes topic-model inputs.
class Stopwords {
public:
    static Stopwords load(const std::filesystem::path& path);

    bool contains(std::string_view token) const;
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

// Rule-based suffix lemmatizer guarded by an exception table.
//
// Lookup order per token: exception table first, then the first matching
// suffix rule (plural "-ies/-es/-s", gerund "-ing", past "-ied/-ed").
// Application iterates to a fixed point so that lemmatizing an already
// lemmatized token is a no-op; every table value is required to be a fixed
// point, which the loader cannot check cheaply but the test suite enforces.
class Lemmatizer {
public:
    // Table CSV format: header "surface,lemma", one mapping per row.
    static Lemmatizer load(const std::filesystem::path& table_csv);

    // Builds a lemmatizer with an empty exception table (rules only).
    Lemmatizer() = default;

    std::string lemma(std::string_view token) const;

    std::size_t table_size() const { return exceptions_.size(); }
    const std::unordered_map<std::string, std::string>& exceptions() const {
        return exceptions_;
    }

private:
    // One pass: table lookup, else first matching rule. Returns the input
    // unchanged when nothing applies.
    std::string apply_once(const std::string& token) const;

    std::unordered_map<std::string, std::string> exceptions_;
};

// Removes URLs from already-lowercased text: "scheme://..." runs and
// token-initial "www."-prefixed runs of non-space characters.
std::string strip_urls(const std::string& lowercased);

// Normalizes free text into the token list consumed by topic modeling:
// lowercase, strip URLs ("scheme://" or token-initial "www." runs) and
// token-initial @mentions, drop '#' from hashtags, map every other
// non-alphanumeric character to a space, split, drop stopwords and tokens
// shorter than two characters, lemmatize, then re-apply the stopword/length
// filter so the output is stable under re-normalization.
//
// Output tokens always match [a-z0-9]{2,}.
std::vector<std::string> normalize_for_topics(std::string_view text,
                                              const Stopwords& stopwords,
                                              const Lemmatizer& lemmatizer);

}  // namespace civicpulse
