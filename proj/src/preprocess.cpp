#include "civicpulse/preprocess.hpp"

#include <algorithm>
#include <fstream>
#include <regex>

#include "civicpulse/csv.hpp"
#include "civicpulse/errors.hpp"
#include "civicpulse/text.hpp"

namespace civicpulse {

namespace {

bool is_clean_token(std::string_view token) {
    if (token.empty()) return false;
    for (char c : token) {
        if (!ascii_alnum(c)) return false;
    }
    return true;
}

bool has_vowel(std::string_view stem) {
    for (char c : stem) {
        if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y') return true;
    }
    return false;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Trailing doubled consonants that get collapsed after stripping "-ing"/"-ed"
// ("stopping" -> "stop"). "ll"/"ss"/"zz" stay doubled ("stalling" -> "stall").
bool has_collapsible_double(std::string_view stem) {
    if (stem.size() < 2) return false;
    char a = stem[stem.size() - 2];
    char b = stem[stem.size() - 1];
    if (a != b) return false;
    switch (b) {
        case 'b': case 'd': case 'f': case 'g': case 'm':
        case 'n': case 'p': case 'r': case 't':
            return true;
        default:
            return false;
    }
}

// Restores a likely dropped final 'e' after stripping "-ing"/"-ed"
// ("causing" -> "caus" -> "cause").
bool wants_final_e(std::string_view stem) {
    if (stem.empty()) return false;
    char last = stem.back();
    if (last != 'c' && last != 's' && last != 'u' && last != 'v' && last != 'z') return false;
    // Doubled finals ("buzz", "cross") keep their shape.
    return stem.size() < 2 || stem[stem.size() - 2] != last;
}

std::string fix_stripped_stem(std::string stem) {
    if (has_collapsible_double(stem)) {
        stem.pop_back();
    } else if (wants_final_e(stem)) {
        stem.push_back('e');
    }
    return stem;
}

}  // namespace

Stopwords Stopwords::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open stopword file: " + path.string());
    }
    Stopwords result;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string word{trim(line)};
        if (word.empty() || word.front() == '#') continue;
        result.words_.insert(ascii_lower(word));
    }
    if (result.words_.empty()) {
        throw ConfigError("stopword file has no entries: " + path.string());
    }
    (void)line_number;
    return result;
}

bool Stopwords::contains(std::string_view token) const {
    return words_.find(std::string(token)) != words_.end();
}

Lemmatizer Lemmatizer::load(const std::filesystem::path& table_csv) {
    CsvTable table = [&] {
        try {
            return read_csv_file(table_csv.string());
        } catch (const PipelineError& err) {
            throw ConfigError(std::string("lemma table: ") + err.what());
        }
    }();
    int surface_col = table.column("surface");
    int lemma_col = table.column("lemma");
    if (surface_col < 0 || lemma_col < 0) {
        throw ConfigError("lemma table must have columns surface,lemma: " + table_csv.string());
    }
    const std::size_t need = static_cast<std::size_t>(std::max(surface_col, lemma_col)) + 1;
    Lemmatizer result;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.rows[i].size() < need) {
            throw ConfigError(table_csv.string() + ":" + std::to_string(table.row_lines[i]) +
                              ": lemma row has too few fields");
        }
        const std::string& surface = table.rows[i][static_cast<std::size_t>(surface_col)];
        const std::string& lemma = table.rows[i][static_cast<std::size_t>(lemma_col)];
        if (!is_clean_token(surface) || !is_clean_token(lemma)) {
            throw ConfigError(table_csv.string() + ":" + std::to_string(table.row_lines[i]) +
                              ": lemma entries must be lowercase alphanumeric, got \"" + surface +
                              "\" -> \"" + lemma + "\"");
        }
        auto [it, inserted] = result.exceptions_.emplace(surface, lemma);
        if (!inserted) {
            throw ConfigError(table_csv.string() + ":" + std::to_string(table.row_lines[i]) +
                              ": duplicate lemma entry for \"" + surface + "\"");
        }
    }
    if (result.exceptions_.empty()) {
        throw ConfigError("lemma table has no entries: " + table_csv.string());
    }
    return result;
}

std::string Lemmatizer::apply_once(const std::string& token) const {
    auto it = exceptions_.find(token);
    if (it != exceptions_.end()) return it->second;

    const std::size_t n = token.size();

    // Plural "-ies" -> "-y" ("cities" -> "city"); short words like "ties"
    // fall through to the plain "-s" rule.
    if (n >= 5 && ends_with(token, "ies")) {
        return token.substr(0, n - 3) + "y";
    }
    // Plural "-es" after sibilant/o stems ("crashes", "boxes", "heroes").
    if (n >= 4 && ends_with(token, "es")) {
        std::string_view stem = std::string_view(token).substr(0, n - 2);
        if (ends_with(stem, "x") || ends_with(stem, "z") || ends_with(stem, "o") ||
            ends_with(stem, "ch") || ends_with(stem, "sh") || ends_with(stem, "ss")) {
            return std::string(stem);
        }
    }
    // Plain plural "-s"; endings that are rarely plural markers are left
    // alone ("glass", "serious", "basis", "status").
    if (n >= 3 && token.back() == 's' && !ends_with(token, "ss") && !ends_with(token, "ous") &&
        !ends_with(token, "is") && !ends_with(token, "us")) {
        return token.substr(0, n - 1);
    }
    // Gerund "-ing".
    if (n >= 6 && ends_with(token, "ing")) {
        std::string stem = token.substr(0, n - 3);
        if (stem.size() >= 3 && has_vowel(stem)) {
            return fix_stripped_stem(std::move(stem));
        }
    }
    // Past "-ied" -> "-y" ("tried" -> "try").
    if (n >= 5 && ends_with(token, "ied")) {
        return token.substr(0, n - 3) + "y";
    }
    // Past "-ed"; "-eed" stays ("speed", "agreed").
    if (n >= 5 && ends_with(token, "ed") && token[n - 3] != 'e') {
        std::string stem = token.substr(0, n - 2);
        if (stem.size() >= 3 && has_vowel(stem)) {
            return fix_stripped_stem(std::move(stem));
        }
    }
    return token;
}

std::string Lemmatizer::lemma(std::string_view token) const {
    std::string current(token);
    // Every rule shortens its input (net of the restored 'e'), and table
    // values are fixed points, so this converges; the cap is defensive.
    for (int round = 0; round < 8; ++round) {
        std::string next = apply_once(current);
        if (next == current) break;
        current = std::move(next);
    }
    return current;
}

std::string strip_urls(const std::string& lowercased) {
    static const std::regex kSchemeUrl("[a-z][a-z0-9+.-]*://[^\\s]*");
    static const std::regex kWwwUrl("(^|\\s)www\\.[^\\s]*");
    std::string s = std::regex_replace(lowercased, kSchemeUrl, " ");
    return std::regex_replace(s, kWwwUrl, "$1 ");
}

std::vector<std::string> normalize_for_topics(std::string_view text,
                                              const Stopwords& stopwords,
                                              const Lemmatizer& lemmatizer) {
    std::string s = strip_urls(ascii_lower(text));

    static const std::regex kMention("(^|\\s)@\\w+");
    static const std::regex kHashMark("(^|\\s)#");
    s = std::regex_replace(s, kMention, "$1");
    s = std::regex_replace(s, kHashMark, "$1");

    for (char& c : s) {
        if (!ascii_alnum(c)) c = ' ';
    }

    std::vector<std::string> tokens;
    for (std::string_view raw : split_whitespace(s)) {
        if (raw.size() < 2 || stopwords.contains(raw)) continue;
        std::string lemma = lemmatizer.lemma(raw);
        if (lemma.size() < 2 || stopwords.contains(lemma)) continue;
        tokens.push_back(std::move(lemma));
    }
    return tokens;
}

}  // namespace civicpulse
