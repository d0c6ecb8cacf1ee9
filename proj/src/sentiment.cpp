#include "civicpulse/sentiment.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "civicpulse/errors.hpp"
#include "civicpulse/text.hpp"

namespace civicpulse {
namespace sentiment {

namespace {

bool is_punct(char c) {
    static const char* punct = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";
    return c != '\0' && std::strchr(punct, c) != nullptr;
}

std::string strip_punct(const std::string& token) {
    std::size_t begin = 0;
    std::size_t end = token.size();
    while (begin < end && is_punct(token[begin])) ++begin;
    while (end > begin && is_punct(token[end - 1])) --end;
    return token.substr(begin, end - begin);
}

// At least one ASCII letter and no lowercase ASCII letter.
bool is_all_caps(const std::string& token) {
    bool has_cased = false;
    for (char c : token) {
        if (c >= 'a' && c <= 'z') return false;
        if (c >= 'A' && c <= 'Z') has_cased = true;
    }
    return has_cased;
}

bool is_negator(const Lexicon& lex, const std::string& word_lower) {
    if (lex.negators.count(word_lower)) return true;
    return word_lower.find("n't") != std::string::npos;
}

double normalize_score(double score) {
    double norm = score / std::sqrt(score * score + kNormalizeAlpha);
    if (norm < -1.0) return -1.0;
    if (norm > 1.0) return 1.0;
    return norm;
}

// True when the token list mixes ALL-CAPS tokens with non-ALL-CAPS ones.
bool allcap_differential(const std::vector<std::string>& words) {
    std::size_t allcaps = 0;
    for (const auto& w : words) {
        if (is_all_caps(w)) ++allcaps;
    }
    std::size_t diff = words.size() - allcaps;
    return diff > 0 && diff < words.size();
}

double scalar_inc_dec(const Lexicon& lex, const std::string& word, double valence,
                      bool is_cap_diff) {
    double scalar = 0.0;
    auto it = lex.boosters.find(ascii_lower(word));
    if (it != lex.boosters.end()) {
        scalar = it->second;
        if (valence < 0) scalar = -scalar;
        if (is_all_caps(word) && is_cap_diff) {
            scalar += (valence > 0) ? kCapsIncr : -kCapsIncr;
        }
    }
    return scalar;
}

struct TokenView {
    std::vector<std::string> tokens;        // original case
    std::vector<std::string> tokens_lower;  // cached lowercase forms
    bool is_cap_diff = false;
};

TokenView make_token_view(const std::string& text) {
    TokenView tv;
    for (const auto& raw : split_whitespace(text)) {
        std::string stripped = strip_punct(raw);
        tv.tokens.push_back(stripped.size() <= 2 ? raw : stripped);
    }
    tv.tokens_lower.reserve(tv.tokens.size());
    for (const auto& t : tv.tokens) tv.tokens_lower.push_back(ascii_lower(t));
    tv.is_cap_diff = allcap_differential(tv.tokens);
    return tv;
}

double negation_check(const Lexicon& lex, double valence, const TokenView& tv, int start_i,
                      std::size_t i) {
    const auto& w = tv.tokens_lower;
    if (start_i == 0) {
        if (is_negator(lex, w[i - 1])) valence *= kNegationScalar;
    }
    if (start_i == 1) {
        if (w[i - 2] == "never" && (w[i - 1] == "so" || w[i - 1] == "this")) {
            valence *= 1.25;
        } else if (w[i - 2] == "without" && w[i - 1] == "doubt") {
            // no change
        } else if (is_negator(lex, w[i - 2])) {
            valence *= kNegationScalar;
        }
    }
    if (start_i == 2) {
        // Operator precedence here is deliberate: "so"/"this" immediately before
        // the word triggers the intensity bump regardless of what came earlier.
        if ((w[i - 3] == "never" && (w[i - 2] == "so" || w[i - 2] == "this")) ||
            (w[i - 1] == "so" || w[i - 1] == "this")) {
            valence *= 1.25;
        } else if (w[i - 3] == "without" && (w[i - 2] == "doubt" || w[i - 1] == "doubt")) {
            // no change
        } else if (is_negator(lex, w[i - 3])) {
            valence *= kNegationScalar;
        }
    }
    return valence;
}

double special_idioms_check(const Lexicon& lex, double valence, const TokenView& tv,
                            std::size_t i) {
    const auto& w = tv.tokens_lower;
    const std::string onezero = w[i - 1] + " " + w[i];
    const std::string twoonezero = w[i - 2] + " " + w[i - 1] + " " + w[i];
    const std::string twoone = w[i - 2] + " " + w[i - 1];
    const std::string threetwoone = w[i - 3] + " " + w[i - 2] + " " + w[i - 1];
    const std::string threetwo = w[i - 3] + " " + w[i - 2];

    for (const std::string* seq : {&onezero, &twoonezero, &twoone, &threetwoone, &threetwo}) {
        auto it = lex.idioms.find(*seq);
        if (it != lex.idioms.end()) {
            valence = it->second;
            break;
        }
    }
    if (w.size() - 1 > i) {
        const std::string zeroone = w[i] + " " + w[i + 1];
        auto it = lex.idioms.find(zeroone);
        if (it != lex.idioms.end()) valence = it->second;
    }
    if (w.size() - 1 > i + 1) {
        const std::string zeroonetwo = w[i] + " " + w[i + 1] + " " + w[i + 2];
        auto it = lex.idioms.find(zeroonetwo);
        if (it != lex.idioms.end()) valence = it->second;
    }
    // booster bi-/tri-grams such as "sort of" preceding the word
    for (const std::string* n_gram : {&threetwoone, &threetwo, &twoone}) {
        auto it = lex.boosters.find(*n_gram);
        if (it != lex.boosters.end()) valence += it->second;
    }
    return valence;
}

double least_check(const Lexicon& lex, double valence, const TokenView& tv, std::size_t i) {
    const auto& w = tv.tokens_lower;
    if (i > 1 && !lex.valence.count(w[i - 1]) && w[i - 1] == "least") {
        if (w[i - 2] != "at" && w[i - 2] != "very") valence *= kNegationScalar;
    } else if (i > 0 && !lex.valence.count(w[i - 1]) && w[i - 1] == "least") {
        valence *= kNegationScalar;
    }
    return valence;
}

double sentiment_valence(const Lexicon& lex, const TokenView& tv, std::size_t i) {
    const auto& w = tv.tokens_lower;
    auto lex_it = lex.valence.find(w[i]);
    if (lex_it == lex.valence.end()) return 0.0;
    double valence = lex_it->second;

    // "no" negating the next lexicon word scores 0 itself...
    if (w[i] == "no" && i + 1 < w.size() && lex.valence.count(w[i + 1])) {
        valence = 0.0;
    }
    // ...and a lexicon word shortly after "no" is flipped from its base rating.
    if ((i > 0 && w[i - 1] == "no") || (i > 1 && w[i - 2] == "no") ||
        (i > 2 && w[i - 3] == "no" && (w[i - 1] == "or" || w[i - 1] == "nor"))) {
        valence = lex_it->second * kNegationScalar;
    }

    if (is_all_caps(tv.tokens[i]) && tv.is_cap_diff) {
        valence += (valence > 0) ? kCapsIncr : -kCapsIncr;
    }

    for (int start_i = 0; start_i < 3; ++start_i) {
        std::size_t prev = i - static_cast<std::size_t>(start_i) - 1;
        if (i > static_cast<std::size_t>(start_i) && !lex.valence.count(w[prev])) {
            double scalar = scalar_inc_dec(lex, tv.tokens[prev], valence, tv.is_cap_diff);
            if (start_i == 1 && scalar != 0.0) scalar *= 0.95;
            if (start_i == 2 && scalar != 0.0) scalar *= 0.9;
            valence += scalar;
            valence = negation_check(lex, valence, tv, start_i, i);
            if (start_i == 2) valence = special_idioms_check(lex, valence, tv, i);
        }
    }

    valence = least_check(lex, valence, tv, i);
    return valence;
}

double amplify_ep(const std::string& text) {
    int count = 0;
    for (char c : text) {
        if (c == '!') ++count;
    }
    if (count > 4) count = 4;
    return count * kExclamationIncr;
}

double amplify_qm(const std::string& text) {
    int count = 0;
    for (char c : text) {
        if (c == '?') ++count;
    }
    if (count > 1) return (count <= 3) ? count * 0.18 : 0.96;
    return 0.0;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
    return make_token_view(text).tokens;
}

SentimentResult score_text(const std::string& text, const Lexicon& lexicon) {
    std::string stripped_text{trim(text)};
    TokenView tv = make_token_view(stripped_text);
    const auto& w = tv.tokens_lower;

    std::vector<double> sentiments;
    sentiments.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (lexicon.boosters.count(w[i])) {
            sentiments.push_back(0.0);
            continue;
        }
        if (i + 1 < w.size() && w[i] == "kind" && w[i + 1] == "of") {
            sentiments.push_back(0.0);
            continue;
        }
        sentiments.push_back(sentiment_valence(lexicon, tv, i));
    }

    // Contrastive-conjunction reweighting. The first slot holding each
    // encountered value is the one rescaled, matching the reference exactly.
    {
        std::size_t bi = w.size();
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (w[j] == "but") {
                bi = j;
                break;
            }
        }
        if (bi != w.size()) {
            for (std::size_t k = 0; k < sentiments.size(); ++k) {
                double v = sentiments[k];
                std::size_t si = 0;
                while (si < sentiments.size() && sentiments[si] != v) ++si;
                if (si < bi) {
                    sentiments[si] = v * kButPreWeight;
                } else if (si > bi && si < sentiments.size()) {
                    sentiments[si] = v * kButPostWeight;
                }
            }
        }
    }

    SentimentResult result;
    if (!sentiments.empty()) {
        double sum_s = 0.0;
        for (double s : sentiments) sum_s += s;
        double punct_amp = amplify_ep(stripped_text) + amplify_qm(stripped_text);
        if (sum_s > 0) {
            sum_s += punct_amp;
        } else if (sum_s < 0) {
            sum_s -= punct_amp;
        }
        result.compound = normalize_score(sum_s);

        double pos_sum = 0.0, neg_sum = 0.0;
        int neu_count = 0;
        for (double s : sentiments) {
            if (s > 0) pos_sum += s + 1.0;  // +1 offsets the implicit neutral weight
            if (s < 0) neg_sum += s - 1.0;
            if (s == 0) ++neu_count;
        }
        if (pos_sum > std::fabs(neg_sum)) {
            pos_sum += punct_amp;
        } else if (pos_sum < std::fabs(neg_sum)) {
            neg_sum -= punct_amp;
        }
        double total = pos_sum + std::fabs(neg_sum) + neu_count;
        result.pos = std::fabs(pos_sum / total);
        result.neg = std::fabs(neg_sum / total);
        result.neu = std::fabs(neu_count / total);
    } else {
        // Unscorable input is reported as wholly neutral.
        result.compound = 0.0;
        result.pos = 0.0;
        result.neg = 0.0;
        result.neu = 1.0;
    }
    result.label = classify(result.compound);
    return result;
}

Label classify(double compound) {
    if (!(compound >= -1.0 && compound <= 1.0)) {
        throw std::invalid_argument("compound score out of [-1, 1]");
    }
    if (compound <= -0.05) return Label::Negative;
    if (compound >= 0.05) return Label::Positive;
    return Label::Neutral;
}

namespace {

void load_main_lexicon(const std::string& path, Lexicon& lex) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open lexicon file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::size_t tab1 = line.find('\t');
        if (tab1 == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected token<TAB>valence");
        }
        std::string token = line.substr(0, tab1);
        std::size_t tab2 = line.find('\t', tab1 + 1);
        std::string value_str = line.substr(
            tab1 + 1, tab2 == std::string::npos ? std::string::npos : tab2 - tab1 - 1);
        double value;
        try {
            std::size_t consumed = 0;
            value = std::stod(value_str, &consumed);
            if (consumed != value_str.size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": bad valence '" +
                              value_str + "'");
        }
        if (value < -4.0 || value > 4.0) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": valence " + value_str +
                              " outside [-4, 4]");
        }
        lex.valence[token] = value;
    }
    if (lex.valence.empty()) throw ConfigError("lexicon file is empty: " + path);
}

void load_tsv_map(const std::string& path, std::unordered_map<std::string, double>& out,
                  double lo, double hi, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(std::string("cannot open ") + what + " file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected phrase<TAB>value");
        }
        std::string phrase = line.substr(0, tab);
        std::string value_str = line.substr(tab + 1);
        double value;
        try {
            std::size_t consumed = 0;
            value = std::stod(value_str, &consumed);
            if (consumed != value_str.size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": bad value '" + value_str +
                              "'");
        }
        if (value < lo || value > hi) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": value " + value_str +
                              " outside allowed range");
        }
        out[phrase] = value;
    }
    if (out.empty()) throw ConfigError(std::string(what) + " file is empty: " + path);
}

void load_negators(const std::string& path, std::unordered_set<std::string>& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open negator file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string word{trim(line)};
        if (word.empty() || word[0] == '#') continue;
        out.insert(word);
    }
    if (out.empty()) throw ConfigError("negator file is empty: " + path);
}

}  // namespace

Lexicon load_lexicon(const std::string& lexicon_path, const std::string& boosters_path,
                     const std::string& negators_path, const std::string& idioms_path) {
    Lexicon lex;
    load_main_lexicon(lexicon_path, lex);
    load_tsv_map(boosters_path, lex.boosters, -0.5, 0.5, "booster");
    load_negators(negators_path, lex.negators);
    load_tsv_map(idioms_path, lex.idioms, -4.0, 4.0, "idiom");
    return lex;
}

Lexicon load_lexicon(const std::string& lexicon_path) {
    namespace fs = std::filesystem;
    fs::path dir = fs::path(lexicon_path).parent_path();
    return load_lexicon(lexicon_path, (dir / "vader_boosters.tsv").string(),
                        (dir / "vader_negators.txt").string(),
                        (dir / "vader_idioms.tsv").string());
}

}  // namespace sentiment
}  // namespace civicpulse
