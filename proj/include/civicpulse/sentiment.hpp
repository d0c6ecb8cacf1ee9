#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "civicpulse/types.hpp"

namespace civicpulse {
namespace sentiment {

// Rule constants, frozen. See NOTES in score_text for how each is applied.
inline constexpr double kBoosterIncr = 0.293;
inline constexpr double kBoosterDecr = -0.293;
inline constexpr double kCapsIncr = 0.733;
inline constexpr double kNegationScalar = -0.74;
inline constexpr double kNormalizeAlpha = 15.0;
inline constexpr double kExclamationIncr = 0.292;
inline constexpr double kButPreWeight = 0.5;
inline constexpr double kButPostWeight = 1.5;

struct Lexicon {
    std::unordered_map<std::string, double> valence;   // token -> mean rating, [-4, 4]
    std::unordered_map<std::string, double> boosters;  // word or phrase -> increment
    std::unordered_set<std::string> negators;
    std::unordered_map<std::string, double> idioms;    // multiword phrase -> override valence
};

/// Loads the main lexicon TSV ("token<TAB>valence[<TAB>...]") plus the companion
/// booster/negator/idiom tables expected alongside it (vader_boosters.tsv,
/// vader_negators.txt, vader_idioms.tsv). Throws ConfigError with a line number
/// on parse failure, out-of-range valence, or an empty table.
Lexicon load_lexicon(const std::string& lexicon_path);
Lexicon load_lexicon(const std::string& lexicon_path, const std::string& boosters_path,
                     const std::string& negators_path, const std::string& idioms_path);

/// Whitespace split, then strip punctuation from token ends; a token whose
/// stripped form is 2 chars or fewer is kept verbatim (preserves emoticons).
std::vector<std::string> tokenize(const std::string& text);

/// Applies the full rule set to raw text; never throws.
SentimentResult score_text(const std::string& text, const Lexicon& lexicon);

/// Negative iff compound <= -0.05, Positive iff >= 0.05, else Neutral.
/// Throws std::invalid_argument if compound is outside [-1, 1].
Label classify(double compound);

}  // namespace sentiment
}  // namespace civicpulse
