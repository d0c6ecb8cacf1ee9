#include "civicpulse/preprocess.hpp"

#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "civicpulse/errors.hpp"
#include "civicpulse/text.hpp"

using namespace civicpulse;

namespace {

const Stopwords& stopwords() {
    static Stopwords sw = Stopwords::load(CP_SOURCE_DIR "/data/stopwords.txt");
    return sw;
}

const Lemmatizer& lemmatizer() {
    static Lemmatizer lm = Lemmatizer::load(CP_SOURCE_DIR "/data/lemma_exceptions.csv");
    return lm;
}

std::vector<std::string> norm(std::string_view text) {
    return normalize_for_topics(text, stopwords(), lemmatizer());
}

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

}  // namespace

TEST_CASE("stopword list loads with expected membership") {
    const Stopwords& sw = stopwords();
    CHECK(sw.size() == 179);
    CHECK(sw.contains("the"));
    CHECK(sw.contains("is"));
    CHECK(sw.contains("not"));
    CHECK(sw.contains("don"));
    CHECK(sw.contains("t"));
    CHECK(sw.contains("wouldn't"));
    CHECK_FALSE(sw.contains("check"));
    CHECK_FALSE(sw.contains("road"));
    CHECK_FALSE(sw.contains("traffic"));
}

TEST_CASE("normalization: urls, mentions, hashtags, case, punctuation") {
    CHECK(norm("Check http://a.io @bob ROADS!!") == std::vector<std::string>{"check", "road"});
    CHECK(norm("") == std::vector<std::string>{});
    CHECK(norm("#KnoxTraffic delays delays") ==
          std::vector<std::string>{"knoxtraffic", "delay", "delay"});
    CHECK(norm("see https://example.com/x?y=1 for details") ==
          std::vector<std::string>{"see", "detail"});
    CHECK(norm("WWW.EXAMPLE.COM is down") == std::vector<std::string>{});
    CHECK(norm("email bob@example.com now") ==
          std::vector<std::string>{"email", "bob", "example", "com"});
    CHECK(norm("@alice @bob44 thanks!") == std::vector<std::string>{"thank"});
    CHECK(norm("I-40 closed at exit 374") ==
          std::vector<std::string>{"40", "close", "exit", "374"});
    CHECK(norm("it's DON'T-able") == std::vector<std::string>{"able"});
}

TEST_CASE("normalization drops stopwords and short tokens") {
    CHECK(norm("the and a I to") == std::vector<std::string>{});
    CHECK(norm("a b c d") == std::vector<std::string>{});
    CHECK(norm("so so so bad") == std::vector<std::string>{"bad"});
    // Post-lemmatization re-filter: "cans" lemmatizes to the stopword "can".
    CHECK(norm("cans of paint") == std::vector<std::string>{"paint"});
}

TEST_CASE("lemmatizer rules") {
    const Lemmatizer& lm = lemmatizer();
    // Plurals.
    CHECK(lm.lemma("roads") == "road");
    CHECK(lm.lemma("delays") == "delay");
    CHECK(lm.lemma("cities") == "city");
    CHECK(lm.lemma("crashes") == "crash");
    CHECK(lm.lemma("boxes") == "box");
    CHECK(lm.lemma("classes") == "class");
    CHECK(lm.lemma("heroes") == "hero");
    CHECK(lm.lemma("ties") == "tie");
    CHECK(lm.lemma("miles") == "mile");
    CHECK(lm.lemma("areas") == "area");
    CHECK(lm.lemma("avenues") == "avenue");
    CHECK(lm.lemma("photos") == "photo");
    // Guarded endings.
    CHECK(lm.lemma("glass") == "glass");
    CHECK(lm.lemma("serious") == "serious");
    CHECK(lm.lemma("dangerous") == "dangerous");
    CHECK(lm.lemma("basis") == "basis");
    CHECK(lm.lemma("virus") == "virus");
    // Gerunds.
    CHECK(lm.lemma("blocking") == "block");
    CHECK(lm.lemma("stopping") == "stop");
    CHECK(lm.lemma("stalling") == "stall");
    CHECK(lm.lemma("crossing") == "cross");
    CHECK(lm.lemma("causing") == "cause");
    CHECK(lm.lemma("reducing") == "reduce");
    CHECK(lm.lemma("driving") == "drive");
    CHECK(lm.lemma("losing") == "lose");
    CHECK(lm.lemma("trying") == "try");
    CHECK(lm.lemma("beginning") == "begin");
    // Past tense.
    CHECK(lm.lemma("blocked") == "block");
    CHECK(lm.lemma("delayed") == "delay");
    CHECK(lm.lemma("stopped") == "stop");
    CHECK(lm.lemma("tried") == "try");
    CHECK(lm.lemma("studied") == "study");
    CHECK(lm.lemma("speed") == "speed");
    CHECK(lm.lemma("indeed") == "indeed");
    CHECK(lm.lemma("announced") == "announce");
    CHECK(lm.lemma("fixed") == "fix");
    // Chained: plural of a gerund noun.
    CHECK(lm.lemma("meetings") == "meet");
    CHECK(lm.lemma("buildings") == "build");
    // Too short to trigger rules.
    CHECK(lm.lemma("gas") == "gas");
    CHECK(lm.lemma("go") == "go");
    CHECK(lm.lemma("need") == "need");
}

TEST_CASE("lemmatizer exception table") {
    const Lemmatizer& lm = lemmatizer();
    CHECK(lm.table_size() >= 150);
    CHECK(lm.lemma("buses") == "bus");
    CHECK(lm.lemma("bus") == "bus");
    CHECK(lm.lemma("shoes") == "shoe");
    CHECK(lm.lemma("goes") == "go");
    CHECK(lm.lemma("using") == "use");
    CHECK(lm.lemma("used") == "use");
    CHECK(lm.lemma("closing") == "close");
    CHECK(lm.lemma("closed") == "close");
    CHECK(lm.lemma("seeing") == "see");
    CHECK(lm.lemma("news") == "news");
    CHECK(lm.lemma("analysis") == "analysis");
    CHECK(lm.lemma("movies") == "movie");
    CHECK(lm.lemma("yes") == "yes");
    CHECK(lm.lemma("always") == "always");
    CHECK(lm.lemma("focusing") == "focus");
    CHECK(lm.lemma("promoting") == "promote");
    CHECK(lm.lemma("sharing") == "share");
    CHECK(lm.lemma("women") == "woman");
    CHECK(lm.lemma("tired") == "tired");
}

TEST_CASE("every lemma table value is a fixed point") {
    const Lemmatizer& lm = lemmatizer();
    for (const auto& [surface, lemma] : lm.exceptions()) {
        INFO("entry: ", surface, " -> ", lemma);
        CHECK(lm.lemma(lemma) == lemma);
    }
}

TEST_CASE("output tokens match [a-z0-9]{2,} and avoid stopwords") {
    std::mt19937_64 rng(1234);
    const std::vector<std::string> samples = {
        "Traffic on I-75 NB is CRAZY right now!!! Avoid if possible.",
        "@KnoxDOT why is Kingston Pike STILL closed??? #fixit",
        "New bike lanes coming to downtown Knoxville http://knox.gov/bikes",
        "Les accidents causent des retards énormes — quelle journée!",
        "buses Buses BUSES running late again... typical.",
        "\t\nwhitespace  mix\ttest  ",
        "1234 5678 90",
        "#a #bb #ccc @ @@ @x www. www.x ://",
    };
    for (const auto& text : samples) {
        auto tokens = norm(text);
        for (const auto& token : tokens) {
            INFO("text: ", text, " token: ", token);
            CHECK(token.size() >= 2);
            bool clean = true;
            for (char c : token) {
                if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))) clean = false;
            }
            CHECK(clean);
            CHECK_FALSE(stopwords().contains(token));
        }
    }
    // Random ASCII fuzz: the invariants must hold for arbitrary input.
    for (int trial = 0; trial < 200; ++trial) {
        std::string text;
        std::size_t len = rng() % 80;
        for (std::size_t i = 0; i < len; ++i) {
            text.push_back(static_cast<char>(32 + rng() % 95));
        }
        for (const auto& token : norm(text)) {
            CHECK(token.size() >= 2);
            for (char c : token) {
                CHECK(((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')));
            }
            CHECK_FALSE(stopwords().contains(token));
        }
    }
}

TEST_CASE("normalization is idempotent on its own output") {
    std::mt19937_64 rng(987654);
    std::vector<std::string> texts = {
        "Check http://a.io @bob ROADS!!",
        "#KnoxTraffic delays delays",
        "Buses stopping and going; meetings about road closures...",
        "SmartTrips Knoxville promoting bike sharing to reduce Knoxville traffic congestion",
        "Avoid exit 374 if possible - major accident causing delays",
        "glasses classes buses focuses crises menus movies heroes",
    };
    for (int trial = 0; trial < 200; ++trial) {
        std::string text;
        std::size_t len = rng() % 120;
        for (std::size_t i = 0; i < len; ++i) {
            text.push_back(static_cast<char>(32 + rng() % 95));
        }
        texts.push_back(text);
    }
    for (const auto& text : texts) {
        auto once = norm(text);
        auto twice = norm(join(once));
        INFO("text: ", text, " once: ", join(once), " twice: ", join(twice));
        CHECK(once == twice);
    }
}

TEST_CASE("normalization is deterministic") {
    const std::string text = "Repeated runs MUST agree: delays, delays, delays! #knox @dot";
    auto first = norm(text);
    for (int i = 0; i < 5; ++i) CHECK(norm(text) == first);
}

TEST_CASE("loader rejects malformed inputs") {
    CHECK_THROWS_AS(Stopwords::load(CP_SOURCE_DIR "/data/nonexistent.txt"), ConfigError);
    CHECK_THROWS_AS(Lemmatizer::load(CP_SOURCE_DIR "/data/nonexistent.csv"), ConfigError);
}
