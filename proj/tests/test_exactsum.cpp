#include "civicpulse/exactsum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "civicpulse/errors.hpp"
#include "doctest.h"

using civicpulse::ExactSum;
using civicpulse::PipelineError;

namespace {

bool same_bits(double a, double b) {
    std::uint64_t ua = 0;
    std::uint64_t ub = 0;
    std::memcpy(&ua, &a, sizeof a);
    std::memcpy(&ub, &b, sizeof b);
    return ua == ub;
}

struct OracleCase {
    double expected;
    std::vector<double> addends;
};

std::vector<OracleCase> load_oracle_cases() {
    std::ifstream in(CP_SOURCE_DIR "/tests/fixtures/exactsum_cases.tsv");
    REQUIRE(in.is_open());
    std::vector<OracleCase> cases;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        REQUIRE(tab != std::string::npos);
        OracleCase c;
        c.expected = std::strtod(line.substr(0, tab).c_str(), nullptr);
        std::istringstream rest(line.substr(tab + 1));
        std::string tok;
        while (rest >> tok) {
            c.addends.push_back(std::strtod(tok.c_str(), nullptr));
        }
        cases.push_back(std::move(c));
    }
    return cases;
}

}  // namespace

TEST_CASE("empty accumulator reads zero") {
    ExactSum s;
    CHECK(s.value() == 0.0);
    CHECK(!std::signbit(s.value()));
    s.add(0.0);
    s.add(-0.0);
    CHECK(s == ExactSum{});
}

TEST_CASE("reference cases round-trip bit-exactly") {
    const auto cases = load_oracle_cases();
    REQUIRE(cases.size() >= 60);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        CAPTURE(i);
        ExactSum s;
        for (const double x : cases[i].addends) s.add(x);
        CHECK(same_bits(s.value(), cases[i].expected));
    }
}

TEST_CASE("single addend is returned unchanged") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mag(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double x = std::ldexp(mag(rng), static_cast<int>(rng() % 160) - 80);
        ExactSum s;
        s.add(x);
        CHECK(same_bits(s.value(), x == 0.0 ? 0.0 : x));
    }

    ExactSum tiny;
    tiny.add(5e-324);
    CHECK(same_bits(tiny.value(), 5e-324));
    ExactSum neg_tiny;
    neg_tiny.add(-5e-324);
    CHECK(same_bits(neg_tiny.value(), -5e-324));
}

TEST_CASE("insertion order never changes the state") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> mag(-1.0, 1.0);
    for (int round = 0; round < 50; ++round) {
        std::vector<double> xs;
        const int n = 2 + static_cast<int>(rng() % 64);
        for (int i = 0; i < n; ++i) {
            xs.push_back(std::ldexp(mag(rng), static_cast<int>(rng() % 81) - 40));
        }

        ExactSum forward;
        for (const double x : xs) forward.add(x);

        std::shuffle(xs.begin(), xs.end(), rng);
        ExactSum shuffled;
        for (const double x : xs) shuffled.add(x);

        CHECK(forward == shuffled);
        CHECK(same_bits(forward.value(), shuffled.value()));
    }
}

TEST_CASE("sharded accumulation merges to the unsharded state") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mag(-1.0, 1.0);
    for (int round = 0; round < 50; ++round) {
        std::vector<double> xs;
        const int n = 1 + static_cast<int>(rng() % 120);
        for (int i = 0; i < n; ++i) {
            xs.push_back(std::ldexp(mag(rng), static_cast<int>(rng() % 41) - 20));
        }

        ExactSum whole;
        for (const double x : xs) whole.add(x);

        const int num_shards = 1 + static_cast<int>(rng() % 5);
        std::vector<ExactSum> shards(static_cast<std::size_t>(num_shards));
        for (const double x : xs) {
            shards[rng() % static_cast<std::size_t>(num_shards)].add(x);
        }
        // Merge in a scrambled order to exercise associativity.
        std::shuffle(shards.begin(), shards.end(), rng);
        ExactSum merged;
        for (const ExactSum& shard : shards) merged.merge(shard);

        CHECK(merged == whole);
        CHECK(same_bits(merged.value(), whole.value()));
    }
}

TEST_CASE("exact cancellation") {
    ExactSum s;
    s.add(0.3);
    s.add(-0.3);
    CHECK(s.value() == 0.0);

    ExactSum t;
    t.add(1.0);
    t.add(std::ldexp(1.0, -60));
    t.add(-1.0);
    CHECK(same_bits(t.value(), std::ldexp(1.0, -60)));

    // A double-precision running sum loses the small term entirely here;
    // the accumulator must not.
    double naive = 1.0;
    naive += std::ldexp(1.0, -60);
    naive += -1.0;
    CHECK(naive == 0.0);
}

TEST_CASE("non-finite addends are rejected") {
    ExactSum s;
    CHECK_THROWS_AS(s.add(std::numeric_limits<double>::infinity()), PipelineError);
    CHECK_THROWS_AS(s.add(-std::numeric_limits<double>::infinity()), PipelineError);
    CHECK_THROWS_AS(s.add(std::numeric_limits<double>::quiet_NaN()), PipelineError);
    CHECK(s == ExactSum{});  // failed adds leave no residue
}

TEST_CASE("full finite range is accepted") {
    const double huge = std::numeric_limits<double>::max();
    ExactSum s;
    s.add(huge);
    CHECK(same_bits(s.value(), huge));
    s.add(1.0);          // absorbed by rounding, but held exactly
    s.add(-huge);
    CHECK(same_bits(s.value(), 1.0));

    // A sum that exceeds the double range reads as the correctly rounded
    // result of that exact value: infinity.
    ExactSum over;
    over.add(huge);
    over.add(huge);
    CHECK(over.value() == std::numeric_limits<double>::infinity());
}
