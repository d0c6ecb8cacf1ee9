#include "civicpulse/stats.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "civicpulse/errors.hpp"
#include "doctest.h"

using namespace civicpulse;

namespace {

SentimentResult scored(double compound) {
    SentimentResult s;
    s.compound = compound;
    s.label = compound <= -0.05 ? Label::Negative
              : compound >= 0.05 ? Label::Positive
                                 : Label::Neutral;
    return s;
}

struct SampleCase {
    double mu0 = 0.0;
    double t = 0.0;
    double p = 0.0;
    double one_sided = 0.0;
    double mean = 0.0;
    double sd = 0.0;
    std::vector<double> samples;
};

std::vector<SampleCase> load_sample_cases() {
    std::ifstream in(CP_SOURCE_DIR "/tests/fixtures/ttest_samples.tsv");
    REQUIRE(in.is_open());
    std::vector<SampleCase> cases;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string n_str, mu0, t, p, one, mean, sd, rest;
        std::getline(row, n_str, '\t');
        std::getline(row, mu0, '\t');
        std::getline(row, t, '\t');
        std::getline(row, p, '\t');
        std::getline(row, one, '\t');
        std::getline(row, mean, '\t');
        std::getline(row, sd, '\t');
        std::getline(row, rest, '\t');
        SampleCase c;
        c.mu0 = std::strtod(mu0.c_str(), nullptr);
        c.t = std::strtod(t.c_str(), nullptr);
        c.p = std::strtod(p.c_str(), nullptr);
        c.one_sided = std::strtod(one.c_str(), nullptr);
        c.mean = std::strtod(mean.c_str(), nullptr);
        c.sd = std::strtod(sd.c_str(), nullptr);
        std::istringstream samples(rest);
        std::string tok;
        while (samples >> tok) c.samples.push_back(std::strtod(tok.c_str(), nullptr));
        REQUIRE(c.samples.size() == static_cast<std::size_t>(std::stoll(n_str)));
        cases.push_back(std::move(c));
    }
    return cases;
}

}  // namespace

TEST_CASE("distribution_table hand-counted fixture") {
    // 10 posts: 4 Negative, 4 Neutral, 2 Positive.
    std::vector<std::pair<Platform, SentimentResult>> results;
    for (const double c : {-0.6, -0.3, -0.2, -0.1}) results.push_back({Platform::Twitter, scored(c)});
    for (const double c : {0.0, 0.01, -0.02, 0.03}) results.push_back({Platform::Twitter, scored(c)});
    for (const double c : {0.5, 0.7}) results.push_back({Platform::Twitter, scored(c)});

    const DistributionTable table = distribution_table(results);
    REQUIRE(table.rows.size() == 2);  // Twitter + Combined

    const DistributionRow& twitter = table.rows[0];
    CHECK(twitter.group == "Twitter");
    CHECK(twitter.negative_count == 4);
    CHECK(twitter.neutral_count == 4);
    CHECK(twitter.positive_count == 2);
    CHECK(twitter.total() == 10);
    CHECK(twitter.negative_pct() == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(twitter.neutral_pct() == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(twitter.positive_pct() == doctest::Approx(20.0).epsilon(1e-12));

    const DistributionRow& combined = table.rows[1];
    CHECK(combined.group == "Combined");
    CHECK(combined.negative_count == twitter.negative_count);
    CHECK(combined.total() == 10);

    // Mean of the ten compounds, hand-summed: 0.02 / 10.
    CHECK(twitter.mean_compound == doctest::Approx(0.002).epsilon(1e-9));
}

TEST_CASE("distribution_table singleton and multi-platform structure") {
    const DistributionTable single =
        distribution_table({{Platform::Reddit, scored(0.8)}});
    REQUIRE(single.rows.size() == 2);
    CHECK(single.rows[0].group == "Reddit");
    CHECK(single.rows[0].negative_pct() == 0.0);
    CHECK(single.rows[0].neutral_pct() == 0.0);
    CHECK(single.rows[0].positive_pct() == 100.0);
    CHECK(single.rows[0].mean_compound == 0.8);
    CHECK(single.rows[1].group == "Combined");
    CHECK(single.rows[1].mean_compound == 0.8);

    std::vector<std::pair<Platform, SentimentResult>> mixed = {
        {Platform::Twitter, scored(-0.5)},
        {Platform::Reddit, scored(0.3)},
        {Platform::Reddit, scored(-0.2)},
        {Platform::Twitter, scored(0.0)},
        {Platform::Reddit, scored(0.6)},
    };
    const DistributionTable table = distribution_table(mixed);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0].group == "Twitter");  // enum order, Combined last
    CHECK(table.rows[1].group == "Reddit");
    CHECK(table.rows[2].group == "Combined");

    // Combined row is the exact column-wise integer sum of platform rows.
    CHECK(table.rows[2].negative_count ==
          table.rows[0].negative_count + table.rows[1].negative_count);
    CHECK(table.rows[2].neutral_count ==
          table.rows[0].neutral_count + table.rows[1].neutral_count);
    CHECK(table.rows[2].positive_count ==
          table.rows[0].positive_count + table.rows[1].positive_count);
    CHECK(table.rows[2].total() == 5);

    for (const DistributionRow& row : table.rows) {
        CHECK(row.negative_pct() + row.neutral_pct() + row.positive_pct() ==
              doctest::Approx(100.0).epsilon(1e-9));
    }

    CHECK_THROWS_AS(distribution_table({}), PipelineError);
}

TEST_CASE("Moments accumulates and merges like a single pass") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.1, 0.7);
    std::vector<double> xs;
    for (int i = 0; i < 400; ++i) xs.push_back(gauss(rng));

    Moments whole;
    for (const double x : xs) whole.add(x);

    Moments left, mid, right;
    for (int i = 0; i < 150; ++i) left.add(xs[static_cast<std::size_t>(i)]);
    for (int i = 150; i < 160; ++i) mid.add(xs[static_cast<std::size_t>(i)]);
    for (int i = 160; i < 400; ++i) right.add(xs[static_cast<std::size_t>(i)]);
    Moments merged;
    merged.merge(left);
    merged.merge(mid);
    merged.merge(right);

    CHECK(merged.n == whole.n);
    CHECK(std::fabs(static_cast<double>(merged.mean - whole.mean)) < 1e-15);
    CHECK(std::fabs(merged.sample_variance() - whole.sample_variance()) < 1e-13);

    Moments too_small;
    too_small.add(1.0);
    CHECK_THROWS_AS(too_small.sample_variance(), PipelineError);
}

TEST_CASE("one_sample_ttest spec examples") {
    // Symmetric sample: t exactly 0, p exactly 1.
    const TTestResult symmetric = one_sample_ttest({-1.0, 0.0, 1.0}, 0.0);
    CHECK(symmetric.t == 0.0);
    CHECK(symmetric.p == 1.0);
    CHECK(symmetric.one_sided_p == 0.5);
    CHECK(symmetric.df == 2);
    CHECK(symmetric.mean == 0.0);

    // Closed form: mean 3, sd sqrt(2.5), t = 3 / (sqrt(2.5)/sqrt(5)).
    const TTestResult counting = one_sample_ttest({1.0, 2.0, 3.0, 4.0, 5.0}, 0.0);
    CHECK(counting.df == 4);
    CHECK(counting.n == 5);
    CHECK(std::fabs(counting.t - 4.242640687119285) < 1e-12);
    CHECK(std::fabs(counting.mean - 3.0) < 1e-15);
    CHECK(std::fabs(counting.sd - std::sqrt(2.5)) < 1e-15);
}

TEST_CASE("one_sample_ttest rejects degenerate samples") {
    auto message_of = [](auto fn) {
        try {
            fn();
            return std::string{};
        } catch (const PipelineError& e) {
            return std::string(e.what());
        }
    };
    CHECK(message_of([] { one_sample_ttest({}, 0.0); }).find("degenerate sample") !=
          std::string::npos);
    CHECK(message_of([] { one_sample_ttest({0.5}, 0.0); }).find("degenerate sample") !=
          std::string::npos);
    CHECK(message_of([] {
              one_sample_ttest({0.3, 0.3, 0.3, 0.3}, 0.0);
          }).find("degenerate sample") != std::string::npos);
    CHECK(message_of([] {
              one_sample_ttest({0.1, std::nan("")}, 0.0);
          }).find("degenerate sample") != std::string::npos);
}

TEST_CASE("t-test reference fixture: t to 1e-12, p to 1e-8") {
    const auto cases = load_sample_cases();
    REQUIRE(cases.size() == 103);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        CAPTURE(i);
        const SampleCase& c = cases[i];
        const TTestResult r = one_sample_ttest(c.samples, c.mu0);
        CHECK(r.df == static_cast<std::int64_t>(c.samples.size()) - 1);
        CHECK(std::fabs(r.t - c.t) < 1e-12);
        CHECK(std::fabs(r.p - c.p) < 1e-8);
        CHECK(std::fabs(r.one_sided_p - c.one_sided) < 1e-8);
        CHECK(std::fabs(r.mean - c.mean) < 1e-12);
        CHECK(std::fabs(r.sd - c.sd) < 1e-12);
        CHECK(r.p >= 0.0);
        CHECK(r.p <= 1.0);
    }
}

TEST_CASE("Student-t CDF reference fixture") {
    std::ifstream in(CP_SOURCE_DIR "/tests/fixtures/student_p.tsv");
    REQUIRE(in.is_open());
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string t_str, df_str, p_str;
        std::getline(row, t_str, '\t');
        std::getline(row, df_str, '\t');
        std::getline(row, p_str, '\t');
        const double t = std::strtod(t_str.c_str(), nullptr);
        const std::int64_t df = std::stoll(df_str);
        const double expected = std::strtod(p_str.c_str(), nullptr);
        CAPTURE(t);
        CAPTURE(df);
        CHECK(std::fabs(student_t_two_sided_p(t, df) - expected) < 1e-10);
        ++rows;
    }
    CHECK(rows == 90);
}

TEST_CASE("t-test properties: antisymmetry, scale invariance, one-sided halves") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(-0.1, 0.6);
    std::uniform_real_distribution<double> scale(0.1, 50.0);
    for (int round = 0; round < 40; ++round) {
        std::vector<double> xs;
        const int n = 5 + static_cast<int>(rng() % 80);
        for (int i = 0; i < n; ++i) xs.push_back(gauss(rng));
        const double mu0 = (round % 3 == 0) ? 0.0 : gauss(rng) * 0.1;

        const TTestResult base = one_sample_ttest(xs, mu0);

        std::vector<double> negated;
        for (const double x : xs) negated.push_back(-x);
        const TTestResult mirrored = one_sample_ttest(negated, -mu0);
        CHECK(std::fabs(base.t + mirrored.t) < 1e-12);
        CHECK(std::fabs(base.p - mirrored.p) < 1e-12);

        const double c = scale(rng);
        std::vector<double> scaled;
        for (const double x : xs) scaled.push_back(c * x);
        const TTestResult rescaled = one_sample_ttest(scaled, c * mu0);
        CHECK(std::fabs(base.t - rescaled.t) < 1e-12);

        if (base.t < 0.0) {
            CHECK(base.one_sided_p == base.p / 2.0);
        } else {
            CHECK(base.one_sided_p == 1.0 - base.p / 2.0);
        }
    }
}

TEST_CASE("p decreases in |t| and the CDF behaves at the edges") {
    for (const std::int64_t df : {std::int64_t{1}, std::int64_t{4}, std::int64_t{120}}) {
        double previous = student_t_two_sided_p(0.0, df);
        CHECK(previous == 1.0);
        for (const double t : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0}) {
            const double p = student_t_two_sided_p(t, df);
            CHECK(p < previous);
            CHECK(p == student_t_two_sided_p(-t, df));  // symmetric in t
            previous = p;
        }
    }
    CHECK_THROWS_AS(student_t_two_sided_p(1.0, 0), PipelineError);
}

TEST_CASE("regularized incomplete beta: domain, endpoints, symmetry") {
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(1, 1) is the identity.
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-14));
    // I_x(a, b) = 1 - I_{1-x}(b, a).
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ab(0.2, 40.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double a = ab(rng);
        const double b = ab(rng);
        const double x = unit(rng);
        const double lhs = regularized_incomplete_beta(a, b, x);
        const double rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
        CHECK(std::fabs(lhs - rhs) < 1e-12);
        CHECK(lhs >= 0.0);
        CHECK(lhs <= 1.0);
    }

    CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), PipelineError);
    CHECK_THROWS_AS(regularized_incomplete_beta(1.0, -2.0, 0.5), PipelineError);
    CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, -0.1), PipelineError);
    CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), PipelineError);
}
