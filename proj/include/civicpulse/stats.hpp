#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "civicpulse/types.hpp"

namespace civicpulse {

/// Label counts and mean compound for one group of posts (a platform or the
/// combined corpus). Percentages are derived from the counts at read time;
/// rendering (1 decimal for percentages, 3 for means) is the report's job.
struct DistributionRow {
    std::string group;  // "Twitter", "Reddit", or "Combined"
    std::int64_t negative_count = 0;
    std::int64_t neutral_count = 0;
    std::int64_t positive_count = 0;
    double mean_compound = 0.0;

    std::int64_t total() const { return negative_count + neutral_count + positive_count; }
    double negative_pct() const;
    double neutral_pct() const;
    double positive_pct() const;
};

struct DistributionTable {
    std::vector<DistributionRow> rows;  // platforms in enum order, then Combined
};

/// Builds per-platform rows (only for platforms present in the input) plus a
/// Combined row whose counts are the exact column-wise sums.
/// Throws PipelineError on empty input.
DistributionTable distribution_table(
    const std::vector<std::pair<Platform, SentimentResult>>& results);

/// Single-pass mean/variance accumulator (Welford), mergeable so shards can
/// be combined. Extended precision internally keeps t-statistics derived
/// from it well inside 1e-12 of an exact computation.
struct Moments {
    std::int64_t n = 0;
    long double mean = 0.0L;
    long double m2 = 0.0L;  // sum of squared deviations from the running mean

    void add(double x);
    void merge(const Moments& other);
    double sample_variance() const;  // m2 / (n - 1); requires n >= 2
};

struct TTestResult {
    double t = 0.0;
    std::int64_t df = 0;        // n - 1
    double p = 1.0;             // two-sided
    double one_sided_p = 0.5;   // left-tailed: H1 "mean < mu0"
    std::int64_t n = 0;
    double mean = 0.0;
    double sd = 0.0;            // n-1 sample standard deviation
};

/// One-sample t-test of the score mean against mu0. Two-sided p comes from
/// the Student-t CDF via the regularized incomplete beta function; the
/// left-tailed one-sided p is reported alongside. Throws PipelineError on
/// n < 2, zero variance, or non-finite input ("degenerate sample").
TTestResult one_sample_ttest(const std::vector<double>& scores, double mu0);

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1],
/// evaluated with a continued fraction (absolute error well below 1e-10).
/// Throws PipelineError on domain violations or non-convergence.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided p-value for a Student-t statistic: I_x(df/2, 1/2) with
/// x = df / (df + t^2). Requires df >= 1.
double student_t_two_sided_p(double t, std::int64_t df);

}  // namespace civicpulse
