#include "civicpulse/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "civicpulse/errors.hpp"
#include "civicpulse/exactsum.hpp"

namespace civicpulse {

namespace {

double pct(std::int64_t part, std::int64_t total) {
    return 100.0 * static_cast<double>(part) / static_cast<double>(total);
}

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIterations = 300;
    constexpr double kEps = 3.0e-16;
    constexpr double kFpMin = 1.0e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) return h;
    }
    throw PipelineError("incomplete beta: continued fraction failed to converge");
}

}  // namespace

double DistributionRow::negative_pct() const { return pct(negative_count, total()); }
double DistributionRow::neutral_pct() const { return pct(neutral_count, total()); }
double DistributionRow::positive_pct() const { return pct(positive_count, total()); }

DistributionTable distribution_table(
    const std::vector<std::pair<Platform, SentimentResult>>& results) {
    if (results.empty()) throw PipelineError("distribution_table: empty input");

    struct Accumulator {
        DistributionRow row;
        ExactSum compound_sum;
    };
    std::map<Platform, Accumulator> per_platform;
    Accumulator combined;
    combined.row.group = "Combined";

    auto tally = [](Accumulator& acc, const SentimentResult& s) {
        switch (s.label) {
            case Label::Negative: ++acc.row.negative_count; break;
            case Label::Neutral: ++acc.row.neutral_count; break;
            case Label::Positive: ++acc.row.positive_count; break;
        }
        acc.compound_sum.add(s.compound);
    };

    for (const auto& [platform, sentiment] : results) {
        Accumulator& acc = per_platform[platform];
        if (acc.row.group.empty()) acc.row.group = to_string(platform);
        tally(acc, sentiment);
        tally(combined, sentiment);
    }

    DistributionTable table;
    for (auto& [platform, acc] : per_platform) {
        acc.row.mean_compound =
            acc.compound_sum.value() / static_cast<double>(acc.row.total());
        table.rows.push_back(std::move(acc.row));
    }
    combined.row.mean_compound =
        combined.compound_sum.value() / static_cast<double>(combined.row.total());
    table.rows.push_back(std::move(combined.row));
    return table;
}

void Moments::add(double x) {
    ++n;
    const long double delta = static_cast<long double>(x) - mean;
    mean += delta / static_cast<long double>(n);
    m2 += delta * (static_cast<long double>(x) - mean);
}

void Moments::merge(const Moments& other) {
    if (other.n == 0) return;
    if (n == 0) {
        *this = other;
        return;
    }
    const long double delta = other.mean - mean;
    const std::int64_t combined = n + other.n;
    mean += delta * static_cast<long double>(other.n) / static_cast<long double>(combined);
    m2 += other.m2 + delta * delta *
                         (static_cast<long double>(n) * static_cast<long double>(other.n) /
                          static_cast<long double>(combined));
    n = combined;
}

double Moments::sample_variance() const {
    if (n < 2) throw PipelineError("sample variance needs n >= 2");
    return static_cast<double>(m2 / static_cast<long double>(n - 1));
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw PipelineError("incomplete beta: parameters must be positive");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw PipelineError("incomplete beta: x must be within [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(log_bt);
    // The continued fraction converges fast below the distribution's bulk;
    // use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the other side.
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return bt * betacf(a, b, x) / a;
    }
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, std::int64_t df) {
    if (df < 1) throw PipelineError("t distribution needs df >= 1");
    if (!std::isfinite(t)) throw PipelineError("t statistic must be finite");
    const double dfd = static_cast<double>(df);
    const double t2 = t * t;
    const double denom = dfd + t2;
    const double x = dfd / denom;
    // Near x = 1 the quotient itself rounds away the complement that p
    // depends on (p ~ 1 - c*sqrt(1-x)), so switch to the symmetric form
    // with y = 1 - x computed without cancellation.
    if (x <= 0.999999) {
        return std::clamp(regularized_incomplete_beta(dfd / 2.0, 0.5, x), 0.0, 1.0);
    }
    const double y = t2 / denom;
    return std::clamp(1.0 - regularized_incomplete_beta(0.5, dfd / 2.0, y), 0.0, 1.0);
}

TTestResult one_sample_ttest(const std::vector<double>& scores, double mu0) {
    if (scores.size() < 2) {
        throw PipelineError("degenerate sample: need at least 2 scores, got " +
                            std::to_string(scores.size()));
    }
    if (!std::isfinite(mu0)) throw PipelineError("degenerate sample: mu0 not finite");

    Moments moments;
    for (const double x : scores) {
        if (!std::isfinite(x)) throw PipelineError("degenerate sample: non-finite score");
        moments.add(x);
    }
    const double variance = moments.sample_variance();
    if (variance <= 0.0) throw PipelineError("degenerate sample: zero variance");

    TTestResult result;
    result.n = moments.n;
    result.df = moments.n - 1;
    result.mean = static_cast<double>(moments.mean);
    result.sd = std::sqrt(variance);
    const long double se =
        std::sqrt(static_cast<long double>(variance) / static_cast<long double>(moments.n));
    result.t = static_cast<double>((moments.mean - static_cast<long double>(mu0)) / se);
    result.p = student_t_two_sided_p(result.t, result.df);
    result.one_sided_p = result.t < 0.0 ? result.p / 2.0 : 1.0 - result.p / 2.0;
    return result;
}

}  // namespace civicpulse
