#include "mhsense/analytics/stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <map>

#include "mhsense/errors.hpp"

namespace mhsense::analytics {

namespace {

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double mean_of(const std::vector<double>& v) {
    double total = 0;
    for (double x : v) total += x;
    return total / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0;
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

// U statistic of the first group via pooled midranks.
double u_statistic(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<std::pair<double, int>> pooled;  // value, group (0 = a)
    pooled.reserve(a.size() + b.size());
    for (double x : a) pooled.emplace_back(x, 0);
    for (double x : b) pooled.emplace_back(x, 1);
    std::stable_sort(pooled.begin(), pooled.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });

    double rank_sum_a = 0;
    std::size_t i = 0;
    while (i < pooled.size()) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j].first == pooled[i].first) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (pooled[k].second == 0) rank_sum_a += midrank;
        }
        i = j;
    }
    const double n1 = static_cast<double>(a.size());
    return rank_sum_a - n1 * (n1 + 1) / 2.0;
}

// Exhaustive two-sided p: the fraction of group assignments whose U deviates
// from n1*n2/2 at least as much as the observed one.
double exact_two_sided_p(const std::vector<double>& a, const std::vector<double>& b,
                         double u_observed) {
    std::vector<double> pooled;
    pooled.insert(pooled.end(), a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t n = pooled.size();
    const std::size_t n1 = a.size();
    const double mu = static_cast<double>(n1) * static_cast<double>(n - n1) / 2.0;
    const double observed_dev = std::abs(u_observed - mu);

    long long total = 0, extreme = 0;
    std::vector<std::size_t> pick(n1);
    for (std::size_t i = 0; i < n1; ++i) pick[i] = i;
    for (;;) {
        ++total;
        std::vector<double> ga, gb;
        ga.reserve(n1);
        gb.reserve(n - n1);
        std::size_t next = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (next < n1 && pick[next] == i) {
                ga.push_back(pooled[i]);
                ++next;
            } else {
                gb.push_back(pooled[i]);
            }
        }
        if (std::abs(u_statistic(ga, gb) - mu) >= observed_dev - 1e-12) ++extreme;

        // next combination
        std::size_t k = n1;
        while (k > 0 && pick[k - 1] == n - n1 + k - 1) --k;
        if (k == 0) break;
        ++pick[k - 1];
        for (std::size_t i = k; i < n1; ++i) pick[i] = pick[i - 1] + 1;
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace

MetricSummary summarize(const std::string& metric, const std::vector<double>& values) {
    MetricSummary s;
    s.metric = metric;
    s.n = static_cast<long>(values.size());
    if (values.empty()) return s;
    s.mean = mean_of(values);
    s.sd = std::sqrt(sample_variance(values, s.mean));
    const double half_width = 1.96 * s.sd / std::sqrt(static_cast<double>(values.size()));
    s.ci95_low = s.mean - half_width;
    s.ci95_high = s.mean + half_width;
    return s;
}

TestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw Error("mann_whitney_u needs non-empty samples");
    TestResult result;
    result.test = TestKind::MannWhitneyU;
    result.n1 = static_cast<long>(a.size());
    result.n2 = static_cast<long>(b.size());
    result.statistic = u_statistic(a, b);

    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double n = n1 + n2;
    const double mu = n1 * n2 / 2.0;

    bool all_identical = true;
    for (double x : a) all_identical &= (x == a[0]);
    for (double x : b) all_identical &= (x == a[0]);
    if (all_identical) {
        result.p_value = 1.0;  // degenerate: every assignment ties
        return result;
    }

    if (a.size() + b.size() <= 12) {
        result.p_value = exact_two_sided_p(a, b, result.statistic);
        return result;
    }

    // Tie-corrected variance over the pooled sample.
    std::vector<double> pooled;
    pooled.insert(pooled.end(), a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::sort(pooled.begin(), pooled.end());
    double tie_term = 0;
    std::size_t i = 0;
    while (i < pooled.size()) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (variance <= 0) {
        result.p_value = 1.0;
        return result;
    }
    const double deviation = result.statistic - mu;
    // continuity correction shrinks the deviation by half a step
    const double corrected =
        deviation > 0 ? deviation - 0.5 : (deviation < 0 ? deviation + 0.5 : 0.0);
    const double z = corrected / std::sqrt(variance);
    result.p_value = std::clamp(2.0 * (1.0 - standard_normal_cdf(std::abs(z))), 0.0, 1.0);
    return result;
}

TestResult welch_t(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) throw Error("welch_t needs at least two values per sample");
    const double mean_a = mean_of(a), mean_b = mean_of(b);
    const double var_a = sample_variance(a, mean_a), var_b = sample_variance(b, mean_b);
    if (var_a == 0 && var_b == 0) throw DegenerateSample("both samples have zero variance");

    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double se_a = var_a / n1, se_b = var_b / n2;
    const double se2 = se_a + se_b;

    TestResult result;
    result.test = TestKind::WelchT;
    result.n1 = static_cast<long>(a.size());
    result.n2 = static_cast<long>(b.size());
    result.statistic = (mean_a - mean_b) / std::sqrt(se2);
    result.df = se2 * se2 / (se_a * se_a / (n1 - 1.0) + se_b * se_b / (n2 - 1.0));

    if (result.statistic == 0) {
        result.p_value = 1.0;
        return result;
    }
    const boost::math::students_t dist(result.df);
    result.p_value =
        std::clamp(2.0 * boost::math::cdf(dist, -std::abs(result.statistic)), 0.0, 1.0);
    return result;
}

}  // namespace mhsense::analytics
