#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mhsense::analytics {

struct MetricSummary {
    std::string metric;
    long n = 0;
    double mean = 0;
    double sd = 0;  // sample standard deviation; 0 when n < 2
    double ci95_low = 0;
    double ci95_high = 0;
};

MetricSummary summarize(const std::string& metric, const std::vector<double>& values);

enum class TestKind { MannWhitneyU, WelchT };

struct TestResult {
    TestKind test = TestKind::MannWhitneyU;
    double statistic = 0;  // U of the first sample, or Welch's t
    double p_value = 1;
    long n1 = 0;
    long n2 = 0;
    double df = 0;  // Welch-Satterthwaite df; 0 for the U test
};

// Rank-sum U with midrank ties. Exact two-sided p by enumeration when
// n1 + n2 <= 12, else a normal approximation with tie-corrected variance and
// continuity correction. All pooled values identical degenerates to p = 1.
TestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b);

// Welch's t with Welch-Satterthwaite degrees of freedom, two-sided p.
// Throws DegenerateSample when both samples have zero variance.
TestResult welch_t(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace mhsense::analytics
