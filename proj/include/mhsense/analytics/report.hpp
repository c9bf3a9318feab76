#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mhsense/analytics/stats.hpp"
#include "mhsense/evals/evaluator.hpp"

namespace mhsense::analytics {

// 10 possible keys: 5 dominant traits x 2 literacy levels.
struct StratumKey {
    corpus::Trait dominant_trait = corpus::Trait::Openness;
    corpus::Literacy literacy = corpus::Literacy::Basic;

    auto operator<=>(const StratumKey&) const = default;
};

// Metric ids: susceptibility, severity, benefits, flow, diag_hard, diag_soft, smog.
extern const std::vector<std::string> kMetricIds;

// Per-metric value of a record; empty when the record is missing that metric.
std::optional<double> metric_value(const evals::EvalRecord& record, const std::string& metric);

using MetricSummaries = std::map<std::string, MetricSummary>;

// Partitions records by (dominant_trait, literacy). Empty strata are simply
// absent; records missing a metric are excluded from that metric's n.
std::map<StratumKey, MetricSummaries> stratify(const std::vector<evals::EvalRecord>& records);

struct CountBin {
    int low = 0;   // inclusive
    int high = 0;  // inclusive; 0 means open-ended
    std::string label;
};

// Default edges {5, 10, 15} produce [1-5], [6-10], [11-15], [16+].
std::vector<CountBin> make_bins(const std::vector<int>& edges = {5, 10, 15});
std::size_t bin_of(const std::vector<CountBin>& bins, int sensemaker_message_count);

std::vector<std::pair<CountBin, MetricSummaries>> bin_by_sensemaker_count(
    const std::vector<evals::EvalRecord>& records,
    const std::vector<int>& edges = {5, 10, 15});

struct ComparisonRow {
    std::string metric;
    TestResult u_test;
    TestResult t_test;
    bool t_test_valid = true;  // false when Welch degenerated
};

// U and Welch tests per metric between two model-tagged record sets.
std::vector<ComparisonRow> compare_models(const std::vector<evals::EvalRecord>& a,
                                          const std::vector<evals::EvalRecord>& b);

// Writes strata.csv, bins.csv, tests.csv (when comparisons exist) and
// summary.md. Deterministic output: re-running on the same inputs produces
// byte-identical files. SMOG means outside the recommended 6-8 band are
// flagged in the summary.
void emit_report(const std::map<StratumKey, MetricSummaries>& strata,
                 const std::vector<std::pair<CountBin, MetricSummaries>>& bins,
                 const std::vector<ComparisonRow>& comparisons,
                 const std::pair<std::string, std::string>& compared_models,
                 const std::filesystem::path& out_dir);

}  // namespace mhsense::analytics
