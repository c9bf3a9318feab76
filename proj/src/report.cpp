#include "mhsense/analytics/report.hpp"

#include <fmt/core.h>

#include <fstream>

#include "mhsense/errors.hpp"

namespace mhsense::analytics {

using evals::EvalRecord;

const std::vector<std::string> kMetricIds = {
    "susceptibility", "severity", "benefits", "flow", "diag_hard", "diag_soft", "smog",
};

std::optional<double> metric_value(const EvalRecord& r, const std::string& metric) {
    if (metric == "susceptibility" && r.susceptibility) return r.susceptibility->score;
    if (metric == "severity" && r.severity) return r.severity->score;
    if (metric == "benefits" && r.benefits) return r.benefits->score;
    if (metric == "flow" && r.flow) return r.flow->score;
    if (metric == "diag_hard" && r.diagnosis) return r.diagnosis->hard;
    if (metric == "diag_soft" && r.diagnosis) return r.diagnosis->soft;
    if (metric == "smog" && r.smog) return r.smog->grade;
    return std::nullopt;
}

namespace {

MetricSummaries summarize_all(const std::vector<const EvalRecord*>& records) {
    MetricSummaries out;
    for (const auto& metric : kMetricIds) {
        std::vector<double> values;
        for (const EvalRecord* r : records) {
            if (auto v = metric_value(*r, metric)) values.push_back(*v);
        }
        if (!values.empty()) out[metric] = summarize(metric, values);
    }
    return out;
}

}  // namespace

std::map<StratumKey, MetricSummaries> stratify(const std::vector<EvalRecord>& records) {
    if (records.empty()) throw EmptyDataset();
    std::map<StratumKey, std::vector<const EvalRecord*>> groups;
    for (const auto& r : records)
        groups[{r.persona.dominant_trait, r.persona.literacy}].push_back(&r);

    std::map<StratumKey, MetricSummaries> out;
    for (const auto& [key, members] : groups) out[key] = summarize_all(members);
    return out;
}

std::vector<CountBin> make_bins(const std::vector<int>& edges) {
    std::vector<CountBin> bins;
    int low = 1;
    for (int edge : edges) {
        bins.push_back({low, edge, fmt::format("{}-{}", low, edge)});
        low = edge + 1;
    }
    bins.push_back({low, 0, fmt::format("{}+", low)});
    return bins;
}

std::size_t bin_of(const std::vector<CountBin>& bins, int count) {
    for (std::size_t i = 0; i < bins.size(); ++i) {
        if (bins[i].high == 0 || count <= bins[i].high) return i;
    }
    return bins.size() - 1;
}

std::vector<std::pair<CountBin, MetricSummaries>> bin_by_sensemaker_count(
    const std::vector<EvalRecord>& records, const std::vector<int>& edges) {
    const auto bins = make_bins(edges);
    std::vector<std::vector<const EvalRecord*>> groups(bins.size());
    for (const auto& r : records)
        groups[bin_of(bins, r.sensemaker_message_count)].push_back(&r);

    std::vector<std::pair<CountBin, MetricSummaries>> out;
    for (std::size_t i = 0; i < bins.size(); ++i)
        out.emplace_back(bins[i], summarize_all(groups[i]));
    return out;
}

std::vector<ComparisonRow> compare_models(const std::vector<EvalRecord>& a,
                                          const std::vector<EvalRecord>& b) {
    std::vector<ComparisonRow> rows;
    for (const auto& metric : kMetricIds) {
        std::vector<double> va, vb;
        for (const auto& r : a)
            if (auto v = metric_value(r, metric)) va.push_back(*v);
        for (const auto& r : b)
            if (auto v = metric_value(r, metric)) vb.push_back(*v);
        if (va.empty() || vb.empty()) continue;

        ComparisonRow row;
        row.metric = metric;
        row.u_test = mann_whitney_u(va, vb);
        try {
            row.t_test = welch_t(va, vb);
        } catch (const Error&) {
            row.t_test_valid = false;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void emit_report(const std::map<StratumKey, MetricSummaries>& strata,
                 const std::vector<std::pair<CountBin, MetricSummaries>>& bins,
                 const std::vector<ComparisonRow>& comparisons,
                 const std::pair<std::string, std::string>& compared_models,
                 const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    {
        std::ofstream csv(out_dir / "strata.csv", std::ios::trunc);
        if (!csv) throw IoError("cannot write " + (out_dir / "strata.csv").string());
        csv << "metric,dominant_trait,literacy,n,mean,sd,ci95_low,ci95_high\n";
        for (const auto& metric : kMetricIds) {
            for (const auto& [key, summaries] : strata) {
                auto it = summaries.find(metric);
                if (it == summaries.end()) continue;
                const MetricSummary& s = it->second;
                csv << fmt::format("{},{},{},{},{:.4f},{:.4f},{:.4f},{:.4f}\n", metric,
                                   corpus::trait_key(key.dominant_trait),
                                   corpus::literacy_key(key.literacy), s.n, s.mean, s.sd,
                                   s.ci95_low, s.ci95_high);
            }
        }
    }

    {
        std::ofstream csv(out_dir / "bins.csv", std::ios::trunc);
        if (!csv) throw IoError("cannot write " + (out_dir / "bins.csv").string());
        csv << "metric,bin,n,mean,sd,ci95_low,ci95_high\n";
        for (const auto& metric : kMetricIds) {
            for (const auto& [bin, summaries] : bins) {
                auto it = summaries.find(metric);
                if (it == summaries.end()) {
                    csv << fmt::format("{},{},0,,,,\n", metric, bin.label);
                    continue;
                }
                const MetricSummary& s = it->second;
                csv << fmt::format("{},{},{},{:.4f},{:.4f},{:.4f},{:.4f}\n", metric, bin.label,
                                   s.n, s.mean, s.sd, s.ci95_low, s.ci95_high);
            }
        }
    }

    if (!comparisons.empty()) {
        std::ofstream csv(out_dir / "tests.csv", std::ios::trunc);
        if (!csv) throw IoError("cannot write " + (out_dir / "tests.csv").string());
        csv << "metric,model_a,model_b,u_statistic,u_p_value,t_statistic,t_df,t_p_value,n1,n2\n";
        for (const auto& row : comparisons) {
            csv << fmt::format("{},{},{},{:.4f},{:.6f},", row.metric, compared_models.first,
                               compared_models.second, row.u_test.statistic, row.u_test.p_value);
            if (row.t_test_valid)
                csv << fmt::format("{:.4f},{:.2f},{:.6f},", row.t_test.statistic, row.t_test.df,
                                   row.t_test.p_value);
            else
                csv << ",,,";
            csv << fmt::format("{},{}\n", row.u_test.n1, row.u_test.n2);
        }
    }

    {
        std::ofstream md(out_dir / "summary.md", std::ios::trunc);
        if (!md) throw IoError("cannot write " + (out_dir / "summary.md").string());
        md << "# Evaluation report\n\n";
        md << "## Strata (dominant trait x literacy)\n\n";
        md << "| metric | trait | literacy | n | mean | sd |\n";
        md << "|---|---|---|---|---|---|\n";
        for (const auto& metric : kMetricIds) {
            for (const auto& [key, summaries] : strata) {
                auto it = summaries.find(metric);
                if (it == summaries.end()) continue;
                md << fmt::format("| {} | {} | {} | {} | {:.3f} | {:.3f} |\n", metric,
                                  corpus::trait_key(key.dominant_trait),
                                  corpus::literacy_key(key.literacy), it->second.n,
                                  it->second.mean, it->second.sd);
            }
        }

        // Readability band check: health material guidance recommends SMOG 6-8.
        md << "\n## Readability flags\n\n";
        bool flagged = false;
        for (const auto& [key, summaries] : strata) {
            auto it = summaries.find("smog");
            if (it == summaries.end()) continue;
            if (it->second.mean < 6.0 || it->second.mean > 8.0) {
                md << fmt::format("- SMOG mean {:.2f} for {}/{} is {} the recommended 6-8 band\n",
                                  it->second.mean, corpus::trait_key(key.dominant_trait),
                                  corpus::literacy_key(key.literacy),
                                  it->second.mean > 8.0 ? "above" : "below");
                flagged = true;
            }
        }
        if (!flagged) md << "- all SMOG means inside the recommended 6-8 band\n";

        if (!comparisons.empty()) {
            md << fmt::format("\n## {} vs {}\n\n", compared_models.first,
                              compared_models.second);
            md << "| metric | U | p (U) | t | p (t) |\n|---|---|---|---|---|\n";
            for (const auto& row : comparisons) {
                if (row.t_test_valid)
                    md << fmt::format("| {} | {:.1f} | {:.4g} | {:.3f} | {:.4g} |\n", row.metric,
                                      row.u_test.statistic, row.u_test.p_value,
                                      row.t_test.statistic, row.t_test.p_value);
                else
                    md << fmt::format("| {} | {:.1f} | {:.4g} | n/a | n/a |\n", row.metric,
                                      row.u_test.statistic, row.u_test.p_value);
            }
        }
        md << "\nConfidence intervals are normal approximations: mean +/- 1.96*sd/sqrt(n). "
              "The t test is Welch's (unequal variances).\n";
    }
}

}  // namespace mhsense::analytics
