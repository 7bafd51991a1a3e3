#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hacomp/metrics.hpp"
#include "hacomp/stats.hpp"

namespace hacomp::report {

enum class Metric {
    L_H,
    L_AI,
    L_I,
    cp,
    cp_inh,
    cp_coll,
    ce,
    ce_inh,
    ce_coll,
    realization_ratio,
};

inline constexpr Metric kAllMetrics[] = {
    Metric::L_H, Metric::L_AI,   Metric::L_I,    Metric::cp,      Metric::cp_inh,
    Metric::cp_coll, Metric::ce, Metric::ce_inh, Metric::ce_coll, Metric::realization_ratio,
};

const char* to_string(Metric m);
Metric metric_from_string(const std::string& name);
// nullopt only for an undefined realization ratio.
std::optional<double> metric_value(const ComplementarityBreakdown& b, Metric m);

struct MetricSummary {
    std::size_t n = 0;  // participants contributing (ratio may have fewer)
    std::optional<double> mean;
    std::optional<double> sd;
    std::optional<double> ci_lo;
    std::optional<double> ci_hi;
};

struct ConditionSummary {
    std::string condition_id;
    std::size_t n_participants = 0;
    std::optional<std::size_t> n_instances;  // set when all participants share N
    std::vector<std::pair<Metric, MetricSummary>> metrics;  // kAllMetrics order
    double ctp_rate = 0.0;
    // mean ce_inh / mean cp_inh (alternative to the per-participant average)
    std::optional<double> pooled_realization_ratio;

    const MetricSummary& at(Metric m) const;
};

enum class CiMethod { t, bootstrap };

struct SummaryOptions {
    double level = 0.95;
    CiMethod ci_method = CiMethod::t;
    std::uint64_t bootstrap_seed = 0;
    int bootstrap_resamples = 2000;
};

// Participant-level averages of every metric for one condition.
ConditionSummary summarize_condition(std::span<const ComplementarityBreakdown> breakdowns,
                                     const SummaryOptions& options = {});

enum class Direction { a_greater, b_greater, equal };

const char* to_string(Direction d);

struct MetricTest {
    Metric metric;
    stats::TestName test;
};

// Losses by Student's t, the decomposition components by Mann-Whitney U.
std::vector<MetricTest> default_comparison_plan();

struct ComparisonReport {
    Metric metric = Metric::cp;
    std::string condition_a;
    std::string condition_b;
    stats::TestName test = stats::TestName::mann_whitney_u;
    int family_size = 1;
    std::optional<stats::TestResult> result;  // absent when the test failed
    std::optional<Direction> direction;
    std::optional<std::string> error;
};

// Runs each planned test; a degenerate metric records its error and the
// remaining metrics still run.
std::vector<ComparisonReport> compare_conditions(std::span<const ComplementarityBreakdown> a,
                                                 std::span<const ComplementarityBreakdown> b,
                                                 std::span<const MetricTest> plan,
                                                 int family_size);

struct ConditionInstanceTable {
    std::string condition_id;
    std::vector<InstanceEffectRow> rows;
};

struct ReportInput {
    std::vector<ConditionSummary> summaries;
    std::vector<ComparisonReport> comparisons;
    std::vector<ConditionInstanceTable> instance_tables;
};

enum class Format { json, markdown, csv_bundle };

Format format_from_string(const std::string& s);

struct RenderOptions {
    Format format = Format::json;
    // Markdown only: multiply per-instance-average metrics by N and show them
    // as instance counts.
    bool counts_view = false;
};

struct File {
    std::string name;
    std::string content;
};

struct Document {
    std::vector<File> files;  // one file for json/markdown, several for csv_bundle
};

Document render(const ReportInput& input, const RenderOptions& options);

// Inverse of the json rendering: render(parse_json(render(x))) == render(x).
ReportInput parse_json(const std::string& text);

struct ChartBar {
    std::string label;
    double mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

// Bar-chart data: human, team and AI loss per condition with CIs.
std::vector<ChartBar> chart_data(std::span<const ConditionSummary> summaries);

}  // namespace hacomp::report
