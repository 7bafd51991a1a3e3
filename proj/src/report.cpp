#include "hacomp/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"

#include "hacomp/error.hpp"
#include "hacomp/format.hpp"

namespace hacomp::report {

using nlohmann::json;

const char* to_string(Metric m) {
    switch (m) {
        case Metric::L_H: return "L_H";
        case Metric::L_AI: return "L_AI";
        case Metric::L_I: return "L_I";
        case Metric::cp: return "cp";
        case Metric::cp_inh: return "cp_inh";
        case Metric::cp_coll: return "cp_coll";
        case Metric::ce: return "ce";
        case Metric::ce_inh: return "ce_inh";
        case Metric::ce_coll: return "ce_coll";
        case Metric::realization_ratio: return "realization_ratio";
    }
    return "unknown";
}

Metric metric_from_string(const std::string& name) {
    for (Metric m : kAllMetrics) {
        if (name == to_string(m)) return m;
    }
    throw ValidationError("unknown metric '" + name + "'");
}

std::optional<double> metric_value(const ComplementarityBreakdown& b, Metric m) {
    switch (m) {
        case Metric::L_H: return b.L_H;
        case Metric::L_AI: return b.L_AI;
        case Metric::L_I: return b.L_I;
        case Metric::cp: return b.cp;
        case Metric::cp_inh: return b.cp_inh;
        case Metric::cp_coll: return b.cp_coll;
        case Metric::ce: return b.ce;
        case Metric::ce_inh: return b.ce_inh;
        case Metric::ce_coll: return b.ce_coll;
        case Metric::realization_ratio: return b.realization_ratio;
    }
    return std::nullopt;
}

const MetricSummary& ConditionSummary::at(Metric m) const {
    for (const auto& [metric, s] : metrics) {
        if (metric == m) return s;
    }
    throw ValidationError(std::string("summary lacks metric ") + to_string(m));
}

const char* to_string(Direction d) {
    switch (d) {
        case Direction::a_greater: return "a_greater";
        case Direction::b_greater: return "b_greater";
        case Direction::equal: return "equal";
    }
    return "unknown";
}

Format format_from_string(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "markdown" || s == "md") return Format::markdown;
    if (s == "csv" || s == "csv_bundle") return Format::csv_bundle;
    throw ValidationError("unknown report format '" + s + "'");
}

namespace {

MetricSummary summarize_values(const std::vector<double>& values, const SummaryOptions& opt) {
    MetricSummary s;
    s.n = values.size();
    if (values.empty()) return s;
    s.mean = stats::mean(values);
    if (values.size() == 1) {
        s.sd = 0.0;
        s.ci_lo = s.ci_hi = s.mean;
        return s;
    }
    s.sd = stats::stddev(values);
    const auto ci = opt.ci_method == CiMethod::t
                        ? stats::confidence_interval(values, opt.level)
                        : stats::bootstrap_interval(values, opt.level, opt.bootstrap_seed,
                                                    opt.bootstrap_resamples);
    s.ci_lo = ci.lo;
    s.ci_hi = ci.hi;
    return s;
}

}  // namespace

ConditionSummary summarize_condition(std::span<const ComplementarityBreakdown> breakdowns,
                                     const SummaryOptions& options) {
    if (breakdowns.empty()) throw ValidationError("summarize_condition: no breakdowns");
    ConditionSummary out;
    out.condition_id = breakdowns.front().condition_id;
    out.n_participants = breakdowns.size();
    out.n_instances = breakdowns.front().n_instances;
    std::size_t ctp_count = 0;
    for (const auto& b : breakdowns) {
        if (b.condition_id != out.condition_id) {
            throw ValidationError("summarize_condition: mixed conditions '" + out.condition_id +
                                  "' and '" + b.condition_id + "'");
        }
        if (out.n_instances && *out.n_instances != b.n_instances) out.n_instances.reset();
        if (b.ctp) ++ctp_count;
    }
    out.ctp_rate = static_cast<double>(ctp_count) / static_cast<double>(breakdowns.size());

    for (Metric m : kAllMetrics) {
        std::vector<double> values;
        values.reserve(breakdowns.size());
        for (const auto& b : breakdowns) {
            if (auto v = metric_value(b, m)) values.push_back(*v);
        }
        out.metrics.emplace_back(m, summarize_values(values, options));
    }
    const auto& inh = out.at(Metric::cp_inh);
    if (inh.mean && *inh.mean > 0.0) {
        out.pooled_realization_ratio = *out.at(Metric::ce_inh).mean / *inh.mean;
    }
    return out;
}

std::vector<MetricTest> default_comparison_plan() {
    using stats::TestName;
    return {
        {Metric::L_H, TestName::t_two_sample},
        {Metric::L_I, TestName::t_two_sample},
        {Metric::cp_inh, TestName::mann_whitney_u},
        {Metric::cp_coll, TestName::mann_whitney_u},
        {Metric::ce_inh, TestName::mann_whitney_u},
        {Metric::ce_coll, TestName::mann_whitney_u},
    };
}

std::vector<ComparisonReport> compare_conditions(std::span<const ComplementarityBreakdown> a,
                                                 std::span<const ComplementarityBreakdown> b,
                                                 std::span<const MetricTest> plan,
                                                 int family_size) {
    if (a.empty() || b.empty()) throw ValidationError("compare_conditions: empty condition");
    if (family_size < 1) throw ValidationError("compare_conditions: family_size must be >= 1");
    std::vector<ComparisonReport> out;
    out.reserve(plan.size());
    for (const auto& item : plan) {
        ComparisonReport rep;
        rep.metric = item.metric;
        rep.condition_a = a.front().condition_id;
        rep.condition_b = b.front().condition_id;
        rep.test = item.test;
        rep.family_size = family_size;

        std::vector<double> xa, xb;
        for (const auto& x : a) {
            if (auto v = metric_value(x, item.metric)) xa.push_back(*v);
        }
        for (const auto& x : b) {
            if (auto v = metric_value(x, item.metric)) xb.push_back(*v);
        }
        try {
            stats::TestResult r;
            switch (item.test) {
                case stats::TestName::t_two_sample:
                    r = stats::t_test(xa, xb, stats::Variance::pooled);
                    break;
                case stats::TestName::welch_two_sample:
                    r = stats::t_test(xa, xb, stats::Variance::welch);
                    break;
                case stats::TestName::mann_whitney_u:
                    r = stats::mann_whitney_u(xa, xb);
                    break;
                case stats::TestName::t_one_sample:
                    throw ValidationError("one-sample test cannot compare two conditions");
            }
            r.p_adjusted = stats::bonferroni(r.p_value, family_size);
            const double ma = stats::mean(xa);
            const double mb = stats::mean(xb);
            rep.direction = ma > mb ? Direction::a_greater
                                    : (ma < mb ? Direction::b_greater : Direction::equal);
            rep.result = r;
        } catch (const Error& e) {
            rep.error = e.what();
        }
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<ChartBar> chart_data(std::span<const ConditionSummary> summaries) {
    std::vector<ChartBar> bars;
    const std::array<std::pair<Metric, const char*>, 3> series{{
        {Metric::L_H, "human"},
        {Metric::L_I, "team"},
        {Metric::L_AI, "ai"},
    }};
    for (const auto& s : summaries) {
        for (const auto& [metric, name] : series) {
            const auto& m = s.at(metric);
            if (!m.mean) continue;
            bars.push_back({s.condition_id + "/" + name, *m.mean, m.ci_lo.value_or(*m.mean),
                            m.ci_hi.value_or(*m.mean)});
        }
    }
    return bars;
}

namespace {

// ---- json ----------------------------------------------------------------

json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round_significant(v, 6);
}

json num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

std::optional<double> opt_num(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<double>();
}

json summary_json(const ConditionSummary& s) {
    json j;
    j["condition_id"] = s.condition_id;
    j["n_participants"] = s.n_participants;
    j["n_instances"] = s.n_instances ? json(*s.n_instances) : json(nullptr);
    j["ctp_rate"] = num(s.ctp_rate);
    j["pooled_realization_ratio"] = num(s.pooled_realization_ratio);
    json metrics = json::object();
    for (const auto& [m, v] : s.metrics) {
        metrics[to_string(m)] = {
            {"n", v.n},           {"mean", num(v.mean)},   {"sd", num(v.sd)},
            {"ci_lo", num(v.ci_lo)}, {"ci_hi", num(v.ci_hi)},
        };
    }
    j["metrics"] = std::move(metrics);
    return j;
}

ConditionSummary summary_from_json(const json& j) {
    ConditionSummary s;
    s.condition_id = j.at("condition_id").get<std::string>();
    s.n_participants = j.at("n_participants").get<std::size_t>();
    if (!j.at("n_instances").is_null()) s.n_instances = j.at("n_instances").get<std::size_t>();
    s.ctp_rate = j.at("ctp_rate").get<double>();
    s.pooled_realization_ratio = opt_num(j, "pooled_realization_ratio");
    const auto& metrics = j.at("metrics");
    for (Metric m : kAllMetrics) {
        const auto it = metrics.find(to_string(m));
        if (it == metrics.end()) continue;
        MetricSummary v;
        v.n = it->at("n").get<std::size_t>();
        v.mean = opt_num(*it, "mean");
        v.sd = opt_num(*it, "sd");
        v.ci_lo = opt_num(*it, "ci_lo");
        v.ci_hi = opt_num(*it, "ci_hi");
        s.metrics.emplace_back(m, v);
    }
    return s;
}

json comparison_json(const ComparisonReport& c) {
    json j;
    j["metric"] = to_string(c.metric);
    j["condition_a"] = c.condition_a;
    j["condition_b"] = c.condition_b;
    j["test"] = stats::to_string(c.test);
    j["family_size"] = c.family_size;
    j["direction"] = c.direction ? json(to_string(*c.direction)) : json(nullptr);
    j["error"] = c.error ? json(*c.error) : json(nullptr);
    if (c.result) {
        const auto& r = *c.result;
        j["result"] = {
            {"statistic", num(r.statistic)},
            {"p_value", num(r.p_value)},
            {"p_adjusted", num(r.p_adjusted)},
            {"effect_size_d", num(r.effect_size_d)},
            {"df", num(r.df)},
            {"n_a", r.n_a},
            {"n_b", r.n_b},
            {"exact", r.exact},
        };
    } else {
        j["result"] = nullptr;
    }
    return j;
}

Direction direction_from_string(const std::string& s) {
    if (s == "a_greater") return Direction::a_greater;
    if (s == "b_greater") return Direction::b_greater;
    if (s == "equal") return Direction::equal;
    throw ValidationError("unknown direction '" + s + "'");
}

ComparisonReport comparison_from_json(const json& j) {
    ComparisonReport c;
    c.metric = metric_from_string(j.at("metric").get<std::string>());
    c.condition_a = j.at("condition_a").get<std::string>();
    c.condition_b = j.at("condition_b").get<std::string>();
    c.test = stats::test_name_from_string(j.at("test").get<std::string>());
    c.family_size = j.at("family_size").get<int>();
    if (!j.at("direction").is_null()) {
        c.direction = direction_from_string(j.at("direction").get<std::string>());
    }
    if (!j.at("error").is_null()) c.error = j.at("error").get<std::string>();
    if (!j.at("result").is_null()) {
        const auto& r = j.at("result");
        stats::TestResult t;
        t.test_name = c.test;
        t.statistic = r.at("statistic").get<double>();
        t.p_value = r.at("p_value").get<double>();
        t.p_adjusted = opt_num(r, "p_adjusted");
        t.effect_size_d = opt_num(r, "effect_size_d");
        t.df = opt_num(r, "df");
        t.n_a = r.at("n_a").get<std::size_t>();
        t.n_b = r.at("n_b").get<std::size_t>();
        t.exact = r.at("exact").get<bool>();
        c.result = t;
    }
    return c;
}

constexpr std::array<ScenarioTag, 5> kTags{
    ScenarioTag::partial_inherent, ScenarioTag::full_inherent,
    ScenarioTag::negative_collaborative, ScenarioTag::positive_collaborative,
    ScenarioTag::neutral,
};

ScenarioTag tag_from_string(const std::string& s) {
    for (auto t : kTags) {
        if (s == to_string(t)) return t;
    }
    throw ValidationError("unknown scenario tag '" + s + "'");
}

std::array<std::size_t, 5> tag_counts(const InstanceEffectRow& row) {
    std::array<std::size_t, 5> counts{};
    for (const auto& t : row.tags) ++counts[static_cast<std::size_t>(t.tag)];
    return counts;
}

json instance_table_json(const ConditionInstanceTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json tags = json::array();
        for (const auto& pt : r.tags) {
            tags.push_back({{"participant_id", pt.participant_id}, {"tag", to_string(pt.tag)}});
        }
        json counts = json::object();
        const auto c = tag_counts(r);
        for (auto tag : kTags) counts[to_string(tag)] = c[static_cast<std::size_t>(tag)];
        rows.push_back({
            {"instance_id", r.instance_id},
            {"mean_l_H", num(r.mean_l_H)},
            {"mean_l_AI", num(r.mean_l_AI)},
            {"mean_l_I", num(r.mean_l_I)},
            {"positive_coll_flag", r.positive_coll_flag},
            {"tag_counts", std::move(counts)},
            {"tags", std::move(tags)},
        });
    }
    return {{"condition_id", t.condition_id}, {"rows", std::move(rows)}};
}

ConditionInstanceTable instance_table_from_json(const json& j) {
    ConditionInstanceTable t;
    t.condition_id = j.at("condition_id").get<std::string>();
    for (const auto& r : j.at("rows")) {
        InstanceEffectRow row;
        row.instance_id = r.at("instance_id").get<std::string>();
        row.mean_l_H = r.at("mean_l_H").get<double>();
        row.mean_l_AI = r.at("mean_l_AI").get<double>();
        row.mean_l_I = r.at("mean_l_I").get<double>();
        row.positive_coll_flag = r.at("positive_coll_flag").get<bool>();
        for (const auto& pt : r.at("tags")) {
            row.tags.push_back({pt.at("participant_id").get<std::string>(),
                                tag_from_string(pt.at("tag").get<std::string>())});
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string render_json(const ReportInput& in) {
    json j;
    j["summaries"] = json::array();
    for (const auto& s : in.summaries) j["summaries"].push_back(summary_json(s));
    j["comparisons"] = json::array();
    for (const auto& c : in.comparisons) j["comparisons"].push_back(comparison_json(c));
    j["instance_tables"] = json::array();
    for (const auto& t : in.instance_tables) j["instance_tables"].push_back(instance_table_json(t));
    j["chart"] = json::array();
    for (const auto& bar : chart_data(in.summaries)) {
        j["chart"].push_back({{"label", bar.label},
                              {"mean", num(bar.mean)},
                              {"ci_lo", num(bar.ci_lo)},
                              {"ci_hi", num(bar.ci_hi)}});
    }
    return j.dump(2) + "\n";
}

// ---- markdown ------------------------------------------------------------

std::string fmt(const std::optional<double>& v) { return v ? format_significant(*v) : "n/a"; }

std::string pct(double num, double den) {
    if (!(den > 0.0)) return "n/a";
    return format_significant(100.0 * num / den, 3) + "%";
}

const char* metric_label(Metric m) {
    switch (m) {
        case Metric::L_H: return "L_H (human)";
        case Metric::L_AI: return "L_AI (AI)";
        case Metric::L_I: return "L_I (team)";
        case Metric::cp: return "CP";
        case Metric::cp_inh: return "CP^inh";
        case Metric::cp_coll: return "CP^coll";
        case Metric::ce: return "CE";
        case Metric::ce_inh: return "CE^inh";
        case Metric::ce_coll: return "CE^coll";
        case Metric::realization_ratio: return "CE^inh / CP^inh";
    }
    return "?";
}

bool is_ratio(Metric m) { return m == Metric::realization_ratio; }

std::string render_markdown(const ReportInput& in, const RenderOptions& opt) {
    std::ostringstream md;
    md << "# Complementarity report\n\n";

    auto scaled = [&](const ConditionSummary& s, Metric m, const std::optional<double>& v)
        -> std::string {
        if (!v) return "n/a";
        if (opt.counts_view && s.n_instances && !is_ratio(m)) {
            return format_significant(*v * static_cast<double>(*s.n_instances));
        }
        return format_significant(*v);
    };

    md << "## Condition summaries\n\n";
    md << "| Condition | Participants | Instances | CTP rate |\n|---|---|---|---|\n";
    for (const auto& s : in.summaries) {
        md << "| " << s.condition_id << " | " << s.n_participants << " | "
           << (s.n_instances ? std::to_string(*s.n_instances) : "mixed") << " | "
           << format_significant(s.ctp_rate) << " |\n";
    }
    md << "\n";

    for (const auto& s : in.summaries) {
        md << "### " << s.condition_id;
        if (opt.counts_view && s.n_instances) md << " (instance counts, N = " << *s.n_instances << ")";
        md << "\n\n";
        md << "| Metric | Mean | SD | CI low | CI high | n |\n|---|---|---|---|---|---|\n";
        for (const auto& [m, v] : s.metrics) {
            md << "| " << metric_label(m) << " | " << scaled(s, m, v.mean) << " | "
               << scaled(s, m, v.sd) << " | " << scaled(s, m, v.ci_lo) << " | "
               << scaled(s, m, v.ci_hi) << " | " << v.n << " |\n";
        }
        md << "\n";

        const double cp = s.at(Metric::cp).mean.value_or(0.0);
        const double cp_inh = s.at(Metric::cp_inh).mean.value_or(0.0);
        const double cp_coll = s.at(Metric::cp_coll).mean.value_or(0.0);
        const double ce = s.at(Metric::ce).mean.value_or(0.0);
        const double ce_inh = s.at(Metric::ce_inh).mean.value_or(0.0);
        const double ce_coll = s.at(Metric::ce_coll).mean.value_or(0.0);
        md << "#### Decomposition\n\n";
        md << "| Component | Value | Share |\n|---|---|---|\n";
        md << "| CP | " << scaled(s, Metric::cp, cp) << " | 100% of CP |\n";
        md << "| CP^inh | " << scaled(s, Metric::cp_inh, cp_inh) << " | " << pct(cp_inh, cp)
           << " of CP |\n";
        md << "| CP^coll | " << scaled(s, Metric::cp_coll, cp_coll) << " | " << pct(cp_coll, cp)
           << " of CP |\n";
        md << "| CE | " << scaled(s, Metric::ce, ce) << " | " << pct(ce, cp)
           << " of CP realized |\n";
        md << "| CE^inh | " << scaled(s, Metric::ce_inh, ce_inh) << " | " << pct(ce_inh, cp_inh)
           << " of CP^inh realized |\n";
        md << "| CE^coll | " << scaled(s, Metric::ce_coll, ce_coll) << " | "
           << pct(ce_coll, cp_coll) << " of CP^coll realized |\n";
        md << "\nMean per-participant realization ratio: "
           << fmt(s.at(Metric::realization_ratio).mean)
           << "; pooled (mean CE^inh / mean CP^inh): " << fmt(s.pooled_realization_ratio)
           << "\n\n";
    }

    if (!in.comparisons.empty()) {
        md << "## Comparisons\n\n";
        md << "| Metric | A | B | Test | Statistic | p | p adjusted | Family | d | Direction |\n"
              "|---|---|---|---|---|---|---|---|---|---|\n";
        for (const auto& c : in.comparisons) {
            md << "| " << metric_label(c.metric) << " | " << c.condition_a << " | "
               << c.condition_b << " | " << stats::to_string(c.test) << " | ";
            if (c.result) {
                const auto& r = *c.result;
                md << format_significant(r.statistic) << " | " << format_significant(r.p_value)
                   << " | " << fmt(r.p_adjusted) << " | " << c.family_size << " | "
                   << fmt(r.effect_size_d) << " | "
                   << (c.direction ? to_string(*c.direction) : "n/a") << " |\n";
            } else {
                md << "error: " << c.error.value_or("unknown") << " | | | " << c.family_size
                   << " | | |\n";
            }
        }
        md << "\n";
    }

    for (const auto& t : in.instance_tables) {
        md << "## Per-instance effects: " << t.condition_id << "\n\n";
        md << "| Instance | mean l_H | mean l_AI | mean l_I | partial inh. | full inh. | "
              "neg. coll. | pos. coll. | neutral | team beats both |\n"
              "|---|---|---|---|---|---|---|---|---|---|\n";
        for (const auto& r : t.rows) {
            const auto c = tag_counts(r);
            md << "| " << r.instance_id << " | " << format_significant(r.mean_l_H) << " | "
               << format_significant(r.mean_l_AI) << " | " << format_significant(r.mean_l_I);
            for (auto n : c) md << " | " << n;
            md << " | " << (r.positive_coll_flag ? "yes" : "no") << " |\n";
        }
        md << "\n";
    }
    return md.str();
}

// ---- csv bundle ----------------------------------------------------------

std::string cell(const std::optional<double>& v) { return v ? format_significant(*v) : ""; }

Document render_csv_bundle(const ReportInput& in) {
    Document doc;
    {
        std::ostringstream os;
        os << "condition_id,n_participants,n_instances,ctp_rate,pooled_realization_ratio\n";
        for (const auto& s : in.summaries) {
            os << csv_field(s.condition_id) << ',' << s.n_participants << ','
               << (s.n_instances ? std::to_string(*s.n_instances) : "") << ','
               << format_significant(s.ctp_rate) << ',' << cell(s.pooled_realization_ratio)
               << '\n';
        }
        doc.files.push_back({"conditions.csv", os.str()});
    }
    {
        std::ostringstream os;
        os << "condition_id,metric,n,mean,sd,ci_lo,ci_hi\n";
        for (const auto& s : in.summaries) {
            for (const auto& [m, v] : s.metrics) {
                os << csv_field(s.condition_id) << ',' << to_string(m) << ',' << v.n << ','
                   << cell(v.mean) << ',' << cell(v.sd) << ',' << cell(v.ci_lo) << ','
                   << cell(v.ci_hi) << '\n';
            }
        }
        doc.files.push_back({"summaries.csv", os.str()});
    }
    {
        std::ostringstream os;
        os << "metric,condition_a,condition_b,test,family_size,statistic,p_value,p_adjusted,"
              "effect_size_d,df,n_a,n_b,exact,direction,error\n";
        for (const auto& c : in.comparisons) {
            os << to_string(c.metric) << ',' << csv_field(c.condition_a) << ','
               << csv_field(c.condition_b) << ',' << stats::to_string(c.test) << ','
               << c.family_size << ',';
            if (c.result) {
                const auto& r = *c.result;
                os << format_significant(r.statistic) << ',' << format_significant(r.p_value)
                   << ',' << cell(r.p_adjusted) << ',' << cell(r.effect_size_d) << ','
                   << cell(r.df) << ',' << r.n_a << ',' << r.n_b << ','
                   << (r.exact ? "true" : "false") << ',';
            } else {
                os << ",,,,,,,,";
            }
            os << (c.direction ? to_string(*c.direction) : "") << ','
               << csv_field(c.error.value_or("")) << '\n';
        }
        doc.files.push_back({"comparisons.csv", os.str()});
    }
    {
        std::ostringstream rows;
        std::ostringstream tags;
        rows << "condition_id,instance_id,mean_l_H,mean_l_AI,mean_l_I,positive_coll_flag";
        for (auto t : kTags) rows << ",n_" << to_string(t);
        rows << '\n';
        tags << "condition_id,instance_id,participant_id,tag\n";
        for (const auto& t : in.instance_tables) {
            for (const auto& r : t.rows) {
                rows << csv_field(t.condition_id) << ',' << csv_field(r.instance_id) << ','
                     << format_significant(r.mean_l_H) << ',' << format_significant(r.mean_l_AI)
                     << ',' << format_significant(r.mean_l_I) << ','
                     << (r.positive_coll_flag ? "true" : "false");
                for (auto n : tag_counts(r)) rows << ',' << n;
                rows << '\n';
                for (const auto& pt : r.tags) {
                    tags << csv_field(t.condition_id) << ',' << csv_field(r.instance_id) << ','
                         << csv_field(pt.participant_id) << ',' << to_string(pt.tag) << '\n';
                }
            }
        }
        doc.files.push_back({"instances.csv", rows.str()});
        doc.files.push_back({"instance_tags.csv", tags.str()});
    }
    {
        std::ostringstream os;
        os << "label,mean,ci_lo,ci_hi\n";
        json chart = json::array();
        for (const auto& bar : chart_data(in.summaries)) {
            os << csv_field(bar.label) << ',' << format_significant(bar.mean) << ','
               << format_significant(bar.ci_lo) << ',' << format_significant(bar.ci_hi) << '\n';
            chart.push_back({{"label", bar.label},
                             {"mean", num(bar.mean)},
                             {"ci_lo", num(bar.ci_lo)},
                             {"ci_hi", num(bar.ci_hi)}});
        }
        doc.files.push_back({"chart.csv", os.str()});
        doc.files.push_back({"chart.json", chart.dump(2) + "\n"});
    }
    return doc;
}

}  // namespace

Document render(const ReportInput& input, const RenderOptions& options) {
    switch (options.format) {
        case Format::json: return {{{"report.json", render_json(input)}}};
        case Format::markdown: return {{{"report.md", render_markdown(input, options)}}};
        case Format::csv_bundle: return render_csv_bundle(input);
    }
    return {};
}

ReportInput parse_json(const std::string& text) {
    ReportInput in;
    try {
        const auto j = json::parse(text);
        for (const auto& s : j.at("summaries")) in.summaries.push_back(summary_from_json(s));
        for (const auto& c : j.at("comparisons")) in.comparisons.push_back(comparison_from_json(c));
        for (const auto& t : j.at("instance_tables")) {
            in.instance_tables.push_back(instance_table_from_json(t));
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("report json: ") + e.what());
    }
    return in;
}

}  // namespace hacomp::report
