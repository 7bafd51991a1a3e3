#include "hacomp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "hacomp/error.hpp"
#include "hacomp/example.hpp"
#include "hacomp/format.hpp"
#include "hacomp/ids.hpp"
#include "hacomp/ingest.hpp"
#include "hacomp/metrics.hpp"
#include "hacomp/report.hpp"
#include "hacomp/simulate.hpp"
#include "hacomp/stats.hpp"

namespace hacomp::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kOutputDirEnv = "HACOMP_OUTPUT_DIR";

struct Streams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

struct AnalyzeArgs {
    std::vector<std::string> inputs;
    std::string schema_path;
    std::string task;
    std::string log_format = "csv";
    std::string labels;
    std::string loss;
    double max_value = 0.0;
    double mad_threshold = 3.0;
    std::string mad_target = "team_loss";
    std::string condition_a;
    std::string condition_b;
    int family_size = 0;
    std::string format = "json";
    std::string output;
    std::string report_out;
    std::string ci = "t";
    std::uint64_t seed = 0;
    bool counts_view = false;
    bool no_instance_tables = false;
    unsigned threads = 0;
};

struct SimulateArgs {
    std::string task = "regression";
    int participants = 50;
    int instances = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    double truth_min = 195'000.0;
    double truth_max = 2'000'000.0;
    double truth_mean = 703'120.0;
    double ai_mae = 163'080.0;
    double human_mae = 251'282.0;
    double uhci_human_mae = 0.0;
    std::string integration = "convex_blend";
    double ai_weight = 0.5;
    double concentration = 4.0;
    int classes = 16;
    double ai_error = 0.2666;
    double human_error = 0.30;
    double overlap = 0.6667;
    double p_adopt = 0.5;
    double difficulty_coupling = 0.0;
    std::string condition_id;
    std::string log_format = "csv";
    std::string output;
    std::string schema_out;
};

struct PowerArgs {
    double d = 0.8;
    double alpha = 0.05;
    double power = 0.8;
    int comparisons = 1;
    std::string design = "two_sample";
    std::string model = "noncentral_t";
    double are = stats::kMinAre;
    std::string format = "text";
};

struct ExampleArgs {
    std::string format = "text";
};

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

std::optional<std::string> output_dir_from_env() {
    const char* v = std::getenv(kOutputDirEnv);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw IoError("cannot read '" + path + "'");
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + path.string() + "'");
    f << content;
    f.flush();
    if (!f) throw IoError("cannot write '" + path.string() + "'");
}

// Single-file documents go to `output`, else into the env directory, else stdout.
void emit(const report::Document& doc, bool bundle, const std::string& output, std::ostream& out) {
    if (bundle) {
        fs::path dir = output.empty() ? fs::path(*output_dir_from_env()) : fs::path(output);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
        for (const auto& f : doc.files) write_file(dir / f.name, f.content);
        return;
    }
    const auto& file = doc.files.front();
    if (!output.empty() && output != "-") {
        write_file(output, file.content);
    } else if (const auto dir = output_dir_from_env(); output.empty() && dir) {
        write_file(fs::path(*dir) / file.name, file.content);
    } else {
        out << file.content;
    }
}

std::vector<std::string> split_labels(const std::string& s) {
    std::vector<std::string> labels;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, ',')) {
        if (!cur.empty()) labels.push_back(cur);
    }
    return labels;
}

// ---- analyze ---------------------------------------------------------------

ingest::LogSchema analyze_schema(const AnalyzeArgs& a, const CLI::App& cmd) {
    ingest::LogSchema schema;
    if (!a.schema_path.empty()) {
        try {
            schema = ingest::schema_from_json(json::parse(read_file(a.schema_path)));
        } catch (const json::exception& e) {
            throw ValidationError("schema '" + a.schema_path + "': " + e.what());
        }
        if (cmd.count("--log-format") > 0) schema.format = ingest::log_format_from_string(a.log_format);
        if (cmd.count("--task") > 0) schema.task_kind = ingest::task_kind_from_string(a.task);
        if (cmd.count("--labels") > 0) schema.label_set = split_labels(a.labels);
    } else {
        schema.format = ingest::log_format_from_string(a.log_format);
        schema.task_kind = ingest::task_kind_from_string(a.task);
        if (!a.labels.empty()) schema.label_set = split_labels(a.labels);
    }
    if (!a.loss.empty() && loss_kind_from_string(a.loss) != schema.loss_kind()) {
        throw ValidationError(std::string("--loss ") + a.loss + " does not fit a " +
                              ingest::to_string(schema.task_kind) + " task");
    }
    schema.validate();
    return schema;
}

void validate_analyze(const AnalyzeArgs& a, const CLI::App& cmd) {
    if (a.inputs.empty()) throw ValidationError("analyze: no input given (use '-' for stdin)");
    if (a.schema_path.empty() && a.task.empty()) {
        throw ValidationError("analyze: either --schema or --task is required");
    }
    if (a.condition_a.empty() != a.condition_b.empty()) {
        throw ValidationError("analyze: --condition-a and --condition-b go together");
    }
    if (!a.condition_a.empty() && a.condition_a == a.condition_b) {
        throw ValidationError("analyze: the two conditions must differ");
    }
    if (cmd.count("--family-size") > 0 && a.family_size < 1) {
        throw ValidationError("analyze: --family-size must be >= 1");
    }
    if (a.format == "csv" && a.output.empty() && !output_dir_from_env()) {
        throw ValidationError(std::string("analyze: csv output needs --output <dir> or ") +
                              kOutputDirEnv);
    }
    if (std::count(a.inputs.begin(), a.inputs.end(), "-") > 1) {
        throw ValidationError("analyze: stdin ('-') can be read only once");
    }
    if (cmd.count("--mad-threshold") > 0 && !(a.mad_threshold > 0.0)) {
        throw ValidationError("analyze: --mad-threshold must be > 0");
    }
}

int analyze(const AnalyzeArgs& a, const CLI::App& cmd, bool quiet, bool verbose, Streams io) {
    validate_analyze(a, cmd);
    const auto schema = analyze_schema(a, cmd);
    const LossKind kind = schema.loss_kind();

    std::vector<DecisionRecord> records;
    ingest::ValidationReport vr;
    for (const auto& path : a.inputs) {
        ingest::ParseResult parsed;
        if (path == "-") {
            parsed = ingest::parse_log(io.in, schema);
        } else {
            std::ifstream f(path, std::ios::binary);
            if (!f) throw IoError("cannot open input '" + path + "'");
            parsed = ingest::parse_log(f, schema);
        }
        vr.total_rows += parsed.report.total_rows;
        vr.accepted_count += parsed.report.accepted_count;
        for (auto& r : parsed.report.rejected) {
            if (a.inputs.size() > 1) r.detail = path + ": " + r.detail;
            vr.rejected.push_back(std::move(r));
        }
        records.insert(records.end(), std::make_move_iterator(parsed.records.begin()),
                       std::make_move_iterator(parsed.records.end()));
    }
    if (records.empty()) throw ValidationError("empty dataset: no valid rows in the input");

    if (cmd.count("--max-value") > 0 || cmd.count("--mad-threshold") > 0) {
        ingest::ScreeningOptions so;
        if (cmd.count("--max-value") > 0) so.max_value = a.max_value;
        if (cmd.count("--mad-threshold") > 0) so.mad_threshold = a.mad_threshold;
        so.mad_target = a.mad_target == "raw_prediction" ? ingest::MadTarget::raw_prediction
                                                         : ingest::MadTarget::team_loss;
        auto screened = ingest::screen_participants(records, kind, so);
        vr.screened_rows = screened.report.screened_rows;
        vr.accepted_count -= screened.report.screened_rows;
        vr.dropped = std::move(screened.report.dropped);
        for (auto& w : screened.report.warnings) vr.warnings.push_back(std::move(w));
        records = std::move(screened.records);
        if (records.empty()) throw ValidationError("empty dataset: every participant was screened out");
    }
    ingest::sort_records(records);
    for (auto& w : ingest::dataset_warnings(records)) vr.warnings.push_back(std::move(w));

    if (!a.report_out.empty()) write_file(a.report_out, ingest::report_to_json(vr).dump(2) + "\n");
    if (!quiet) {
        io.err << "rows: " << vr.total_rows << " total, " << vr.accepted_count << " accepted, "
               << vr.rejected.size() << " rejected, " << vr.screened_rows << " screened\n";
        for (const auto& w : vr.warnings) io.err << "warning: " << w << "\n";
        if (verbose) {
            for (const auto& r : vr.rejected) {
                io.err << "rejected row " << r.row << " (" << ingest::to_string(r.reason)
                       << "): " << r.detail << "\n";
            }
            for (const auto& d : vr.dropped) {
                io.err << "dropped participant " << d.participant_id << " (" << d.rule
                       << "): " << d.detail << "\n";
            }
        }
    }

    auto profiles = build_profiles(records, kind).profiles;
    std::map<std::string, std::vector<ParticipantProfile>, NaturalLess> by_condition;
    for (auto& p : profiles) by_condition[p.condition_id()].push_back(std::move(p));

    const unsigned threads = resolve_threads(a.threads);
    report::SummaryOptions so;
    so.ci_method = a.ci == "bootstrap" ? report::CiMethod::bootstrap : report::CiMethod::t;
    so.bootstrap_seed = a.seed;

    report::ReportInput input;
    std::map<std::string, std::vector<ComplementarityBreakdown>, NaturalLess> breakdowns;
    for (const auto& [cid, ps] : by_condition) {
        auto b = breakdown_all(ps, threads);
        input.summaries.push_back(report::summarize_condition(b, so));
        breakdowns.emplace(cid, std::move(b));
        if (!a.no_instance_tables) {
            try {
                input.instance_tables.push_back({cid, per_instance_table(ps)});
            } catch (const ValidationError& e) {
                if (!quiet) {
                    io.err << "warning: per-instance table skipped for condition '" << cid
                           << "': " << e.what() << "\n";
                }
            }
        }
    }

    std::string ca = a.condition_a;
    std::string cb = a.condition_b;
    if (ca.empty() && breakdowns.size() == 2) {
        ca = breakdowns.begin()->first;
        cb = std::next(breakdowns.begin())->first;
    }
    if (!ca.empty()) {
        for (const auto& c : {ca, cb}) {
            if (!breakdowns.contains(c)) throw ValidationError("unknown condition '" + c + "'");
        }
        const auto plan = report::default_comparison_plan();
        const int family = a.family_size > 0 ? a.family_size : static_cast<int>(plan.size());
        input.comparisons = report::compare_conditions(breakdowns.at(ca), breakdowns.at(cb), plan,
                                                       family);
    }

    report::RenderOptions ro;
    ro.format = report::format_from_string(a.format);
    ro.counts_view = a.counts_view;
    emit(report::render(input, ro), ro.format == report::Format::csv_bundle, a.output, io.out);
    return kExitOk;
}

// ---- simulate --------------------------------------------------------------

int simulate(const SimulateArgs& a, const CLI::App& cmd, Streams io) {
    ingest::LogSchema schema;
    schema.format = ingest::log_format_from_string(a.log_format);
    std::vector<DecisionRecord> records;
    if (a.task == "regression") {
        sim::RegressionScenario s;
        s.n_participants = a.participants;
        if (a.instances > 0) s.n_instances = a.instances;
        s.truth_min = a.truth_min;
        s.truth_max = a.truth_max;
        s.truth_mean = a.truth_mean;
        s.ai_mae_target = a.ai_mae;
        s.human_mae_target = a.human_mae;
        if (cmd.count("--uhci-human-mae") > 0) s.uhci_human_mae_target = a.uhci_human_mae;
        s.integration.kind = a.integration == "pick_one" ? sim::IntegrationKind::pick_one
                                                         : sim::IntegrationKind::convex_blend;
        s.integration.ai_weight_mean = a.ai_weight;
        s.integration.concentration = a.concentration;
        s.seed = a.seed;
        s.threads = resolve_threads(a.threads);
        if (!a.condition_id.empty()) s.condition_id = a.condition_id;
        s.validate();
        schema.task_kind = ingest::TaskKind::regression;
        records = sim::simulate_regression_team(s);
    } else {
        sim::ClassificationScenario s;
        s.n_participants = a.participants;
        if (a.instances > 0) s.n_instances = a.instances;
        s.n_classes = a.classes;
        s.ai_error_target = a.ai_error;
        s.human_error_target = a.human_error;
        s.error_overlap = a.overlap;
        s.reliance.p_adopt_when_disagree = a.p_adopt;
        s.reliance.difficulty_coupling = a.difficulty_coupling;
        s.seed = a.seed;
        s.threads = resolve_threads(a.threads);
        if (!a.condition_id.empty()) s.condition_id = a.condition_id;
        s.validate();
        schema.task_kind = ingest::TaskKind::classification;
        schema.label_set = sim::class_labels(s.n_classes);
        records = sim::simulate_classification_team(s);
    }

    std::ostringstream log;
    ingest::write_log(log, records, schema);
    report::Document doc;
    doc.files.push_back({schema.format == ingest::LogFormat::csv ? "simulated.csv"
                                                                 : "simulated.jsonl",
                         log.str()});
    emit(doc, false, a.output, io.out);
    if (!a.schema_out.empty()) {
        write_file(a.schema_out, ingest::schema_to_json(schema).dump(2) + "\n");
    }
    return kExitOk;
}

// ---- power -----------------------------------------------------------------

int power(const PowerArgs& a, Streams io) {
    stats::PowerRequest req;
    req.d = a.d;
    req.alpha = a.alpha;
    req.power = a.power;
    req.comparisons = a.comparisons;
    req.design = a.design == "one_sample"     ? stats::PowerDesign::one_sample
                 : a.design == "mann_whitney" ? stats::PowerDesign::mann_whitney
                                              : stats::PowerDesign::two_sample;
    req.model = a.model == "normal" ? stats::PowerModel::normal : stats::PowerModel::noncentral_t;
    req.are = a.are;
    const auto r = stats::sample_size(req);
    const double alpha_adj = req.alpha / req.comparisons;
    if (a.format == "json") {
        json j = {
            {"d", round_significant(req.d)},
            {"alpha", round_significant(req.alpha)},
            {"alpha_per_test", round_significant(alpha_adj)},
            {"power", round_significant(req.power)},
            {"comparisons", req.comparisons},
            {"design", a.design},
            {"model", a.model},
            {"per_group", r.per_group},
            {"total", r.total},
            {"achieved_power", round_significant(r.achieved_power)},
        };
        io.out << j.dump(2) << "\n";
    } else {
        io.out << "design: " << a.design << " (" << a.model << ")\n"
               << "alpha per test: " << format_significant(alpha_adj) << "\n"
               << "per_group: " << r.per_group << "\n"
               << "total: " << r.total << "\n"
               << "achieved_power: " << format_significant(r.achieved_power, 4) << "\n";
    }
    return kExitOk;
}

// ---- example ---------------------------------------------------------------

std::string as_count(double v, std::size_t n) {
    return std::to_string(std::lround(v * static_cast<double>(n))) + "/" + std::to_string(n);
}

int example(const ExampleArgs& a, Streams io) {
    const auto profile = worked_example_profile();
    const auto b = breakdown(profile);
    const std::size_t n = profile.size();
    const std::vector<ComplementarityBreakdown> bs{b};

    report::ReportInput input;
    input.summaries.push_back(report::summarize_condition(bs));
    input.instance_tables.push_back(
        {profile.condition_id(), per_instance_table(std::span(&profile, 1))});

    if (a.format == "json") {
        emit(report::render(input, {report::Format::json, false}), false, "", io.out);
        return kExitOk;
    }
    const long ce = std::lround(b.ce * static_cast<double>(n));
    const long cp = std::lround(b.cp * static_cast<double>(n));
    io.out << "instances: " << n << "\n"
           << "t_star=" << to_string(b.t_star) << "\n"
           << "ctp=" << (b.ctp ? "true" : "false") << "\n"
           << "L_H=" << as_count(b.L_H, n) << " L_AI=" << as_count(b.L_AI, n)
           << " L_I=" << as_count(b.L_I, n) << "\n"
           << "cp=" << as_count(b.cp, n) << " cp_inh=" << as_count(b.cp_inh, n)
           << " cp_coll=" << as_count(b.cp_coll, n) << "\n"
           << "ce=" << as_count(b.ce, n) << " ce_inh=" << as_count(b.ce_inh, n)
           << " ce_coll=" << as_count(b.ce_coll, n) << "\n"
           << "ce/cp=" << ce << "/" << cp << " ("
           << std::lround(100.0 * static_cast<double>(ce) / static_cast<double>(cp)) << "%)\n";
    if (a.format == "markdown") {
        io.out << "\n";
        emit(report::render(input, {report::Format::markdown, true}), false, "", io.out);
    }
    return kExitOk;
}

// ---- config file -----------------------------------------------------------

std::string config_scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return v.dump();
    if (v.is_number()) return format_shortest(v.get<double>());
    if (v.is_array()) {
        std::string joined;
        for (const auto& x : v) {
            if (!joined.empty()) joined += ",";
            joined += config_scalar(x);
        }
        return joined;
    }
    throw ValidationError("config: unsupported value " + v.dump());
}

struct ConfigArgs {
    std::vector<std::string> options;
    std::vector<std::string> inputs;
};

// Turns {"seed": 7, "counts-view": true, "inputs": [...]} into flags.
ConfigArgs config_args(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ValidationError("config '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ValidationError("config '" + path + "': expected a json object");
    ConfigArgs out;
    for (const auto& [key, value] : j.items()) {
        std::string flag = key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (flag == "inputs") {
            if (!value.is_array()) throw ValidationError("config: 'inputs' must be an array");
            for (const auto& x : value) out.inputs.push_back(config_scalar(x));
        } else if (value.is_boolean()) {
            if (value.get<bool>()) out.options.push_back("--" + flag);
        } else if (!value.is_null()) {
            out.options.push_back("--" + flag + "=" + config_scalar(value));
        }
    }
    return out;
}

std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return std::nullopt;
}

void write_error(std::ostream& err, bool as_json, const char* kind, const std::string& message,
                 int code) {
    if (as_json) {
        json j = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
        err << j.dump() << "\n";
    } else {
        err << "hacomp: " << kind << " error: " << message << "\n";
    }
}

int dispatch(std::vector<std::string> args, Streams io) {
    CLI::App app{"Human-AI complementarity analysis", "hacomp"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    bool error_json = false;
    bool quiet = false;
    bool verbose = false;
    app.add_option("--config", config_path, "JSON file with default flag values");
    app.add_flag("--error-json", error_json, "Print failures as a JSON object on stderr");
    app.add_flag("-q,--quiet", quiet, "Suppress warnings and row counts");
    app.add_flag("-v,--verbose", verbose, "List rejected rows and dropped participants");

    AnalyzeArgs an;
    auto* ac = app.add_subcommand("analyze", "Compute complementarity metrics from decision logs");
    ac->add_option("inputs", an.inputs, "Log files, '-' for stdin")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    ac->add_option("--schema", an.schema_path, "Log schema JSON");
    ac->add_option("--task", an.task, "regression or classification")
        ->check(CLI::IsMember({"regression", "classification"}));
    ac->add_option("--log-format", an.log_format)->check(CLI::IsMember({"csv", "jsonl"}));
    ac->add_option("--labels", an.labels, "Comma-separated label set");
    ac->add_option("--loss", an.loss, "absolute_error or zero_one")
        ->check(CLI::IsMember({"absolute_error", "zero_one", "mae", "classification_error"}));
    ac->add_option("--max-value", an.max_value, "Drop participants entering a larger value");
    ac->add_option("--mad-threshold", an.mad_threshold, "Drop MAD outliers per condition");
    ac->add_option("--mad-target", an.mad_target)
        ->check(CLI::IsMember({"team_loss", "raw_prediction"}));
    ac->add_option("--condition-a", an.condition_a);
    ac->add_option("--condition-b", an.condition_b);
    ac->add_option("--family-size", an.family_size, "Bonferroni family size");
    ac->add_option("--format", an.format)->check(CLI::IsMember({"json", "markdown", "csv"}));
    ac->add_option("-o,--output", an.output, "Output file (directory for csv)");
    ac->add_option("--report-out", an.report_out, "Write the validation report JSON here");
    ac->add_option("--ci", an.ci)->check(CLI::IsMember({"t", "bootstrap"}));
    ac->add_option("--seed", an.seed, "Bootstrap seed");
    ac->add_flag("--counts-view", an.counts_view, "Markdown metrics as instance counts");
    ac->add_flag("--no-instance-tables", an.no_instance_tables);
    ac->add_option("--threads", an.threads);

    SimulateArgs sa;
    auto* sc = app.add_subcommand("simulate", "Write a synthetic human-AI team decision log");
    sc->add_option("--task", sa.task)->check(CLI::IsMember({"regression", "classification"}));
    sc->add_option("--participants", sa.participants);
    sc->add_option("--instances", sa.instances);
    sc->add_option("--seed", sa.seed);
    sc->add_option("--threads", sa.threads);
    sc->add_option("--truth-min", sa.truth_min);
    sc->add_option("--truth-max", sa.truth_max);
    sc->add_option("--truth-mean", sa.truth_mean);
    sc->add_option("--ai-mae", sa.ai_mae);
    sc->add_option("--human-mae", sa.human_mae);
    sc->add_option("--uhci-human-mae", sa.uhci_human_mae,
                   "Also emit a paired condition at this human MAE");
    sc->add_option("--integration", sa.integration)
        ->check(CLI::IsMember({"convex_blend", "pick_one"}));
    sc->add_option("--ai-weight", sa.ai_weight);
    sc->add_option("--concentration", sa.concentration);
    sc->add_option("--classes", sa.classes);
    sc->add_option("--ai-error", sa.ai_error);
    sc->add_option("--human-error", sa.human_error);
    sc->add_option("--overlap", sa.overlap, "P(AI errs | human errs)");
    sc->add_option("--p-adopt", sa.p_adopt);
    sc->add_option("--difficulty-coupling", sa.difficulty_coupling);
    sc->add_option("--condition-id", sa.condition_id);
    sc->add_option("--log-format", sa.log_format)->check(CLI::IsMember({"csv", "jsonl"}));
    sc->add_option("-o,--output", sa.output);
    sc->add_option("--schema-out", sa.schema_out, "Write the matching schema JSON here");

    PowerArgs pa;
    auto* pc = app.add_subcommand("power", "Sample size for a target power");
    pc->add_option("--d", pa.d, "Cohen's d");
    pc->add_option("--alpha", pa.alpha);
    pc->add_option("--power", pa.power);
    pc->add_option("--comparisons", pa.comparisons, "Bonferroni family size");
    pc->add_option("--design", pa.design)
        ->check(CLI::IsMember({"two_sample", "one_sample", "mann_whitney"}));
    pc->add_option("--model", pa.model)->check(CLI::IsMember({"noncentral_t", "normal"}));
    pc->add_option("--are", pa.are, "Relative efficiency for the mann_whitney design");
    pc->add_option("--format", pa.format)->check(CLI::IsMember({"text", "json"}));

    ExampleArgs ea;
    auto* ec = app.add_subcommand("example", "Print the 25-instance illustration breakdown");
    ec->add_option("--format", ea.format)->check(CLI::IsMember({"text", "markdown", "json"}));

    std::vector<std::string> config_inputs;
    if (const auto path = find_config_path(args)) {
        auto cfg = config_args(*path);
        config_inputs = std::move(cfg.inputs);
        const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& s) {
            return s == "analyze" || s == "simulate" || s == "power" || s == "example";
        });
        if (sub != args.end()) args.insert(sub + 1, cfg.options.begin(), cfg.options.end());
    }

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, io.out, io.err);
            return kExitOk;
        }
        throw ValidationError(e.what());
    }

    if (ac->parsed()) {
        if (an.inputs.empty()) an.inputs = config_inputs;
        return analyze(an, *ac, quiet, verbose, io);
    }
    if (sc->parsed()) return simulate(sa, *sc, io);
    if (pc->parsed()) return power(pa, io);
    return example(ea, io);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    const bool error_json = std::find(args.begin(), args.end(), "--error-json") != args.end();
    try {
        return dispatch(args, {in, out, err});
    } catch (const IoError& e) {
        write_error(err, error_json, e.kind(), e.what(), kExitIo);
        return kExitIo;
    } catch (const Error& e) {
        write_error(err, error_json, e.kind(), e.what(), kExitValidation);
        return kExitValidation;
    } catch (const json::exception& e) {
        write_error(err, error_json, "validation", e.what(), kExitValidation);
        return kExitValidation;
    } catch (const std::exception& e) {
        write_error(err, error_json, "internal", e.what(), kExitValidation);
        return kExitValidation;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cin, std::cout, std::cerr);
}

}  // namespace hacomp::cli
