#include "hacomp/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "hacomp/error.hpp"
#include "hacomp/format.hpp"
#include "hacomp/ids.hpp"
#include "hacomp/stats.hpp"

namespace hacomp::ingest {

using nlohmann::json;

const char* to_string(LogFormat f) { return f == LogFormat::csv ? "csv" : "json_lines"; }

LogFormat log_format_from_string(const std::string& s) {
    if (s == "csv") return LogFormat::csv;
    if (s == "json_lines" || s == "jsonl" || s == "json-lines") return LogFormat::json_lines;
    throw ValidationError("unknown log format '" + s + "'");
}

const char* to_string(TaskKind k) {
    return k == TaskKind::regression ? "regression" : "classification";
}

TaskKind task_kind_from_string(const std::string& s) {
    if (s == "regression") return TaskKind::regression;
    if (s == "classification") return TaskKind::classification;
    throw ValidationError("unknown task kind '" + s + "'");
}

const char* to_string(RejectReason r) {
    switch (r) {
        case RejectReason::missing_field: return "missing_field";
        case RejectReason::bad_number: return "bad_number";
        case RejectReason::unknown_label: return "unknown_label";
        case RejectReason::duplicate_key: return "duplicate_key";
        case RejectReason::out_of_range: return "out_of_range";
        case RejectReason::malformed_row: return "malformed_row";
    }
    return "unknown";
}

void LogSchema::validate() const {
    const std::vector<std::string> names{fields.participant_id, fields.condition_id,
                                         fields.instance_id,    fields.truth,
                                         fields.human,          fields.ai,
                                         fields.team};
    std::set<std::string> unique;
    for (const auto& n : names) {
        if (n.empty()) throw ValidationError("schema: field names must be non-empty");
        if (!unique.insert(n).second) {
            throw ValidationError("schema: field name '" + n + "' is used twice");
        }
    }
    if (task_kind == TaskKind::classification) {
        if (!label_set || label_set->empty()) {
            throw ValidationError("schema: classification requires a non-empty label_set");
        }
        std::set<std::string> labels(label_set->begin(), label_set->end());
        if (labels.size() != label_set->size()) {
            throw ValidationError("schema: label_set contains duplicates");
        }
    } else if (label_set) {
        throw ValidationError("schema: label_set is only allowed for classification");
    }
}

LossKind LogSchema::loss_kind() const {
    return task_kind == TaskKind::regression ? LossKind::absolute_error : LossKind::zero_one;
}

LogSchema schema_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("schema: expected a json object");
    LogSchema s;
    try {
        if (j.contains("format")) s.format = log_format_from_string(j.at("format").get<std::string>());
        if (j.contains("task_kind")) {
            s.task_kind = task_kind_from_string(j.at("task_kind").get<std::string>());
        }
        if (j.contains("fields")) {
            const auto& f = j.at("fields");
            auto take = [&](const char* key, std::string& dst) {
                if (f.contains(key)) dst = f.at(key).get<std::string>();
            };
            take("participant_id", s.fields.participant_id);
            take("condition_id", s.fields.condition_id);
            take("instance_id", s.fields.instance_id);
            take("truth", s.fields.truth);
            take("human", s.fields.human);
            take("ai", s.fields.ai);
            take("team", s.fields.team);
        }
        if (j.contains("label_set") && !j.at("label_set").is_null()) {
            s.label_set = j.at("label_set").get<std::vector<std::string>>();
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("schema: ") + e.what());
    }
    s.validate();
    return s;
}

json schema_to_json(const LogSchema& s) {
    json j;
    j["format"] = to_string(s.format);
    j["task_kind"] = to_string(s.task_kind);
    j["fields"] = {
        {"participant_id", s.fields.participant_id},
        {"condition_id", s.fields.condition_id},
        {"instance_id", s.fields.instance_id},
        {"truth", s.fields.truth},
        {"human", s.fields.human},
        {"ai", s.fields.ai},
        {"team", s.fields.team},
    };
    if (s.label_set) j["label_set"] = *s.label_set;
    return j;
}

json report_to_json(const ValidationReport& r) {
    json j;
    j["total_rows"] = r.total_rows;
    j["accepted_count"] = r.accepted_count;
    j["screened_rows"] = r.screened_rows;
    j["rejected"] = json::array();
    for (const auto& row : r.rejected) {
        j["rejected"].push_back(
            {{"row", row.row}, {"reason", to_string(row.reason)}, {"detail", row.detail}});
    }
    j["warnings"] = r.warnings;
    j["dropped"] = json::array();
    for (const auto& d : r.dropped) {
        j["dropped"].push_back(
            {{"participant_id", d.participant_id}, {"rule", d.rule}, {"detail", d.detail}});
    }
    return j;
}

namespace {

bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = 0;
        if (c < 0x80) {
            len = 1;
        } else if ((c >> 5) == 0x6) {
            len = 2;
        } else if ((c >> 4) == 0xE) {
            len = 3;
        } else if ((c >> 3) == 0x1E) {
            len = 4;
        } else {
            return false;
        }
        if (i + len > s.size()) return false;
        for (std::size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return false;
        }
        i += len;
    }
    return true;
}

// Reads one RFC 4180 record (may span lines inside quotes). Returns false at
// end of input. `ok` is false when quoting is broken.
bool read_csv_record(std::istream& in, std::vector<std::string>& cells, bool& ok,
                     std::string& raw) {
    cells.clear();
    raw.clear();
    ok = true;
    std::string line;
    if (!std::getline(in, line)) return false;
    std::string cell;
    bool quoted = false;
    bool after_quote = false;
    for (;;) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        raw += line;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        cell += '"';
                        ++i;
                    } else {
                        quoted = false;
                        after_quote = true;
                    }
                } else {
                    cell += c;
                }
            } else if (c == ',') {
                cells.push_back(std::move(cell));
                cell.clear();
                after_quote = false;
            } else if (c == '"') {
                if (!cell.empty() || after_quote) ok = false;
                quoted = true;
            } else {
                if (after_quote) ok = false;
                cell += c;
            }
        }
        if (!quoted) break;
        if (!std::getline(in, line)) {
            ok = false;
            break;
        }
        cell += '\n';
        raw += '\n';
    }
    cells.push_back(std::move(cell));
    return true;
}

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; });
}

// Field values of one row as text; nullopt marks a missing field.
struct RawRow {
    std::optional<std::string> participant_id, condition_id, instance_id, truth, human, ai, team;
};

struct RowError {
    RejectReason reason;
    std::string detail;
};

class RowConverter {
public:
    explicit RowConverter(const LogSchema& schema) : schema_(schema) {
        if (schema.label_set) labels_.insert(schema.label_set->begin(), schema.label_set->end());
    }

    std::variant<DecisionRecord, RowError> convert(const RawRow& raw) {
        const auto& f = schema_.fields;
        const std::pair<const std::optional<std::string>*, const std::string*> required[] = {
            {&raw.participant_id, &f.participant_id}, {&raw.condition_id, &f.condition_id},
            {&raw.instance_id, &f.instance_id},       {&raw.truth, &f.truth},
            {&raw.human, &f.human},                   {&raw.ai, &f.ai},
            {&raw.team, &f.team},
        };
        for (const auto& [value, name] : required) {
            if (!*value || blank(**value)) {
                return RowError{RejectReason::missing_field, "missing field '" + *name + "'"};
            }
        }

        DecisionRecord rec;
        rec.participant_id = *raw.participant_id;
        rec.condition_id = *raw.condition_id;
        rec.instance_id = *raw.instance_id;

        const std::pair<const std::string*, const std::string*> decisions[] = {
            {&*raw.truth, &f.truth}, {&*raw.human, &f.human}, {&*raw.ai, &f.ai},
            {&*raw.team, &f.team}};
        DecisionValue* targets[] = {&rec.truth, &rec.human, &rec.ai, &rec.team};
        for (std::size_t k = 0; k < 4; ++k) {
            const auto& text = *decisions[k].first;
            const auto& name = *decisions[k].second;
            if (schema_.task_kind == TaskKind::regression) {
                const auto v = parse_plain_number(text);
                if (!v) {
                    return RowError{RejectReason::bad_number,
                                    "field '" + name + "': '" + text + "' is not a plain number"};
                }
                if (!std::isfinite(*v)) {
                    return RowError{RejectReason::out_of_range,
                                    "field '" + name + "': value is not finite"};
                }
                *targets[k] = *v;
            } else {
                if (!labels_.contains(text)) {
                    return RowError{RejectReason::unknown_label,
                                    "field '" + name + "': label '" + text + "' not in label_set"};
                }
                *targets[k] = text;
            }
        }

        auto key = rec.participant_id;
        key.push_back('\x1f');
        key += rec.instance_id;
        if (!seen_.insert(std::move(key)).second) {
            return RowError{RejectReason::duplicate_key,
                            "duplicate (participant_id, instance_id) = ('" + rec.participant_id +
                                "', '" + rec.instance_id + "')"};
        }
        return rec;
    }

private:
    const LogSchema& schema_;
    std::unordered_set<std::string> labels_;
    std::unordered_set<std::string> seen_;
};

void accept_or_reject(ParseResult& out, RowConverter& conv, const RawRow& raw, std::size_t row) {
    auto res = conv.convert(raw);
    if (auto* rec = std::get_if<DecisionRecord>(&res)) {
        out.records.push_back(std::move(*rec));
        ++out.report.accepted_count;
    } else {
        auto& err = std::get<RowError>(res);
        out.report.rejected.push_back({row, err.reason, std::move(err.detail)});
    }
}

void parse_csv(std::istream& in, const LogSchema& schema, ParseResult& out) {
    std::vector<std::string> cells;
    std::string raw;
    bool ok = true;
    // header: first non-empty record
    bool have_header = false;
    while (read_csv_record(in, cells, ok, raw)) {
        if (!raw.empty()) {
            have_header = true;
            break;
        }
    }
    if (!have_header) throw IoError("csv input has no header row");
    if (!ok || !valid_utf8(raw)) throw IoError("csv header is malformed");
    if (!cells.empty() && cells[0].rfind("\xEF\xBB\xBF", 0) == 0) cells[0].erase(0, 3);

    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < cells.size(); ++i) column.emplace(cells[i], i);
    const auto& f = schema.fields;
    auto index_of = [&](const std::string& name) {
        const auto it = column.find(name);
        if (it == column.end()) {
            throw ValidationError("csv header lacks schema column '" + name + "'");
        }
        return it->second;
    };
    const std::size_t idx[] = {index_of(f.participant_id), index_of(f.condition_id),
                               index_of(f.instance_id),    index_of(f.truth),
                               index_of(f.human),          index_of(f.ai),
                               index_of(f.team)};
    const std::size_t width = cells.size();

    RowConverter conv(schema);
    std::size_t row = 0;
    while (read_csv_record(in, cells, ok, raw)) {
        if (raw.empty()) continue;
        ++row;
        ++out.report.total_rows;
        if (!ok || !valid_utf8(raw)) {
            out.report.rejected.push_back({row, RejectReason::malformed_row,
                                           "broken quoting or invalid UTF-8"});
            continue;
        }
        if (cells.size() > width) {
            out.report.rejected.push_back(
                {row, RejectReason::malformed_row,
                 "row has " + std::to_string(cells.size()) + " cells, header has " +
                     std::to_string(width)});
            continue;
        }
        auto cell = [&](std::size_t i) -> std::optional<std::string> {
            if (i >= cells.size()) return std::nullopt;
            return cells[i];
        };
        const RawRow r{cell(idx[0]), cell(idx[1]), cell(idx[2]), cell(idx[3]),
                       cell(idx[4]), cell(idx[5]), cell(idx[6])};
        accept_or_reject(out, conv, r, row);
    }
    if (in.bad()) throw IoError("read error while parsing csv");
}

std::optional<std::string> json_field(const json& obj, const std::string& name) {
    const auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer() || it->is_number_unsigned()) return it->dump();
    if (it->is_number_float()) return format_shortest(it->get<double>());
    return std::string("\x01<non-scalar>");
}

void parse_json_lines(std::istream& in, const LogSchema& schema, ParseResult& out) {
    RowConverter conv(schema);
    const auto& f = schema.fields;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line)) continue;
        ++row;
        ++out.report.total_rows;
        if (!valid_utf8(line)) {
            out.report.rejected.push_back({row, RejectReason::malformed_row, "invalid UTF-8"});
            continue;
        }
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            out.report.rejected.push_back(
                {row, RejectReason::malformed_row, "line is not a json object"});
            continue;
        }
        const RawRow r{json_field(obj, f.participant_id), json_field(obj, f.condition_id),
                       json_field(obj, f.instance_id),    json_field(obj, f.truth),
                       json_field(obj, f.human),          json_field(obj, f.ai),
                       json_field(obj, f.team)};
        accept_or_reject(out, conv, r, row);
    }
    if (in.bad()) throw IoError("read error while parsing json lines");
}

}  // namespace

ParseResult parse_log(std::istream& in, const LogSchema& schema) {
    schema.validate();
    if (!in) throw IoError("input stream is not readable");
    ParseResult out;
    if (schema.format == LogFormat::csv) {
        parse_csv(in, schema, out);
    } else {
        parse_json_lines(in, schema, out);
    }
    out.report.warnings = dataset_warnings(out.records);
    return out;
}

namespace {

std::string value_text(const DecisionValue& v) {
    if (const auto* d = std::get_if<double>(&v)) return format_shortest(*d);
    return std::get<std::string>(v);
}

json value_json(const DecisionValue& v) {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return std::get<std::string>(v);
}

}  // namespace

void write_log(std::ostream& out, std::span<const DecisionRecord> records,
               const LogSchema& schema) {
    const auto& f = schema.fields;
    if (schema.format == LogFormat::csv) {
        out << csv_field(f.participant_id) << ',' << csv_field(f.condition_id) << ','
            << csv_field(f.instance_id) << ',' << csv_field(f.truth) << ','
            << csv_field(f.human) << ',' << csv_field(f.ai) << ',' << csv_field(f.team)
            << '\n';
        for (const auto& r : records) {
            out << csv_field(r.participant_id) << ',' << csv_field(r.condition_id) << ','
                << csv_field(r.instance_id) << ',' << csv_field(value_text(r.truth)) << ','
                << csv_field(value_text(r.human)) << ',' << csv_field(value_text(r.ai)) << ','
                << csv_field(value_text(r.team)) << '\n';
        }
    } else {
        for (const auto& r : records) {
            json j;
            j[f.participant_id] = r.participant_id;
            j[f.condition_id] = r.condition_id;
            j[f.instance_id] = r.instance_id;
            j[f.truth] = value_json(r.truth);
            j[f.human] = value_json(r.human);
            j[f.ai] = value_json(r.ai);
            j[f.team] = value_json(r.team);
            out << j.dump() << '\n';
        }
    }
    if (!out) throw IoError("failed to write decision log");
}

std::vector<std::string> dataset_warnings(std::span<const DecisionRecord> records) {
    std::vector<std::string> warnings;
    std::map<std::string, std::set<std::string>, NaturalLess> instances_of;
    std::map<std::string, std::set<std::string>, NaturalLess> participants_of;
    for (const auto& r : records) {
        instances_of[r.participant_id].insert(r.instance_id);
        participants_of[r.condition_id].insert(r.participant_id);
    }
    if (!instances_of.empty()) {
        const auto& reference = instances_of.begin()->second;
        for (const auto& [pid, ids] : instances_of) {
            if (ids != reference) {
                warnings.push_back("unequal instance sets: participant '" + pid +
                                   "' differs from participant '" + instances_of.begin()->first +
                                   "'");
            }
        }
    }
    for (const auto& [cid, pids] : participants_of) {
        if (pids.size() == 1) {
            warnings.push_back("single-participant condition '" + cid + "'");
        }
    }
    return warnings;
}

void sort_records(std::vector<DecisionRecord>& records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const DecisionRecord& a, const DecisionRecord& b) {
                         if (a.participant_id != b.participant_id) {
                             return natural_less(a.participant_id, b.participant_id);
                         }
                         return natural_less(a.instance_id, b.instance_id);
                     });
}

namespace {

using Index = std::map<std::string, std::vector<std::size_t>, NaturalLess>;

// Participant ids flagged by one MAD pass over the kept records.
std::set<std::string> mad_pass(std::span<const DecisionRecord> records,
                               const std::vector<bool>& kept, LossKind kind,
                               double threshold, MadTarget target,
                               std::vector<DroppedParticipant>& dropped,
                               std::vector<std::string>& warnings) {
    // condition -> participant -> record indices
    std::map<std::string, Index, NaturalLess> by_condition;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (kept[i]) by_condition[records[i].condition_id][records[i].participant_id].push_back(i);
    }

    std::set<std::string> flagged;
    for (const auto& [cid, participants] : by_condition) {
        if (participants.size() < 3) {
            warnings.push_back("mad screening skipped for condition '" + cid +
                               "': fewer than 3 participants");
            continue;
        }
        if (target == MadTarget::team_loss) {
            std::vector<std::string> ids;
            std::vector<double> means;
            for (const auto& [pid, rows] : participants) {
                double s = 0.0;
                for (auto i : rows) {
                    s += instance_loss(kind, records[i].team, records[i].truth);
                }
                ids.push_back(pid);
                means.push_back(s / static_cast<double>(rows.size()));
            }
            const auto mask = stats::mad_outliers(means, threshold);
            for (std::size_t k = 0; k < ids.size(); ++k) {
                if (mask[k] && flagged.insert(ids[k]).second) {
                    dropped.push_back({ids[k], "mad",
                                       "mean team loss " + format_significant(means[k]) +
                                           " is a MAD outlier in condition '" + cid + "'"});
                }
            }
        } else {
            // per instance, across participants' raw team predictions
            std::map<std::string, std::vector<std::pair<std::string, double>>, NaturalLess>
                by_instance;
            for (const auto& [pid, rows] : participants) {
                for (auto i : rows) {
                    const auto* v = std::get_if<double>(&records[i].team);
                    if (v == nullptr) {
                        throw ValidationError("raw-prediction MAD screening needs real values");
                    }
                    by_instance[records[i].instance_id].emplace_back(pid, *v);
                }
            }
            for (const auto& [iid, entries] : by_instance) {
                if (entries.size() < 3) continue;
                std::vector<double> vals;
                for (const auto& e : entries) vals.push_back(e.second);
                const auto mask = stats::mad_outliers(vals, threshold);
                for (std::size_t k = 0; k < entries.size(); ++k) {
                    if (mask[k] && flagged.insert(entries[k].first).second) {
                        dropped.push_back({entries[k].first, "mad",
                                           "team prediction on instance '" + iid +
                                               "' is a MAD outlier in condition '" + cid + "'"});
                    }
                }
            }
        }
    }
    return flagged;
}

}  // namespace

ScreenResult screen_participants(std::span<const DecisionRecord> records, LossKind kind,
                                 const ScreeningOptions& options) {
    ScreenResult out;
    out.report.total_rows = records.size();
    std::vector<bool> kept(records.size(), true);

    if (options.max_value) {
        const double limit = *options.max_value;
        std::set<std::string> over;
        for (const auto& r : records) {
            for (const auto* v : {&r.human, &r.team}) {
                const auto* d = std::get_if<double>(v);
                if (d == nullptr) throw ValidationError("max_value screening needs a regression task");
                if (*d > limit && over.insert(r.participant_id).second) {
                    out.report.dropped.push_back(
                        {r.participant_id, "max_value",
                         "entered value " + format_shortest(*d) + " exceeds " +
                             format_shortest(limit) + " on instance '" + r.instance_id + "'"});
                }
            }
        }
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (over.contains(records[i].participant_id)) kept[i] = false;
        }
    }

    if (options.mad_threshold) {
        // repeat to a fixed point so that screening twice changes nothing
        for (;;) {
            std::vector<std::string> pass_warnings;
            const auto flagged = mad_pass(records, kept, kind, *options.mad_threshold,
                                          options.mad_target, out.report.dropped, pass_warnings);
            if (flagged.empty()) {
                for (auto& w : pass_warnings) out.report.warnings.push_back(std::move(w));
                break;
            }
            for (std::size_t i = 0; i < records.size(); ++i) {
                if (flagged.contains(records[i].participant_id)) kept[i] = false;
            }
        }
    }

    for (std::size_t i = 0; i < records.size(); ++i) {
        if (kept[i]) out.records.push_back(records[i]);
    }
    out.report.accepted_count = out.records.size();
    out.report.screened_rows = records.size() - out.records.size();
    return out;
}

}  // namespace hacomp::ingest
