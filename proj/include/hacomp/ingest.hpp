#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hacomp/domain.hpp"

namespace hacomp::ingest {

enum class LogFormat { csv, json_lines };
enum class TaskKind { regression, classification };

struct FieldNames {
    std::string participant_id = "participant_id";
    std::string condition_id = "condition_id";
    std::string instance_id = "instance_id";
    std::string truth = "truth";
    std::string human = "human";
    std::string ai = "ai";
    std::string team = "team";
};

struct LogSchema {
    LogFormat format = LogFormat::csv;
    FieldNames fields;
    TaskKind task_kind = TaskKind::regression;
    std::optional<std::vector<std::string>> label_set;  // required iff classification

    // Throws ValidationError on duplicate field names or a missing/extra label set.
    void validate() const;
    LossKind loss_kind() const;
};

LogSchema schema_from_json(const nlohmann::json& j);
nlohmann::json schema_to_json(const LogSchema& schema);
LogFormat log_format_from_string(const std::string& s);
const char* to_string(LogFormat f);
TaskKind task_kind_from_string(const std::string& s);
const char* to_string(TaskKind k);

enum class RejectReason {
    missing_field,
    bad_number,
    unknown_label,
    duplicate_key,
    out_of_range,
    malformed_row,
};

const char* to_string(RejectReason r);

struct RejectedRow {
    std::size_t row = 0;  // 1-based data row (header excluded)
    RejectReason reason = RejectReason::malformed_row;
    std::string detail;
};

struct DroppedParticipant {
    std::string participant_id;
    std::string rule;  // "max_value" or "mad"
    std::string detail;
};

// accepted_count + rejected.size() + screened_rows == total_rows
struct ValidationReport {
    std::size_t total_rows = 0;
    std::size_t accepted_count = 0;
    std::size_t screened_rows = 0;  // rows of participants dropped by screening
    std::vector<RejectedRow> rejected;
    std::vector<std::string> warnings;
    std::vector<DroppedParticipant> dropped;
};

nlohmann::json report_to_json(const ValidationReport& report);

struct ParseResult {
    std::vector<DecisionRecord> records;  // input order
    ValidationReport report;
};

// Streams rows from `in`. Bad rows are rejected with their row number and
// never abort the parse; an unreadable stream or missing csv header throws
// IoError, a header lacking a schema column throws ValidationError.
ParseResult parse_log(std::istream& in, const LogSchema& schema);

// Serializes records in the given schema's format. Numbers use the shortest
// representation that reads back to the same double.
void write_log(std::ostream& out, std::span<const DecisionRecord> records, const LogSchema& schema);

// Dataset-level warnings: unequal instance sets, single-participant conditions.
std::vector<std::string> dataset_warnings(std::span<const DecisionRecord> records);

enum class MadTarget { team_loss, raw_prediction };

struct ScreeningOptions {
    std::optional<double> max_value;
    std::optional<double> mad_threshold;
    MadTarget mad_target = MadTarget::team_loss;
};

struct ScreenResult {
    std::vector<DecisionRecord> records;
    ValidationReport report;
};

// Drops whole participants: first any participant with an entered price
// (human or team decision) above max_value, then MAD outliers per condition,
// repeated until no participant is flagged.
ScreenResult screen_participants(std::span<const DecisionRecord> records, LossKind kind,
                                 const ScreeningOptions& options);

// Sorted by (participant_id, instance_id) in natural id order.
void sort_records(std::vector<DecisionRecord>& records);

}  // namespace hacomp::ingest
