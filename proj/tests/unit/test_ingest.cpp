#include "doctest.h"

#include <sstream>

#include "hacomp/error.hpp"
#include "hacomp/format.hpp"
#include "hacomp/ingest.hpp"
#include "hacomp/simulate.hpp"
#include "helpers.hpp"

using namespace hacomp;
using namespace hacomp::ingest;
using testing_helpers::real_record;

namespace {

LogSchema regression_schema() { return {}; }

LogSchema classification_schema() {
    LogSchema s;
    s.task_kind = TaskKind::classification;
    s.label_set = sim::class_labels(16);
    return s;
}

ParseResult parse(const std::string& text, const LogSchema& schema) {
    std::istringstream in(text);
    return parse_log(in, schema);
}

const char* kHeader = "participant_id,condition_id,instance_id,truth,human,ai,team\n";

}  // namespace

TEST_CASE("number formatting helpers") {
    CHECK(format_shortest(0.1) == "0.1");
    CHECK(format_shortest(0.0) == "0");
    CHECK(format_shortest(163080.0) == "163080");
    CHECK(round_significant(0.123456789) == 0.123457);
    CHECK(format_significant(-0.0) == "0");
    CHECK(format_significant(0.52) == "0.52");
    CHECK(parse_plain_number("1.5e3") == 1500.0);
    CHECK(parse_plain_number(" -2 ") == -2.0);
    CHECK_FALSE(parse_plain_number("2,500,000"));
    CHECK_FALSE(parse_plain_number("2,500,000-ish"));
    CHECK_FALSE(parse_plain_number("inf"));
    CHECK_FALSE(parse_plain_number("nan"));
    CHECK_FALSE(parse_plain_number("0x10"));
    CHECK_FALSE(parse_plain_number(""));
    CHECK_FALSE(parse_plain_number("1e999"));
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("parse a valid csv") {
    const std::string text = std::string(kHeader) +
                             "p1,c,1,500000,510000,490000,500500\n"
                             "p1,c,2,600000,610000,590000,600500\n"
                             "p2,c,1,500000,520000,480000,500000\n";
    const auto r = parse(text, regression_schema());
    CHECK(r.records.size() == 3);
    CHECK(r.report.rejected.empty());
    CHECK(r.report.total_rows == 3);
    CHECK(r.report.accepted_count == 3);
    CHECK(std::get<double>(r.records[0].team) == 500500.0);
}

TEST_CASE("bad numbers are rejected with their row") {
    const std::string text = std::string(kHeader) +
                             "p1,c,1,500000,510000,490000,500500\n"
                             "p1,c,2,600000,610000,590000,2,500,000-ish\n"
                             "p1,c,3,600000,610000,590000,\"2,500,000-ish\"\n";
    const auto r = parse(text, regression_schema());
    CHECK(r.records.size() == 1);
    REQUIRE(r.report.rejected.size() == 2);
    CHECK(r.report.rejected[0].row == 2);
    CHECK(r.report.rejected[0].reason == RejectReason::malformed_row);
    CHECK(r.report.rejected[1].row == 3);
    CHECK(r.report.rejected[1].reason == RejectReason::bad_number);
    CHECK(r.report.accepted_count + r.report.rejected.size() == r.report.total_rows);
}

TEST_CASE("labels outside the label set are rejected") {
    const std::string text = std::string(kHeader) + "p1,c,1,c1,c2,c1,c1\np1,c,2,c1,plane,c1,c1\n";
    const auto r = parse(text, classification_schema());
    CHECK(r.records.size() == 1);
    REQUIRE(r.report.rejected.size() == 1);
    CHECK(r.report.rejected[0].reason == RejectReason::unknown_label);
}

TEST_CASE("other rejection reasons") {
    const std::string text = std::string(kHeader) +
                             "p1,c,1,5,5,5,5\n"
                             "p1,c,1,5,5,5,5\n"
                             "p1,c,2,5,,5,5\n"
                             "p1,c,3,5,5\n";
    const auto r = parse(text, regression_schema());
    CHECK(r.records.size() == 1);
    REQUIRE(r.report.rejected.size() == 3);
    CHECK(r.report.rejected[0].reason == RejectReason::duplicate_key);
    CHECK(r.report.rejected[1].reason == RejectReason::missing_field);
    CHECK(r.report.rejected[2].reason == RejectReason::missing_field);
}

TEST_CASE("fatal parse errors") {
    CHECK_THROWS_AS(parse("", regression_schema()), IoError);
    CHECK_THROWS_AS(parse("participant_id,condition_id,instance_id\np,c,1\n", regression_schema()),
                    ValidationError);
}

TEST_CASE("quoted fields, CRLF and a BOM") {
    const std::string text = "\xEF\xBB\xBFparticipant_id,condition_id,instance_id,truth,human,ai,team\r\n"
                             "\"p,1\",\"multi\nline\",1,1,2,3,4\r\n";
    const auto r = parse(text, regression_schema());
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].participant_id == "p,1");
    CHECK(r.records[0].condition_id == "multi\nline");
}

TEST_CASE("json lines") {
    LogSchema s = regression_schema();
    s.format = LogFormat::json_lines;
    const std::string text =
        R"({"participant_id":"p1","condition_id":"c","instance_id":"1","truth":1,"human":2,"ai":3,"team":4})"
        "\n"
        R"({"participant_id":"p1","condition_id":"c","instance_id":"2","truth":1,"human":"x","ai":3,"team":4})"
        "\n"
        "not json\n";
    const auto r = parse(text, s);
    CHECK(r.records.size() == 1);
    CHECK(r.report.rejected.size() == 2);
}

TEST_CASE("write then parse round-trips") {
    for (auto fmt : {LogFormat::csv, LogFormat::json_lines}) {
        sim::RegressionScenario rs;
        rs.n_participants = 7;
        rs.seed = 3;
        const auto recs = sim::simulate_regression_team(rs);
        LogSchema s;
        s.format = fmt;
        std::ostringstream out;
        write_log(out, recs, s);
        std::istringstream in(out.str());
        const auto back = parse_log(in, s);
        CHECK(back.records == recs);

        sim::ClassificationScenario cs;
        cs.n_participants = 4;
        cs.n_instances = 20;
        const auto crecs = sim::simulate_classification_team(cs);
        auto c = classification_schema();
        c.format = fmt;
        std::ostringstream cout_;
        write_log(cout_, crecs, c);
        std::istringstream cin_(cout_.str());
        CHECK(parse_log(cin_, c).records == crecs);
    }
}

TEST_CASE("schema validation and json") {
    LogSchema s;
    s.fields.team = "human";
    CHECK_THROWS_AS(s.validate(), ValidationError);
    LogSchema c;
    c.task_kind = TaskKind::classification;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    LogSchema r;
    r.label_set = std::vector<std::string>{"a"};
    CHECK_THROWS_AS(r.validate(), ValidationError);

    const auto cs = classification_schema();
    const auto back = schema_from_json(schema_to_json(cs));
    CHECK(back.label_set == cs.label_set);
    CHECK(back.task_kind == TaskKind::classification);
    CHECK(back.loss_kind() == LossKind::zero_one);
}

TEST_CASE("dataset warnings") {
    std::vector<DecisionRecord> recs{real_record("p1", "a", "1", 1, 1, 1, 1),
                                     real_record("p1", "a", "2", 1, 1, 1, 1),
                                     real_record("p2", "a", "1", 1, 1, 1, 1),
                                     real_record("p3", "b", "1", 1, 1, 1, 1)};
    const auto w = dataset_warnings(recs);
    CHECK(w.size() >= 2);
}

TEST_CASE("screening by maximum value") {
    std::vector<DecisionRecord> recs;
    for (int p = 1; p <= 3; ++p) {
        for (int i = 1; i <= 3; ++i) {
            const double team = (p == 2 && i == 3) ? 2'100'000.0 : 500'000.0;
            recs.push_back(real_record("p" + std::to_string(p), "c", std::to_string(i), 500'000.0,
                                       500'000.0, 500'000.0, team));
        }
    }
    ScreeningOptions opt;
    opt.max_value = 2'000'000.0;
    const auto r = screen_participants(recs, LossKind::absolute_error, opt);
    CHECK(r.records.size() == 6);
    REQUIRE(r.report.dropped.size() == 1);
    CHECK(r.report.dropped[0].participant_id == "p2");
    CHECK(r.report.dropped[0].rule == "max_value");

    const auto none = screen_participants(recs, LossKind::absolute_error, {});
    CHECK(none.records == recs);
    CHECK(none.report.dropped.empty());
}

TEST_CASE("MAD screening keeps 101 of 120") {
    std::vector<DecisionRecord> recs;
    for (int p = 1; p <= 120; ++p) {
        const bool outlier = p > 101;
        const double err = outlier ? 900'000.0 + 1000.0 * p : 100'000.0 + 500.0 * (p % 21);
        for (int i = 1; i <= 15; ++i) {
            recs.push_back(real_record("p" + std::to_string(p), "c", std::to_string(i), 700'000.0,
                                       700'000.0 + err, 700'000.0, 700'000.0 + err));
        }
    }
    ScreeningOptions opt;
    opt.mad_threshold = 3.0;
    const auto r = screen_participants(recs, LossKind::absolute_error, opt);
    CHECK(r.records.size() == 101 * 15);
    CHECK(r.report.dropped.size() == 19);
    CHECK(r.report.accepted_count + r.report.screened_rows == r.report.total_rows);

    const auto again = screen_participants(r.records, LossKind::absolute_error, opt);
    CHECK(again.records == r.records);
    CHECK(again.report.dropped.empty());
}

TEST_CASE("sort_records uses natural order") {
    std::vector<DecisionRecord> recs{real_record("p10", "c", "2", 1, 1, 1, 1),
                                     real_record("p2", "c", "10", 1, 1, 1, 1),
                                     real_record("p2", "c", "9", 1, 1, 1, 1)};
    sort_records(recs);
    CHECK(recs[0].participant_id == "p2");
    CHECK(recs[0].instance_id == "9");
    CHECK(recs[2].participant_id == "p10");
}
