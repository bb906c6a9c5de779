#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "smartband/errors.hpp"
#include "smartband/ingest.hpp"
#include "test_util.hpp"

using namespace smartband;
using namespace smartband::ingest;

TEST_CASE("ingest: canonical header and a plain row") {
    auto rows = parse_numerics_csv(
        "Time [s],HR,PULSE,RESP,SpO2\n"
        "0,86,85,17,97\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].t == 0.0);
    CHECK(rows[0].hr == 86.0);
    CHECK(rows[0].pulse == 85.0);
    CHECK(rows[0].resp == 17.0);
    CHECK(rows[0].spo2 == 97.0);
}

TEST_CASE("ingest: header matching is case-insensitive and unit-blind") {
    auto rows = parse_numerics_csv(
        "time, heart rate ,Pulse Rate,Respiration [breaths/min],spo2 [%]\n"
        "1.5,70,71,15,98\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].t == 1.5);
    CHECK(rows[0].hr == 70.0);
    CHECK(rows[0].pulse == 71.0);
    CHECK(rows[0].resp == 15.0);
    CHECK(rows[0].spo2 == 98.0);
}

TEST_CASE("ingest: empty cells and NaN tokens become missing values") {
    auto rows = parse_numerics_csv(
        "Time [s],HR,PULSE,RESP,SpO2\n"
        "0, ,85,,97\n"
        "1,NaN,80,17,nan\n");
    REQUIRE(rows.size() == 2);
    CHECK(!rows[0].hr.has_value());
    CHECK(rows[0].pulse == 85.0);
    CHECK(!rows[0].resp.has_value());
    CHECK(rows[0].spo2 == 97.0);
    CHECK(!rows[1].hr.has_value());
    CHECK(!rows[1].spo2.has_value());
}

TEST_CASE("ingest: out-of-range vitals are treated as missing") {
    auto rows = parse_numerics_csv(
        "Time [s],HR,PULSE,RESP,SpO2\n"
        "0,400,-5,17,150\n"
        "1,80,81,-2,97\n");
    REQUIRE(rows.size() == 2);
    CHECK(!rows[0].hr.has_value());    // > 300
    CHECK(!rows[0].pulse.has_value()); // < 0
    CHECK(!rows[0].spo2.has_value());  // > 100
    CHECK(rows[0].resp == 17.0);
    CHECK(!rows[1].resp.has_value());  // negative rate
}

TEST_CASE("ingest: rows with missing time are rejected, not defaulted") {
    auto rows = parse_numerics_csv(
        "Time [s],HR,PULSE,RESP,SpO2\n"
        "0,80,81,16,97\n"
        ",81,82,17,97\n"
        "2,82,83,18,97\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].t == 0.0);
    CHECK(rows[1].t == 2.0);
}

TEST_CASE("ingest: missing time column assumes a 1 Hz cadence") {
    auto rows = parse_numerics_csv(
        "HR,PULSE,RESP,SpO2\n"
        "80,81,16,97\n"
        "82,83,17,96\n"
        "84,85,18,95\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].t == 0.0);
    CHECK(rows[1].t == 1.0);
    CHECK(rows[2].t == 2.0);
}

TEST_CASE("ingest: CRLF and extra unknown columns are tolerated") {
    auto rows = parse_numerics_csv(
        "Time [s],HR,PULSE,RESP,SpO2,Site\r\n"
        "0,80,81,16,97,ward-3\r\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].pulse == 81.0);
}

TEST_CASE("ingest: header errors") {
    CHECK_THROWS_AS(parse_numerics_csv(""), MissingHeader);
    // A numeric-looking first line means the header was dropped upstream.
    CHECK_THROWS_AS(parse_numerics_csv("0,86,85,17,97\n1,86,85,17,97\n"),
                    MissingHeader);
    // Header present but no recognized vital column.
    CHECK_THROWS_AS(parse_numerics_csv("foo,bar\n1,2\n"), UnknownColumn);
}

TEST_CASE("ingest: non-monotonic time is rejected with the row number") {
    const std::string bad =
        "Time [s],HR,PULSE,RESP,SpO2\n"
        "0,80,81,16,97\n"
        "2,80,81,16,97\n"
        "1,80,81,16,97\n";
    CHECK_THROWS_AS(parse_numerics_csv(bad), NonMonotonicTime);
    try {
        parse_numerics_csv(bad);
    } catch (const NonMonotonicTime& e) {
        CHECK(std::string(e.what()).find("data row 3") != std::string::npos);
    }
    // Equal timestamps are just as non-monotonic as decreasing ones.
    CHECK_THROWS_AS(parse_numerics_csv("Time [s],PULSE,RESP\n1,80,16\n1,81,17\n"),
                    NonMonotonicTime);
}

TEST_CASE("ingest: bundled dataset loads with the expected shape") {
    const std::string raw = testutil::slurp(testutil::data_path("bidmc_20_Numerics.csv"));
    // Independent row count: newline-terminated lines minus the header.
    std::size_t lines = 0;
    for (char c : raw)
        if (c == '\n') ++lines;
    auto rows = parse_numerics_csv(raw);
    CHECK(rows.size() == lines - 1);
    CHECK(rows.size() == 481);
    // Time is strictly increasing throughout.
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].t > rows[i - 1].t);
}

TEST_CASE("ingest: write/parse round-trip preserves every sample exactly") {
    auto rows = parse_numerics_csv(
        testutil::slurp(testutil::data_path("bidmc_20_Numerics.csv")));
    auto back = parse_numerics_csv(write_numerics_csv(rows));
    CHECK(back == rows);

    // Round-trip also holds for awkward doubles and missing cells.
    std::vector<PulseSample> tricky{
        {0.1, 86.5, std::nullopt, 1.0 / 3.0, 97.0},
        {0.30000000000000004, std::nullopt, 85.25, std::nullopt, std::nullopt},
    };
    CHECK(parse_numerics_csv(write_numerics_csv(tricky)) == tricky);
}

TEST_CASE("synth_adl: deterministic, zero-variance segments are constant") {
    std::vector<AdlProfile> profiles{
        {Activity::Rest, 70.0, 0.0, 10.0},
        {Activity::Exercise, 150.0, 0.0, 5.0},
    };
    auto a = synth_adl(profiles, 42, 1.0);
    auto b = synth_adl(profiles, 42, 1.0);
    CHECK(a == b);
    REQUIRE(a.size() == 15);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].t == static_cast<double>(i));
        REQUIRE(a[i].pulse.has_value());
        CHECK(*a[i].pulse == (i < 10 ? 70.0 : 150.0));
        CHECK(!a[i].hr.has_value());
    }
}

TEST_CASE("synth_adl: different seeds differ, sample count is sum of ceils") {
    std::vector<AdlProfile> profiles{
        {Activity::Walk, 100.0, 8.0, 10.5},  // ceil(10.5/2) = 6
        {Activity::Rest, 70.0, 3.0, 4.0},    // ceil(4/2)    = 2
    };
    auto a = synth_adl(profiles, 1, 2.0);
    auto b = synth_adl(profiles, 2, 2.0);
    CHECK(a.size() == 8);
    CHECK(b.size() == 8);
    CHECK(a != b);
    for (const auto& s : a) {
        REQUIRE(s.pulse.has_value());
        CHECK(*s.pulse >= 30.0);
        CHECK(*s.pulse <= 220.0);
    }
}

TEST_CASE("synth_adl: noisy segment mean approaches the profile mean") {
    std::vector<AdlProfile> profiles{{Activity::Exercise, 150.0, 8.0, 4000.0}};
    auto rows = synth_adl(profiles, 7, 1.0);
    REQUIRE(rows.size() == 4000);
    double sum = 0.0;
    for (const auto& s : rows) sum += *s.pulse;
    CHECK(std::abs(sum / 4000.0 - 150.0) < 1.0);
}

TEST_CASE("synth_adl: empty profile list is an error") {
    CHECK_THROWS_AS(synth_adl({}, 42, 1.0), EmptyProfileList);
}

TEST_CASE("replayer: offline mode yields all samples in order") {
    std::vector<PulseSample> samples{
        {0.0, {}, 80.0, {}, {}}, {1.0, {}, 81.0, {}, {}}, {2.5, {}, 82.0, {}, {}}};
    auto replayer = StreamReplayer::offline(samples);
    std::vector<PulseSample> seen;
    while (auto s = replayer.next()) seen.push_back(*s);
    CHECK(seen == samples);
    CHECK(replayer.done());
    CHECK(!replayer.next().has_value());
}

TEST_CASE("replayer: fast pacing preserves order and count") {
    std::vector<PulseSample> samples;
    for (int i = 0; i < 20; ++i)
        samples.push_back({static_cast<double>(i), {}, 80.0, {}, {}});
    StreamReplayer replayer(samples, 1e9);  // negligible sleeps
    std::vector<PulseSample> seen;
    while (auto s = replayer.next()) seen.push_back(*s);
    CHECK(seen == samples);
}

TEST_CASE("replayer: rejects empty input and non-positive speed") {
    CHECK_THROWS_AS(StreamReplayer({}, 1.0), EmptyInput);
    std::vector<PulseSample> one{{0.0, {}, 80.0, {}, {}}};
    CHECK_THROWS_AS(StreamReplayer(one, 0.0), EmptyInput);
    CHECK_THROWS_AS(StreamReplayer(one, -2.0), EmptyInput);
}

TEST_CASE("activity names cover the enum") {
    CHECK(activity_name(Activity::Rest) == "rest");
    CHECK(activity_name(Activity::Exercise) == "exercise");
    CHECK(activity_name(Activity::Sleep) == "sleep");
}
