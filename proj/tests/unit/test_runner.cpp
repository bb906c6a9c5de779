#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "smartband/config.hpp"
#include "smartband/persist.hpp"
#include "smartband/runner.hpp"
#include "test_util.hpp"

using namespace smartband;
using namespace smartband::app;

namespace {

struct Capture {
    std::ostringstream out;
    std::ostringstream err;
};

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& stem)
        : path(testutil::temp_path(stem)) {
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("cmd_train: trains, reports, persists; byte-stable across runs") {
    TempDir dir("train");
    AppConfig cfg;
    cfg.input_csv = testutil::data_path("bidmc_20_Numerics.csv");
    cfg.model_path = (dir.path / "model.kv").string();
    cfg.label = "unit";

    Capture cap;
    REQUIRE(cmd_train(cfg, cap.out, cap.err) == 0);
    CHECK(cap.err.str().empty());
    const std::string text = cap.out.str();
    CHECK(contains(text, "rows: total=481 regression=478 clustering=475"));
    CHECK(contains(text, "intercept: 41.154127"));
    CHECK(contains(text, "slope: -0.288610"));
    CHECK(contains(text, "tau: 17.140290"));
    CHECK(contains(text, "variability k=3:"));
    CHECK(contains(text, "variability k=5:"));

    auto doc = persist::parse_model_document(persist::read_file(cfg.model_path));
    CHECK(doc.personal.k == 3);  // first of ks is persisted
    CHECK(doc.provenance.rows_total == 481);
    CHECK(doc.provenance.label == "unit");
    CHECK(doc.provenance.preprocessing == "none");

    // Re-training writes the identical document.
    const std::string first = persist::read_file(cfg.model_path);
    Capture cap2;
    REQUIRE(cmd_train(cfg, cap2.out, cap2.err) == 0);
    CHECK(persist::read_file(cfg.model_path) == first);
}

TEST_CASE("cmd_train: failures exit 2 with a diagnostic") {
    AppConfig cfg;
    Capture cap;
    CHECK(cmd_train(cfg, cap.out, cap.err) == 2);
    CHECK(contains(cap.err.str(), "error:"));
    CHECK(contains(cap.err.str(), "input_csv"));

    TempDir dir("short");
    cfg.input_csv = (dir.path / "one_row.csv").string();
    cfg.model_path = (dir.path / "model.kv").string();
    persist::write_file(cfg.input_csv,
                        "Time [s],HR,PULSE,RESP,SpO2\n0,86,85,17,97\n");
    Capture cap2;
    CHECK(cmd_train(cfg, cap2.out, cap2.err) == 2);
    CHECK(contains(cap2.err.str(), "error:"));
    CHECK(contains(cap2.err.str(), "regression needs at least 2 rows"));
    // The diagnostic names the offending file.
    CHECK(contains(cap2.err.str(), "one_row.csv"));

    cfg.input_csv = (dir.path / "missing.csv").string();
    Capture cap3;
    CHECK(cmd_train(cfg, cap3.out, cap3.err) == 2);
    CHECK(contains(cap3.err.str(), "error:"));
}

TEST_CASE("cmd_report: prints reference comparison tables") {
    AppConfig cfg;
    cfg.input_csv = testutil::data_path("bidmc_20_Numerics.csv");
    Capture cap;
    REQUIRE(cmd_report(cfg, cap.out, cap.err) == 0);
    const std::string text = cap.out.str();
    CHECK(contains(text, "41.1532"));
    CHECK(contains(text, "-0.2886"));
    CHECK(contains(text, "79.31"));
    CHECK(contains(text, "75.16"));
    CHECK(contains(text, "none"));
    CHECK(contains(text, "drop-missing"));
    CHECK(contains(text, "drop-zeros"));
    CHECK(contains(text, "ordering (raw):"));
    CHECK(contains(text, "ordering (z):"));
    CHECK(contains(text, "reference decreases"));

    // With report_out the same text lands in a file instead.
    TempDir dir("report");
    cfg.report_out = (dir.path / "report.txt").string();
    Capture cap2;
    REQUIRE(cmd_report(cfg, cap2.out, cap2.err) == 0);
    CHECK(persist::read_file(cfg.report_out) == text);
}

TEST_CASE("cmd_simulate: injected episode produces one delivered alert") {
    TempDir dir("sim");
    AppConfig cfg;
    cfg.model_path = testutil::data_path("episode_model.kv");
    cfg.episode_csv = testutil::data_path("episode_injected.csv");
    cfg.nmea_log = testutil::data_path("nmea_sim.log");
    cfg.out_dir = dir.path.string();
    cfg.label = "unit-episode";
    cfg.device_id = "band-007";
    cfg.contacts = {"+911234567890"};

    Capture cap;
    REQUIRE(cmd_simulate(cfg, cap.out, cap.err) == 0);
    const std::string text = cap.out.str();
    CHECK(contains(text, "samples: 36"));
    CHECK(contains(text, "windows closed: 7"));
    CHECK(contains(text, "nmea: 5 lines, 3 fixes"));
    CHECK(contains(text, "alerts: 1"));
    CHECK(contains(text, "-> +911234567890: delivered (attempts=1)"));

    const auto run_dir = dir.path / "unit-episode";
    auto report = kv::KvDoc::parse(persist::read_file((run_dir / "report.kv").string()));
    CHECK(report.get_u64("alerts.count") == 1);
    CHECK(report.get_u64("windows_closed") == 7);
    CHECK(report.get_f64("alerts.00.t") == 30.0);
    CHECK(report.get_f64("alerts.00.rr_t1") == doctest::Approx(25.2802).epsilon(1e-3));
    CHECK(report.get_f64("alerts.00.rr_t2") == doctest::Approx(31.0522).epsilon(1e-3));
    CHECK(report.get_or_throw("alerts.00.reason") == "abnormal-and-fluttering");
    CHECK(report.get_or_throw("alerts.00.lat") == "37.774860");
    CHECK(report.get_or_throw("alerts.00.lon") == "-122.421560");
    CHECK(report.get_or_throw("alerts.00.time") == "2020-01-01 00:00:30 UTC");
    CHECK(report.get_or_throw("alerts.00.deliveries.00.outcome") == "delivered");
    const std::string body = report.get_or_throw("alerts.00.body");
    CHECK(body.size() <= 160);
    CHECK(contains(body, "EMERGENCY band-007"));
    CHECK(contains(body, "maps.google.com/?q=37.774860,-122.421560"));

    // The raw modem transcript is preserved alongside.
    const std::string transcript =
        persist::read_file((run_dir / "alert00_contact00.at").string());
    CHECK(contains(transcript, "AT+CMGF=1"));
    CHECK(contains(transcript, "AT+CMGS=\"+911234567890\""));
    CHECK(contains(transcript, body));
}

TEST_CASE("cmd_simulate: a fixless NMEA log degrades to Loc: unavailable") {
    TempDir dir("sim-nofix");
    AppConfig cfg;
    cfg.model_path = testutil::data_path("episode_model.kv");
    cfg.episode_csv = testutil::data_path("episode_injected.csv");
    cfg.nmea_log = testutil::data_path("nmea_invalid.log");
    cfg.out_dir = dir.path.string();
    cfg.label = "unit-nofix";
    cfg.contacts = {"+911234567890"};

    Capture cap;
    REQUIRE(cmd_simulate(cfg, cap.out, cap.err) == 0);
    CHECK(contains(cap.out.str(), "nmea: 4 lines, 0 fixes"));
    auto report = kv::KvDoc::parse(persist::read_file(
        (dir.path / "unit-nofix" / "report.kv").string()));
    CHECK(report.get_u64("alerts.count") == 1);
    CHECK(report.get_or_throw("alerts.00.loc") == "unavailable");
    CHECK(!report.contains("alerts.00.lat"));
    CHECK(contains(report.get_or_throw("alerts.00.body"), "Loc: unavailable"));
}

TEST_CASE("cmd_simulate: scripted send failures are retried and recorded") {
    TempDir dir("sim-retry");
    AppConfig cfg;
    cfg.model_path = testutil::data_path("episode_model.kv");
    cfg.episode_csv = testutil::data_path("episode_injected.csv");
    cfg.out_dir = dir.path.string();
    cfg.label = "unit-retry";
    cfg.contacts = {"+911234567890"};
    cfg.modem_fail_sends = {0};
    cfg.max_retries = 2;

    Capture cap;
    REQUIRE(cmd_simulate(cfg, cap.out, cap.err) == 0);
    auto report = kv::KvDoc::parse(persist::read_file(
        (dir.path / "unit-retry" / "report.kv").string()));
    CHECK(report.get_or_throw("alerts.00.deliveries.00.outcome") == "delivered");
    CHECK(report.get_u64("alerts.00.deliveries.00.attempts") == 2);
}

TEST_CASE("cmd_simulate: contacts are mandatory") {
    AppConfig cfg;
    cfg.model_path = testutil::data_path("episode_model.kv");
    cfg.episode_csv = testutil::data_path("episode_injected.csv");
    Capture cap;
    CHECK(cmd_simulate(cfg, cap.out, cap.err) == 2);
    CHECK(contains(cap.err.str(), "error:"));
    CHECK(contains(cap.err.str(), "contact"));
}

TEST_CASE("cmd_parse_nmea: per-line classification plus summary") {
    AppConfig cfg;
    cfg.nmea_log = testutil::data_path("nmea_sim.log");
    Capture cap;
    REQUIRE(cmd_parse_nmea(cfg, cap.out, cap.err) == 0);
    const std::string text = cap.out.str();
    CHECK(contains(text, "line 001: fix"));
    CHECK(contains(text, "line 002: skipped"));
    CHECK(contains(text, "line 005: nofix"));
    CHECK(contains(text,
                   "sentences=5 fix=3 nofix=1 badsum=0 malformed=0 skipped=1"));
    CHECK(contains(text, "latest: lat=37.774860 lon=-122.421560"));
}

TEST_CASE("cmd_parse_nmea: a fixless log reports latest: none") {
    AppConfig cfg;
    cfg.nmea_log = testutil::data_path("nmea_invalid.log");
    Capture cap;
    REQUIRE(cmd_parse_nmea(cfg, cap.out, cap.err) == 0);
    CHECK(contains(cap.out.str(),
                   "sentences=4 fix=0 nofix=1 badsum=1 malformed=0 skipped=2"));
    CHECK(contains(cap.out.str(), "latest: none"));

    AppConfig missing;
    missing.nmea_log = testutil::data_path("no_such.log");
    Capture cap2;
    CHECK(cmd_parse_nmea(missing, cap2.out, cap2.err) == 2);
    CHECK(contains(cap2.err.str(), "error:"));
}
