#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "smartband/config.hpp"
#include "smartband/errors.hpp"
#include "smartband/kvdoc.hpp"
#include "smartband/persist.hpp"
#include "test_util.hpp"

using namespace smartband;
using namespace smartband::app;

TEST_CASE("config: defaults") {
    AppConfig c = load_config(std::nullopt);
    CHECK(c.ks == std::vector<std::size_t>{3, 5});
    CHECK(c.seed == 42);
    CHECK(c.restarts == 25);
    CHECK(c.standardize == false);
    CHECK(c.preprocessing == Preprocessing::None);
    CHECK(c.device_id == "band-000");
    CHECK(c.epoch_unix == 1577836800);
    CHECK(c.max_retries == 2);
    CHECK(!c.window_s.has_value());
    CHECK(!c.adl_gate);
}

TEST_CASE("config: apply_kv sets every recognized key") {
    AppConfig c;
    apply_kv(c, kv::KvDoc::parse(
                    "input_csv: in.csv\n"
                    "model_path: m.kv\n"
                    "episode_csv: ep.csv\n"
                    "nmea_log: gps.log\n"
                    "out_dir: out\n"
                    "report_out: rep.txt\n"
                    "ks: 2, 4, 6\n"
                    "seed: 7\n"
                    "restarts: 9\n"
                    "standardize: true\n"
                    "preprocessing: drop-missing\n"
                    "label: trial-1\n"
                    "detector.window_s: 4\n"
                    "detector.abnormal_band: 3.5\n"
                    "detector.flutter_delta: 1.25\n"
                    "detector.confirm_windows: 3\n"
                    "detector.cooldown_s: 120\n"
                    "detector.adl_gate: true\n"
                    "device_id: band-042\n"
                    "contacts: +911234567890, +14155550100\n"
                    "epoch_unix: 1600000000\n"
                    "max_retries: 4\n"
                    "modem_fail_sends: 0, 2\n"));
    CHECK(c.input_csv == "in.csv");
    CHECK(c.model_path == "m.kv");
    CHECK(c.episode_csv == "ep.csv");
    CHECK(c.nmea_log == "gps.log");
    CHECK(c.out_dir == "out");
    CHECK(c.report_out == "rep.txt");
    CHECK(c.ks == std::vector<std::size_t>{2, 4, 6});
    CHECK(c.seed == 7);
    CHECK(c.restarts == 9);
    CHECK(c.standardize);
    CHECK(c.preprocessing == Preprocessing::DropMissing);
    CHECK(c.label == "trial-1");
    CHECK(c.window_s == 4.0);
    CHECK(c.abnormal_band == 3.5);
    CHECK(c.flutter_delta == 1.25);
    CHECK(c.confirm_windows == 3);
    CHECK(c.cooldown_s == 120.0);
    CHECK(c.adl_gate);
    CHECK(c.device_id == "band-042");
    CHECK(c.contacts ==
          std::vector<std::string>{"+911234567890", "+14155550100"});
    CHECK(c.epoch_unix == 1600000000);
    CHECK(c.max_retries == 4);
    CHECK(c.modem_fail_sends == std::vector<std::size_t>{0, 2});
}

TEST_CASE("config: unknown keys are rejected loudly") {
    AppConfig c;
    CHECK_THROWS_AS(apply_kv(c, kv::KvDoc::parse("dector.window_s: 4\n")),
                    ConfigError);
    CHECK_THROWS_AS(apply_kv(c, kv::KvDoc::parse("speling: 1\n")), ConfigError);
}

TEST_CASE("config: malformed values are rejected") {
    AppConfig c;
    CHECK_THROWS_AS(apply_kv(c, kv::KvDoc::parse("seed: many\n")), ConfigError);
    CHECK_THROWS_AS(apply_kv(c, kv::KvDoc::parse("preprocessing: dropmost\n")),
                    ConfigError);
    CHECK_THROWS_AS(apply_kv(c, kv::KvDoc::parse("ks: 3, x\n")), ConfigError);
}

TEST_CASE("config: preprocessing names round-trip") {
    for (auto p : {Preprocessing::None, Preprocessing::DropMissing,
                   Preprocessing::DropZeros})
        CHECK(parse_preprocessing(preprocessing_name(p)) == p);
    CHECK_THROWS_AS(parse_preprocessing("keep-all"), ConfigError);
}

TEST_CASE("config: loads from a file path") {
    const std::string path = testutil::temp_path("config");
    persist::write_file(path, "seed: 99\nlabel: from-file\n");
    AppConfig c = load_config(path);
    CHECK(c.seed == 99);
    CHECK(c.label == "from-file");
    CHECK(c.restarts == 25);  // untouched keys keep defaults
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_config(path), IoError);
}

TEST_CASE("config: falls back to the SMARTBAND_CONFIG environment variable") {
    const std::string path = testutil::temp_path("envcfg");
    persist::write_file(path, "device_id: env-band\n");
    REQUIRE(setenv("SMARTBAND_CONFIG", path.c_str(), 1) == 0);
    AppConfig c = load_config(std::nullopt);
    CHECK(c.device_id == "env-band");
    // An explicit path wins over the environment.
    const std::string other = testutil::temp_path("clicfg");
    persist::write_file(other, "device_id: cli-band\n");
    CHECK(load_config(other).device_id == "cli-band");
    REQUIRE(unsetenv("SMARTBAND_CONFIG") == 0);
    CHECK(load_config(std::nullopt).device_id == "band-000");
    std::remove(path.c_str());
    std::remove(other.c_str());
}
