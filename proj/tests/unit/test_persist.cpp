#include <doctest.h>

#include <cstdio>
#include <string>

#include "smartband/detector.hpp"
#include "smartband/errors.hpp"
#include "smartband/model.hpp"
#include "smartband/persist.hpp"
#include "test_util.hpp"

using namespace smartband;
using namespace smartband::persist;

namespace {

ModelDocument sample_document() {
    ModelDocument doc;
    doc.personal.regression = {41.153192, -0.288602, 478};
    doc.personal.tau = 17.140290;
    doc.personal.sigma_rr = 5.472517;
    doc.personal.centers = {
        model::FeatureRow{84.1, 84.3, 16.9, 97.2},
        model::FeatureRow{91.5, 91.0, 20.1, 96.8},
        model::FeatureRow{77.2, 77.5, 14.2, 97.9},
    };
    doc.personal.k = 3;
    doc.personal.variability_pct = 80.85;
    doc.personal.standardized = false;
    doc.provenance.dataset_sha256 = std::string(64, 'a');
    doc.provenance.label = "unit";
    doc.provenance.rows_total = 481;
    doc.provenance.rows_regression = 478;
    doc.provenance.rows_clustering = 475;
    doc.provenance.preprocessing = "none";
    doc.provenance.seed = 42;
    doc.provenance.restarts = 25;
    return doc;
}

}  // namespace

TEST_CASE("model document: field-faithful round-trip") {
    auto doc = sample_document();
    auto back = parse_model_document(serialize(doc));
    CHECK(back.schema_version == doc.schema_version);
    CHECK(back.personal.regression.intercept ==
          doctest::Approx(doc.personal.regression.intercept).epsilon(1e-9));
    CHECK(back.personal.regression.slope ==
          doctest::Approx(doc.personal.regression.slope).epsilon(1e-9));
    CHECK(back.personal.regression.n_train == 478);
    CHECK(back.personal.tau == doctest::Approx(doc.personal.tau).epsilon(1e-9));
    CHECK(back.personal.k == 3);
    REQUIRE(back.personal.centers.size() == 3);
    CHECK(back.personal.centers[1][2] == doctest::Approx(20.1).epsilon(1e-9));
    CHECK(back.personal.standardized == false);
    CHECK(back.provenance.label == "unit");
    CHECK(back.provenance.rows_clustering == 475);
    CHECK(back.provenance.seed == 42);
}

TEST_CASE("model document: serialization is stable after one round-trip") {
    // %.10g collapses on the first pass; after that, text is a fixed point.
    auto once = serialize(parse_model_document(serialize(sample_document())));
    auto twice = serialize(parse_model_document(once));
    CHECK(once == twice);
}

TEST_CASE("model document: the bundled fixture is at the fixed point") {
    const std::string raw =
        testutil::slurp(testutil::data_path("episode_model.kv"));
    auto doc = parse_model_document(raw);
    CHECK(serialize(doc) == raw);
    CHECK(doc.personal.regression.intercept == doctest::Approx(41.1532));
    CHECK(doc.personal.regression.slope == doctest::Approx(-0.2886));
    CHECK(doc.personal.tau == 17.0);
    CHECK(doc.personal.sigma_rr == 1.5);
    CHECK(doc.personal.k == 1);
}

TEST_CASE("model document: missing keys raise ConfigError") {
    CHECK_THROWS_AS(parse_model_document("schema_version: 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_model_document(""), ConfigError);
}

TEST_CASE("detection state: bit-exact round-trip") {
    detector::DetectionState st;
    st.phase = detector::Phase::Cooldown;
    st.suspect_count = 1;
    st.cooldown_until = 330.0000000001;
    st.rearmed = false;
    st.has_rr_prev = true;
    st.rr_prev = 31.052199999999999;
    st.window_open = true;
    st.window_start = 30.0;
    st.window_rr_sum = 93.156600000000012;
    st.window_count = 3;
    st.window_feat_sum = {241.0, 242.5, 50.7, 291.0};
    st.window_feat_count = {3, 3, 3, 3};
    st.has_last_t = true;
    st.last_t = 32.0;
    st.windows_closed = 6;
    auto back = parse_detection_state(serialize(st));
    CHECK(back == st);  // defaulted operator== covers every field
}

TEST_CASE("detection state: default state round-trips too") {
    detector::DetectionState st;
    CHECK(parse_detection_state(serialize(st)) == st);
}

TEST_CASE("file helpers: write, read back, observe IoError") {
    const std::string path = testutil::temp_path("persist");
    write_file(path, "alpha: 1\n");
    CHECK(read_file(path) == "alpha: 1\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_file(path), IoError);
    CHECK_THROWS_AS(write_file("/nonexistent-dir/x/y.kv", "z"), IoError);
}

TEST_CASE("sha256_hex matches published vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
