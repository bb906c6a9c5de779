#include "smartband/persist.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "smartband/errors.hpp"

namespace smartband::persist {

namespace {

constexpr const char* kFeatureNames[model::kFeatureCount] = {"hr", "pulse",
                                                             "resp", "spo2"};

/// Model documents round-trip through text, so the writer pins float
/// formatting at 10 significant digits.
std::string f10(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

}  // namespace

kv::KvDoc to_kv(const ModelDocument& doc) {
    kv::KvDoc kv;
    kv.set_u64("schema_version", doc.schema_version);

    kv.set("regression.intercept", f10(doc.personal.regression.intercept));
    kv.set("regression.slope", f10(doc.personal.regression.slope));
    kv.set_u64("regression.n_train", doc.personal.regression.n_train);
    kv.set("tau", f10(doc.personal.tau));
    kv.set("sigma_rr", f10(doc.personal.sigma_rr));
    kv.set_u64("k", doc.personal.k);
    kv.set("variability_pct", f10(doc.personal.variability_pct));
    kv.set_bool("standardized", doc.personal.standardized);
    for (std::size_t c = 0; c < doc.personal.centers.size(); ++c) {
        for (std::size_t f = 0; f < model::kFeatureCount; ++f) {
            kv.set("centers." + kv::KvDoc::index_key(c) + "." +
                       kFeatureNames[f],
                   f10(doc.personal.centers[c][f]));
        }
    }

    kv.set("provenance.dataset_sha256", doc.provenance.dataset_sha256);
    kv.set("provenance.label", doc.provenance.label);
    kv.set_u64("provenance.rows_total", doc.provenance.rows_total);
    kv.set_u64("provenance.rows_regression", doc.provenance.rows_regression);
    kv.set_u64("provenance.rows_clustering", doc.provenance.rows_clustering);
    kv.set("provenance.preprocessing", doc.provenance.preprocessing);
    kv.set_u64("provenance.seed", doc.provenance.seed);
    kv.set_u64("provenance.restarts", doc.provenance.restarts);
    return kv;
}

ModelDocument model_document_from_kv(const kv::KvDoc& kv) {
    ModelDocument doc;
    doc.schema_version =
        static_cast<std::uint32_t>(kv.get_u64("schema_version"));
    if (doc.schema_version != 1) {
        throw ConfigError("unsupported model schema_version " +
                          std::to_string(doc.schema_version));
    }

    doc.personal.regression.intercept = kv.get_f64("regression.intercept");
    doc.personal.regression.slope = kv.get_f64("regression.slope");
    doc.personal.regression.n_train =
        static_cast<std::size_t>(kv.get_u64("regression.n_train"));
    doc.personal.tau = kv.get_f64("tau");
    doc.personal.sigma_rr = kv.get_f64("sigma_rr");
    doc.personal.k = static_cast<std::size_t>(kv.get_u64("k"));
    doc.personal.variability_pct = kv.get_f64("variability_pct");
    doc.personal.standardized = kv.get_bool("standardized");
    for (std::size_t c = 0; c < doc.personal.k; ++c) {
        model::FeatureRow row;
        for (std::size_t f = 0; f < model::kFeatureCount; ++f) {
            row[f] = kv.get_f64("centers." + kv::KvDoc::index_key(c) + "." +
                                kFeatureNames[f]);
        }
        doc.personal.centers.push_back(row);
    }

    doc.provenance.dataset_sha256 =
        kv.get_or_throw("provenance.dataset_sha256");
    doc.provenance.label = kv.get_or_throw("provenance.label");
    doc.provenance.rows_total =
        static_cast<std::size_t>(kv.get_u64("provenance.rows_total"));
    doc.provenance.rows_regression =
        static_cast<std::size_t>(kv.get_u64("provenance.rows_regression"));
    doc.provenance.rows_clustering =
        static_cast<std::size_t>(kv.get_u64("provenance.rows_clustering"));
    doc.provenance.preprocessing =
        kv.get_or_throw("provenance.preprocessing");
    doc.provenance.seed = kv.get_u64("provenance.seed");
    doc.provenance.restarts =
        static_cast<std::size_t>(kv.get_u64("provenance.restarts"));
    return doc;
}

std::string serialize(const ModelDocument& doc) {
    return to_kv(doc).serialize();
}

ModelDocument parse_model_document(std::string_view raw) {
    return model_document_from_kv(kv::KvDoc::parse(raw));
}

kv::KvDoc to_kv(const detector::DetectionState& state) {
    kv::KvDoc kv;
    kv.set("phase", std::string(detector::phase_name(state.phase)));
    kv.set_u64("suspect_count", state.suspect_count);
    kv.set_f64("cooldown_until", state.cooldown_until);
    kv.set_bool("rearmed", state.rearmed);
    kv.set_bool("has_rr_prev", state.has_rr_prev);
    kv.set_f64("rr_prev", state.rr_prev);
    kv.set_bool("window.open", state.window_open);
    kv.set_f64("window.start", state.window_start);
    kv.set_f64("window.rr_sum", state.window_rr_sum);
    kv.set_u64("window.count", state.window_count);
    for (std::size_t f = 0; f < model::kFeatureCount; ++f) {
        kv.set_f64(std::string("window.feat_sum.") + kFeatureNames[f],
                   state.window_feat_sum[f]);
        kv.set_u64(std::string("window.feat_count.") + kFeatureNames[f],
                   state.window_feat_count[f]);
    }
    kv.set_bool("has_last_t", state.has_last_t);
    kv.set_f64("last_t", state.last_t);
    kv.set_u64("windows_closed", state.windows_closed);
    return kv;
}

detector::DetectionState detection_state_from_kv(const kv::KvDoc& kv) {
    detector::DetectionState state;
    state.phase = detector::parse_phase(kv.get_or_throw("phase"));
    state.suspect_count =
        static_cast<std::size_t>(kv.get_u64("suspect_count"));
    state.cooldown_until = kv.get_f64("cooldown_until");
    state.rearmed = kv.get_bool("rearmed");
    state.has_rr_prev = kv.get_bool("has_rr_prev");
    state.rr_prev = kv.get_f64("rr_prev");
    state.window_open = kv.get_bool("window.open");
    state.window_start = kv.get_f64("window.start");
    state.window_rr_sum = kv.get_f64("window.rr_sum");
    state.window_count = static_cast<std::size_t>(kv.get_u64("window.count"));
    for (std::size_t f = 0; f < model::kFeatureCount; ++f) {
        state.window_feat_sum[f] =
            kv.get_f64(std::string("window.feat_sum.") + kFeatureNames[f]);
        state.window_feat_count[f] = static_cast<std::size_t>(
            kv.get_u64(std::string("window.feat_count.") + kFeatureNames[f]));
    }
    state.has_last_t = kv.get_bool("has_last_t");
    state.last_t = kv.get_f64("last_t");
    state.windows_closed =
        static_cast<std::size_t>(kv.get_u64("windows_closed"));
    return state;
}

std::string serialize(const detector::DetectionState& state) {
    return to_kv(state).serialize();
}

detector::DetectionState parse_detection_state(std::string_view raw) {
    return detection_state_from_kv(kv::KvDoc::parse(raw));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("read failed for '" + path + "'");
    return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
    // Write-then-rename keeps readers from ever seeing a half-written
    // file.
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out.write(contents.data(),
                  static_cast<std::streamsize>(contents.size()));
        if (!out) throw IoError("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw IoError("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                   nullptr) != 1) {
        throw IoError("sha256 computation failed");
    }
    std::string hex;
    hex.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        char buf[3];
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

}  // namespace smartband::persist
