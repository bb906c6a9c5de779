#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "smartband/detector.hpp"
#include "smartband/kvdoc.hpp"
#include "smartband/model.hpp"

namespace smartband::persist {

/// Where a trained model came from; stored alongside it so results can be
/// traced back to inputs.
struct Provenance {
    std::string dataset_sha256;
    std::string label;
    std::size_t rows_total = 0;
    std::size_t rows_regression = 0;
    std::size_t rows_clustering = 0;
    std::string preprocessing = "none";
    std::uint64_t seed = 0;
    std::size_t restarts = 0;
};

/// Versioned on-disk form of a trained model.
struct ModelDocument {
    std::uint32_t schema_version = 1;
    model::PersonalModel personal;
    Provenance provenance;
};

/// Model documents use %.10g for floats: stable formatting for review
/// diffs, more than enough precision for the detector's bands.
kv::KvDoc to_kv(const ModelDocument& doc);
ModelDocument model_document_from_kv(const kv::KvDoc& kv);  // ConfigError

std::string serialize(const ModelDocument& doc);
ModelDocument parse_model_document(std::string_view raw);

/// Detector state snapshots use %.17g so resume is bit-identical with an
/// uninterrupted run.
kv::KvDoc to_kv(const detector::DetectionState& state);
detector::DetectionState detection_state_from_kv(const kv::KvDoc& kv);

std::string serialize(const detector::DetectionState& state);
detector::DetectionState parse_detection_state(std::string_view raw);

/// Whole-file helpers. Throws IoError.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

}  // namespace smartband::persist
