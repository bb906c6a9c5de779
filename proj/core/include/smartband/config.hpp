#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smartband/kvdoc.hpp"

namespace smartband::app {

/// Row filtering applied before training.
///   none         — each fit drops only what it cannot use (regression:
///                  rows missing pulse or resp; clustering: rows missing
///                  any vital)
///   drop-missing — rows missing any of the four vitals are removed first
///   drop-zeros   — rows missing pulse or resp, or with pulse == 0 or
///                  resp == 0, are removed first
enum class Preprocessing : std::uint8_t { None, DropMissing, DropZeros };

std::string_view preprocessing_name(Preprocessing p);
Preprocessing parse_preprocessing(std::string_view text);  // throws ConfigError

/// All knobs for the command-line front end. Field names double as config
/// file keys (dots for nesting, e.g. "detector.window_s").
struct AppConfig {
    // inputs / outputs
    std::string input_csv;    // train, report
    std::string model_path;   // train writes, simulate reads
    std::string episode_csv;  // simulate
    std::string nmea_log;     // simulate (optional), parse-nmea
    std::string out_dir;      // simulate run artifacts ("" = stdout only)
    std::string report_out;   // report ("" = stdout)

    // training
    std::vector<std::size_t> ks{3, 5};  // first entry is persisted in the model
    std::uint64_t seed = 42;
    std::size_t restarts = 25;
    bool standardize = false;
    Preprocessing preprocessing = Preprocessing::None;
    std::string label;  // free-form run label recorded in outputs

    // detector overrides (unset fields fall back to defaults_for(sigma_rr))
    std::optional<double> window_s;
    std::optional<double> abnormal_band;
    std::optional<double> flutter_delta;
    std::optional<std::size_t> confirm_windows;
    std::optional<double> cooldown_s;
    bool adl_gate = false;

    // alerting
    std::string device_id = "band-000";
    std::vector<std::string> contacts;
    std::int64_t epoch_unix = 1577836800;
    std::size_t max_retries = 2;
    std::vector<std::size_t> modem_fail_sends;  // scripted send failures
};

/// Applies recognized keys from a parsed document onto `config`.
/// Unknown keys throw ConfigError so typos cannot pass silently.
void apply_kv(AppConfig& config, const kv::KvDoc& doc);

/// Loads a config file when a path is given; otherwise consults the
/// SMARTBAND_CONFIG environment variable; otherwise returns defaults.
/// Throws IoError when a named file is unreadable.
AppConfig load_config(const std::optional<std::string>& cli_path);

}  // namespace smartband::app
