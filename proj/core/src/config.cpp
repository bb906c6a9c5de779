#include "smartband/config.hpp"

#include <cstdlib>

#include "smartband/errors.hpp"
#include "smartband/persist.hpp"

namespace smartband::app {

namespace {

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> items;
    while (!text.empty()) {
        std::size_t comma = text.find(',');
        std::string_view item =
            comma == std::string_view::npos ? text : text.substr(0, comma);
        text.remove_prefix(comma == std::string_view::npos ? text.size()
                                                           : comma + 1);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) items.emplace_back(item);
    }
    return items;
}

std::vector<std::size_t> parse_size_list(std::string_view key,
                                         std::string_view text) {
    std::vector<std::size_t> values;
    for (const std::string& item : split_list(text)) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(item.c_str(), &end, 10);
        if (end != item.c_str() + item.size()) {
            throw ConfigError("key '" + std::string(key) +
                              "' has a non-integer entry: '" + item + "'");
        }
        values.push_back(static_cast<std::size_t>(v));
    }
    return values;
}

}  // namespace

std::string_view preprocessing_name(Preprocessing p) {
    switch (p) {
        case Preprocessing::None: return "none";
        case Preprocessing::DropMissing: return "drop-missing";
        case Preprocessing::DropZeros: return "drop-zeros";
    }
    return "none";
}

Preprocessing parse_preprocessing(std::string_view text) {
    if (text == "none") return Preprocessing::None;
    if (text == "drop-missing") return Preprocessing::DropMissing;
    if (text == "drop-zeros") return Preprocessing::DropZeros;
    throw ConfigError("unknown preprocessing '" + std::string(text) +
                      "' (expected none, drop-missing or drop-zeros)");
}

void apply_kv(AppConfig& config, const kv::KvDoc& doc) {
    for (const auto& [key, value] : doc.entries()) {
        if (key == "input_csv") {
            config.input_csv = value;
        } else if (key == "model_path") {
            config.model_path = value;
        } else if (key == "episode_csv") {
            config.episode_csv = value;
        } else if (key == "nmea_log") {
            config.nmea_log = value;
        } else if (key == "out_dir") {
            config.out_dir = value;
        } else if (key == "report_out") {
            config.report_out = value;
        } else if (key == "ks") {
            config.ks = parse_size_list(key, value);
            if (config.ks.empty()) {
                throw ConfigError("key 'ks' must list at least one k");
            }
        } else if (key == "seed") {
            config.seed = doc.get_u64(key);
        } else if (key == "restarts") {
            config.restarts = static_cast<std::size_t>(doc.get_u64(key));
        } else if (key == "standardize") {
            config.standardize = doc.get_bool(key);
        } else if (key == "preprocessing") {
            config.preprocessing = parse_preprocessing(value);
        } else if (key == "label") {
            config.label = value;
        } else if (key == "detector.window_s") {
            config.window_s = doc.get_f64(key);
        } else if (key == "detector.abnormal_band") {
            config.abnormal_band = doc.get_f64(key);
        } else if (key == "detector.flutter_delta") {
            config.flutter_delta = doc.get_f64(key);
        } else if (key == "detector.confirm_windows") {
            config.confirm_windows =
                static_cast<std::size_t>(doc.get_u64(key));
        } else if (key == "detector.cooldown_s") {
            config.cooldown_s = doc.get_f64(key);
        } else if (key == "detector.adl_gate") {
            config.adl_gate = doc.get_bool(key);
        } else if (key == "device_id") {
            config.device_id = value;
        } else if (key == "contacts") {
            config.contacts = split_list(value);
        } else if (key == "epoch_unix") {
            config.epoch_unix = static_cast<std::int64_t>(doc.get_u64(key));
        } else if (key == "max_retries") {
            config.max_retries = static_cast<std::size_t>(doc.get_u64(key));
        } else if (key == "modem_fail_sends") {
            config.modem_fail_sends = parse_size_list(key, value);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
}

AppConfig load_config(const std::optional<std::string>& cli_path) {
    AppConfig config;
    std::string path;
    if (cli_path) {
        path = *cli_path;
    } else if (const char* env = std::getenv("SMARTBAND_CONFIG")) {
        path = env;
    }
    if (!path.empty()) {
        apply_kv(config, kv::KvDoc::parse(persist::read_file(path)));
    }
    return config;
}

}  // namespace smartband::app
