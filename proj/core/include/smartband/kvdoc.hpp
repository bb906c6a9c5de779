#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smartband::kv {

/// Flat "key: value" document with deterministic serialization: keys are
/// emitted sorted bytewise, one per line, LF endings. Keys are dotted
/// paths; list elements use two-digit indices ("centers.00.pulse") so
/// lexicographic order matches numeric order for up to 100 entries.
class KvDoc {
public:
    void set(std::string key, std::string value);
    void set_f64(std::string key, double value);   // %.17g, round-trips exactly
    void set_u64(std::string key, std::uint64_t value);
    void set_bool(std::string key, bool value);    // "true" / "false"

    std::optional<std::string_view> get(std::string_view key) const;
    std::string get_or_throw(std::string_view key) const;  // ConfigError
    double get_f64(std::string_view key) const;            // ConfigError
    std::uint64_t get_u64(std::string_view key) const;     // ConfigError
    bool get_bool(std::string_view key) const;             // ConfigError
    bool contains(std::string_view key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

    std::string serialize() const;

    /// Parses serialize() output plus human-written variants: blank lines
    /// and '#' comment lines are ignored, whitespace around key and value
    /// is trimmed. Duplicate keys keep the last value. Throws ConfigError
    /// on a non-comment line without ':'.
    static KvDoc parse(std::string_view raw);

    /// "00", "01", ... index fragment used for list keys.
    static std::string index_key(std::size_t i);

private:
    std::map<std::string, std::string> entries_;
};

}  // namespace smartband::kv
