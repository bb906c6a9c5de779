#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smartband::geoloc {

enum class FixQuality : std::uint8_t { NoFix = 0, GpsFix = 1, DgpsFix = 2 };
enum class FixSource : std::uint8_t { Gga, Rmc };

struct GeoFix {
    double lat = 0.0;  // decimal degrees, north positive
    double lon = 0.0;  // decimal degrees, east positive
    std::string utc;   // hhmmss[.sss] as transmitted
    FixQuality quality = FixQuality::NoFix;
    FixSource source = FixSource::Gga;
};

enum class SentenceStatus : std::uint8_t {
    Fix,          // usable position extracted
    NoFixParsed,  // valid sentence, but quality 0 / status V / empty coords
    Skipped,      // not a GGA/RMC sentence (or no frame at all)
    BadChecksum,  // frame found but checksum mismatch / malformed hex
    Malformed,    // GGA/RMC frame with unusable fields
};

std::string_view status_name(SentenceStatus s);

struct SentenceResult {
    SentenceStatus status = SentenceStatus::Skipped;
    std::optional<GeoFix> fix;  // set only for status Fix
    std::string detail;         // short diagnostic, empty for Fix/Skipped
};

/// XOR of all payload bytes (between '$' and '*').
std::uint8_t checksum(std::string_view payload);

/// ddmm.mmmm / dddmm.mmmm -> signed decimal degrees. Hemisphere must be
/// one of NSEW; S/W negate. Returns nullopt for unparseable text, minutes
/// >= 60 or degrees outside the axis range.
std::optional<double> parse_coordinate(std::string_view value,
                                       char hemisphere, bool is_latitude);

/// Classifies and parses one line. The frame is taken from the first '$'
/// to the last '*' so leading garbage and trailing noise don't poison an
/// otherwise intact sentence. Only talker sentences ending GGA or RMC are
/// inspected; everything else is Skipped. Never throws on input content.
SentenceResult parse_sentence(std::string_view line);

/// Renders a GGA-style sentence for a fix (talker GP), with checksum.
/// Useful for loopback tests and log synthesis.
std::string format_gga(const GeoFix& fix);

/// Latest-fix keeper, safe to share between a reader thread and the
/// alerting path.
class FixTracker {
public:
    /// Feeds one line; stores the fix when status == Fix. Returns the
    /// classification.
    SentenceResult feed_line(std::string_view line);

    std::optional<GeoFix> latest() const;
    std::size_t fixes_seen() const;

private:
    mutable std::mutex mutex_;
    std::optional<GeoFix> latest_;
    std::size_t fixes_seen_ = 0;
};

/// Feeds every line of a log (LF or CRLF) through a tracker; returns the
/// per-line results in order.
std::vector<SentenceResult> feed_log(FixTracker& tracker, std::string_view raw);

}  // namespace smartband::geoloc
