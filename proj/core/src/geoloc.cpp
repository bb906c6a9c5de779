#include "smartband/geoloc.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace smartband::geoloc {

namespace {

std::vector<std::string_view> split_fields(std::string_view payload) {
    std::vector<std::string_view> fields;
    while (true) {
        std::size_t pos = payload.find(',');
        if (pos == std::string_view::npos) {
            fields.push_back(payload);
            return fields;
        }
        fields.push_back(payload.substr(0, pos));
        payload.remove_prefix(pos + 1);
    }
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

std::optional<double> parse_number(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::string buf(text);
    char* end = nullptr;
    double value = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

SentenceResult malformed(std::string detail) {
    return {SentenceStatus::Malformed, std::nullopt, std::move(detail)};
}

/// Supported addresses are GP/GN talkers carrying GGA or RMC; everything
/// else (other talkers, other sentence types) is skipped, not an error.
std::string_view sentence_type(std::string_view address) {
    if (address.size() != 5) return {};
    if (address.substr(0, 2) != "GP" && address.substr(0, 2) != "GN") {
        return {};
    }
    return address.substr(2);
}

SentenceResult parse_gga(const std::vector<std::string_view>& fields) {
    // $xxGGA,utc,lat,N,lon,E,quality,sats,hdop,alt,M,geoid,M,age,station
    if (fields.size() < 7) {
        return malformed("GGA needs at least 7 fields, got " +
                         std::to_string(fields.size()));
    }
    std::optional<double> quality_raw = parse_number(fields[6]);
    if (!quality_raw || *quality_raw < 0.0) {
        return malformed("GGA quality field is not a number");
    }
    int quality = static_cast<int>(*quality_raw);

    bool want_fix = quality >= 1;
    if (fields[2].empty() || fields[4].empty()) {
        if (want_fix) return malformed("GGA fix with empty coordinates");
        return {SentenceStatus::NoFixParsed, std::nullopt,
                "GGA quality 0"};
    }
    if (fields[3].size() != 1 || fields[5].size() != 1) {
        return malformed("GGA hemisphere fields must be single letters");
    }

    std::optional<double> lat = parse_coordinate(fields[2], fields[3][0], true);
    std::optional<double> lon =
        parse_coordinate(fields[4], fields[5][0], false);
    if (!lat || !lon) return malformed("GGA coordinates unparseable");

    GeoFix fix;
    fix.lat = *lat;
    fix.lon = *lon;
    fix.utc = std::string(fields[1]);
    fix.quality = quality == 0   ? FixQuality::NoFix
                  : quality == 1 ? FixQuality::GpsFix
                                 : FixQuality::DgpsFix;
    fix.source = FixSource::Gga;
    if (!want_fix) {
        return {SentenceStatus::NoFixParsed, fix, "GGA quality 0"};
    }
    return {SentenceStatus::Fix, fix, ""};
}

SentenceResult parse_rmc(const std::vector<std::string_view>& fields) {
    // $xxRMC,utc,status,lat,N,lon,E,speed,course,date,variation,E
    if (fields.size() < 7) {
        return malformed("RMC needs at least 7 fields, got " +
                         std::to_string(fields.size()));
    }
    std::string_view status = fields[2];
    if (status != "A" && status != "V") {
        return malformed("RMC status must be A or V");
    }

    bool active = status == "A";
    if (fields[3].empty() || fields[5].empty()) {
        if (active) return malformed("RMC active fix with empty coordinates");
        return {SentenceStatus::NoFixParsed, std::nullopt, "RMC status V"};
    }
    if (fields[4].size() != 1 || fields[6].size() != 1) {
        return malformed("RMC hemisphere fields must be single letters");
    }

    std::optional<double> lat = parse_coordinate(fields[3], fields[4][0], true);
    std::optional<double> lon =
        parse_coordinate(fields[5], fields[6][0], false);
    if (!lat || !lon) return malformed("RMC coordinates unparseable");

    GeoFix fix;
    fix.lat = *lat;
    fix.lon = *lon;
    fix.utc = std::string(fields[1]);
    fix.quality = active ? FixQuality::GpsFix : FixQuality::NoFix;
    fix.source = FixSource::Rmc;
    if (!active) {
        return {SentenceStatus::NoFixParsed, fix, "RMC status V"};
    }
    return {SentenceStatus::Fix, fix, ""};
}

}  // namespace

std::string_view status_name(SentenceStatus s) {
    switch (s) {
        case SentenceStatus::Fix: return "fix";
        case SentenceStatus::NoFixParsed: return "nofix";
        case SentenceStatus::Skipped: return "skipped";
        case SentenceStatus::BadChecksum: return "badsum";
        case SentenceStatus::Malformed: return "malformed";
    }
    return "skipped";
}

std::uint8_t checksum(std::string_view payload) {
    std::uint8_t sum = 0;
    for (char c : payload) sum ^= static_cast<std::uint8_t>(c);
    return sum;
}

std::optional<double> parse_coordinate(std::string_view value,
                                       char hemisphere, bool is_latitude) {
    bool negate;
    if (is_latitude && (hemisphere == 'N' || hemisphere == 'S')) {
        negate = hemisphere == 'S';
    } else if (!is_latitude && (hemisphere == 'E' || hemisphere == 'W')) {
        negate = hemisphere == 'W';
    } else {
        return std::nullopt;
    }

    // ddmm.mmmm for latitude, dddmm.mmmm for longitude: everything before
    // the last two integer digits is whole degrees.
    std::size_t dot = value.find('.');
    std::size_t int_len = dot == std::string_view::npos ? value.size() : dot;
    if (int_len < 3) return std::nullopt;  // needs degrees + 2 minute digits

    for (std::size_t i = 0; i < int_len; ++i) {
        if (value[i] < '0' || value[i] > '9') return std::nullopt;
    }

    std::string_view deg_text = value.substr(0, int_len - 2);
    std::optional<double> degrees = parse_number(deg_text);
    std::optional<double> minutes = parse_number(value.substr(int_len - 2));
    if (!degrees || !minutes) return std::nullopt;
    if (*minutes >= 60.0) return std::nullopt;

    double result = *degrees + *minutes / 60.0;
    double limit = is_latitude ? 90.0 : 180.0;
    if (result > limit) return std::nullopt;
    return negate ? -result : result;
}

SentenceResult parse_sentence(std::string_view line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
        line.remove_suffix(1);
    }

    // Frame runs from the first '$' to the last '*': leading garbage and
    // trailing noise around an intact sentence are tolerated.
    std::size_t dollar = line.find('$');
    if (dollar == std::string_view::npos) {
        return {SentenceStatus::Skipped, std::nullopt, ""};
    }
    std::size_t star = line.rfind('*');
    if (star == std::string_view::npos || star < dollar) {
        return malformed("no checksum delimiter");
    }

    std::string_view payload = line.substr(dollar + 1, star - dollar - 1);
    std::string_view stated = line.substr(star + 1);
    if (stated.size() < 2) return malformed("checksum too short");
    int hi = hex_digit(stated[0]);
    int lo = hex_digit(stated[1]);
    if (hi < 0 || lo < 0) {
        return {SentenceStatus::BadChecksum, std::nullopt,
                "checksum is not hex"};
    }
    auto stated_sum = static_cast<std::uint8_t>(hi * 16 + lo);
    std::uint8_t computed = checksum(payload);
    if (stated_sum != computed) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "stated %02X, computed %02X",
                      stated_sum, computed);
        return {SentenceStatus::BadChecksum, std::nullopt, buf};
    }

    std::vector<std::string_view> fields = split_fields(payload);
    std::string_view type = sentence_type(fields[0]);
    if (type == "GGA") return parse_gga(fields);
    if (type == "RMC") return parse_rmc(fields);
    return {SentenceStatus::Skipped, std::nullopt, ""};
}

std::string format_gga(const GeoFix& fix) {
    auto encode = [](double value, bool is_latitude) {
        double mag = std::abs(value);
        auto deg = static_cast<int>(mag);
        // Round minutes to 4 decimals up front so 59.99999 carries into
        // the degree field instead of printing as "60.0000".
        double minutes = std::round((mag - deg) * 60.0 * 1e4) / 1e4;
        if (minutes >= 60.0) {
            minutes -= 60.0;
            ++deg;
        }
        char buf[24];
        std::snprintf(buf, sizeof buf, is_latitude ? "%02d%07.4f" : "%03d%07.4f",
                      deg, minutes);
        return std::string(buf);
    };

    std::string payload = "GPGGA,";
    payload += fix.utc.empty() ? "000000" : fix.utc;
    payload += ',';
    payload += encode(fix.lat, true);
    payload += fix.lat < 0.0 ? ",S," : ",N,";
    payload += encode(fix.lon, false);
    payload += fix.lon < 0.0 ? ",W," : ",E,";
    payload += std::to_string(static_cast<int>(fix.quality));
    payload += ",08,0.9,0.0,M,0.0,M,,";

    char tail[8];
    std::snprintf(tail, sizeof tail, "*%02X", checksum(payload));
    return "$" + payload + tail;
}

SentenceResult FixTracker::feed_line(std::string_view line) {
    SentenceResult result = parse_sentence(line);
    if (result.status == SentenceStatus::Fix && result.fix) {
        std::lock_guard<std::mutex> lock(mutex_);
        latest_ = result.fix;
        ++fixes_seen_;
    }
    return result;
}

std::optional<GeoFix> FixTracker::latest() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return latest_;
}

std::size_t FixTracker::fixes_seen() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return fixes_seen_;
}

std::vector<SentenceResult> feed_log(FixTracker& tracker,
                                     std::string_view raw) {
    std::vector<SentenceResult> results;
    while (!raw.empty()) {
        std::size_t nl = raw.find('\n');
        std::string_view line =
            nl == std::string_view::npos ? raw : raw.substr(0, nl);
        raw.remove_prefix(nl == std::string_view::npos ? raw.size() : nl + 1);
        results.push_back(tracker.feed_line(line));
    }
    return results;
}

}  // namespace smartband::geoloc
