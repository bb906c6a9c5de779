#include "smartband/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

#include "smartband/errors.hpp"

namespace smartband::ingest {

namespace {

constexpr double kPulseMin = 0.0, kPulseMax = 300.0;
constexpr double kSpo2Min = 0.0, kSpo2Max = 100.0;
constexpr double kSynthClampLo = 30.0, kSynthClampHi = 220.0;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() &&
           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> cells;
    while (true) {
        std::size_t pos = line.find(sep);
        if (pos == std::string_view::npos) {
            cells.push_back(line);
            return cells;
        }
        cells.push_back(line.substr(0, pos));
        line.remove_prefix(pos + 1);
    }
}

std::optional<double> parse_cell(std::string_view cell) {
    cell = trim(cell);
    if (cell.empty()) return std::nullopt;
    std::string text(cell);
    char* end = nullptr;
    double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;  // catches nan/inf tokens
    return value;
}

/// Lowercases, strips a bracketed unit suffix, trims, collapses runs of
/// spaces: "Time [s]" -> "time", "RESP RATE" -> "resp rate".
std::string normalize_header(std::string_view cell) {
    std::string name;
    for (char c : cell) {
        if (c == '[') break;
        name += static_cast<char>(
            std::tolower(static_cast<unsigned char>(c)));
    }
    std::string out;
    for (char c : name) {
        if (c == ' ' || c == '\t' || c == '\r') {
            if (!out.empty() && out.back() != ' ') out += ' ';
        } else {
            out += c;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

enum class Column { Time, Hr, Pulse, Resp, Spo2, Ignored };

Column classify_header(std::string_view normalized) {
    if (normalized == "time" || normalized == "t" ||
        normalized == "elapsed time") {
        return Column::Time;
    }
    if (normalized == "hr" || normalized == "heart rate") return Column::Hr;
    if (normalized == "pulse" || normalized == "pulse rate") {
        return Column::Pulse;
    }
    if (normalized == "resp" || normalized == "resp rate" ||
        normalized == "respiration" || normalized == "respiratory rate") {
        return Column::Resp;
    }
    if (normalized == "spo2") return Column::Spo2;
    return Column::Ignored;
}

bool looks_numeric(std::string_view line) {
    for (std::string_view cell : split(line, ',')) {
        if (parse_cell(cell)) return true;
    }
    return false;
}

std::optional<double> in_range(std::optional<double> v, double lo, double hi) {
    if (v && (*v < lo || *v > hi)) return std::nullopt;
    return v;
}

void append_cell(std::string& out, const std::optional<double>& v) {
    if (v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", *v);
        out += buf;
    }
}

}  // namespace

std::string_view activity_name(Activity a) {
    switch (a) {
        case Activity::Rest: return "rest";
        case Activity::Walk: return "walk";
        case Activity::Jump: return "jump";
        case Activity::Hop: return "hop";
        case Activity::Swim: return "swim";
        case Activity::Exercise: return "exercise";
        case Activity::Sleep: return "sleep";
    }
    return "rest";
}

std::vector<PulseSample> parse_numerics_csv(std::string_view raw) {
    // Header row.
    std::size_t nl = raw.find('\n');
    std::string_view header_line =
        nl == std::string_view::npos ? raw : raw.substr(0, nl);
    raw.remove_prefix(nl == std::string_view::npos ? raw.size() : nl + 1);

    if (trim(header_line).empty()) {
        throw MissingHeader("input has no header row");
    }
    if (looks_numeric(header_line)) {
        throw MissingHeader("first row looks like data, not a header");
    }

    std::vector<Column> columns;
    bool any_vital = false;
    for (std::string_view cell : split(header_line, ',')) {
        Column c = classify_header(normalize_header(cell));
        if (c == Column::Hr || c == Column::Pulse || c == Column::Resp ||
            c == Column::Spo2) {
            any_vital = true;
        }
        columns.push_back(c);
    }
    if (!any_vital) {
        throw UnknownColumn("header names none of HR, PULSE, RESP, SpO2");
    }
    bool has_time =
        std::find(columns.begin(), columns.end(), Column::Time) != columns.end();

    // Data rows.
    std::vector<PulseSample> samples;
    while (!raw.empty()) {
        nl = raw.find('\n');
        std::string_view line =
            nl == std::string_view::npos ? raw : raw.substr(0, nl);
        raw.remove_prefix(nl == std::string_view::npos ? raw.size() : nl + 1);
        if (trim(line).empty()) continue;

        std::vector<std::string_view> cells = split(line, ',');
        PulseSample sample;
        std::optional<double> t;
        for (std::size_t i = 0; i < columns.size() && i < cells.size(); ++i) {
            std::optional<double> v = parse_cell(cells[i]);
            switch (columns[i]) {
                case Column::Time: t = v; break;
                case Column::Hr: sample.hr = in_range(v, kPulseMin, kPulseMax); break;
                case Column::Pulse:
                    sample.pulse = in_range(v, kPulseMin, kPulseMax);
                    break;
                case Column::Resp:
                    sample.resp = in_range(v, 0.0,
                                           std::numeric_limits<double>::max());
                    break;
                case Column::Spo2:
                    sample.spo2 = in_range(v, kSpo2Min, kSpo2Max);
                    break;
                case Column::Ignored: break;
            }
        }

        if (has_time) {
            if (!t || *t < 0.0) continue;  // unusable time: reject the row
            sample.t = *t;
        } else {
            sample.t = static_cast<double>(samples.size());
        }
        if (!samples.empty() && sample.t <= samples.back().t) {
            throw NonMonotonicTime(
                "data row " + std::to_string(samples.size() + 1) +
                ": time must be strictly increasing: " +
                std::to_string(samples.back().t) + " then " +
                std::to_string(sample.t));
        }
        samples.push_back(sample);
    }
    return samples;
}

std::string write_numerics_csv(std::span<const PulseSample> samples) {
    std::string out = "Time [s],HR,PULSE,RESP,SpO2\n";
    for (const PulseSample& s : samples) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", s.t);
        out += buf;
        out += ',';
        append_cell(out, s.hr);
        out += ',';
        append_cell(out, s.pulse);
        out += ',';
        append_cell(out, s.resp);
        out += ',';
        append_cell(out, s.spo2);
        out += '\n';
    }
    return out;
}

std::vector<PulseSample> synth_adl(std::span<const AdlProfile> profiles,
                                   std::uint64_t seed, double dt) {
    if (profiles.empty()) {
        throw EmptyProfileList("synth_adl needs at least one profile");
    }
    if (!(dt > 0.0)) {
        throw EmptyProfileList("synth_adl needs dt > 0");
    }

    std::mt19937_64 rng(seed);
    std::vector<PulseSample> samples;
    double t = 0.0;
    for (const AdlProfile& profile : profiles) {
        auto count = static_cast<std::size_t>(
            std::ceil(profile.duration_s / dt));
        // normal_distribution requires sigma > 0; a zero-spread segment is
        // just the mean.
        std::normal_distribution<double> dist(profile.mean_pulse,
                                              profile.stddev);
        for (std::size_t i = 0; i < count; ++i) {
            double pulse =
                profile.stddev > 0.0 ? dist(rng) : profile.mean_pulse;
            pulse = std::clamp(pulse, kSynthClampLo, kSynthClampHi);
            PulseSample sample;
            sample.t = t;
            sample.pulse = pulse;
            samples.push_back(sample);
            t += dt;
        }
    }
    return samples;
}

StreamReplayer::StreamReplayer(std::vector<PulseSample> samples, double speed)
    : samples_(std::move(samples)), speed_(speed) {
    if (samples_.empty()) {
        throw EmptyInput("replay needs at least one sample");
    }
    if (!(speed_ > 0.0)) {
        throw EmptyInput("replay speed must be positive");
    }
}

StreamReplayer StreamReplayer::offline(std::vector<PulseSample> samples) {
    return StreamReplayer(std::move(samples),
                          std::numeric_limits<double>::infinity());
}

std::optional<PulseSample> StreamReplayer::next() {
    if (index_ >= samples_.size()) return std::nullopt;
    const PulseSample& sample = samples_[index_];
    if (index_ > 0 && std::isfinite(speed_)) {
        double gap_s = (sample.t - samples_[index_ - 1].t) / speed_;
        if (gap_s > 0.0) {
            std::this_thread::sleep_for(std::chrono::duration<double>(gap_s));
        }
    }
    ++index_;
    return sample;
}

}  // namespace smartband::ingest
