#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smartband::ingest {

/// One timestamped telemetry row. Vitals are optional: monitors drop
/// individual channels intermittently and rows are kept regardless.
struct PulseSample {
    double t = 0.0;  // seconds since stream start, strictly increasing
    std::optional<double> hr;     // beats/min, [0, 300]
    std::optional<double> pulse;  // beats/min, [0, 300]
    std::optional<double> resp;   // breaths/min
    std::optional<double> spo2;   // percent, [0, 100]

    bool operator==(const PulseSample&) const = default;
};

enum class Activity { Rest, Walk, Jump, Hop, Swim, Exercise, Sleep };

std::string_view activity_name(Activity a);

/// One synthetic activity segment: pulse drawn from N(mean, stddev),
/// clamped to [30, 220].
struct AdlProfile {
    Activity activity = Activity::Rest;
    double mean_pulse = 70.0;  // beats/min, [30, 220]
    double stddev = 0.0;       // beats/min, >= 0
    double duration_s = 60.0;  // > 0
};

/// Parses a vitals-numerics CSV (first row header, comma separated, "."
/// decimal point, LF or CRLF).
///
/// Header matching is case-insensitive and ignores bracketed unit suffixes
/// ("Time [s]" == "time"). Recognized columns: time, HR / heart rate,
/// PULSE / pulse rate, RESP / resp rate / respiration, SpO2. Extra columns
/// are ignored. When the time column is absent, a 1 Hz cadence is assumed
/// (t = row index).
///
/// Empty cells, NaN tokens, unparseable numbers and out-of-range vitals
/// become missing values. Rows with missing or unparseable time are
/// rejected (skipped).
///
/// Throws MissingHeader, UnknownColumn, NonMonotonicTime.
std::vector<PulseSample> parse_numerics_csv(std::string_view raw);

/// Inverse of parse_numerics_csv for the recognized columns; doubles are
/// written with enough digits to round-trip exactly.
std::string write_numerics_csv(std::span<const PulseSample> samples);

/// Generates concatenated ADL segments; deterministic for a fixed seed.
/// Segment i contributes ceil(duration_i / dt) samples; t starts at 0 and
/// advances by dt. Only the pulse field is populated.
/// Throws EmptyProfileList.
std::vector<PulseSample> synth_adl(std::span<const AdlProfile> profiles,
                                   std::uint64_t seed, double dt);

/// Replays a sample list in order. A finite speed multiplier paces
/// inter-arrival gaps by sleeping (t_i - t_{i-1}) / speed; an infinite
/// speed (offline mode) yields without pacing. Pacing never reorders or
/// drops samples. Throws EmptyInput.
class StreamReplayer {
public:
    StreamReplayer(std::vector<PulseSample> samples, double speed);

    static StreamReplayer offline(std::vector<PulseSample> samples);

    /// Next sample in order, or nullopt when exhausted.
    std::optional<PulseSample> next();

    bool done() const { return index_ >= samples_.size(); }

private:
    std::vector<PulseSample> samples_;
    double speed_;
    std::size_t index_ = 0;
};

}  // namespace smartband::ingest
