#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "smartband/ingest.hpp"
#include "smartband/model.hpp"

namespace smartband::detector {

/// Tunables for the streaming detector. Band widths default to multiples
/// of the model's residual spread via defaults_for().
struct DetectorConfig {
    double window_s = 5.0;       // aggregation window length
    double abnormal_band = 2.0;  // |rr_t2 - tau| beyond this is abnormal
    double flutter_delta = 1.0;  // |rr_t2 - rr_t1| beyond this is a swing
    std::size_t confirm_windows = 2;  // consecutive abnormal windows to alert
    double cooldown_s = 300.0;        // quiet period after an alert
    bool adl_gate = false;  // suppress during exercise-like activity

    /// abnormal_band = max(2, 2*sigma_rr), flutter_delta = max(1, sigma_rr);
    /// other fields keep their defaults.
    static DetectorConfig defaults_for(double sigma_rr);
};

enum class Phase : std::uint8_t { Normal, Suspect, Cooldown };

std::string_view phase_name(Phase p);
Phase parse_phase(std::string_view name);  // throws ConfigError

enum class AlertReason : std::uint8_t { AbnormalAndFluttering };

std::string_view reason_name(AlertReason r);

/// Raised when confirm_windows consecutive windows each satisfy both
/// abnormality conditions. Always |rr_t2 - tau| > abnormal_band and
/// |rr_t2 - rr_t1| > flutter_delta at emission.
struct AlertTrigger {
    double t = 0.0;      // close time of the confirming window
    double rr_t1 = 0.0;  // previous window's resting-rate estimate
    double rr_t2 = 0.0;  // confirming window's resting-rate estimate
    double tau = 0.0;    // threshold in force at emission
    AlertReason reason = AlertReason::AbnormalAndFluttering;
};

/// Complete detector position between samples; plain data so a snapshot
/// can be persisted and resumed without behavioral change.
struct DetectionState {
    Phase phase = Phase::Normal;
    std::size_t suspect_count = 0;   // consecutive abnormal windows so far
    double cooldown_until = 0.0;
    bool rearmed = true;  // false between cooldown expiry and one clean window
    bool has_rr_prev = false;
    double rr_prev = 0.0;  // the feedback value rr_t1

    bool window_open = false;
    double window_start = 0.0;
    double window_rr_sum = 0.0;
    std::size_t window_count = 0;  // pulse-bearing samples in the window
    std::array<double, model::kFeatureCount> window_feat_sum{};
    std::array<std::size_t, model::kFeatureCount> window_feat_count{};

    bool has_last_t = false;
    double last_t = 0.0;
    std::size_t windows_closed = 0;

    bool operator==(const DetectionState&) const = default;
};

/// Feeds one sample.
///
/// Samples with missing pulse only advance the ordering clock. A
/// pulse-bearing sample first closes the open window when its t has
/// reached window_start + window_s (the closing sample starts the next
/// window), then accumulates rr = predict_rr(pulse) plus any present
/// vitals into the open window.
///
/// A closed window's mean rr becomes rr_t2 and is evaluated:
///   condition 1: |rr_t2 - tau| > abnormal_band
///   condition 2: rr_prev present and |rr_t2 - rr_prev| > flutter_delta
/// Both hold -> suspect streak grows; reaching confirm_windows emits one
/// AlertTrigger and enters Cooldown until t + cooldown_s. Windows closing
/// during Cooldown update rr_prev but are not evaluated; after it expires
/// the detector stays un-armed until one window evaluates clean, so an
/// episode outlasting the cooldown triggers exactly once. With adl_gate
/// on and k >= 2 centers, a window whose mean feature vector sits nearest
/// the highest-pulse center is treated as exertion and not evaluated.
///
/// Throws OutOfOrderSample when t is not strictly past the previous call,
/// ConfigError on an invalid config.
std::optional<AlertTrigger> step(DetectionState& state,
                                 const model::PersonalModel& personal,
                                 const DetectorConfig& config,
                                 const ingest::PulseSample& sample);

struct RunResult {
    std::vector<AlertTrigger> alerts;
    DetectionState final_state;
};

/// Folds step over the stream from a fresh state; a pure function of its
/// arguments.
RunResult run_stream(std::span<const ingest::PulseSample> samples,
                     const model::PersonalModel& personal,
                     const DetectorConfig& config);

}  // namespace smartband::detector
