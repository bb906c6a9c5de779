#include "smartband/detector.hpp"

#include <algorithm>
#include <cmath>

#include "smartband/errors.hpp"

namespace smartband::detector {

namespace {

void validate(const DetectorConfig& config) {
    if (!(config.window_s > 0.0)) throw ConfigError("window_s must be > 0");
    if (!(config.abnormal_band > 0.0)) {
        throw ConfigError("abnormal_band must be > 0");
    }
    if (!(config.flutter_delta > 0.0)) {
        throw ConfigError("flutter_delta must be > 0");
    }
    if (config.confirm_windows < 1) {
        throw ConfigError("confirm_windows must be >= 1");
    }
    if (config.cooldown_s < 0.0) throw ConfigError("cooldown_s must be >= 0");
}

/// Mean feature vector of the window, over the features that were
/// observed at least once; unobserved features take the model's overall
/// center of mass so they do not dominate the distance.
model::FeatureRow window_features(const DetectionState& state,
                                  const model::PersonalModel& personal) {
    model::FeatureRow fallback{};
    for (const model::FeatureRow& c : personal.centers) {
        for (std::size_t f = 0; f < model::kFeatureCount; ++f) {
            fallback[f] += c[f];
        }
    }
    if (!personal.centers.empty()) {
        for (double& v : fallback) {
            v /= static_cast<double>(personal.centers.size());
        }
    }

    model::FeatureRow row{};
    for (std::size_t f = 0; f < model::kFeatureCount; ++f) {
        row[f] = state.window_feat_count[f] > 0
                     ? state.window_feat_sum[f] /
                           static_cast<double>(state.window_feat_count[f])
                     : fallback[f];
    }
    return row;
}

/// True when the window looks like exertion: its feature vector sits
/// nearest the center with the highest pulse component. Meaningless with
/// fewer than two centers.
bool exercise_like(const DetectionState& state,
                   const model::PersonalModel& personal) {
    if (personal.centers.size() < 2) return false;
    std::size_t highest_pulse = 0;
    for (std::size_t c = 1; c < personal.centers.size(); ++c) {
        if (personal.centers[c][1] > personal.centers[highest_pulse][1]) {
            highest_pulse = c;
        }
    }
    std::size_t nearest = model::nearest_center(
        personal.centers, window_features(state, personal));
    return nearest == highest_pulse;
}

std::optional<AlertTrigger> close_window(DetectionState& state,
                                         const model::PersonalModel& personal,
                                         const DetectorConfig& config,
                                         double close_t) {
    double rr_t2 =
        state.window_rr_sum / static_cast<double>(state.window_count);
    ++state.windows_closed;

    std::optional<AlertTrigger> alert;
    bool evaluate = true;

    if (state.phase == Phase::Cooldown) {
        if (close_t < state.cooldown_until) {
            evaluate = false;
        } else {
            // Cooldown has expired; stay un-armed until a clean window so
            // an episode outlasting the cooldown triggers only once.
            state.phase = Phase::Normal;
            state.suspect_count = 0;
            state.rearmed = false;
        }
    }

    if (evaluate && config.adl_gate && exercise_like(state, personal)) {
        evaluate = false;
    }

    if (evaluate) {
        bool abnormal =
            std::abs(rr_t2 - personal.tau) > config.abnormal_band;
        bool fluttering =
            state.has_rr_prev &&
            std::abs(rr_t2 - state.rr_prev) > config.flutter_delta;
        if (!state.rearmed) {
            if (!(abnormal && fluttering)) state.rearmed = true;
        } else if (abnormal && fluttering) {
            ++state.suspect_count;
            state.phase = Phase::Suspect;
            if (state.suspect_count >= config.confirm_windows) {
                alert = AlertTrigger{close_t, state.rr_prev, rr_t2,
                                     personal.tau,
                                     AlertReason::AbnormalAndFluttering};
                state.phase = Phase::Cooldown;
                state.cooldown_until = close_t + config.cooldown_s;
                state.suspect_count = 0;
            }
        } else {
            state.phase = Phase::Normal;
            state.suspect_count = 0;
        }
    }

    state.rr_prev = rr_t2;
    state.has_rr_prev = true;
    state.window_open = false;
    state.window_rr_sum = 0.0;
    state.window_count = 0;
    state.window_feat_sum = {};
    state.window_feat_count = {};
    return alert;
}

void accumulate(DetectionState& state, const ingest::PulseSample& sample,
                double rr) {
    state.window_rr_sum += rr;
    ++state.window_count;
    const std::optional<double> vitals[model::kFeatureCount] = {
        sample.hr, sample.pulse, sample.resp, sample.spo2};
    for (std::size_t f = 0; f < model::kFeatureCount; ++f) {
        if (vitals[f]) {
            state.window_feat_sum[f] += *vitals[f];
            ++state.window_feat_count[f];
        }
    }
}

}  // namespace

DetectorConfig DetectorConfig::defaults_for(double sigma_rr) {
    DetectorConfig config;
    config.abnormal_band = std::max(2.0, 2.0 * sigma_rr);
    config.flutter_delta = std::max(1.0, sigma_rr);
    return config;
}

std::string_view phase_name(Phase p) {
    switch (p) {
        case Phase::Normal: return "normal";
        case Phase::Suspect: return "suspect";
        case Phase::Cooldown: return "cooldown";
    }
    return "normal";
}

Phase parse_phase(std::string_view name) {
    if (name == "normal") return Phase::Normal;
    if (name == "suspect") return Phase::Suspect;
    if (name == "cooldown") return Phase::Cooldown;
    throw ConfigError("unknown phase '" + std::string(name) + "'");
}

std::string_view reason_name(AlertReason r) {
    switch (r) {
        case AlertReason::AbnormalAndFluttering: {
            return "abnormal-and-fluttering";
        }
    }
    return "abnormal-and-fluttering";
}

std::optional<AlertTrigger> step(DetectionState& state,
                                 const model::PersonalModel& personal,
                                 const DetectorConfig& config,
                                 const ingest::PulseSample& sample) {
    validate(config);
    if (state.has_last_t && !(sample.t > state.last_t)) {
        throw OutOfOrderSample("sample at t=" + std::to_string(sample.t) +
                               " after t=" + std::to_string(state.last_t));
    }
    state.last_t = sample.t;
    state.has_last_t = true;

    if (!sample.pulse) return std::nullopt;

    std::optional<AlertTrigger> alert;
    if (state.window_open &&
        sample.t >= state.window_start + config.window_s) {
        alert = close_window(state, personal, config, sample.t);
    }
    if (!state.window_open) {
        state.window_open = true;
        state.window_start = sample.t;
    }
    accumulate(state, sample, model::predict_rr(personal.regression,
                                                *sample.pulse));
    return alert;
}

RunResult run_stream(std::span<const ingest::PulseSample> samples,
                     const model::PersonalModel& personal,
                     const DetectorConfig& config) {
    RunResult result;
    for (const ingest::PulseSample& sample : samples) {
        if (auto alert = step(result.final_state, personal, config, sample)) {
            result.alerts.push_back(*alert);
        }
    }
    return result;
}

}  // namespace smartband::detector
