#include "smartband/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "smartband/alerting.hpp"
#include "smartband/detector.hpp"
#include "smartband/errors.hpp"
#include "smartband/geoloc.hpp"
#include "smartband/ingest.hpp"
#include "smartband/kvdoc.hpp"
#include "smartband/model.hpp"
#include "smartband/persist.hpp"

namespace smartband::app {

namespace {

// Reference values the reproduction study compares against.
constexpr const char* kRefIntercept = "41.1532";
constexpr const char* kRefSlope = "-0.2886";
constexpr double kRefInterceptValue = 41.1532;
constexpr double kRefSlopeValue = -0.2886;
constexpr const char* kRefVariabilityK3 = "79.31";
constexpr const char* kRefVariabilityK5 = "75.16";
constexpr double kRefVariabilityK3Value = 79.31;
constexpr double kRefVariabilityK5Value = 75.16;

std::string f10(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

/// Re-throws any pipeline error with the originating file prepended, so
/// CLI diagnostics always name their source.
template <typename Fn>
auto with_source(const std::string& path, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

std::string require(const std::string& value, const char* flag) {
    if (value.empty()) {
        throw ConfigError(std::string("missing required option ") + flag);
    }
    return value;
}

std::vector<ingest::PulseSample> apply_preprocessing(
    const std::vector<ingest::PulseSample>& samples, Preprocessing p) {
    if (p == Preprocessing::None) return samples;
    std::vector<ingest::PulseSample> kept;
    kept.reserve(samples.size());
    for (const ingest::PulseSample& s : samples) {
        bool keep = true;
        if (p == Preprocessing::DropMissing) {
            keep = s.hr && s.pulse && s.resp && s.spo2;
        } else {  // DropZeros
            keep = s.pulse && s.resp && *s.pulse != 0.0 && *s.resp != 0.0;
        }
        if (keep) kept.push_back(s);
    }
    return kept;
}

detector::DetectorConfig detector_config(const AppConfig& config,
                                         double sigma_rr) {
    detector::DetectorConfig dcfg =
        detector::DetectorConfig::defaults_for(sigma_rr);
    if (config.window_s) dcfg.window_s = *config.window_s;
    if (config.abnormal_band) dcfg.abnormal_band = *config.abnormal_band;
    if (config.flutter_delta) dcfg.flutter_delta = *config.flutter_delta;
    if (config.confirm_windows) dcfg.confirm_windows = *config.confirm_windows;
    if (config.cooldown_s) dcfg.cooldown_s = *config.cooldown_s;
    dcfg.adl_gate = config.adl_gate;
    return dcfg;
}

int guarded(std::ostream& err, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int cmd_train(const AppConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::string input = require(config.input_csv, "input_csv");
        std::string model_out = require(config.model_path, "model_path");
        if (config.ks.empty()) throw ConfigError("ks must not be empty");

        std::string raw = persist::read_file(input);
        std::vector<ingest::PulseSample> samples =
            with_source(input, [&] { return ingest::parse_numerics_csv(raw); });
        std::vector<ingest::PulseSample> filtered =
            apply_preprocessing(samples, config.preprocessing);

        model::TrainOptions options;
        options.k = config.ks.front();
        options.seed = config.seed;
        options.restarts = config.restarts;
        options.standardize = config.standardize;
        model::PersonalModel personal = with_source(
            input, [&] { return model::train_personal_model(filtered, options); });

        std::vector<model::FeatureRow> rows =
            model::complete_feature_rows(filtered);

        persist::ModelDocument doc;
        doc.personal = personal;
        doc.provenance.dataset_sha256 = persist::sha256_hex(raw);
        doc.provenance.label = config.label;
        doc.provenance.rows_total = samples.size();
        doc.provenance.rows_regression = personal.regression.n_train;
        doc.provenance.rows_clustering = rows.size();
        doc.provenance.preprocessing =
            std::string(preprocessing_name(config.preprocessing));
        doc.provenance.seed = config.seed;
        doc.provenance.restarts = config.restarts;
        persist::write_file(model_out, persist::serialize(doc));

        out << "rows: total=" << samples.size()
            << " regression=" << personal.regression.n_train
            << " clustering=" << rows.size() << "\n";
        out << "intercept: " << fixed(personal.regression.intercept, 6) << "\n";
        out << "slope: " << fixed(personal.regression.slope, 6) << "\n";
        out << "tau: " << fixed(personal.tau, 6) << "\n";
        out << "sigma_rr: " << fixed(personal.sigma_rr, 6) << "\n";

        // First k is already part of the trained model; the rest are
        // computed the same way for comparison.
        for (std::size_t k : config.ks) {
            double pct;
            if (k == config.ks.front()) {
                pct = personal.variability_pct;
            } else {
                model::TrainOptions alt = options;
                alt.k = k;
                pct = model::train_personal_model(filtered, alt)
                          .variability_pct;
            }
            out << "variability k=" << k << ": " << fixed(pct, 2) << "% ("
                << (config.standardize ? "standardized" : "raw") << ")\n";
        }
        out << "model written to " << model_out << "\n";
    });
}

int cmd_report(const AppConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::string input = require(config.input_csv, "input_csv");
        std::string raw = persist::read_file(input);
        std::vector<ingest::PulseSample> samples =
            with_source(input, [&] { return ingest::parse_numerics_csv(raw); });

        std::string text;
        text += "dataset: " + input + "\n";
        text += "sha256: " + persist::sha256_hex(raw) + "\n";
        text += "rows: " + std::to_string(samples.size()) + "\n\n";

        text += "resting-rate regression (resp ~ pulse); reference: rr = ";
        text += std::string(kRefIntercept) + " + (" + kRefSlope + ") * pr\n";
        char line[160];
        std::snprintf(line, sizeof line, "%-14s %5s %12s %12s %14s %12s\n",
                      "preprocessing", "rows", "intercept", "slope",
                      "|d-intercept|", "|d-slope|");
        text += line;
        for (Preprocessing p : {Preprocessing::None, Preprocessing::DropMissing,
                                Preprocessing::DropZeros}) {
            std::vector<ingest::PulseSample> filtered =
                apply_preprocessing(samples, p);
            model::RegressionModel reg = with_source(
                input, [&] { return model::fit_resting_rate(filtered); });
            std::snprintf(line, sizeof line,
                          "%-14s %5zu %12.6f %12.6f %14.6f %12.6f\n",
                          std::string(preprocessing_name(p)).c_str(),
                          reg.n_train, reg.intercept, reg.slope,
                          std::abs(reg.intercept - kRefInterceptValue),
                          std::abs(reg.slope - kRefSlopeValue));
            text += line;
        }

        std::vector<model::FeatureRow> rows =
            model::complete_feature_rows(samples);
        text += "\nclustering variability (" + std::to_string(config.restarts) +
                " restarts, seed " + std::to_string(config.seed) +
                ", complete rows: " + std::to_string(rows.size()) + ")\n";
        text += "reference: k=3 -> " + std::string(kRefVariabilityK3) +
                "%, k=5 -> " + std::string(kRefVariabilityK5) + "%\n";
        std::snprintf(line, sizeof line, "%2s %-4s %12s %10s %11s\n", "k",
                      "mode", "variability%", "reference%", "|deviation|");
        text += line;

        model::Standardizer st = model::fit_standardizer(rows);
        std::vector<model::FeatureRow> scaled(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            scaled[i] = st.apply(rows[i]);
        }

        struct ModeEntry {
            const char* name;
            const std::vector<model::FeatureRow>* rows;
        };
        const ModeEntry modes[2] = {{"raw", &rows}, {"z", &scaled}};
        double computed[2][2] = {};  // [mode][k index among {3, 5}]
        bool have[2][2] = {};

        for (std::size_t m = 0; m < 2; ++m) {
            for (std::size_t k : config.ks) {
                model::KmeansResult km = model::kmeans(
                    *modes[m].rows, k, config.seed, config.restarts);
                double pct = model::variability(km.within_ss, km.total_ss);
                const char* ref = "-";
                std::string dev = "-";
                if (k == 3) {
                    ref = kRefVariabilityK3;
                    dev = fixed(std::abs(pct - kRefVariabilityK3Value), 2);
                    computed[m][0] = pct;
                    have[m][0] = true;
                } else if (k == 5) {
                    ref = kRefVariabilityK5;
                    dev = fixed(std::abs(pct - kRefVariabilityK5Value), 2);
                    computed[m][1] = pct;
                    have[m][1] = true;
                }
                std::snprintf(line, sizeof line, "%2zu %-4s %12.2f %10s %11s\n",
                              k, modes[m].name, pct, ref, dev.c_str());
                text += line;
            }
        }

        for (std::size_t m = 0; m < 2; ++m) {
            if (have[m][0] && have[m][1]) {
                text += "ordering (" + std::string(modes[m].name) +
                        "): computed k=3 " + fixed(computed[m][0], 2) +
                        "% vs k=5 " + fixed(computed[m][1], 2) + "% -> " +
                        (computed[m][1] < computed[m][0] ? "decreases"
                                                         : "increases") +
                        "; reference decreases\n";
            }
        }

        if (config.report_out.empty()) {
            out << text;
        } else {
            persist::write_file(config.report_out, text);
            out << "report written to " << config.report_out << "\n";
        }
    });
}

int cmd_simulate(const AppConfig& config, std::ostream& out,
                 std::ostream& err) {
    return guarded(err, [&] {
        std::string model_path = require(config.model_path, "model_path");
        std::string episode_path = require(config.episode_csv, "episode_csv");
        if (config.contacts.empty()) {
            throw NoContacts("simulate needs at least one contact");
        }

        persist::ModelDocument doc = with_source(model_path, [&] {
            return persist::parse_model_document(
                persist::read_file(model_path));
        });
        std::vector<ingest::PulseSample> episode =
            with_source(episode_path, [&] {
                return ingest::parse_numerics_csv(
                    persist::read_file(episode_path));
            });

        // The position source is consumed up front: alerts carry the last
        // valid fix of the log (NMEA sentences carry UTC time-of-day, not
        // stream offsets, so there is no later fix to wait for).
        geoloc::FixTracker tracker;
        std::size_t nmea_lines = 0;
        if (!config.nmea_log.empty()) {
            std::string nmea_raw = persist::read_file(config.nmea_log);
            nmea_lines = geoloc::feed_log(tracker, nmea_raw).size();
        }
        std::optional<geoloc::GeoFix> fix = tracker.latest();

        detector::DetectorConfig dcfg =
            detector_config(config, doc.personal.sigma_rr);
        detector::RunResult run =
            detector::run_stream(episode, doc.personal, dcfg);

        alerting::ScriptedModem modem(config.modem_fail_sends);
        struct AlertOutput {
            alerting::AlertMessage message;
            std::vector<alerting::DeliveryRecord> deliveries;
        };
        std::vector<AlertOutput> outputs;
        for (const detector::AlertTrigger& trigger : run.alerts) {
            AlertOutput ao;
            ao.message = alerting::compose_sms(trigger, fix, config.device_id,
                                               config.epoch_unix);
            ao.deliveries = alerting::dispatch(ao.message, config.contacts,
                                               modem, config.max_retries);
            outputs.push_back(std::move(ao));
        }

        kv::KvDoc report;
        report.set("label", config.label);
        report.set_u64("samples", episode.size());
        report.set_u64("windows_closed", run.final_state.windows_closed);
        report.set_u64("nmea.lines", nmea_lines);
        report.set_u64("nmea.fixes", tracker.fixes_seen());
        report.set_u64("alerts.count", run.alerts.size());
        for (std::size_t i = 0; i < outputs.size(); ++i) {
            const detector::AlertTrigger& trigger = run.alerts[i];
            const AlertOutput& ao = outputs[i];
            std::string prefix = "alerts." + kv::KvDoc::index_key(i) + ".";
            report.set(prefix + "t", f10(trigger.t));
            report.set(prefix + "rr_t1", f10(trigger.rr_t1));
            report.set(prefix + "rr_t2", f10(trigger.rr_t2));
            report.set(prefix + "tau", f10(trigger.tau));
            report.set(prefix + "reason",
                       std::string(detector::reason_name(trigger.reason)));
            report.set(prefix + "time", ao.message.time_text);
            if (ao.message.lat) {
                report.set(prefix + "lat", fixed(*ao.message.lat, 6));
                report.set(prefix + "lon", fixed(*ao.message.lon, 6));
            } else {
                report.set(prefix + "loc", "unavailable");
            }
            report.set(prefix + "body", ao.message.body);
            for (std::size_t d = 0; d < ao.deliveries.size(); ++d) {
                const alerting::DeliveryRecord& rec = ao.deliveries[d];
                std::string dp =
                    prefix + "deliveries." + kv::KvDoc::index_key(d) + ".";
                report.set(dp + "recipient", rec.recipient);
                report.set_u64(dp + "attempts", rec.attempts);
                report.set(dp + "outcome",
                           rec.outcome == alerting::DeliveryOutcome::Delivered
                               ? "delivered"
                               : "failed");
            }
        }

        out << "samples: " << episode.size() << "\n";
        out << "windows closed: " << run.final_state.windows_closed << "\n";
        if (!config.nmea_log.empty()) {
            out << "nmea: " << nmea_lines << " lines, "
                << tracker.fixes_seen() << " fixes\n";
        }
        out << "alerts: " << run.alerts.size() << "\n";
        for (std::size_t i = 0; i < outputs.size(); ++i) {
            const detector::AlertTrigger& trigger = run.alerts[i];
            out << "alert " << kv::KvDoc::index_key(i) << ": t="
                << f10(trigger.t) << " rr_t1=" << fixed(trigger.rr_t1, 4)
                << " rr_t2=" << fixed(trigger.rr_t2, 4) << "\n";
            out << "  sms: " << outputs[i].message.body << "\n";
            for (const alerting::DeliveryRecord& rec :
                 outputs[i].deliveries) {
                out << "  -> " << rec.recipient << ": "
                    << (rec.outcome == alerting::DeliveryOutcome::Delivered
                            ? "delivered"
                            : "failed")
                    << " (attempts=" << rec.attempts << ")\n";
            }
        }

        if (!config.out_dir.empty()) {
            std::filesystem::path run_dir(config.out_dir);
            if (!config.label.empty()) run_dir /= config.label;
            std::error_code ec;
            std::filesystem::create_directories(run_dir, ec);
            if (ec) {
                throw IoError("cannot create run directory '" +
                              run_dir.string() + "': " + ec.message());
            }
            std::string report_path = (run_dir / "report.kv").string();
            persist::write_file(report_path, report.serialize());
            out << "report written to " << report_path << "\n";
            for (std::size_t i = 0; i < outputs.size(); ++i) {
                for (std::size_t d = 0; d < outputs[i].deliveries.size();
                     ++d) {
                    std::string name = "alert" + kv::KvDoc::index_key(i) +
                                       "_contact" + kv::KvDoc::index_key(d) +
                                       ".at";
                    std::string path = (run_dir / name).string();
                    persist::write_file(
                        path, outputs[i].deliveries[d].transcript);
                    out << "transcript written to " << path << "\n";
                }
            }
        }
    });
}

int cmd_parse_nmea(const AppConfig& config, std::ostream& out,
                   std::ostream& err) {
    return guarded(err, [&] {
        std::string input = require(config.nmea_log, "nmea_log");
        std::string raw = persist::read_file(input);

        geoloc::FixTracker tracker;
        std::vector<geoloc::SentenceResult> results =
            geoloc::feed_log(tracker, raw);

        std::size_t counts[5] = {};
        for (std::size_t i = 0; i < results.size(); ++i) {
            const geoloc::SentenceResult& r = results[i];
            counts[static_cast<std::size_t>(r.status)]++;
            char line[200];
            if (r.status == geoloc::SentenceStatus::Fix && r.fix) {
                std::snprintf(line, sizeof line,
                              "line %03zu: %-9s lat=%.6f lon=%.6f q=%d "
                              "src=%s utc=%s\n",
                              i + 1,
                              std::string(status_name(r.status)).c_str(),
                              r.fix->lat, r.fix->lon,
                              static_cast<int>(r.fix->quality),
                              r.fix->source == geoloc::FixSource::Gga ? "GGA"
                                                                      : "RMC",
                              r.fix->utc.c_str());
            } else {
                std::snprintf(line, sizeof line, "line %03zu: %-9s %s\n",
                              i + 1,
                              std::string(status_name(r.status)).c_str(),
                              r.detail.c_str());
            }
            out << line;
        }

        out << "sentences=" << results.size() << " fix="
            << counts[static_cast<std::size_t>(geoloc::SentenceStatus::Fix)]
            << " nofix="
            << counts[static_cast<std::size_t>(
                   geoloc::SentenceStatus::NoFixParsed)]
            << " badsum="
            << counts[static_cast<std::size_t>(
                   geoloc::SentenceStatus::BadChecksum)]
            << " malformed="
            << counts[static_cast<std::size_t>(
                   geoloc::SentenceStatus::Malformed)]
            << " skipped="
            << counts[static_cast<std::size_t>(
                   geoloc::SentenceStatus::Skipped)]
            << "\n";

        std::optional<geoloc::GeoFix> latest = tracker.latest();
        if (latest) {
            char line[120];
            std::snprintf(line, sizeof line,
                          "latest: lat=%.6f lon=%.6f utc=%s\n", latest->lat,
                          latest->lon, latest->utc.c_str());
            out << line;
        } else {
            out << "latest: none\n";
        }
    });
}

}  // namespace smartband::app
