// smartband: train personal models from vitals CSVs, replay episodes
// through the detector, and exercise the NMEA / SMS plumbing.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smartband/config.hpp"
#include "smartband/errors.hpp"
#include "smartband/runner.hpp"

namespace {

using smartband::app::AppConfig;

struct CliOverrides {
    std::optional<std::string> config_path;

    std::optional<std::string> input_csv;
    std::optional<std::string> model_path;
    std::optional<std::string> episode_csv;
    std::optional<std::string> nmea_log;
    std::optional<std::string> out_dir;
    std::optional<std::string> report_out;

    std::optional<std::vector<std::size_t>> ks;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> restarts;
    std::optional<bool> standardize;
    std::optional<std::string> preprocessing;
    std::optional<std::string> label;

    std::optional<double> window_s;
    std::optional<double> abnormal_band;
    std::optional<double> flutter_delta;
    std::optional<std::size_t> confirm_windows;
    std::optional<double> cooldown_s;
    std::optional<bool> adl_gate;

    std::optional<std::string> device_id;
    std::optional<std::vector<std::string>> contacts;
    std::optional<std::int64_t> epoch_unix;
    std::optional<std::size_t> max_retries;
    std::optional<std::vector<std::size_t>> modem_fail_sends;
};

void add_common_flags(CLI::App& cmd, CliOverrides& cli) {
    cmd.add_option("-c,--config", cli.config_path,
                   "config file (key: value lines); falls back to "
                   "$SMARTBAND_CONFIG");
}

void add_training_flags(CLI::App& cmd, CliOverrides& cli) {
    cmd.add_option("-i,--input", cli.input_csv, "vitals numerics CSV");
    cmd.add_option("-k,--ks", cli.ks,
                   "cluster counts (first one is stored in the model)");
    cmd.add_option("--seed", cli.seed, "clustering RNG seed");
    cmd.add_option("--restarts", cli.restarts, "k-means restarts");
    cmd.add_flag("--standardize", [&cli](std::int64_t) {
        cli.standardize = true;
    }, "z-score features before clustering");
    cmd.add_option("--preprocessing", cli.preprocessing,
                   "row filter: none, drop-missing or drop-zeros");
    cmd.add_option("--label", cli.label, "free-form run label");
}

void add_detector_flags(CLI::App& cmd, CliOverrides& cli) {
    cmd.add_option("--window", cli.window_s, "detector window seconds");
    cmd.add_option("--band", cli.abnormal_band,
                   "abnormality band (breaths/min)");
    cmd.add_option("--flutter", cli.flutter_delta,
                   "window-to-window swing threshold (breaths/min)");
    cmd.add_option("--confirm", cli.confirm_windows,
                   "consecutive abnormal windows before alerting");
    cmd.add_option("--cooldown", cli.cooldown_s, "post-alert quiet seconds");
    cmd.add_flag("--adl-gate", [&cli](std::int64_t) {
        cli.adl_gate = true;
    }, "suppress alerts during exercise-like windows");
}

void add_alerting_flags(CLI::App& cmd, CliOverrides& cli) {
    cmd.add_option("--device-id", cli.device_id, "device id in the SMS body");
    cmd.add_option("--contact", cli.contacts,
                   "E.164 recipient (repeatable; first is the helpline)");
    cmd.add_option("--epoch", cli.epoch_unix,
                   "unix epoch that stream t=0 maps to");
    cmd.add_option("--max-retries", cli.max_retries,
                   "extra delivery attempts per contact");
    cmd.add_option("--fail-send", cli.modem_fail_sends,
                   "zero-based submit indices the simulated modem rejects "
                   "(repeatable)");
}

AppConfig merge(const CliOverrides& cli) {
    AppConfig config = smartband::app::load_config(cli.config_path);
    if (cli.input_csv) config.input_csv = *cli.input_csv;
    if (cli.model_path) config.model_path = *cli.model_path;
    if (cli.episode_csv) config.episode_csv = *cli.episode_csv;
    if (cli.nmea_log) config.nmea_log = *cli.nmea_log;
    if (cli.out_dir) config.out_dir = *cli.out_dir;
    if (cli.report_out) config.report_out = *cli.report_out;
    if (cli.ks) config.ks = *cli.ks;
    if (cli.seed) config.seed = *cli.seed;
    if (cli.restarts) config.restarts = *cli.restarts;
    if (cli.standardize) config.standardize = *cli.standardize;
    if (cli.preprocessing) {
        config.preprocessing =
            smartband::app::parse_preprocessing(*cli.preprocessing);
    }
    if (cli.label) config.label = *cli.label;
    if (cli.window_s) config.window_s = cli.window_s;
    if (cli.abnormal_band) config.abnormal_band = cli.abnormal_band;
    if (cli.flutter_delta) config.flutter_delta = cli.flutter_delta;
    if (cli.confirm_windows) config.confirm_windows = cli.confirm_windows;
    if (cli.cooldown_s) config.cooldown_s = cli.cooldown_s;
    if (cli.adl_gate) config.adl_gate = *cli.adl_gate;
    if (cli.device_id) config.device_id = *cli.device_id;
    if (cli.contacts) config.contacts = *cli.contacts;
    if (cli.epoch_unix) config.epoch_unix = *cli.epoch_unix;
    if (cli.max_retries) config.max_retries = *cli.max_retries;
    if (cli.modem_fail_sends) config.modem_fail_sends = *cli.modem_fail_sends;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"smart band emergency-management pipeline"};
    app.require_subcommand(1);

    CliOverrides cli;

    CLI::App* train = app.add_subcommand(
        "train", "fit a personal model from a vitals CSV");
    add_common_flags(*train, cli);
    add_training_flags(*train, cli);
    train->add_option("-m,--model", cli.model_path, "model file to write");

    CLI::App* simulate = app.add_subcommand(
        "simulate", "replay an episode through the detector and dispatch "
                    "SMS alerts over a simulated modem");
    add_common_flags(*simulate, cli);
    simulate->add_option("-m,--model", cli.model_path, "trained model file");
    simulate->add_option("-e,--episode", cli.episode_csv,
                         "episode CSV to replay");
    simulate->add_option("-n,--nmea", cli.nmea_log, "NMEA position log");
    simulate->add_option("-o,--out-dir", cli.out_dir,
                         "directory for the run report and transcripts");
    simulate->add_option("--label", cli.label,
                         "run directory name under --out-dir");
    add_detector_flags(*simulate, cli);
    add_alerting_flags(*simulate, cli);

    CLI::App* report = app.add_subcommand(
        "report", "reproduction study: regression and clustering vs the "
                  "reference values");
    add_common_flags(*report, cli);
    add_training_flags(*report, cli);
    report->add_option("-o,--out", cli.report_out,
                       "write the report here instead of stdout");

    CLI::App* parse_nmea = app.add_subcommand(
        "parse-nmea", "classify every sentence of an NMEA log");
    add_common_flags(*parse_nmea, cli);
    parse_nmea->add_option("-i,--input", cli.nmea_log, "NMEA log file");

    CLI11_PARSE(app, argc, argv);

    try {
        AppConfig config = merge(cli);
        if (train->parsed()) {
            return smartband::app::cmd_train(config, std::cout, std::cerr);
        }
        if (simulate->parsed()) {
            return smartband::app::cmd_simulate(config, std::cout, std::cerr);
        }
        if (report->parsed()) {
            return smartband::app::cmd_report(config, std::cout, std::cerr);
        }
        if (parse_nmea->parsed()) {
            return smartband::app::cmd_parse_nmea(config, std::cout,
                                                  std::cerr);
        }
    } catch (const smartband::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
