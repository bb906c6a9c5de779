#pragma once

#include <ostream>

#include "smartband/config.hpp"

namespace smartband::app {

/// Subcommand implementations. Each returns a process exit code (0 on
/// success), writes results to `out` and diagnostics to `err`, and maps
/// smartband::Error to exit code 2 (usage-level problems return 1 from
/// the CLI layer before reaching these).

/// Fits a personal model from input_csv and writes it to model_path.
int cmd_train(const AppConfig& config, std::ostream& out, std::ostream& err);

/// Streams episode_csv through the detector under the model at
/// model_path; an optional nmea_log provides the position attached to
/// alerts; alerts are dispatched to contacts over a scripted modem and
/// each delivery is reported.
int cmd_simulate(const AppConfig& config, std::ostream& out, std::ostream& err);

/// Human-readable training summary: regression line, threshold, residual
/// spread, and a variability table over report_ks.
int cmd_report(const AppConfig& config, std::ostream& out, std::ostream& err);

/// Classifies every line of nmea_log and prints one line per sentence
/// plus a summary and the final fix.
int cmd_parse_nmea(const AppConfig& config, std::ostream& out, std::ostream& err);

}  // namespace smartband::app
