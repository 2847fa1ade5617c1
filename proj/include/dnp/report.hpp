#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dnp/comparison.hpp"
#include "dnp/monitors.hpp"
#include "dnp/scenario.hpp"
#include "dnp/study.hpp"

namespace dnp {

/// Exit codes of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_violation = 1, exit_solver_failure = 2, exit_config_error = 3 };

/// Everything one scenario run produced. A solver failure keeps the partial
/// trajectory and its monitors.
struct RunResult {
    ScenarioConfig config;
    Trajectory trajectory;
    std::vector<MonitorReport> monitors;
    std::optional<ComparisonRun> pair;
    std::vector<MonitorReport> comparison;
    std::optional<std::string> failure;

    int violations() const;
    int exit_code() const;
};

/// run_evolution plus monitors, and the comparison pair when the config has a
/// second initial datum or forcing.
RunResult run_scenario(const ScenarioConfig& cfg);

/// Plain-text report: run metadata, then one line per checked inequality.
std::string render_report(const RunResult& r);

/// Output root: $DNP_OUTPUT_DIR when set, otherwise ./out.
std::filesystem::path output_root();
/// Output directory of a scenario below the root.
std::filesystem::path output_directory(const ScenarioConfig& cfg, const std::filesystem::path& root);

/// Writes summary.csv, report.txt, monitor.csv, snapshot_*.csv, curves.dat,
/// comparison.csv (pairs only), config.ini and metadata.txt into dir. Only
/// metadata.txt carries a timestamp. Throws Error when dir is not writable.
void emit_report(const RunResult& r, const std::filesystem::path& dir);

std::string render_study(const StudyResult& s);
/// study.csv and study.txt.
void emit_study(const StudyResult& s, const ScenarioConfig& cfg, const std::filesystem::path& dir);

}  // namespace dnp
