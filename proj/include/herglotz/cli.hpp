#pragma once

#include <optional>
#include <string>
#include <vector>

#include "herglotz/config.hpp"
#include "herglotz/report.hpp"

namespace herglotz {

struct TaskOutcome {
  CheckReport report;
  std::optional<std::string> csv;  // simulate only
  std::vector<std::string> lines;  // human-readable output for stdout
};

/// Names of the commands run_task understands.
const std::vector<std::string>& task_commands();

/// Executes one task. Configuration problems (unknown names, dimension
/// mismatches) throw ConfigError; numerical failures become error reports.
TaskOutcome run_task(const RunConfig& cfg, const TaskSpec& task);

/// Writes <dir>/<name>.json and, when present, <dir>/<name>.csv.
void write_outcome(const std::string& dir, const std::string& name, const TaskOutcome& out);

/// Exit code for a batch: 2 if any report is error or inconclusive, else 1 if
/// any failed, else 0.
int batch_exit_code(const std::vector<Verdict>& verdicts);

/// Command-line entry point; returns the process exit code (3 on
/// configuration errors).
int cli_main(int argc, char** argv);

}  // namespace herglotz
