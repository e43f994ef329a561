#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "qfb/run_config.hpp"

namespace qfb {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitUnstable = 2 };

struct CommandOutput {
  int exit_code = kExitOk;
  std::string csv;
  std::optional<std::string> summary_csv;  // sweep only
  std::string notes;                       // human-readable, goes to stderr
};

/// loop,re,im,stable -- open-loop poles, then closed-loop poles when feedback
/// is configured. Exit 2 if the configured system (closed loop if present)
/// is unstable.
CommandOutput cmd_poles(const RunConfig& rc);

/// omega,S_1..S_n for the nominal system. Exit 2 if it is unstable.
CommandOutput cmd_entropy(const RunConfig& rc);

/// topology,feedback,dS_dlambda: the no-feedback baseline and, when
/// configured, the feedback case.
CommandOutput cmd_sensitivity(const RunConfig& rc);

/// sample_id,delta1,delta2,omega,S for every stable sample, plus an
/// omega,spread summary.
CommandOutput cmd_sweep(const RunConfig& rc);

/// omega,nominal_a,spread_a,nominal_b,spread_b; scenario b is the config with
/// `compare.set` applied.
CommandOutput cmd_compare(const RunConfig& rc);

/// "dir/name.csv" -> "dir/name_summary.csv".
std::string summary_path(const std::string& path);

/// Full front end: argument parsing, config loading, dispatch and output.
/// QFB_THREADS (0 = auto) caps sweep parallelism.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qfb
