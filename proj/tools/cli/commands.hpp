#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace tumorcord::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kSolverError = 3,
    kIoError = 4,
};

struct CommandOptions {
    std::string out_dir;  ///< overrides [output] dir when non-empty
    int jobs = 1;
    bool dry_run = false;
    std::string config_path;
};

/// Each command writes its CSV outputs and a manifest.txt into the output
/// directory and returns the process exit code. Errors are reported on err
/// and recorded in the manifest with status FAILED.
int cmd_constants(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_stationary(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_width(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_evolve(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int run_main(int argc, char** argv, std::ostream& out, std::ostream& err);
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tumorcord::cli
