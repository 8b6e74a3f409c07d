#pragma once

#include <filesystem>
#include <iosfwd>

#include "cli/run_config.hpp"

namespace satact::cli {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,    // bad flags, config keys or values
  kExitIo = 3,        // unreadable/unwritable files, malformed data files
  kExitCheck = 4,     // a verification (gradcheck) exceeded its tolerance
  kExitDiverged = 5,  // train: the run diverged, artifacts still written
};

// Each command writes its artifacts under out_dir (created if needed) and a
// short human-readable summary to log.
int cmd_plot(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_varprop(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_gradcheck(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_train(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_compare(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace satact::cli
