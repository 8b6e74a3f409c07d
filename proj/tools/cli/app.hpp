#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace satact::cli {

// Name of the environment variable holding the default output directory.
inline constexpr const char* kOutDirEnv = "SATACT_OUT_DIR";

// Full command-line entry point. args excludes the program name. Returns a
// process exit code (see ExitCode in cli/commands.hpp).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace satact::cli
