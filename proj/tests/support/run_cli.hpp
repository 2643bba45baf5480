#pragma once

// Helper to invoke the built CLI binary from tests. The path comes in through
// the MISTRUST_CLI_BIN compile definition set by CMake.

#include <cstdlib>
#include <string>

#ifndef MISTRUST_CLI_BIN
#error "MISTRUST_CLI_BIN must be defined by the build"
#endif

namespace cli {

struct Result {
    int exit_code = -1;
};

inline Result run(const std::string& args, bool quiet = true) {
    std::string cmd = std::string("\"") + MISTRUST_CLI_BIN + "\" " + args;
    if (quiet) cmd += " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    Result r;
    if (status == -1) return r;
    if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    return r;
}

}  // namespace cli
