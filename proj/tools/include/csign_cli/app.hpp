#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "csign_cli/config.hpp"

namespace csign::cli {

enum ExitCode : int {
    kOk = 0,
    kIoError = 1,
    kParseError = 2,
    kValidationError = 3,
    kNumericalError = 4,
};

/// Entry point; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = process_env());

}  // namespace csign::cli
