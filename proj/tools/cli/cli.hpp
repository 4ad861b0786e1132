#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rpkt::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kBadArguments = 2,
    kOracleFailure = 3,
    kUnsurfacedConcept = 4,
};

// Entry point shared by main() and the tests. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace rpkt::cli
