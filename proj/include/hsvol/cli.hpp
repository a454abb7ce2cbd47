#pragma once

// Command-line front end: hsvol {jacobian|estimate|fit|integrate|pipeline|verify}.

#include <iosfwd>

namespace hsvol::cli {

enum ExitCode : int {
    kOk = 0,
    kVerifyFailed = 1,  // verify ran and at least one criterion failed
    kUsage = 2,         // invalid flags or option values
    kUnreadable = 3,    // a file could not be opened, read or written
    kMalformed = 4,     // an input file does not parse
    kNumerical = 5,     // quadrature, fitting or another numerical stage failed
};

// Data goes to `out`, diagnostics and progress to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hsvol::cli
