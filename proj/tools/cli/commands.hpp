#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace asp::cli {

/// Exit codes of `check`. Input errors win over verdicts.
enum ExitCode : int { kAllAsp = 0, kSomeNotAsp = 1, kSomeUnknown = 2, kInputError = 3, kInternalError = 4 };

/// Entry point behind `aspc`; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace asp::cli
