#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pluralis::cli {

enum ExitCode : int {
  kAnswered = 0,   // valid up to bounds, true, audit clean
  kRefuted = 1,    // countermodel, false, audit flagged
  kInputError = 2,
  kCeiling = 3,
};

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pluralis::cli
