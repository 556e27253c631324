#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wds::cli {

enum ExitCode : int {
  kDeterminate = 0,
  kUndetermined = 2,
  kInputError = 3,
  kInternalError = 4,
};

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wds::cli
