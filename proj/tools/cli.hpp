#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nc::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kInput = 2, kPartial = 3 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nc::cli
