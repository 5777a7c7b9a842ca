#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace negacq {

/// Entry point of the `negacq` tool. `args` excludes the program name.
/// Returns the process exit code; 0 iff every requested output was written.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace negacq
