#pragma once

#include <string>
#include <vector>

namespace hawkes::cli {

/// Runs the command-line front end (extract | fit | simulate | intensity | ll)
/// and returns the process exit code: 0 iff every requested output was
/// written.
int run(const std::vector<std::string>& args);

int run(int argc, const char* const* argv);

}  // namespace hawkes::cli
