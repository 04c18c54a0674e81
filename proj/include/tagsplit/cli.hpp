// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tagsplit {

/// Exit codes of the `tagsplit` tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidInput = 2,
  kExitIoFailure = 3,
  kExitInternal = 4,
};

/// Runs the command line; `args` excludes the program name. Reports go to
/// `out`, diagnostics to `err`. Returns an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Accepts plain byte counts and K/M/G suffixes (powers of 1024), with an
/// optional trailing "B" or "iB": "256K", "1MB", "8MiB", "1048576".
std::uint64_t parse_size(const std::string& text);

}  // namespace tagsplit
