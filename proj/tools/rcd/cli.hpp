// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rcd::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kConfig = 1,
  kIo = 2,
  kVerificationFailed = 3,
  kBottom = 4,
  kGetUpdate = 5,
  kSchemeError = 6,
};

/// Version stamped into every file the tool writes.
inline constexpr int kFormatVersion = 1;

/// Runs one command line (argv[0] included). Results go to `out` as JSON;
/// failures go to `err` as {"error": ..., "reason": ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rcd::cli
