#pragma once

/// @file cli.hpp
/// @brief The `ymflow` command line: run, entropy, blowup, scan, stratify
/// and verify, each writing its files and a manifest under the output
/// directory.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ymflow/config.hpp"
#include "ymflow/flow.hpp"

namespace ymflow {

/// Exit statuses of execute().
enum ExitStatus : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitConfig = 2,
  kExitRuntime = 3,
};

/// Runs one command line; args[0] is the program name.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::string& path);

/// Reads the snapshots written by `run` into `dir`.
SnapshotStore load_trajectory(const std::string& dir, double L);

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  /// "pass", "fail" or "skipped".
  std::string status;
};

}  // namespace ymflow
