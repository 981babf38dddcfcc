#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace srcurv {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitNumeric = 3 };

/// 64-bit FNV-1a hash as 16 lowercase hex digits.
std::string fnv1a64_hex(const std::string& data);

/// Runs the command line; the report goes to `out`, usage and errors to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace srcurv
