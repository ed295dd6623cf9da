#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latstab::cli {

// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;     // a bound or check returned a fail verdict
inline constexpr int kExitUsage = 2;    // bad flag, bad value, parameter out of range
inline constexpr int kExitNumeric = 3;  // numeric failure or unwritable output

// Environment variable naming the default output directory for records.
inline constexpr const char* kOutputDirEnv = "LATSTAB_OUTPUT_DIR";

inline constexpr int kSchemaVersion = 1;

// args excludes the program name. Machine output (JSON or CSV) goes to `out`,
// the one-line human summary and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace latstab::cli
