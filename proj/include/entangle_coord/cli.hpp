#pragma once

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace entangle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kSeedEnvVar = "ENTANGLE_COORD_SEED";

struct Environment {
  // Raw value of ENTANGLE_COORD_SEED, if set. --seed wins over it.
  std::optional<std::string> seed;
};

/// Runs one invocation. `args` excludes the program name. Reports go to
/// `out`, diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env = {});

/// Maps a failure to its exit code and writes the diagnostic: bad input is
/// kExitUsage, InvariantViolation and anything unexpected kExitInternal.
int report_failure(std::exception_ptr failure, std::ostream& err);

}  // namespace entangle::cli
