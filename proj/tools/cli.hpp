#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace szilard::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kValidation = 1;
inline constexpr int kComputation = 2;

/// Prefix for environment overrides, e.g. SZILARD_T=300 or SZILARD_N_STEPS=8.
inline constexpr const char* kEnvPrefix = "SZILARD_";

/// Runs one command. Precedence: flags, then environment, then the config
/// file, then built-in defaults.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace szilard::cli
