#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace powershap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;

/// Entry point behind the `powershap` executable. Subcommands: select,
/// simulate, generate, power. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace powershap::cli
