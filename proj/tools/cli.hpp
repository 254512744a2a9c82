#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jigsaw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitRuntime = 4;

/// Runs one command line (without the program name). Results go to `out`
/// unless --out names a file, in which case a manifest is written next to it
/// as <file>.manifest.json. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jigsaw::cli
