#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hvdp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

// args excludes the program name. Results go to out, diagnostics and usage to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hvdp::cli
