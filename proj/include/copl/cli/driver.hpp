#pragma once

#include <iosfwd>

namespace copl::cli {

// Exit codes of the `copl` tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCompile = 3;

// Entry point behind tools/copl. `out` receives program output (or the
// token/AST dump); diagnostics and trace lines go to `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace copl::cli
