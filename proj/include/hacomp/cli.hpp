#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hacomp::cli {

// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// `args` excludes the program name. Never throws; every failure maps to an
// exit code with a message on `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace hacomp::cli
