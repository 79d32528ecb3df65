#pragma once

#include <iosfwd>

namespace cqed {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitNumeric = 3, kExitNotConverged = 4 };

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cqed
