#ifndef EWLAB_CLI_HPP
#define EWLAB_CLI_HPP

#include <cstdint>
#include <ostream>
#include <string>

namespace ewlab::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kInvalidInput = 2 };

/// Full command line (argv[0] is the program name). Reports go to --out or `out`; diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 12 significant digits, '.' separator.
std::string format_number(double v);

struct RangeSpec {
    int lo = 0;
    int hi = -1;  // lo > hi means empty
};

/// Parses "a:b" (inclusive) or a single integer "a". Throws ewlab::InvalidArgument.
RangeSpec parse_range(const std::string& text);

}  // namespace ewlab::cli

#endif  // EWLAB_CLI_HPP
