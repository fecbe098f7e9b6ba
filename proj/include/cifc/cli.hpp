#pragma once

namespace cifc::cli {

// Full command-line front end. Exit codes: 0 success, 2 input error,
// 3 evaluation error, 4 verification failure.
int run(int argc, const char* const* argv);

} // namespace cifc::cli
