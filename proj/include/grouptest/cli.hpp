#pragma once

namespace gt {

// Full command-line front end (simulate | bounds | rates | decode |
// check-design). Returns the process exit code: 0 success, 1 usage error,
// 2 runtime/budget error.
int run_cli(int argc, char** argv);

}  // namespace gt
