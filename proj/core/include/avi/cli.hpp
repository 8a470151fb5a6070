#pragma once

namespace avi {

// Full command-line driver behind the avi-sim binary:
//   avi-sim simulate <scenario> [--out <csv>] [--duration-ticks N] [--stride K]
//   avi-sim oracle   <scenario> --h <step> [--out <csv>] [--stride K]
//   avi-sim check    <scenario>
// Returns 0 on success, 1 on a runtime error (message on stderr), 2 on
// bad flags (usage on stderr).
int run_cli(int argc, const char* const argv[]);

}  // namespace avi
