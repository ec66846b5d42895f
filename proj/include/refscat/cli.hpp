#ifndef REFSCAT_CLI_HPP
#define REFSCAT_CLI_HPP

namespace refscat {

// Entry point behind the refscat binary; exposed so the test suite can drive
// whole runs in-process.  Exit codes: 0 success, 2 validation failure,
// 3 numerical failure, 4 usage error.
int cli_run(int argc, const char* const* argv);

} // namespace refscat

#endif
