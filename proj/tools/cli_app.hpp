#ifndef SCFA_CLI_APP_HPP
#define SCFA_CLI_APP_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace scfa::cli {

enum ExitCode { kSuccess = 0, kUsage = 1, kInput = 2, kNumerical = 3 };

// args excludes the program name. Results go to `out`, diagnostics to `err`
// as single lines "scfa: error[<kind>]: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scfa::cli

#endif  // SCFA_CLI_APP_HPP
