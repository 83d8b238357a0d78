#ifndef MIXNORM_TOOLS_COMMANDS_HPP
#define MIXNORM_TOOLS_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace mixnorm::cli {

enum ExitStatus { kSuccess = 0, kValidationError = 1, kViolation = 2, kIoError = 3 };

/// Everything a command produces; nothing touches the disk until the whole
/// command has succeeded.
struct CommandOutput {
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  std::string report;                                      // for stdout
  int status = kSuccess;

  const std::string* file(const std::string& name) const;
};

CommandOutput cmd_norm(const Config& config);
CommandOutput cmd_permute(const Config& config);
CommandOutput cmd_tail(const Config& config);
CommandOutput cmd_operator(const Config& config);
/// Full acceptance suite; status kViolation if any criterion fails.
CommandOutput cmd_verify(const Config& config);

/// Parses argv, runs the subcommand and writes its files under --out.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mixnorm::cli

#endif  // MIXNORM_TOOLS_COMMANDS_HPP
