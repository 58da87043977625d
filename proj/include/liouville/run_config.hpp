#pragma once

#include <map>
#include <string>
#include <vector>

namespace liouville {

// Flat key=value run description. "command" selects the subcommand, every
// other key is a long option of it; '#' starts a comment line.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> values;

  static RunConfig load(const std::string& path);
  static RunConfig parse(const std::string& text);
  void save(const std::string& path) const;
  std::string dump() const;

  // Argument list for the CLI: command followed by --key value pairs. Flags
  // with value "true" are emitted bare, "false" ones are dropped.
  std::vector<std::string> to_args() const;
};

}  // namespace liouville
