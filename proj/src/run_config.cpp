#include "liouville/run_config.hpp"

#include <fstream>
#include <sstream>

#include "liouville/error.hpp"

namespace liouville {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(number) + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty()) throw Error("config line " + std::to_string(number) + ": empty key");
    if (key == "command") {
      cfg.command = val;
    } else if (!cfg.values.emplace(key, val).second) {
      throw Error("config line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
  }
  if (cfg.command.empty()) throw Error("config: missing 'command'");
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::dump() const {
  std::string out = "command=" + command + "\n";
  for (const auto& [k, v] : values) out += k + "=" + v + "\n";
  return out;
}

void RunConfig::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write config '" + path + "'");
  out << dump();
}

std::vector<std::string> RunConfig::to_args() const {
  std::vector<std::string> args{command};
  for (const auto& [k, v] : values) {
    if (k == "_") continue;
    if (v == "false") continue;
    args.push_back("--" + k);
    if (v != "true") args.push_back(v);
  }
  // Positional arguments are stored under "_", space separated.
  if (const auto it = values.find("_"); it != values.end()) {
    std::istringstream ss(it->second);
    std::string tok;
    while (ss >> tok) args.push_back(tok);
  }
  return args;
}

}  // namespace liouville
