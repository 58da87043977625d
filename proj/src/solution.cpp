#include "liouville/solution.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "liouville/error.hpp"

namespace liouville {

namespace fs = std::filesystem;
using nlohmann::json;

std::string csv_path_for(const std::string& json_path) {
  fs::path p(json_path);
  p.replace_extension(".csv");
  return p.string();
}

void save_solution(const NormalizedSolution& sol, const std::string& json_path,
                   const std::map<std::string, double>& residuals) {
  const std::string csv = csv_path_for(json_path);
  json head;
  head["beta"] = sol.beta;
  head["n"] = sol.n;
  head["potential"] = sol.potential;
  head["r_max"] = sol.r_max();
  head["nodes"] = sol.grid.size();
  head["grading"] = to_string(sol.grid.grading());
  head["psi0"] = std::isfinite(sol.psi0) ? json(sol.psi0) : json(nullptr);
  head["tail_mass"] = sol.tail_mass;
  head["method"] = sol.method;
  head["tolerances"] = sol.tolerances;
  head["residuals"] = residuals;
  head["flags"] = sol.flags;
  head["csv"] = fs::path(csv).filename().string();

  std::ofstream jout(json_path);
  if (!jout) throw Error("cannot write '" + json_path + "'");
  jout << std::setw(2) << head << '\n';

  std::FILE* f = std::fopen(csv.c_str(), "w");
  if (!f) throw Error("cannot write '" + csv + "'");
  std::fputs("r,psi,r_dpsi,mass\n", f);
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", sol.grid[i], sol.psi[i], sol.dpsi[i], sol.mass[i]);
  }
  std::fclose(f);
}

NormalizedSolution load_solution(const std::string& json_path) {
  std::ifstream jin(json_path);
  if (!jin) throw Error("cannot open '" + json_path + "'");
  json head;
  try {
    jin >> head;
  } catch (const json::exception& e) {
    throw Error("malformed solution header '" + json_path + "': " + e.what());
  }
  fs::path csv = fs::path(json_path).parent_path() / head.value("csv", fs::path(csv_path_for(json_path)).filename().string());
  std::ifstream cin(csv);
  if (!cin) throw Error("cannot open '" + csv.string() + "'");
  std::string line;
  std::getline(cin, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "r,psi,r_dpsi,mass") throw Error("'" + csv.string() + "' must start with header r,psi,r_dpsi,mass");
  std::vector<double> r, psi, dpsi, mass;
  while (std::getline(cin, line)) {
    if (line.empty() || line == "\r") continue;
    double a, b, c, d;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d) != 4) {
      throw Error("malformed row in '" + csv.string() + "': " + line);
    }
    r.push_back(a);
    psi.push_back(b);
    dpsi.push_back(c);
    mass.push_back(d);
  }
  if (r.empty()) throw Error("'" + csv.string() + "' has no rows");
  Grading grading = Grading::Log;
  const std::string g = head.value("grading", "log");
  if (g == "uniform") grading = Grading::Uniform;
  if (g == "power") grading = Grading::Power;
  NormalizedSolution sol{.beta = head.at("beta").get<double>(),
                         .n = head.at("n").get<double>(),
                         .grid = Grid::from_nodes(std::move(r), grading)};
  sol.psi = std::move(psi);
  sol.dpsi = std::move(dpsi);
  sol.mass = std::move(mass);
  sol.potential = head.value("potential", "");
  if (head.contains("psi0") && head["psi0"].is_number()) sol.psi0 = head["psi0"].get<double>();
  sol.tail_mass = head.value("tail_mass", 0.0);
  sol.method = head.value("method", "");
  if (head.contains("tolerances")) sol.tolerances = head["tolerances"].get<std::map<std::string, double>>();
  if (head.contains("flags")) sol.flags = head["flags"].get<std::vector<std::string>>();
  return sol;
}

}  // namespace liouville
