#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "liouville/grid.hpp"

namespace liouville {

// Profile of a solution of -Laplace(psi) = 4 pi beta r^n V e^psi with
// int r^n V e^psi dx = 1, sampled on grid nodes.
struct NormalizedSolution {
  double beta = 0.0;
  double n = 0.0;
  Grid grid;
  std::vector<double> psi;
  std::vector<double> dpsi;  // r * dpsi/dr
  std::vector<double> mass;  // cumulative mass M(r_i)
  std::string potential;     // potential descriptor
  double psi0 = std::numeric_limits<double>::quiet_NaN();  // psi(0) when known
  double tail_mass = 0.0;    // mass beyond r_max, in units of the total
  std::string method;
  std::map<std::string, double> tolerances;
  std::vector<std::string> flags;

  double r_max() const { return grid.r_max(); }
};

// Writes `json_path` (metadata header) and the CSV body next to it (same
// stem, .csv extension) with columns r,psi,r_dpsi,mass. `residuals` are
// stored in the header under "residuals".
void save_solution(const NormalizedSolution& sol, const std::string& json_path,
                   const std::map<std::string, double>& residuals = {});

NormalizedSolution load_solution(const std::string& json_path);

// Path of the CSV body that belongs to a header path.
std::string csv_path_for(const std::string& json_path);

}  // namespace liouville
