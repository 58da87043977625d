#pragma once

#include <string>
#include <vector>

#include "liouville/potential.hpp"
#include "liouville/solution.hpp"

namespace liouville {

struct IdentityReport {
  double mass_residual = 0.0;        // |M(r_max) + tail - 1|
  double flux_residual = 0.0;        // max |r psi' + 2 beta M(r)|
  double slope_at_infinity = 0.0;    // |r psi'(r_max) + 2 beta|
  double pokhozhaev_residual = 0.0;  // |beta - 2 - n - int |x|^n e^psi x . grad V|
  bool log_lip_ok = false;
  bool grad_bound_ok = false;
  double P_min = 0.0;
  double log_lip_worst = 0.0;     // max ratio lhs / rhs over checked pairs
  double grad_bound_worst = 0.0;  // max |r psi'| / (2 |beta| M(r_max))
  double c2_upper = 0.0;          // least C2 with psi <= -2 beta log(r + 1) + log|beta| + C2
  std::vector<std::string> flags;
};

// Mass column recomputed from psi by quadrature. Jumps of V at grid nodes are
// integrated with one-sided values.
std::vector<double> recompute_mass(const NormalizedSolution& sol, const Potential& v);

IdentityReport check_identities(const NormalizedSolution& sol, const Potential& v);

std::string to_json(const IdentityReport& report);

enum class CompareMode { SupDiff, BetaMonotone };

struct CompareReport {
  CompareMode mode = CompareMode::SupDiff;
  double value = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  std::size_t points = 0;
};

// Profiles are resampled onto each other's nodes over the common radius range
// with monotone cubic Hermite interpolation in log r (slopes r psi').
CompareReport compare_solutions(const NormalizedSolution& a, const NormalizedSolution& b, CompareMode mode);

// Monotone cubic Hermite interpolation of psi at radius r.
double interpolate_psi(const NormalizedSolution& sol, double r);

}  // namespace liouville
