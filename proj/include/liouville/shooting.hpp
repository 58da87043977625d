#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liouville/grid.hpp"
#include "liouville/potential.hpp"
#include "liouville/solution.hpp"

namespace liouville {

struct ShootControls {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  // Relative size of the extrapolated tail mass at which auto truncation stops.
  double tail_tol = 1e-8;
  std::optional<double> r_max;  // fixed truncation radius; auto when empty
  std::optional<double> r_min;  // fixed first output node
  std::size_t n_nodes = 32768;
  // Sign of the forcing: +1 for beta > 0, -1 for beta < 0.
  int sign = 1;
  // Produce node samples (false: only the mass map summary).
  bool samples = true;
  double root_tol = 1e-8;
};

// Trajectory of psi'' + psi'/r + sign * r^n V e^psi = 0, psi(0) = s,
// together with its s-variation phi.
struct ShootResult {
  double s = 0.0;
  double n = 0.0;
  int sign = 1;
  std::optional<Grid> grid;
  std::vector<double> psi;
  std::vector<double> dpsi;  // r psi'
  std::vector<double> phi;
  std::vector<double> dphi;  // r phi'
  std::vector<double> m;     // int_0^r t^{n+1} V e^psi dt
  double beta_s = 0.0;
  double beta_prime_s = 0.0;
  double r_max = 0.0;
  double tail_mass = 0.0;  // extrapolated int_{r_max}^inf t^{n+1} V e^psi dt
  bool tail_converged = true;
  double phi_log_bound = 0.0;  // max |phi| / log(r + 2)
  double dphi_sup = 0.0;       // max |r phi'|
  std::size_t steps = 0;
};

ShootResult integrate_ivp(const Potential& v, double n, double s, const ShootControls& controls = {});

struct MassMapEntry {
  double s = 0.0;
  bool ok = false;
  std::string error;
  double beta = 0.0;
  double beta_prime = 0.0;
  std::optional<double> beta_prime_fd;  // centered difference from neighbours
};

std::vector<MassMapEntry> mass_map(const Potential& v, double n, const std::vector<double>& s_list,
                                   const ShootControls& controls = {});

// Closed-form nonexistence test. With the power factor of V folded into the
// weight, a non-increasing and non-constant residual requires n > beta - 2,
// and a constant residual allows only beta = n + 2. Returns the reason when
// no solution can exist.
std::optional<std::string> analytic_nonexistence(const Potential& v, double n, double beta);

struct SolveResult {
  NormalizedSolution solution;
  ShootResult shot;
  int iterations = 0;
};

// Root of beta(s) = beta_target, normalized to unit mass. Throws
// NonexistenceError when the target is not bracketed.
SolveResult solve_for_beta(const Potential& v, double n, double beta_target,
                           std::optional<std::pair<double, double>> bracket = std::nullopt,
                           const ShootControls& controls = {});

// Shifted profile psi(., s) - log(4 pi |beta(s)|) of a sampled shot.
NormalizedSolution normalize(const ShootResult& shot, const Potential& v, double beta);

struct PokhozhaevProfile {
  std::vector<double> p;
  std::vector<double> integral_form;
  double min_p = 0.0;
  double p_at_r_max = 0.0;
  double max_form_gap = 0.0;  // max |P - integral form|
};

// P = r psi' (r psi' / 2 + beta) + c r^{n+2} V e^psi with c the forcing
// coefficient of the profile's equation.
PokhozhaevProfile pokhozhaev(const ShootResult& shot, const Potential& v);
PokhozhaevProfile pokhozhaev(const NormalizedSolution& sol, const Potential& v);

}  // namespace liouville
