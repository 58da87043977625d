#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liouville/grid.hpp"
#include "liouville/potential.hpp"
#include "liouville/solution.hpp"

namespace liouville {

// psi0 = 2 beta log r outside the unit disk and the C^2 quartic
// beta (2 r^2 - r^4 / 2 - 3/2) inside; f = -Laplace(psi0) = -8 beta (1 - r^2)
// on r < 1.
double gauge_psi0(double beta, double r);
double gauge_dpsi0(double beta, double r);  // d psi0 / dr
double gauge_f(double beta, double r);

struct Gauge {
  double beta = 0.0;
  double r_smooth = 1.0;
  std::vector<double> r;
  std::vector<double> psi0;
  std::vector<double> f;
  double f_total = 0.0;  // int f dx
};

Gauge build_gauge(double beta, const Grid& grid);

struct EnergyValue {
  double value = 0.0;
  std::vector<double> gradient;
  double log_mass = 0.0;   // log int V1 e^phi
  double dirichlet = 0.0;  // int |grad phi|^2
};

// Radial P1 finite elements on {0} U grid nodes with phi = 0 at r_max. The
// e^phi integral is mass-lumped; the load of f is integrated exactly.
class EnergyModel {
 public:
  EnergyModel(const Gauge& gauge, const Potential& v, double n, const Grid& grid);

  std::size_t size() const { return x_.size(); }
  const std::vector<double>& nodes() const { return x_; }
  double beta() const { return beta_; }
  double n() const { return n_; }
  double radius() const { return x_.back(); }
  const Potential& potential() const { return v_; }
  const Grid& grid() const { return grid_; }

  // E = 1/2 phi^T K phi - 4 pi beta log Z - b^T phi. The gradient entry of
  // the boundary node is zeroed unless relax_boundary is set.
  EnergyValue evaluate(const std::vector<double>& phi, bool relax_boundary = false) const;

  // Solves K_int y = rhs on the interior nodes (boundary entry of y is 0).
  std::vector<double> solve_stiffness(const std::vector<double>& rhs) const;

  const std::vector<double>& conductance() const { return k_; }
  const std::vector<double>& lumped_weights() const { return w_; }
  const std::vector<double>& weighted_potential() const { return v1_; }
  const std::vector<double>& load() const { return b_; }

 private:
  double beta_;
  double n_;
  Potential v_;
  Grid grid_;
  std::vector<double> x_;
  std::vector<double> k_;
  std::vector<double> w_;
  std::vector<double> v1_;
  std::vector<double> b_;
};

struct MinimizeControls {
  int max_iter = 4000;
  double grad_tol = 1e-9;
  int memory = 12;
  std::size_t n_nodes = 4096;
  double delta = 0.0;  // <= 0: min(1, gap / 2)
};

// Lower bound E >= (eps / 2) D + constant with eps = delta / (2 (beta + delta)),
// from |phi(r)|^2 <= log(R / r) D / (2 pi) for phi(R) = 0.
struct CoercivityWitness {
  double delta = 0.0;
  double eps = 0.0;
  double log_integral = 0.0;  // log int_{D(0,R)} V1 (R / r)^{beta + delta}
  double load_term = 0.0;     // (int |f| sqrt(log(R / r) / (2 pi)))^2 / (2 eps)
  double constant = 0.0;
  bool holds = false;
};

struct MinimizeResult {
  std::vector<double> phi;  // on {0} U grid nodes
  std::vector<double> energy_trace;
  double grad_norm = 0.0;   // sqrt(g^T K^{-1} g)
  double log_mass = 0.0;
  double dirichlet = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> flags;
  CoercivityWitness witness;
};

MinimizeResult minimize(const EnergyModel& model, const std::optional<std::vector<double>>& init = std::nullopt,
                        const MinimizeControls& controls = {});

// Grid used by the variational backend on D(0, radius).
Grid variational_grid(double radius, std::size_t n_nodes);

// psi = phi - log Z - psi0 on the grid nodes.
NormalizedSolution to_solution(const MinimizeResult& m, const EnergyModel& model);

struct VariationalSolve {
  NormalizedSolution solution;
  MinimizeResult minimizer;
  double radius = 0.0;
};

// Minimizes on D(0, radius); with refine set, doubles the radius until psi(0)
// moves by less than 1e-4.
VariationalSolve solve_variational(const Potential& v, double n, double beta, double radius, bool refine = false,
                                   const MinimizeControls& controls = {});

}  // namespace liouville
