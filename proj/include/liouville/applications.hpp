#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "liouville/potential.hpp"
#include "liouville/shooting.hpp"
#include "liouville/solution.hpp"
#include "liouville/verify.hpp"

namespace liouville {

// Mean-field vortex equation with statistical inverse temperature beta_stat.
struct Onsager {
  double n = 0.0;
  double gamma = 1.0;
  double alpha_exp = 2.0;
  double beta_stat = 0.0;
};

// Stereographic pull-back of the mean-field equation on the sphere.
struct SphericalOnsager {
  double n = 0.0;
  double l = -1.0;
  double gamma = 0.0;
  double beta = 1.0;
};

// Radial nonlinear Landau level with vortex order n_int and field strength B.
struct Css {
  int n_int = 0;
  double beta = 1.0;
  double b_field = 1.0;
};

using AppSpec = std::variant<Onsager, SphericalOnsager, Css>;

enum class Verdict { Inside, Boundary, Outside };
std::string to_string(Verdict v);

struct AppProblem {
  double beta_eq = 0.0;
  double n_eq = 0.0;  // weight exponent passed to the solver
  Potential v{Constant{}};
  Verdict verdict = Verdict::Inside;
  std::string inequality;  // the defining window inequality, evaluated
  std::string annotation;
};

AppProblem derive_problem(const AppSpec& spec);

struct AppControls {
  ShootControls shoot;
  double concentration_psi0 = 20.0;
  double concentration_mass = 0.99;
  double inner_radius = 0.1;
};

struct AppOutcome {
  AppProblem problem;
  std::optional<NormalizedSolution> solution;
  std::optional<IdentityReport> report;
  bool nonexistence = false;
  std::string message;
};

AppOutcome solve_app(const AppSpec& spec, const AppControls& controls = {});

// Max node deviation from psi_{B2}(r) = psi_{B1}(sqrt(B2 / B1) r) + (n + 1) log(B2 / B1).
double css_scaling_check(int n_int, double beta, double b1, double b2, const AppControls& controls = {});

// Behaviour of psi_B as B grows, by comparing n + 1 with beta.
std::string css_strong_field_regime(int n_int, double beta);

struct ScanRow {
  double param = 0.0;
  Verdict verdict = Verdict::Inside;
  bool solved = false;
  bool concentration = false;
  double psi0 = 0.0;
  double mass_inner = 0.0;
  double beta_eq = 0.0;
  std::string message;
};

std::vector<ScanRow> onsager_temperature_scan(double n, double gamma, double alpha_exp,
                                              const std::vector<double>& beta_stat_list,
                                              const AppControls& controls = {});

// CSV with header param,verdict,psi0,mass_inner,beta_eq.
void write_scan_csv(const std::vector<ScanRow>& rows, const std::string& path);

}  // namespace liouville
