// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "liouville/applications.hpp"
#include "liouville/cli.hpp"
#include "liouville/error.hpp"
#include "liouville/oracles.hpp"
#include "liouville/shooting.hpp"
#include "liouville/variational.hpp"
#include "liouville/verify.hpp"

using namespace liouville;

namespace {

constexpr double kPi = std::numbers::pi;
const Potential kGauss(PowerGauss{0.0, 1.0, 2.0});
const Potential kOne(Constant{1.0});

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Accepted {
  std::string name;
  NormalizedSolution sol;
  Potential v;
};

std::vector<Accepted> accepted;

Outcome bubble_flatness() {
  double worst_beta = 0.0, worst_prime = 0.0;
  for (double s : {-2.0, 0.0, 3.0}) {
    const ShootResult r = integrate_ivp(kOne, 0.0, s);
    worst_beta = std::max(worst_beta, std::abs(r.beta_s - 2.0));
    worst_prime = std::max(worst_prime, std::abs(r.beta_prime_s));
  }
  return {worst_beta < 1e-6 && worst_prime < 1e-5, fmt("max |beta-2| = %.3g, max |beta'| = %.3g", worst_beta, worst_prime)};
}

Outcome conformal_family() {
  SolveResult r = solve_for_beta(kOne, 2.0, 4.0);
  const NormalizedSolution& sol = r.solution;
  // psi(0) = log(k / pi) + 2 k log(lambda) with k = 2.
  const double lambda = std::exp((sol.psi0 - std::log(2.0 / kPi)) / 4.0);
  const NormalizedSolution exact = conformal_bubble(2.0, lambda, sol.grid);
  double worst = std::abs(sol.psi0 - exact.psi0);
  for (std::size_t i = 0; i < sol.grid.size() && sol.grid[i] <= 10.0; ++i) {
    worst = std::max(worst, std::abs(sol.psi[i] - exact.psi[i]));
  }
  accepted.push_back({"bubble beta=4", std::move(r.solution), kOne});
  return {worst < 1e-6, fmt("sup error on [0, 10] = %.3g (lambda* = %.6g)", worst, lambda)};
}

Outcome gaussian_threshold() {
  std::vector<double> s;
  for (int k = -5; k <= 25; ++k) s.push_back(k);
  const auto map = mass_map(kGauss, 0.0, s);
  double hi = -INFINITY;
  bool all_below = true;
  for (const MassMapEntry& e : map) {
    if (!e.ok) return {false, "shot failed at s = " + std::to_string(e.s) + ": " + e.error};
    all_below &= e.beta < 2.0;
    hi = std::max(hi, e.beta);
  }
  std::ostringstream out, err;
  const int code = cli::run({"find", "--beta", "2.0", "--n", "0", "--potential", "gauss:gamma=1,alpha=2"}, out, err);
  return {all_below && hi > 1.9 && code == cli::kExitNonexistence,
          fmt("max beta(s) = %.12g, all below 2: %g, find --beta 2.0 exit %g", hi, all_below, code)};
}

NormalizedSolution& gaussian_one() {
  static NormalizedSolution sol = [] {
    NormalizedSolution s = solve_for_beta(kGauss, 0.0, 1.0).solution;
    accepted.push_back({"gaussian beta=1", s, kGauss});
    return s;
  }();
  return sol;
}

Outcome pokhozhaev_identity() {
  const IdentityReport rep = check_identities(gaussian_one(), kGauss);
  return {rep.pokhozhaev_residual < 1e-4, fmt("|beta - 2 - n - int| = %.3g", rep.pokhozhaev_residual)};
}

Outcome cross_backend() {
  const VariationalSolve v = solve_variational(kGauss, 0.0, 1.0, 12.0);
  const double diff = compare_solutions(gaussian_one(), v.solution, CompareMode::SupDiff).value;
  return {v.minimizer.converged && diff < 1e-3,
          fmt("sup |psi_var - psi_shoot| = %.3g after %g iterations", diff, v.minimizer.iterations)};
}

Outcome negative_monotonicity() {
  SolveResult a = solve_for_beta(kGauss, 0.0, -1.0);
  SolveResult b = solve_for_beta(kGauss, 0.0, -0.5);
  const CompareReport rep = compare_solutions(a.solution, b.solution, CompareMode::BetaMonotone);
  accepted.push_back({"gaussian beta=-1", std::move(a.solution), kGauss});
  accepted.push_back({"gaussian beta=-0.5", std::move(b.solution), kGauss});
  return {rep.value < 1e-6, fmt("max violation = %.3g over %g nodes", rep.value, static_cast<double>(rep.points))};
}

Outcome sharp_oracle() {
  const SharpRegularity ex = sharp_regularity_example(std::exp(-1.0), Grid::make(10.0, 20000, Grading::Log));
  const IdentityReport rep = check_identities(ex.solution, ex.potential);
  return {rep.mass_residual < 1e-6, fmt("mass residual = %.3g, flux residual = %.3g", rep.mass_residual, rep.flux_residual)};
}

Outcome gradient_check() {
  const Grid grid = variational_grid(12.0, 1024);
  const EnergyModel model(build_gauge(1.0, grid), kGauss, 0.0, grid);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> phi(model.size(), 0.0);
  for (std::size_t j = 0; j + 1 < phi.size(); ++j) phi[j] = 0.3 * normal(rng) / (1.0 + model.nodes()[j]);
  const EnergyValue ev = model.evaluate(phi);
  double worst = 0.0;
  for (int d = 0; d < 5; ++d) {
    std::vector<double> dir(model.size());
    for (double& x : dir) x = normal(rng);
    dir.back() = 0.0;
    double analytic = 0.0;
    for (std::size_t j = 0; j < dir.size(); ++j) analytic += ev.gradient[j] * dir[j];
    const double h = 1e-5;
    std::vector<double> p = phi, m = phi;
    for (std::size_t j = 0; j < dir.size(); ++j) {
      p[j] += h * dir[j];
      m[j] -= h * dir[j];
    }
    const double fd = (model.evaluate(p).value - model.evaluate(m).value) / (2.0 * h);
    worst = std::max(worst, std::abs(analytic - fd) / std::abs(fd));
  }
  const MinimizeResult mr = minimize(model);
  bool monotone = true;
  for (std::size_t i = 1; i < mr.energy_trace.size(); ++i) monotone &= mr.energy_trace[i] <= mr.energy_trace[i - 1];
  return {worst < 1e-5 && monotone, fmt("max rel err = %.3g, energy trace monotone: %g (%g steps)", worst, monotone,
                                        static_cast<double>(mr.energy_trace.size()))};
}

Outcome p_positivity() {
  const PokhozhaevProfile p = pokhozhaev(gaussian_one(), kGauss);
  return {p.min_p >= -1e-6 && p.p_at_r_max < 1e-4, fmt("min P = %.3g, P(r_max) = %.3g", p.min_p, p.p_at_r_max)};
}

Outcome css_scaling() {
  const double dev = css_scaling_check(1, 2.0, 1.0, 4.0);
  AppOutcome o = solve_app(Css{1, 2.0, 4.0});
  if (o.solution) accepted.push_back({"css n=1 beta=2 B=4", std::move(*o.solution), o.problem.v});
  std::mt19937_64 rng(20240531);
  std::uniform_int_distribution<int> pick_n(0, 6);
  std::uniform_real_distribution<double> pick_beta(-5.0, 16.0);
  std::uniform_real_distribution<double> pick_b(0.1, 10.0);
  int mismatches = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = pick_n(rng);
    const double beta = pick_beta(rng);
    const AppProblem p = derive_problem(Css{n, beta, pick_b(rng)});
    const bool holds = 2.0 * n > beta - 2.0;
    mismatches += holds != (p.verdict == Verdict::Inside);
    mismatches += (2.0 * n < beta - 2.0) != (p.verdict == Verdict::Outside);
  }
  return {dev < 1e-4 && mismatches == 0, fmt("max scaling deviation = %.3g, window mismatches = %g / 20", dev, mismatches)};
}

Outcome phi_consistency() {
  const double s = 1.0;
  const double h = 1e-4;
  const ShootResult probe = integrate_ivp(kGauss, 0.0, s);
  ShootControls c;
  c.r_max = probe.r_max;
  c.r_min = (*probe.grid)[0];
  const ShootResult mid = integrate_ivp(kGauss, 0.0, s, c);
  const ShootResult up = integrate_ivp(kGauss, 0.0, s + h, c);
  const ShootResult dn = integrate_ivp(kGauss, 0.0, s - h, c);
  double worst = 0.0;
  for (std::size_t i = 0; i < mid.psi.size(); ++i) {
    if ((*mid.grid)[i] > 0.5 * mid.r_max) break;
    worst = std::max(worst, std::abs((up.psi[i] - dn.psi[i]) / (2.0 * h) - mid.phi[i]));
  }
  return {worst < 1e-5 + h * h, fmt("max |centered difference - phi| = %.3g on r <= %.4g", worst, 0.5 * mid.r_max)};
}

Outcome flux_asymptotics() {
  double worst_flux = 0.0, worst_slope = 0.0;
  bool pass = !accepted.empty();
  std::string which;
  for (const Accepted& a : accepted) {
    const IdentityReport rep = check_identities(a.sol, a.v);
    const double scaled = rep.flux_residual / (1.0 + std::abs(a.sol.beta));
    if (scaled >= 1e-6 || rep.slope_at_infinity >= 1e-3) {
      pass = false;
      which += " " + a.name;
    }
    worst_flux = std::max(worst_flux, scaled);
    worst_slope = std::max(worst_slope, rep.slope_at_infinity);
  }
  return {pass, fmt("%g solutions, max flux/(1+|beta|) = %.3g, max slope gap = %.3g", static_cast<double>(accepted.size()),
                    worst_flux, worst_slope) +
                    (which.empty() ? "" : ", failing:" + which)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  // Criterion 5 runs last so it sees every solution accepted by the others.
  const std::vector<Criterion> criteria{
      {1, "bubble flatness", bubble_flatness},
      {2, "conformal family reproduction", conformal_family},
      {3, "gaussian threshold", gaussian_threshold},
      {4, "pokhozhaev identity", pokhozhaev_identity},
      {6, "cross-backend agreement", cross_backend},
      {7, "negative beta monotonicity", negative_monotonicity},
      {8, "sharp regularity oracle", sharp_oracle},
      {9, "energy gradient check", gradient_check},
      {10, "P positivity", p_positivity},
      {11, "CSS field scaling and window sweep", css_scaling},
      {12, "phi consistency", phi_consistency},
      {5, "flux and asymptotic slope", flux_asymptotics},
  };
  std::vector<std::pair<int, std::string>> lines;
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    lines.emplace_back(c.id, std::string(o.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(c.id) + " (" +
                                 c.name + "): " + o.detail);
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [id, line] : lines) std::puts(line.c_str());
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
