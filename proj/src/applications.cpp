#include "liouville/applications.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "liouville/error.hpp"
#include "liouville/parallel.hpp"

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTie = 1e-12;

// Sign of a - b with a relative tie band.
int compare(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  if (std::abs(a - b) <= kTie * scale) return 0;
  return a > b ? 1 : -1;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Linear interpolation of the mass column at radius r.
double mass_at(const NormalizedSolution& sol, double r) {
  const auto nodes = sol.grid.nodes();
  if (r <= nodes.front()) return sol.mass.front() * (r / nodes.front()) * (r / nodes.front());
  if (r >= nodes.back()) return sol.mass.back();
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
  const std::size_t k = static_cast<std::size_t>(it - nodes.begin());
  const double w = (r - nodes[k - 1]) / (nodes[k] - nodes[k - 1]);
  return sol.mass[k - 1] + w * (sol.mass[k] - sol.mass[k - 1]);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Inside: return "inside";
    case Verdict::Boundary: return "boundary";
    case Verdict::Outside: return "outside";
  }
  return "unknown";
}

AppProblem derive_problem(const AppSpec& spec) {
  AppProblem p;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Onsager>) {
          if (!(s.n >= 0.0)) throw Error("onsager: n must be >= 0");
          p.beta_eq = -s.beta_stat / (4.0 * kPi);
          p.n_eq = s.n;
          p.v = Potential(PowerGauss{0.0, s.gamma, s.alpha_exp});
          const int c = compare(p.n_eq, p.beta_eq - 2.0);
          p.verdict = c > 0 ? Verdict::Inside : (c == 0 ? Verdict::Boundary : Verdict::Outside);
          p.inequality = "n > (-beta_stat - 8 pi) / (4 pi): " + fmt(s.n) + (c > 0 ? " > " : (c == 0 ? " = " : " < ")) +
                         fmt(p.beta_eq - 2.0);
        } else if constexpr (std::is_same_v<T, SphericalOnsager>) {
          if (!(s.n >= 0.0)) throw Error("sphere: n must be >= 0");
          p.beta_eq = s.beta;
          p.n_eq = s.n;
          p.v = Potential(Sphere{s.l, s.gamma});
          const double lower = s.n + 2.0 + 2.0 * s.l;
          const double upper = s.n + 2.0;
          const int cl = compare(s.beta, lower);
          const int cu = compare(s.beta, upper);
          p.inequality = "n + 2 + 2l < beta < n + 2: " + fmt(lower) + " < " + fmt(s.beta) + " < " + fmt(upper);
          if (cl > 0 && cu < 0) {
            p.verdict = Verdict::Inside;
          } else if (cu >= 0 || compare(2.0 * s.beta, lower) < 0 || s.gamma <= -0.5 * s.l) {
            p.verdict = Verdict::Outside;
          } else {
            p.verdict = Verdict::Boundary;
            p.annotation = "boundary: theory silent, necessity of beta > n + 2 + 2l is open for gamma > -l/2";
          }
        } else {
          if (s.n_int < 0) throw Error("css: n_int must be a non-negative integer");
          if (!(s.b_field > 0.0)) throw Error("css: B must be positive");
          p.beta_eq = s.beta;
          p.n_eq = 2.0 * s.n_int;
          p.v = Potential(PowerGauss{0.0, 0.5 * s.b_field, 2.0});
          const int c = compare(p.n_eq, s.beta - 2.0);
          p.verdict = c > 0 ? Verdict::Inside : (c == 0 ? Verdict::Boundary : Verdict::Outside);
          p.inequality = "2n > beta - 2: " + fmt(p.n_eq) + (c > 0 ? " > " : (c == 0 ? " = " : " < ")) +
                         fmt(s.beta - 2.0);
        }
      },
      spec);
  if (p.verdict == Verdict::Boundary && p.annotation.empty()) p.annotation = "boundary: theory silent or sharp";
  return p;
}

AppOutcome solve_app(const AppSpec& spec, const AppControls& controls) {
  AppOutcome out;
  out.problem = derive_problem(spec);
  const AppProblem& p = out.problem;
  if (p.verdict == Verdict::Outside) {
    out.nonexistence = true;
    out.message = "nonexistence: window violated, " + p.inequality;
    return out;
  }
  if (p.beta_eq == 0.0) {
    throw Error("beta = 0 gives the trivial equation; no normalized solution");
  }
  try {
    SolveResult r = solve_for_beta(p.v, p.n_eq, p.beta_eq, std::nullopt, controls.shoot);
    out.report = check_identities(r.solution, p.v);
    out.solution = std::move(r.solution);
    if (!p.annotation.empty()) out.solution->flags.push_back(p.annotation);
  } catch (const NonexistenceError& e) {
    if (p.verdict == Verdict::Inside) throw;
    out.nonexistence = true;
    out.message = std::string(e.what()) + " [" + p.annotation + "]";
  }
  return out;
}

double css_scaling_check(int n_int, double beta, double b1, double b2, const AppControls& controls) {
  if (!(b1 > 0.0) || !(b2 > 0.0)) throw Error("css_scaling_check: B must be positive");
  const AppOutcome o1 = solve_app(Css{n_int, beta, b1}, controls);
  const AppOutcome o2 = solve_app(Css{n_int, beta, b2}, controls);
  if (!o1.solution || !o2.solution) {
    throw NonexistenceError("css_scaling_check: outside the existence window (" + o1.problem.inequality + ")");
  }
  const NormalizedSolution& s1 = *o1.solution;
  const NormalizedSolution& s2 = *o2.solution;
  const double ratio = b2 / b1;
  const double scale = std::sqrt(ratio);
  const double shift = (n_int + 1.0) * std::log(ratio);
  double dev = 0.0;
  for (std::size_t i = 0; i < s2.grid.size(); ++i) {
    const double r = scale * s2.grid[i];
    if (r < s1.grid.r_min() || r > s1.grid.r_max()) continue;
    dev = std::max(dev, std::abs(s2.psi[i] - interpolate_psi(s1, r) - shift));
  }
  return dev;
}

std::string css_strong_field_regime(int n_int, double beta) {
  const int c = compare(n_int + 1.0, beta);
  if (c > 0) return "(i) n+1 > beta: psi_B -> +inf everywhere, density -> Dirac mass at 0";
  if (c == 0) {
    return "(ii) If n+1=beta: psi_B -> -2 beta log|x| away from 0, psi_B(0) -> +inf, density -> Dirac mass at 0";
  }
  return "(iii) n+1 < beta: psi_B -> -inf away from 0, psi_B(0) -> +inf, density -> Dirac mass at 0";
}

std::vector<ScanRow> onsager_temperature_scan(double n, double gamma, double alpha_exp,
                                              const std::vector<double>& beta_stat_list,
                                              const AppControls& controls) {
  if (beta_stat_list.empty()) throw Error("onsager scan: empty temperature list");
  std::vector<ScanRow> rows(beta_stat_list.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    ScanRow& row = rows[i];
    row.param = beta_stat_list[i];
    try {
      const AppOutcome o = solve_app(Onsager{n, gamma, alpha_exp, row.param}, controls);
      row.verdict = o.problem.verdict;
      row.beta_eq = o.problem.beta_eq;
      if (o.solution) {
        row.solved = true;
        row.psi0 = o.solution->psi0;
        row.mass_inner = mass_at(*o.solution, controls.inner_radius);
        row.concentration = row.psi0 > controls.concentration_psi0 && row.mass_inner > controls.concentration_mass;
      } else {
        row.message = o.message;
      }
    } catch (const Error& e) {
      row.beta_eq = -row.param / (4.0 * kPi);
      row.message = e.what();
    }
  });
  return rows;
}

void write_scan_csv(const std::vector<ScanRow>& rows, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot write '" + path + "'");
  std::fputs("param,verdict,psi0,mass_inner,beta_eq\n", f);
  for (const ScanRow& r : rows) {
    std::string verdict = to_string(r.verdict);
    if (!r.solved) verdict += r.verdict == Verdict::Outside ? "" : "-unsolved";
    if (r.concentration) verdict += "-concentrated";
    if (r.solved) {
      std::fprintf(f, "%.17g,%s,%.17g,%.17g,%.17g\n", r.param, verdict.c_str(), r.psi0, r.mass_inner, r.beta_eq);
    } else {
      std::fprintf(f, "%.17g,%s,nan,nan,%.17g\n", r.param, verdict.c_str(), r.beta_eq);
    }
  }
  std::fclose(f);
}

}  // namespace liouville
