#include "liouville/variational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numbers>

#include "liouville/error.hpp"
#include "liouville/kernels.hpp"

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// 3-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 3> kGaussX{-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGaussW{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

template <class F>
double gauss(double a, double b, F&& fn) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int q = 0; q < 3; ++q) acc += kGaussW[q] * fn(mid + half * kGaussX[q]);
  return half * acc;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) { return kernels::dot(a, b); }

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

double gauge_psi0(double beta, double r) {
  if (r < 1.0) {
    const double r2 = r * r;
    return beta * (2.0 * r2 - 0.5 * r2 * r2 - 1.5);
  }
  return 2.0 * beta * std::log(r);
}

double gauge_dpsi0(double beta, double r) {
  if (r < 1.0) return beta * (4.0 * r - 2.0 * r * r * r);
  return 2.0 * beta / r;
}

double gauge_f(double beta, double r) { return r < 1.0 ? -8.0 * beta * (1.0 - r * r) : 0.0; }

Gauge build_gauge(double beta, const Grid& grid) {
  if (!(beta > 0.0)) throw Error("build_gauge: beta must be positive");
  Gauge g;
  g.beta = beta;
  const auto r = grid.nodes();
  g.r.assign(r.begin(), r.end());
  g.psi0.resize(r.size());
  g.f.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    g.psi0[i] = gauge_psi0(beta, r[i]);
    g.f[i] = gauge_f(beta, r[i]);
  }
  // Exact on every cell: the integrand is polynomial and the cells split at r = 1.
  const auto integrand = [&](double t) { return kTwoPi * gauge_f(beta, t) * t; };
  double prev = 0.0;
  for (std::size_t i = 0; i < r.size() && prev < 1.0; ++i) {
    const double hi = std::min(r[i], 1.0);
    g.f_total += gauss(prev, hi, integrand);
    prev = hi;
  }
  return g;
}

EnergyModel::EnergyModel(const Gauge& gauge, const Potential& v, double n, const Grid& grid)
    : beta_(gauge.beta), n_(n), v_(v), grid_(grid) {
  if (!(grid.r_max() > 1.0)) throw Error("variational: disk radius must exceed 1");
  if (!(n >= 0.0)) throw Error("variational: weight exponent must be >= 0");
  x_.reserve(grid.size() + 1);
  x_.push_back(0.0);
  for (double r : grid.nodes()) x_.push_back(r);
  const std::size_t m = x_.size();
  k_.resize(m - 1);
  w_.assign(m, 0.0);
  b_.assign(m, 0.0);
  v1_.resize(m);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double a = x_[j];
    const double c = x_[j + 1];
    const double h = c - a;
    k_[j] = kTwoPi * 0.5 * (a + c) / h;
    w_[j] += kTwoPi * h * (2.0 * a + c) / 6.0;
    w_[j + 1] += kTwoPi * h * (a + 2.0 * c) / 6.0;
    if (a < 1.0) {
      const double hi = std::min(c, 1.0);
      b_[j] += gauss(a, hi, [&](double t) { return kTwoPi * gauge_f(beta_, t) * t * (c - t) / h; });
      b_[j + 1] += gauss(a, hi, [&](double t) { return kTwoPi * gauge_f(beta_, t) * t * (t - a) / h; });
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    double val = 0.0;
    if (j > 0 || n == 0.0) {
      try {
        val = v.value(x_[j]);
      } catch (const Error&) {
        val = 0.0;
      }
    }
    const double weight = j == 0 ? (n == 0.0 ? 1.0 : 0.0) : std::pow(x_[j], n);
    v1_[j] = weight * val * std::exp(-gauge_psi0(beta_, x_[j]));
  }
}

EnergyValue EnergyModel::evaluate(const std::vector<double>& phi, bool relax_boundary) const {
  const std::size_t m = x_.size();
  if (phi.size() != m) throw Error("energy: profile has " + std::to_string(phi.size()) + " entries, expected " + std::to_string(m));
  EnergyValue out;
  std::vector<double> kphi(m);
  kernels::laplacian_apply(k_, phi, kphi);
  double top = -std::numeric_limits<double>::infinity();
  std::vector<double> wv(m);
  for (std::size_t j = 0; j < m; ++j) {
    wv[j] = w_[j] * v1_[j];
    if (wv[j] > 0.0) top = std::max(top, phi[j]);
  }
  if (!std::isfinite(top)) throw Error("energy: outside the admissible set (int V1 e^phi <= 0)");
  std::vector<double> shifted(m);
  for (std::size_t j = 0; j < m; ++j) shifted[j] = phi[j] - top;
  std::vector<double> density(m);
  const double z = kernels::exp_weighted(wv, shifted, density);
  if (!(z > 0.0) || !std::isfinite(z)) throw Error("energy: outside the admissible set (int V1 e^phi <= 0)");
  out.log_mass = top + std::log(z);
  out.dirichlet = dot(phi, kphi);
  out.value = 0.5 * out.dirichlet - 4.0 * kPi * beta_ * out.log_mass - dot(b_, phi);
  out.gradient.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    out.gradient[j] = kphi[j] - 4.0 * kPi * beta_ * density[j] / z - b_[j];
  }
  if (!relax_boundary) out.gradient.back() = 0.0;
  return out;
}

std::vector<double> EnergyModel::solve_stiffness(const std::vector<double>& rhs) const {
  // Thomas algorithm on the interior block (all nodes but the last).
  const std::size_t m = x_.size() - 1;
  std::vector<double> c(m), d(m), y(m + 1, 0.0);
  double prev_c = 0.0;
  double prev_d = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double diag = (j > 0 ? k_[j - 1] : 0.0) + k_[j];
    const double lower = j > 0 ? -k_[j - 1] : 0.0;
    const double upper = j + 1 < m ? -k_[j] : 0.0;
    const double denom = diag - lower * prev_c;
    c[j] = upper / denom;
    d[j] = (rhs[j] - lower * prev_d) / denom;
    prev_c = c[j];
    prev_d = d[j];
  }
  y[m - 1] = d[m - 1];
  for (std::size_t j = m - 1; j-- > 0;) y[j] = d[j] - c[j] * y[j + 1];
  return y;
}

Grid variational_grid(double radius, std::size_t n_nodes) {
  if (!(radius > 1.0)) throw Error("variational: disk radius must exceed 1");
  return Grid::log_spaced(1e-7 * radius, radius, n_nodes);
}

namespace {

CoercivityWitness coercivity_witness(const EnergyModel& model, const EnergyValue& ev, double delta_req) {
  CoercivityWitness w;
  const double beta = model.beta();
  const double n = model.n();
  const Potential& v = model.potential();
  const OriginBehaviour o = v.origin();
  double gap = o.log_power == 0.0 ? n + o.power + 2.0 - beta : -beta;
  const Alpha a = v.alpha();
  if (std::isfinite(a.value)) gap = std::min(gap, beta + 2.0 * (a.value - 0.5 * n));
  if (delta_req > 0.0) {
    w.delta = delta_req;
  } else {
    if (!(gap > 0.0)) return w;
    w.delta = std::min(1.0, 0.5 * gap);
  }
  w.eps = w.delta / (2.0 * (beta + w.delta));
  const double kappa = beta + w.delta;
  const double radius = model.radius();
  const Grid& grid = model.grid();
  std::vector<double> g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    g[i] = model.weighted_potential()[i + 1] * std::pow(radius / grid[i], kappa);
  }
  const double origin_power = n + o.power - kappa;
  if (!(origin_power > -2.0) || o.log_power != 0.0) return w;
  w.log_integral = std::log(integrate_radial(grid, g, OriginModel{origin_power}));
  const auto& x = model.nodes();
  double a_int = 0.0;
  for (std::size_t j = 0; j + 1 < x.size() && x[j] < 1.0; ++j) {
    const double hi = std::min(x[j + 1], 1.0);
    a_int += gauss(x[j], hi, [&](double t) {
      return kTwoPi * t * std::abs(gauge_f(beta, t)) * std::sqrt(std::log(radius / t) / kTwoPi);
    });
  }
  w.load_term = a_int * a_int / (2.0 * w.eps);
  w.constant = -4.0 * kPi * beta * w.log_integral - w.load_term;
  w.holds = ev.value >= 0.5 * w.eps * ev.dirichlet + w.constant;
  return w;
}

}  // namespace

MinimizeResult minimize(const EnergyModel& model, const std::optional<std::vector<double>>& init,
                        const MinimizeControls& controls) {
  const std::size_t m = model.size();
  MinimizeResult res;
  std::vector<double> phi = init.value_or(std::vector<double>(m, 0.0));
  if (phi.size() != m) throw Error("minimize: initial profile has the wrong size");
  phi.back() = 0.0;
  EnergyValue ev = model.evaluate(phi);
  res.energy_trace.push_back(ev.value);

  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  double gamma = 1.0;
  const auto grad_norm = [&](const std::vector<double>& g) { return std::sqrt(std::max(0.0, dot(g, model.solve_stiffness(g)))); };
  double gn = grad_norm(ev.gradient);
  const double gn0 = gn;
  const double e0 = ev.value;
  bool stalled = false;

  for (int it = 0; it < controls.max_iter; ++it) {
    if (gn < controls.grad_tol) {
      res.converged = true;
      break;
    }
    // Two-loop recursion with H0 = gamma K^{-1}.
    std::vector<double> q = ev.gradient;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * dot(s_hist[i], q);
      axpy(-alpha[i], y_hist[i], q);
    }
    std::vector<double> d = model.solve_stiffness(q);
    for (double& di : d) di *= gamma;
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double b = rho_hist[i] * dot(y_hist[i], d);
      axpy(alpha[i] - b, s_hist[i], d);
    }
    for (double& di : d) di = -di;
    d.back() = 0.0;
    double slope = dot(ev.gradient, d);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = model.solve_stiffness(ev.gradient);
      for (double& di : d) di = -di;
      slope = dot(ev.gradient, d);
    }

    double step = 1.0;
    bool accepted = false;
    EnergyValue trial;
    std::vector<double> phi_new(m);
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t j = 0; j < m; ++j) phi_new[j] = phi[j] + step * d[j];
      try {
        trial = model.evaluate(phi_new);
        if (trial.value <= ev.value + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
      } catch (const Error&) {
        // Overflow or inadmissible: shrink.
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!s_hist.empty()) {
        s_hist.clear();
        y_hist.clear();
        rho_hist.clear();
        gamma = 1.0;
        continue;
      }
      stalled = true;
      break;
    }

    std::vector<double> s(m), y(m);
    for (std::size_t j = 0; j < m; ++j) {
      s[j] = phi_new[j] - phi[j];
      y[j] = trial.gradient[j] - ev.gradient[j];
    }
    const double sy = dot(s, y);
    if (sy > 1e-300) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      const double yky = dot(y, model.solve_stiffness(y));
      if (yky > 0.0) gamma = sy / yky;
      if (static_cast<int>(s_hist.size()) > controls.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    phi.swap(phi_new);
    ev = std::move(trial);
    res.energy_trace.push_back(ev.value);
    gn = grad_norm(ev.gradient);
    res.iterations = it + 1;
    if (e0 - ev.value > 1e6 && gn >= 0.5 * gn0) {
      throw NonexistenceError("infimum -inf: energy fell by " + fmt(e0 - ev.value) +
                              " without the gradient shrinking; the integrability hypotheses are likely violated");
    }
  }

  res.phi = std::move(phi);
  res.grad_norm = gn;
  res.log_mass = ev.log_mass;
  res.dirichlet = ev.dirichlet;
  if (stalled) {
    res.converged = gn < 1e3 * controls.grad_tol;
    res.flags.push_back("line search stalled at grad_norm " + fmt(gn));
  }
  if (!res.converged) res.flags.push_back("not converged: grad_norm " + fmt(gn));

  // Share of the mass carried by the innermost part of the mesh.
  const auto& x = model.nodes();
  double inner = 0.0;
  for (std::size_t j = 0; j < m && x[j] < 1e-3 * model.radius(); ++j) {
    inner += model.lumped_weights()[j] * model.weighted_potential()[j] * std::exp(res.phi[j] - res.log_mass);
  }
  if (inner > 0.5) {
    res.flags.push_back("concentration: " + fmt(inner) +
                        " of the mass sits at mesh scale near the origin; the infimum is likely not attained");
  }

  res.witness = coercivity_witness(model, ev, controls.delta);
  return res;
}

NormalizedSolution to_solution(const MinimizeResult& m, const EnergyModel& model) {
  const Grid& grid = model.grid();
  const std::size_t count = grid.size();
  const double beta = model.beta();
  const double n = model.n();
  NormalizedSolution sol{.beta = beta, .n = n, .grid = grid};
  sol.psi.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    sol.psi[i] = m.phi[i + 1] - m.log_mass - gauge_psi0(beta, grid[i]);
  }
  sol.psi0 = m.phi[0] - m.log_mass - gauge_psi0(beta, 0.0);
  // r psi' from the quadratic interpolant in t = log r.
  sol.dpsi.resize(count);
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i) t[i] = std::log(grid[i]);
  const auto& p = sol.psi;
  const auto three_point = [&](std::size_t i0, std::size_t at) {
    const double t0 = t[i0], t1 = t[i0 + 1], t2 = t[i0 + 2];
    const double x = t[at];
    const double d0 = ((x - t1) + (x - t2)) / ((t0 - t1) * (t0 - t2));
    const double d1 = ((x - t0) + (x - t2)) / ((t1 - t0) * (t1 - t2));
    const double d2 = ((x - t0) + (x - t1)) / ((t2 - t0) * (t2 - t1));
    return d0 * p[i0] + d1 * p[i0 + 1] + d2 * p[i0 + 2];
  };
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t i0 = i == 0 ? 0 : (i + 1 == count ? count - 3 : i - 1);
    sol.dpsi[i] = three_point(i0, i);
  }
  std::vector<double> density(count);
  for (std::size_t i = 0; i < count; ++i) {
    density[i] = model.weighted_potential()[i + 1] * std::exp(m.phi[i + 1] - m.log_mass);
  }
  const OriginBehaviour o = model.potential().origin();
  sol.mass = cumulative_radial(grid, density, OriginModel{n + o.power});
  sol.potential = model.potential().descriptor();
  sol.method = "variational";
  sol.flags = m.flags;
  sol.tail_mass = 0.0;
  return sol;
}

VariationalSolve solve_variational(const Potential& v, double n, double beta, double radius, bool refine,
                                   const MinimizeControls& controls) {
  if (!(beta > 0.0)) throw Error("variational backend needs beta > 0");
  std::vector<std::string> warnings;
  const OriginBehaviour o = v.origin();
  const double gap = n + o.power + 2.0 - beta;
  const double delta = controls.delta > 0.0 ? controls.delta : (gap > 0.0 ? std::min(1.0, 0.5 * gap) : 0.5);
  const ConditionReport rep = check_conditions(v, beta, delta, n);
  if (!rep.all_pass()) warnings.push_back("existence hypotheses fail at delta = " + fmt(delta));

  const auto run = [&](double r, const std::optional<std::vector<double>>& init) {
    const Grid grid = variational_grid(r, controls.n_nodes);
    const EnergyModel model(build_gauge(beta, grid), v, n, grid);
    MinimizeResult mres = minimize(model, init, controls);
    NormalizedSolution sol = to_solution(mres, model);
    return VariationalSolve{std::move(sol), std::move(mres), r};
  };
  VariationalSolve cur = run(radius, std::nullopt);
  if (refine) {
    for (int k = 0; k < 12; ++k) {
      VariationalSolve next = run(2.0 * cur.radius, std::nullopt);
      const double change = std::abs(next.solution.psi0 - cur.solution.psi0);
      cur = std::move(next);
      if (change < 1e-4) break;
      if (k == 11) cur.solution.flags.push_back("radius refinement did not settle psi(0)");
    }
  }
  cur.solution.flags.insert(cur.solution.flags.end(), warnings.begin(), warnings.end());
  cur.solution.tolerances = {{"grad_tol", controls.grad_tol}, {"radius", cur.radius}};
  return cur;
}

}  // namespace liouville
