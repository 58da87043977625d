#include "liouville/shooting.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "liouville/error.hpp"
#include "liouville/parallel.hpp"

namespace liouville {

namespace {

namespace odeint = boost::numeric::odeint;

// (psi, m, phi, q) as functions of t = log r, with m = -sign * r psi' and
// q = -sign * r phi'.
using State = std::array<double, 4>;

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesSize = 1e-12;
constexpr double kMaxStart = 1e-6;
constexpr double kRadiusCap = 1e6;
constexpr double kBlowUp = 700.0;
constexpr double kMaxStep = 0.5;

struct Rhs {
  const Potential& v;
  double n;
  int sign;

  double forcing(double psi, double t) const {
    const double val = v.value(std::exp(t));
    return val > 0.0 ? val * std::exp(psi + (n + 2.0) * t) : 0.0;
  }

  void operator()(const State& x, State& dx, double t) const {
    const double f = forcing(x[0], t);
    dx[0] = -sign * x[1];
    dx[1] = f;
    dx[2] = -sign * x[3];
    dx[3] = f * x[2];
  }
};

struct Series {
  double c;  // coefficient of r^p in r^n V
  double p;
  double s;
  int sign;

  State at(double r) const {
    const double a = c * std::exp(s + (p + 2.0) * std::log(r));
    const double k = p + 2.0;
    return {s - sign * a / (k * k), a / k, 1.0 - sign * a / (k * k), a / k};
  }

  double start() const {
    if (!(c > 0.0)) return kMaxStart;
    const double log_r = (std::log(kSeriesSize) - s - std::log(c)) / (p + 2.0);
    return std::min(std::exp(log_r), kMaxStart);
  }
};

struct Tail {
  double mass = 0.0;
  double decay = 0.0;
  bool valid = true;
};

// Extrapolates int_R^inf r^{n+2} V e^psi dt assuming the slope r psi' and the
// log-derivative of V stay frozen beyond R.
Tail tail_at(const Potential& v, double n, int sign, const State& x, double t) {
  const double r = std::exp(t);
  const auto [val, slope] = v.evaluate(r);
  if (!(val > 0.0)) return {0.0, std::numeric_limits<double>::infinity(), true};
  const double f = val * std::exp(x[0] + (n + 2.0) * t);
  const double kappa = r * slope / val;
  const double decay = sign * x[1] - (n + 2.0) - kappa;
  if (!(decay > 0.0)) return {0.0, decay, false};
  return {f / decay, decay, true};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

template <class Stepper>
void check_step(const Stepper& stepper, const State& x) {
  const double r = std::exp(stepper.current_time());
  for (double c : x) {
    if (!std::isfinite(c)) throw IntegrationError("non-finite state at r = " + fmt(r));
  }
  if (x[0] > kBlowUp) {
    throw IntegrationError("e^psi blew up at r = " + fmt(r) + " before the mass converged: mass did not converge at r_max");
  }
  if (stepper.current_time_step() < 1e-13) throw IntegrationError("step size underflow at r = " + fmt(r));
}

}  // namespace

ShootResult integrate_ivp(const Potential& v, double n, double s, const ShootControls& controls) {
  if (!(n >= 0.0)) throw Error("integrate_ivp: weight exponent n must be >= 0");
  if (!(controls.abs_tol > 0.0) || !(controls.rel_tol > 0.0) || !(controls.tail_tol > 0.0)) {
    throw Error("integrate_ivp: tolerances must be positive");
  }
  if (controls.sign != 1 && controls.sign != -1) throw Error("integrate_ivp: sign must be +1 or -1");
  if (!std::isfinite(s)) throw Error("integrate_ivp: s must be finite");
  const OriginBehaviour origin = v.origin();
  if (origin.log_power != 0.0 || !(n + origin.power > -2.0)) {
    throw Error("integrate_ivp: r^n V must behave like r^p with p > -2 at the origin");
  }

  const int sign = controls.sign;
  const Rhs rhs{v, n, sign};
  const Series series{origin.coef, n + origin.power, s, sign};
  const double r_start = series.start();
  const double t0 = std::log(r_start);
  const State x0 = series.at(r_start);

  const auto make_stepper = [&] {
    return odeint::make_dense_output(controls.abs_tol, controls.rel_tol, kMaxStep,
                                     odeint::runge_kutta_dopri5<State>());
  };

  std::optional<double> t_fixed;
  if (controls.r_max) {
    if (!(*controls.r_max > r_start)) throw Error("integrate_ivp: r_max must exceed the series start radius");
    t_fixed = std::log(*controls.r_max);
  }

  // Pass 1: locate the truncation radius.
  auto stepper = make_stepper();
  stepper.initialize(x0, t0, 1e-3);
  std::size_t steps = 0;
  double t_end = 0.0;
  State x_end{};
  Tail tail;
  bool converged = true;
  double mark_t = 0.0;
  double mark_m = 0.0;
  double mark_f = 0.0;
  bool have_mark = false;
  for (;;) {
    stepper.do_step(rhs);
    ++steps;
    const State& x = stepper.current_state();
    check_step(stepper, x);
    const double t = stepper.current_time();
    if (t_fixed) {
      if (t >= *t_fixed) {
        t_end = *t_fixed;
        stepper.calc_state(t_end, x_end);
        tail = tail_at(v, n, sign, x_end, t_end);
        converged = tail.valid;
        if (!tail.valid) tail.mass = 0.0;
        break;
      }
      continue;
    }
    if (t > std::log(kRadiusCap)) {
      throw IntegrationError("mass did not converge at r_max = " + fmt(kRadiusCap));
    }
    if (t < 0.0) continue;
    const Tail here = tail_at(v, n, sign, x, t);
    if (here.valid && here.mass <= controls.tail_tol * std::max(x[1], 1e-300)) {
      t_end = t;
      x_end = x;
      tail = here;
      break;
    }
    const double f = rhs.forcing(x[0], t);
    if (f == 0.0) {
      t_end = t;
      x_end = x;
      tail = Tail{};
      break;
    }
    if (!have_mark) {
      mark_t = t;
      mark_m = x[1];
      mark_f = f;
      have_mark = true;
    } else if (t - mark_t >= std::log(10.0)) {
      const bool flat = std::abs(x[1] - mark_m) < 1e-10 * std::max(1.0, x[1]);
      if (flat && f <= mark_f) {
        t_end = t;
        x_end = x;
        tail = here.valid ? here : Tail{};
        break;
      }
      mark_t = t;
      mark_m = x[1];
      mark_f = f;
    }
  }

  ShootResult res;
  res.s = s;
  res.n = n;
  res.sign = sign;
  res.r_max = std::exp(t_end);
  res.tail_mass = tail.mass;
  res.tail_converged = converged;
  res.steps = steps;
  const double q_tail = tail.mass > 0.0 ? tail.mass * x_end[2] - sign * x_end[3] * tail.mass / tail.decay : 0.0;
  res.beta_s = sign * 0.5 * (x_end[1] + tail.mass);
  res.beta_prime_s = sign * 0.5 * (x_end[3] + q_tail);
  if (!controls.samples) return res;

  // Pass 2: replay the identical step sequence and sample the dense output.
  const double r_lo = controls.r_min.value_or(std::min(1e-8 * res.r_max, r_start));
  Grid grid = Grid::log_spaced(r_lo, res.r_max, controls.n_nodes);
  const auto nodes = grid.nodes();
  const std::size_t count = nodes.size();
  res.psi.resize(count);
  res.dpsi.resize(count);
  res.phi.resize(count);
  res.dphi.resize(count);
  res.m.resize(count);
  const auto store = [&](std::size_t i, const State& x) {
    res.psi[i] = x[0];
    res.m[i] = x[1];
    res.dpsi[i] = -sign * x[1];
    res.phi[i] = x[2];
    res.dphi[i] = -sign * x[3];
  };
  std::size_t i = 0;
  for (; i < count && nodes[i] <= r_start; ++i) store(i, series.at(nodes[i]));
  auto replay = make_stepper();
  replay.initialize(x0, t0, 1e-3);
  State x{};
  while (i < count) {
    replay.do_step(rhs);
    const double t = replay.current_time();
    for (; i < count; ++i) {
      const double ti = i + 1 == count ? t_end : std::log(nodes[i]);
      if (ti > t) break;
      replay.calc_state(ti, x);
      store(i, x);
    }
  }
  for (std::size_t k = 0; k < count; ++k) {
    res.phi_log_bound = std::max(res.phi_log_bound, std::abs(res.phi[k]) / std::log(nodes[k] + 2.0));
    res.dphi_sup = std::max(res.dphi_sup, std::abs(res.dphi[k]));
  }
  res.grid = std::move(grid);
  return res;
}

std::vector<MassMapEntry> mass_map(const Potential& v, double n, const std::vector<double>& s_list,
                                   const ShootControls& controls) {
  if (s_list.empty()) throw Error("mass_map: empty list of initial values");
  ShootControls ctl = controls;
  ctl.samples = false;
  std::vector<MassMapEntry> out(s_list.size());
  parallel_for(s_list.size(), [&](std::size_t i) {
    MassMapEntry& e = out[i];
    e.s = s_list[i];
    try {
      const ShootResult r = integrate_ivp(v, n, e.s, ctl);
      e.beta = r.beta_s;
      e.beta_prime = r.beta_prime_s;
      e.ok = true;
    } catch (const Error& err) {
      e.error = err.what();
    }
  });
  for (std::size_t i = 1; i + 1 < out.size(); ++i) {
    const auto& a = out[i - 1];
    const auto& b = out[i + 1];
    if (a.ok && b.ok && out[i].ok && a.s < out[i].s && out[i].s < b.s) {
      out[i].beta_prime_fd = (b.beta - a.beta) / (b.s - a.s);
    }
  }
  return out;
}

std::optional<std::string> analytic_nonexistence(const Potential& v, double n, double beta) {
  const double n_eq = n + v.power_factor();
  std::ostringstream why;
  if (v.residual_constant()) {
    if (beta != n_eq + 2.0) {
      why << "constant residual potential admits only beta = n + 2 = " << n_eq + 2.0
          << " (beta = " << beta << ")";
      return why.str();
    }
    return std::nullopt;
  }
  if (v.residual_nonincreasing() && n_eq <= beta - 2.0) {
    why << "non-increasing potential with n = " << n_eq << " <= beta - 2 = " << beta - 2.0;
    return why.str();
  }
  return std::nullopt;
}

NormalizedSolution normalize(const ShootResult& shot, const Potential& v, double beta) {
  if (!shot.grid) throw Error("normalize: shot carries no samples");
  if (beta == 0.0 || (beta > 0.0) != (shot.sign > 0)) throw Error("normalize: beta sign does not match the shot");
  const double scale = 2.0 * std::abs(beta);
  const double shift = std::log(4.0 * kPi * std::abs(beta));
  NormalizedSolution sol{.beta = beta, .n = shot.n, .grid = *shot.grid};
  sol.psi.resize(shot.psi.size());
  sol.mass.resize(shot.m.size());
  for (std::size_t i = 0; i < shot.psi.size(); ++i) {
    sol.psi[i] = shot.psi[i] - shift;
    sol.mass[i] = shot.m[i] / scale;
  }
  sol.dpsi = shot.dpsi;
  sol.potential = v.descriptor();
  sol.psi0 = shot.s - shift;
  sol.tail_mass = shot.tail_mass / scale;
  sol.method = "shooting";
  if (!shot.tail_converged) sol.flags.push_back("tail extrapolation invalid at r_max");
  return sol;
}

SolveResult solve_for_beta(const Potential& v, double n, double beta_target,
                           std::optional<std::pair<double, double>> bracket, const ShootControls& controls) {
  if (beta_target == 0.0 || !std::isfinite(beta_target)) throw Error("solve_for_beta: beta must be finite and non-zero");
  if (const auto why = analytic_nonexistence(v, n, beta_target)) {
    throw NonexistenceError("target outside bracket: likely nonexistence, threshold n > beta - 2 (" + *why + ")");
  }
  ShootControls ctl = controls;
  ctl.sign = beta_target > 0.0 ? 1 : -1;
  std::vector<std::string> flags;
  if (n != 0.0 && v.power_factor() != 0.0) {
    flags.push_back("weight exponent and potential power both non-zero; they add");
  }

  std::vector<double> ladder;
  if (bracket) {
    if (!(bracket->first < bracket->second)) throw Error("solve_for_beta: bracket must satisfy s_lo < s_hi");
    ladder = {bracket->first, bracket->second};
  } else {
    ladder = {-10, -6, -3, -1, 0, 1, 2, 3, 5, 8, 12, 16, 20, 25, 30};
  }
  const auto scan = mass_map(v, n, ladder, ctl);
  std::vector<std::pair<double, double>> pts;
  for (const auto& e : scan) {
    if (e.ok) pts.emplace_back(e.s, e.beta);
  }
  if (pts.empty()) throw Error("solve_for_beta: every shot failed: " + scan.front().error);

  bool monotone = true;
  int direction = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = pts[i].second - pts[i - 1].second;
    if (std::abs(d) <= 1e-9) continue;
    const int sgn = d > 0 ? 1 : -1;
    if (direction != 0 && sgn != direction) monotone = false;
    direction = sgn;
  }
  if (!monotone) flags.push_back("multiple roots possible: beta(s) is not monotone, uniqueness hypotheses may fail");

  const auto g_of = [&](double beta) { return beta - beta_target; };
  std::optional<double> s_star;
  std::size_t hits = 0;
  for (const auto& [s, b] : pts) {
    if (std::abs(g_of(b)) < ctl.root_tol) {
      if (!s_star) s_star = s;
      ++hits;
    }
  }
  if (hits > 1) flags.push_back("flat mass map: beta(s) equals the target over a range of s");

  int iterations = 0;
  if (!s_star) {
    std::optional<std::size_t> k;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if ((g_of(pts[i].second) < 0.0) != (g_of(pts[i + 1].second) < 0.0)) {
        k = i;
        break;
      }
    }
    if (!k) {
      double lo = pts.front().second;
      double hi = lo;
      for (const auto& p : pts) {
        lo = std::min(lo, p.second);
        hi = std::max(hi, p.second);
      }
      std::ostringstream msg;
      msg << "target outside bracket: likely nonexistence, threshold n > beta - 2 (beta(s) in [" << lo << ", "
          << hi << "] for s in [" << pts.front().first << ", " << pts.back().first << "], target " << beta_target
          << ")";
      throw NonexistenceError(msg.str());
    }
    ShootControls quick = ctl;
    quick.samples = false;
    double a = pts[*k].first;
    double b = pts[*k + 1].first;
    double ga = g_of(pts[*k].second);
    double gb = g_of(pts[*k + 1].second);
    int side = 0;
    for (; iterations < 80; ++iterations) {
      double c = monotone ? b - gb * (b - a) / (gb - ga) : 0.5 * (a + b);
      if (!(c > std::min(a, b) && c < std::max(a, b))) c = 0.5 * (a + b);
      const double gc = g_of(integrate_ivp(v, n, c, quick).beta_s);
      if (std::abs(gc) < ctl.root_tol) {
        s_star = c;
        break;
      }
      // Illinois variant of regula falsi.
      if ((gc < 0.0) == (gb < 0.0)) {
        b = c;
        gb = gc;
        if (side == -1) ga *= 0.5;
        side = -1;
      } else {
        a = c;
        ga = gc;
        if (side == 1) gb *= 0.5;
        side = 1;
      }
      if (std::abs(b - a) < 1e-14 * std::max(1.0, std::abs(a))) {
        s_star = std::abs(ga) < std::abs(gb) ? a : b;
        break;
      }
    }
    if (!s_star) throw Error("solve_for_beta: root finder did not converge in 80 iterations");
  }

  ShootControls full = ctl;
  full.samples = true;
  ShootResult shot = integrate_ivp(v, n, *s_star, full);
  NormalizedSolution sol = normalize(shot, v, beta_target);
  SolveResult out{std::move(sol), std::move(shot), iterations};
  if (std::abs(out.shot.beta_s - beta_target) >= ctl.root_tol) {
    flags.push_back("root tolerance not reached: |beta(s) - target| = " + fmt(std::abs(out.shot.beta_s - beta_target)));
  }
  out.solution.tolerances = {{"abs_tol", ctl.abs_tol}, {"rel_tol", ctl.rel_tol}, {"tail_tol", ctl.tail_tol},
                             {"root_tol", ctl.root_tol}};
  out.solution.flags.insert(out.solution.flags.end(), flags.begin(), flags.end());
  return out;
}

namespace {

PokhozhaevProfile pokhozhaev_impl(const Grid& grid, const std::vector<double>& psi, const std::vector<double>& dpsi,
                                  double beta, double n, double coef, const Potential& v) {
  const auto r = grid.nodes();
  const std::size_t count = r.size();
  PokhozhaevProfile out;
  out.p.resize(count);
  out.integral_form.resize(count);
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto [val, slope] = v.evaluate(r[i]);
    const double w = val > 0.0 || slope != 0.0 ? coef * std::exp(psi[i] + (n + 2.0) * std::log(r[i])) : 0.0;
    out.p[i] = dpsi[i] * (0.5 * dpsi[i] + beta) + w * val;
    g[i] = w * ((n + 2.0 - beta) * val + r[i] * slope);
  }
  const OriginBehaviour o = v.origin();
  const double k = n + o.power + 2.0;
  double acc = k > 0.0 && o.log_power == 0.0 ? g[0] / k : 0.0;
  out.integral_form[0] = acc;
  const auto jumps = v.jumps();
  for (std::size_t i = 1; i < count; ++i) {
    acc += 0.5 * (g[i - 1] + g[i]) * std::log(r[i] / r[i - 1]);
    for (const Jump& j : jumps) {
      if (j.r > r[i - 1] && j.r <= r[i]) {
        const std::size_t at = j.r == r[i] ? i : i - 1;
        acc += coef * std::exp(psi[at] + (n + 2.0) * std::log(j.r)) * j.delta;
      }
    }
    out.integral_form[i] = acc;
  }
  out.min_p = *std::min_element(out.p.begin(), out.p.end());
  out.p_at_r_max = out.p.back();
  for (std::size_t i = 0; i < count; ++i) {
    out.max_form_gap = std::max(out.max_form_gap, std::abs(out.p[i] - out.integral_form[i]));
  }
  return out;
}

}  // namespace

PokhozhaevProfile pokhozhaev(const ShootResult& shot, const Potential& v) {
  if (!shot.grid) throw Error("pokhozhaev: shot carries no samples");
  return pokhozhaev_impl(*shot.grid, shot.psi, shot.dpsi, shot.beta_s, shot.n, shot.sign, v);
}

PokhozhaevProfile pokhozhaev(const NormalizedSolution& sol, const Potential& v) {
  return pokhozhaev_impl(sol.grid, sol.psi, sol.dpsi, sol.beta, sol.n, 4.0 * kPi * sol.beta, v);
}

}  // namespace liouville
