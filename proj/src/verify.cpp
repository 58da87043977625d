#include "liouville/verify.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>

#include "liouville/error.hpp"
#include "liouville/shooting.hpp"

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kLipSamples = 32;

// Local model of r^n V e^psi at the first node. A logarithmic factor of e^psi
// is estimated from the slope: psi ~ -c log(-log r) gives c = -log(r0) r0 psi'(r0).
OriginModel origin_model(const NormalizedSolution& sol, const Potential& v) {
  const OriginBehaviour o = v.origin();
  if (o.log_power == 0.0) return OriginModel{sol.n + o.power, 0.0};
  const double r0 = sol.grid[0];
  const double c = -std::log(r0) * sol.dpsi[0];
  return OriginModel{sol.n + o.power, o.log_power + c};
}

std::vector<double> weighted(const NormalizedSolution& sol, const Potential& v, bool derivative) {
  std::vector<double> g(sol.grid.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = sol.grid[i];
    const auto [val, slope] = v.evaluate(r);
    const double f = derivative ? r * slope : val;
    g[i] = f == 0.0 ? 0.0 : f * std::exp(sol.psi[i] + sol.n * std::log(r));
  }
  return g;
}

// Cumulative 2 pi int g r dr where V (hence g) jumps by `scale * delta` at
// grid nodes; the cell to the right of a jump uses the right limit.
void apply_jumps(const NormalizedSolution& sol, const Potential& v, std::vector<double>& cum, bool derivative,
                 std::vector<std::string>& flags) {
  const auto r = sol.grid.nodes();
  for (const Jump& j : v.jumps()) {
    const auto it = std::lower_bound(r.begin(), r.end(), j.r);
    if (it == r.end()) continue;
    const std::size_t k = static_cast<std::size_t>(it - r.begin());
    if (*it != j.r) {
      flags.push_back("potential jump off the grid; quadrature is first order near it");
      continue;
    }
    if (derivative || k + 1 >= r.size()) continue;
    const double dg = j.delta * std::exp(sol.psi[k] + sol.n * std::log(r[k]));
    const double corr = kPi * (r[k + 1] - r[k]) * dg * r[k];
    for (std::size_t i = k + 1; i < cum.size(); ++i) cum[i] += corr;
  }
}

double hermite(double t0, double t1, double y0, double y1, double m0, double m1, double t) {
  const double h = t1 - t0;
  const double delta = (y1 - y0) / h;
  if (delta == 0.0) {
    m0 = 0.0;
    m1 = 0.0;
  } else {
    // Fritsch-Carlson limiter.
    if (m0 / delta < 0.0) m0 = 0.0;
    if (m1 / delta < 0.0) m1 = 0.0;
    const double a = m0 / delta;
    const double b = m1 / delta;
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      m0 = tau * a * delta;
      m1 = tau * b * delta;
    }
  }
  const double u = (t - t0) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * m0 + (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * h * m1;
}

}  // namespace

double interpolate_psi(const NormalizedSolution& sol, double r) {
  const auto nodes = sol.grid.nodes();
  if (r < nodes.front() || r > nodes.back()) throw Error("interpolate_psi: radius outside the profile");
  auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
  std::size_t k = static_cast<std::size_t>(it - nodes.begin());
  if (k == 0) k = 1;
  if (k >= nodes.size()) k = nodes.size() - 1;
  const std::size_t i = k - 1;
  if (r == nodes[i]) return sol.psi[i];
  if (r == nodes[k]) return sol.psi[k];
  return hermite(std::log(nodes[i]), std::log(nodes[k]), sol.psi[i], sol.psi[k], sol.dpsi[i], sol.dpsi[k],
                 std::log(r));
}

std::vector<double> recompute_mass(const NormalizedSolution& sol, const Potential& v) {
  const std::vector<double> g = weighted(sol, v, false);
  std::vector<double> cum = cumulative_radial(sol.grid, g, origin_model(sol, v));
  std::vector<std::string> ignored;
  apply_jumps(sol, v, cum, false, ignored);
  return cum;
}

IdentityReport check_identities(const NormalizedSolution& sol, const Potential& v) {
  const std::size_t count = sol.grid.size();
  if (count < 64) throw Error("check_identities: need at least 64 nodes");
  if (sol.psi.size() != count || sol.dpsi.size() != count) throw Error("check_identities: column sizes differ");
  IdentityReport rep;
  const double beta = sol.beta;
  const auto r = sol.grid.nodes();

  const std::vector<double> mass = [&] {
    const std::vector<double> g = weighted(sol, v, false);
    std::vector<double> cum = cumulative_radial(sol.grid, g, origin_model(sol, v));
    apply_jumps(sol, v, cum, false, rep.flags);
    return cum;
  }();
  rep.mass_residual = std::abs(mass.back() + sol.tail_mass - 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    rep.flux_residual = std::max(rep.flux_residual, std::abs(sol.dpsi[i] + 2.0 * beta * mass[i]));
  }
  rep.slope_at_infinity = std::abs(sol.dpsi.back() + 2.0 * beta);

  // int |x|^n e^psi x . grad V dx, with jump deltas.
  {
    const std::vector<double> g = weighted(sol, v, true);
    double integral = integrate_radial(sol.grid, g, origin_model(sol, v));
    for (const Jump& j : v.jumps()) {
      const auto it = std::lower_bound(r.begin(), r.end(), j.r);
      if (it == r.end()) continue;
      const std::size_t k = static_cast<std::size_t>(it - r.begin());
      const double psi_j = *it == j.r ? sol.psi[k] : interpolate_psi(sol, j.r);
      integral += 2.0 * kPi * std::exp(psi_j + (sol.n + 2.0) * std::log(j.r)) * j.delta;
    }
    rep.pokhozhaev_residual = std::abs(beta - 2.0 - sol.n - integral);
    if (v.is_tabulated()) rep.flags.push_back("pokhozhaev approximate");
  }

  // |psi(r) - psi(s)|^2 <= log(r / s) / (2 pi) * int_{s < |x| < r} |grad psi|^2.
  {
    std::vector<double> dir(count, 0.0);
    for (std::size_t i = 1; i < count; ++i) {
      const double dt = std::log(r[i] / r[i - 1]);
      dir[i] = dir[i - 1] + kPi * dt * (sol.dpsi[i] * sol.dpsi[i] + sol.dpsi[i - 1] * sol.dpsi[i - 1]);
    }
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < kLipSamples; ++k) idx.push_back(k * (count - 1) / (kLipSamples - 1));
    rep.log_lip_ok = true;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        const std::size_t i = idx[a];
        const std::size_t j = idx[b];
        if (i == j) continue;
        const double lhs = std::pow(sol.psi[j] - sol.psi[i], 2);
        const double rhs = std::log(r[j] / r[i]) / (2.0 * kPi) * (dir[j] - dir[i]);
        if (rhs > 0.0) rep.log_lip_worst = std::max(rep.log_lip_worst, lhs / rhs);
        if (lhs > rhs * (1.0 + 1e-5) + 1e-10) rep.log_lip_ok = false;
      }
    }
  }

  // |x| |grad psi| <= (1 / 2 pi) int |Laplace psi| = 2 |beta| M(r_max) for V >= 0.
  {
    const double bound = 2.0 * std::abs(beta) * mass.back();
    rep.grad_bound_ok = true;
    for (std::size_t i = 0; i < count; ++i) {
      const double a = std::abs(sol.dpsi[i]);
      if (bound > 0.0) rep.grad_bound_worst = std::max(rep.grad_bound_worst, a / bound);
      if (a > bound * (1.0 + 1e-9) + 1e-12) rep.grad_bound_ok = false;
    }
  }

  rep.P_min = pokhozhaev(sol, v).min_p;

  rep.c2_upper = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    rep.c2_upper = std::max(rep.c2_upper, sol.psi[i] + 2.0 * beta * std::log1p(r[i]) - std::log(std::abs(beta)));
  }
  return rep;
}

std::string to_json(const IdentityReport& report) {
  nlohmann::json j;
  j["mass_residual"] = report.mass_residual;
  j["flux_residual"] = report.flux_residual;
  j["slope_at_infinity"] = report.slope_at_infinity;
  j["pokhozhaev_residual"] = report.pokhozhaev_residual;
  j["log_lip_ok"] = report.log_lip_ok;
  j["grad_bound_ok"] = report.grad_bound_ok;
  j["P_min"] = report.P_min;
  j["log_lip_worst"] = report.log_lip_worst;
  j["grad_bound_worst"] = report.grad_bound_worst;
  j["c2_upper"] = report.c2_upper;
  j["flags"] = report.flags;
  return j.dump(2);
}

CompareReport compare_solutions(const NormalizedSolution& a, const NormalizedSolution& b, CompareMode mode) {
  if (a.n != b.n) throw Error("compare_solutions: incompatible weight exponents");
  if (!a.potential.empty() && !b.potential.empty() && a.potential != b.potential) {
    throw Error("compare_solutions: incompatible potentials '" + a.potential + "' and '" + b.potential + "'");
  }
  CompareReport rep;
  rep.mode = mode;
  rep.r_lo = std::max(a.grid.r_min(), b.grid.r_min());
  rep.r_hi = std::min(a.grid.r_max(), b.grid.r_max());
  if (!(rep.r_lo < rep.r_hi)) throw Error("compare_solutions: profiles do not overlap");

  const NormalizedSolution* hi = &a;
  const NormalizedSolution* lo = &b;
  if (mode == CompareMode::BetaMonotone && b.beta > a.beta) std::swap(hi, lo);
  const double shift = mode == CompareMode::BetaMonotone ? std::log(std::abs(hi->beta)) - std::log(std::abs(lo->beta)) : 0.0;

  const auto visit = [&](const NormalizedSolution& src, const NormalizedSolution& other, bool src_is_hi) {
    for (std::size_t i = 0; i < src.grid.size(); ++i) {
      const double r = src.grid[i];
      if (r < rep.r_lo || r > rep.r_hi) continue;
      const double p_src = src.psi[i];
      const double p_other = interpolate_psi(other, r);
      ++rep.points;
      if (mode == CompareMode::SupDiff) {
        rep.value = std::max(rep.value, std::abs(p_src - p_other));
      } else {
        const double p_hi = src_is_hi ? p_src : p_other;
        const double p_lo = src_is_hi ? p_other : p_src;
        rep.value = std::max(rep.value, p_hi + shift - p_lo);
      }
    }
  };
  visit(*hi, *lo, true);
  visit(*lo, *hi, false);
  return rep;
}

}  // namespace liouville
